#include "helpers.hpp"
#include "hhj/error.hpp"
#include "hhj/linalg.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace hhj;

namespace {

SparseMatrix random_sparse(Index rows, Index cols, double density, std::mt19937& rng)
{
    std::uniform_real_distribution<double> u(-1, 1), p(0, 1);
    std::vector<Eigen::Triplet<double>> t;
    for (Index i = 0; i < rows; ++i)
        for (Index j = 0; j < cols; ++j)
            if (p(rng) < density) t.emplace_back(i, j, u(rng));
    SparseMatrix M(rows, cols);
    M.setFromTriplets(t.begin(), t.end());
    return M;
}

}  // namespace

// Oracle: dense partial-pivoting LU of the assembled KKT matrix.
TEST(Linalg, SaddleSolveMatchesDense)
{
    std::mt19937 rng(42);
    const Index nv = 40, nw = 15;
    const SparseMatrix R = random_sparse(nv, nv, 0.2, rng);
    SparseMatrix A = SparseMatrix(R * SparseMatrix(R.transpose()));
    for (Index i = 0; i < nv; ++i) A.coeffRef(i, i) += 1.0;
    SparseMatrix B = random_sparse(nw, nv, 0.3, rng);
    for (Index i = 0; i < nw; ++i) B.coeffRef(i, i) += 2.0;
    std::uniform_real_distribution<double> u(-1, 1);
    VectorX F(nw), G(nv);
    for (auto& v : F) v = u(rng);
    for (auto& v : G) v = u(rng);

    MatrixX K = MatrixX::Zero(nv + nw, nv + nw);
    K.topLeftCorner(nv, nv) = MatrixX(A);
    K.topRightCorner(nv, nw) = MatrixX(B).transpose();
    K.bottomLeftCorner(nw, nv) = MatrixX(B);
    VectorX rhs(nv + nw);
    rhs << G, -F;
    const VectorX x = K.partialPivLu().solve(rhs);

    const auto res = solve_saddle(A, B, F, G);
    EXPECT_TRUE(res.converged);
    EXPECT_LT((res.sigma - x.head(nv)).norm(), 1e-10 * x.norm());
    EXPECT_LT((res.w - x.tail(nw)).norm(), 1e-10 * x.norm());
    EXPECT_LT(res.residual_moment, 1e-14);
    EXPECT_LT(res.residual_load, 1e-14);

    const auto viaK = solve_kkt(kkt_matrix(A, B), nv, F, G);
    EXPECT_EQ(viaK.sigma, res.sigma);
    EXPECT_EQ(MatrixX(kkt_matrix(A, B)), K);
}

TEST(Linalg, SingularSystemIsReported)
{
    SparseMatrix A(2, 2), B(1, 2);
    A.coeffRef(0, 0) = 1.0;
    A.coeffRef(1, 1) = 1.0;
    const VectorX F = VectorX::Ones(1), G = VectorX::Ones(2);
    // B = 0: the multiplier is undetermined.
    bool failed = false;
    try {
        failed = !solve_saddle(A, B, F, G).converged;
    } catch (const SolverError&) {
        failed = true;
    }
    EXPECT_TRUE(failed);
}

TEST(Linalg, PositiveDefiniteness)
{
    SparseMatrix S(3, 3);
    S.coeffRef(0, 0) = 2, S.coeffRef(1, 1) = 2, S.coeffRef(2, 2) = 2;
    S.coeffRef(0, 1) = -1, S.coeffRef(1, 0) = -1;
    EXPECT_TRUE(is_positive_definite(S));
    S.coeffRef(2, 2) = -0.1;
    EXPECT_FALSE(is_positive_definite(S));
    EXPECT_EQ(symmetry_error(S), 0.0);
    S.coeffRef(0, 2) = 0.5;
    EXPECT_NEAR(symmetry_error(S), 0.25, 1e-15);
}

TEST(Linalg, ExtractSubmatrix)
{
    std::mt19937 rng(1);
    const SparseMatrix M = random_sparse(6, 5, 0.6, rng);
    const std::vector<Index> rmap = {-1, 0, -1, 1, 2, -1}, cmap = {1, -1, 0, -1, 2};
    const MatrixX E = MatrixX(extract(M, rmap, 3, cmap, 3));
    const MatrixX D = MatrixX(M);
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 5; ++j)
            if (rmap[i] >= 0 && cmap[j] >= 0) EXPECT_EQ(E(rmap[i], cmap[j]), D(i, j));
}

TEST(Linalg, MatrixMarketRoundTrip)
{
    std::mt19937 rng(9);
    const SparseMatrix M = random_sparse(7, 4, 0.5, rng);
    const auto dir = testing_helpers::temp_dir("mm");
    const std::string path = (dir / "m.mtx").string();
    write_matrix_market(M, path, {"unit test"});
    const std::string text = testing_helpers::slurp(path);
    EXPECT_EQ(text.rfind("%%MatrixMarket matrix coordinate real general", 0), 0u);
    EXPECT_NE(text.find("% unit test"), std::string::npos);
    const SparseMatrix back = read_matrix_market(path);
    EXPECT_EQ(MatrixX(back), MatrixX(M));
    EXPECT_THROW(read_matrix_market((dir / "missing.mtx").string()), Error);
}

// Oracle: with identity Gram matrices the value is the smallest singular value of B.
TEST(Linalg, GeneralizedSingularValue)
{
    std::mt19937 rng(4);
    const SparseMatrix B = random_sparse(6, 10, 0.7, rng);
    SparseMatrix I10(10, 10), I6(6, 6);
    I10.setIdentity();
    I6.setIdentity();
    const double s = Eigen::JacobiSVD<MatrixX>(MatrixX(B)).singularValues().minCoeff();
    EXPECT_NEAR(smallest_generalized_singular_value(B, I10, I6), s, 1e-12);
    // Scaling the norms: |phi| -> 2|phi| halves the value, |w| -> 3|w| divides by 3.
    EXPECT_NEAR(smallest_generalized_singular_value(B, 4.0 * I10, 9.0 * I6), s / 6.0, 1e-12);
    EXPECT_THROW(smallest_generalized_singular_value(B, I10, I6, 5), ConfigError);
}
