#include "hhj/linalg.hpp"

#include "hhj/error.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>
#include <unsupported/Eigen/SparseExtra>

#ifdef PLATE_HHJ_HAVE_UMFPACK
#include <Eigen/UmfPackSupport>
#endif

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>

namespace hhj {

namespace {

SparseMatrix from_rows(Index rows, Index cols, const std::vector<Index>& offsets, const std::vector<int>& inner,
                       const std::vector<double>* values)
{
    HHJ_THROW_IF(inner.size() > static_cast<std::size_t>(std::numeric_limits<int>::max()), NumericError,
                 "sparse matrix too large for 32-bit indices");
    SparseMatrix M(rows, cols);
    M.resizeNonZeros(static_cast<Index>(inner.size()));
    for (Index i = 0; i <= rows; ++i) M.outerIndexPtr()[i] = static_cast<int>(offsets[i]);
    std::copy(inner.begin(), inner.end(), M.innerIndexPtr());
    if (values)
        std::copy(values->begin(), values->end(), M.valuePtr());
    else
        std::fill(M.valuePtr(), M.valuePtr() + inner.size(), 0.0);
    return M;
}

}  // namespace

SparseMatrix cell_pattern(Index rows, Index cols, const std::vector<Index>& row_dofs, int rows_per_cell,
                          const std::vector<Index>& col_dofs, int cols_per_cell)
{
    const Index ncells = rows_per_cell > 0 ? static_cast<Index>(row_dofs.size()) / rows_per_cell : 0;
    HHJ_THROW_IF(cols_per_cell > 0 && static_cast<Index>(col_dofs.size()) != ncells * cols_per_cell, NumericError,
                 "row and column dof lists disagree on the cell count");
    std::vector<Index> start(rows + 1, 0);
    for (Index d : row_dofs) ++start[d + 1];
    for (Index i = 0; i < rows; ++i) start[i + 1] += start[i];
    std::vector<Index> incident(start[rows]);
    std::vector<Index> fill(start.begin(), start.end() - 1);
    for (Index c = 0; c < ncells; ++c)
        for (int i = 0; i < rows_per_cell; ++i) incident[fill[row_dofs[c * rows_per_cell + i]]++] = c;

    std::vector<Index> offsets(rows + 1, 0);
    std::vector<int> inner;
    std::vector<int> tmp;
    for (Index r = 0; r < rows; ++r) {
        tmp.clear();
        for (Index k = start[r]; k < start[r + 1]; ++k) {
            const Index c = incident[k];
            for (int j = 0; j < cols_per_cell; ++j) tmp.push_back(static_cast<int>(col_dofs[c * cols_per_cell + j]));
        }
        std::sort(tmp.begin(), tmp.end());
        tmp.erase(std::unique(tmp.begin(), tmp.end()), tmp.end());
        inner.insert(inner.end(), tmp.begin(), tmp.end());
        offsets[r + 1] = static_cast<Index>(inner.size());
    }
    return from_rows(rows, cols, offsets, inner, nullptr);
}

void add_block(SparseMatrix& M, const Index* rows, int nr, const Index* cols, int nc, const MatrixX& block)
{
    const int* outer = M.outerIndexPtr();
    const int* inner = M.innerIndexPtr();
    double* values = M.valuePtr();
    for (int i = 0; i < nr; ++i) {
        const int* begin = inner + outer[rows[i]];
        const int* end = inner + outer[rows[i] + 1];
        for (int j = 0; j < nc; ++j) {
            const int* p = std::lower_bound(begin, end, static_cast<int>(cols[j]));
            HHJ_THROW_IF(p == end || *p != cols[j], NumericError, "entry outside the sparsity pattern");
            values[p - inner] += block(i, j);
        }
    }
}

double symmetry_error(const SparseMatrix& A)
{
    HHJ_THROW_IF(A.rows() != A.cols(), NumericError, "symmetry check needs a square matrix");
    SparseMatrix At = A.transpose();
    const SparseMatrix diff = A - At;
    double dmax = 0.0, amax = 0.0;
    for (Index k = 0; k < diff.nonZeros(); ++k) dmax = std::max(dmax, std::abs(diff.valuePtr()[k]));
    for (Index k = 0; k < A.nonZeros(); ++k) amax = std::max(amax, std::abs(A.valuePtr()[k]));
    return amax > 0.0 ? dmax / amax : 0.0;
}

SparseMatrix extract(const SparseMatrix& M, const std::vector<Index>& row_map, Index rows,
                     const std::vector<Index>& col_map, Index cols)
{
    std::vector<Index> offsets(rows + 1, 0);
    std::vector<int> inner;
    std::vector<double> values;
    std::vector<Index> order;
    std::vector<std::pair<int, double>> tmp;
    order.assign(rows, -1);
    for (Index i = 0; i < M.rows(); ++i)
        if (row_map[i] >= 0) order[row_map[i]] = i;
    for (Index r = 0; r < rows; ++r) {
        tmp.clear();
        for (SparseMatrix::InnerIterator it(M, order[r]); it; ++it) {
            const Index c = col_map[it.col()];
            if (c >= 0) tmp.emplace_back(static_cast<int>(c), it.value());
        }
        std::sort(tmp.begin(), tmp.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
        for (const auto& [c, v] : tmp) {
            inner.push_back(c);
            values.push_back(v);
        }
        offsets[r + 1] = static_cast<Index>(inner.size());
    }
    return from_rows(rows, cols, offsets, inner, &values);
}

bool is_positive_definite(const SparseMatrix& A)
{
    if (A.rows() == 0) return true;
    Eigen::SparseMatrix<double> Ac = A;
    Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt(Ac);
    return llt.info() == Eigen::Success;
}

const char* saddle_solver_name()
{
#ifdef PLATE_HHJ_HAVE_UMFPACK
    return "umfpack";
#else
    return "eigen-sparselu";
#endif
}

namespace {

using ColMatrix = KktMatrix;

}  // namespace

KktMatrix kkt_matrix(const SparseMatrix& A, const SparseMatrix& B)
{
    const Index nv = A.rows(), nw = B.rows(), n = nv + nw;
    const ColMatrix Bc = B;  // column j of Bc lists the rows of B^T row j
    ColMatrix K(n, n);
    K.reserve(A.nonZeros() + 2 * B.nonZeros());
    for (Index j = 0; j < nv; ++j) {
        K.startVec(j);
        // A symmetric: row j of A equals column j.
        for (SparseMatrix::InnerIterator it(A, j); it; ++it) K.insertBack(it.col(), j) = it.value();
        for (ColMatrix::InnerIterator it(Bc, j); it; ++it) K.insertBack(nv + it.row(), j) = it.value();
    }
    for (Index k = 0; k < nw; ++k) {
        K.startVec(nv + k);
        for (SparseMatrix::InnerIterator it(B, k); it; ++it) K.insertBack(it.col(), nv + k) = it.value();
    }
    K.finalize();
    return K;
}

namespace {

template <class Solver>
VectorX refined_solve(Solver& solver, const ColMatrix& K, const VectorX& rhs, const SolverOptions& options)
{
    VectorX x = solver.solve(rhs);
    const double scale = std::max(rhs.norm(), 1e-300);
    for (int step = 0; step < options.refinement_steps; ++step) {
        const VectorX r = rhs - K * x;
        if (r.norm() <= 1e-3 * options.tolerance * scale) break;
        x += solver.solve(r);
    }
    return x;
}

}  // namespace

namespace {

// Sparse LU of a general square matrix followed by iterative refinement.
VectorX factor_and_solve(const ColMatrix& K, const VectorX& rhs, const SolverOptions& options)
{
#ifdef PLATE_HHJ_HAVE_UMFPACK
    Eigen::UmfPackLU<ColMatrix> solver;
    // AMD on the symmetric pattern suits saddle point matrices far better
    // than the default column ordering.
    solver.umfpackControl()(UMFPACK_STRATEGY) = UMFPACK_STRATEGY_SYMMETRIC;
    solver.compute(K);
    HHJ_THROW_IF(solver.info() != Eigen::Success, SolverError,
                 "UMFPACK factorization failed (status " + std::to_string(solver.umfpackFactorizeReturncode()) + ")");
#else
    Eigen::SparseLU<ColMatrix, Eigen::COLAMDOrdering<int>> solver;
    solver.compute(K);
    HHJ_THROW_IF(solver.info() != Eigen::Success, SolverError,
                 "sparse LU factorization failed: " + solver.lastErrorMessage());
#endif
    VectorX x = refined_solve(solver, K, rhs, options);
    HHJ_THROW_IF(!x.allFinite(), SolverError, "saddle solve produced non-finite values");
    return x;
}

}  // namespace

SaddleSolveResult solve_kkt(const KktMatrix& K, Index nv, const VectorX& F, const VectorX& G,
                            const SolverOptions& options)
{
    const Index n = K.rows(), nw = n - nv;
    HHJ_THROW_IF(K.cols() != n || nv < 0 || nv > n || F.size() != nw || G.size() != nv, SolverError,
                 "saddle system block dimensions do not match");
    SaddleSolveResult out;
    VectorX rhs(n);
    rhs << G, -F;
    VectorX x = VectorX::Zero(n);
    if (n > 0 && rhs.norm() > 0.0) x = factor_and_solve(K, rhs, options);
    out.sigma = x.head(nv);
    out.w = x.tail(nw);
    // Normwise backward errors of the two block rows, with the row sums of
    // |A|, |B^T| and |B| read off the columns of K.
    VectorX row_a = VectorX::Zero(n), row_bt = VectorX::Zero(n);
    for (Index j = 0; j < n; ++j)
        for (KktMatrix::InnerIterator it(K, j); it; ++it) (j < nv ? row_a : row_bt)[it.row()] += std::abs(it.value());
    const double xs = nv ? out.sigma.lpNorm<Eigen::Infinity>() : 0.0;
    const double xw = nw ? out.w.lpNorm<Eigen::Infinity>() : 0.0;
    const double gs = nv ? G.lpNorm<Eigen::Infinity>() : 0.0;
    const double fs = nw ? F.lpNorm<Eigen::Infinity>() : 0.0;
    const VectorX r = K * x - rhs;
    const double s1 = (nv ? row_a.head(nv).maxCoeff() : 0.0) * xs + (nv ? row_bt.head(nv).maxCoeff() : 0.0) * xw + gs;
    const double s2 = (nw ? row_a.tail(nw).maxCoeff() : 0.0) * xs + fs;
    out.residual_moment = nv && s1 > 0.0 ? r.head(nv).lpNorm<Eigen::Infinity>() / s1 : 0.0;
    out.residual_load = nw && s2 > 0.0 ? r.tail(nw).lpNorm<Eigen::Infinity>() / s2 : 0.0;
    out.converged = out.residual_moment <= options.tolerance && out.residual_load <= options.tolerance;
    return out;
}

SaddleSolveResult solve_saddle(const SparseMatrix& A, const SparseMatrix& B, const VectorX& F, const VectorX& G,
                               const SolverOptions& options)
{
    HHJ_THROW_IF(A.cols() != A.rows() || B.cols() != A.rows(), SolverError, "saddle system block dimensions do not match");
    return solve_kkt(kkt_matrix(A, B), A.rows(), F, G, options);
}

double smallest_generalized_singular_value(const SparseMatrix& B, const SparseMatrix& GramV, const SparseMatrix& GramW,
                                           Index cap)
{
    const Index nw = B.rows(), nv = B.cols();
    HHJ_THROW_IF(nw > cap || nv > cap, ConfigError,
                 "inf-sup probe refused: dimension " + std::to_string(std::max(nw, nv)) + " exceeds cap " +
                     std::to_string(cap));
    HHJ_THROW_IF(GramV.rows() != nv || GramW.rows() != nw, NumericError, "Gram matrix dimensions do not match B");
    if (nw == 0) return 0.0;
    Eigen::SparseMatrix<double> gv = GramV;
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(gv);
    HHJ_THROW_IF(ldlt.info() != Eigen::Success, NumericError, "Gram matrix of the tensor space is singular");
    const MatrixX Bt = MatrixX(B.transpose());
    const MatrixX X = ldlt.solve(Bt);
    MatrixX S = MatrixX(B) * X;
    S = 0.5 * (S + S.transpose()).eval();
    const MatrixX W = MatrixX(GramW);
    Eigen::GeneralizedSelfAdjointEigenSolver<MatrixX> es(S, W, Eigen::EigenvaluesOnly);
    HHJ_THROW_IF(es.info() != Eigen::Success, NumericError, "generalized eigenproblem failed");
    return std::sqrt(std::max(0.0, es.eigenvalues().minCoeff()));
}

void write_matrix_market(const SparseMatrix& M, const std::string& path, const std::vector<std::string>& header)
{
    std::ofstream os(path);
    HHJ_THROW_IF(!os, ConfigError, "cannot open " + path + " for writing");
    os << "%%MatrixMarket matrix coordinate real general\n";
    for (const auto& line : header) os << "% " << line << "\n";
    os << M.rows() << " " << M.cols() << " " << M.nonZeros() << "\n";
    os << std::setprecision(17);
    for (Index i = 0; i < M.outerSize(); ++i)
        for (SparseMatrix::InnerIterator it(M, i); it; ++it) os << it.row() + 1 << " " << it.col() + 1 << " " << it.value() << "\n";
    HHJ_THROW_IF(!os, ConfigError, "failed writing " + path);
}

SparseMatrix read_matrix_market(const std::string& path)
{
    Eigen::SparseMatrix<double, Eigen::ColMajor, int> m;
    HHJ_THROW_IF(!Eigen::loadMarket(m, path), ConfigError, "cannot read Matrix Market file " + path);
    return SparseMatrix(m);
}

}  // namespace hhj
