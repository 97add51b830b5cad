#include "helpers.hpp"
#include "hhj/analysis.hpp"
#include "hhj/assembly.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace hhj;
using namespace testing_helpers;

namespace {

struct Spaces {
    std::shared_ptr<const CurvedMapSet> maps;
    HHJSpace V;
    LagrangeSpace W;
    Spaces(MeshPtr mesh, int m, int r)
        : maps(std::make_shared<const CurvedMapSet>(mesh, m)), V(maps, r), W(maps, r + 1)
    {
    }
};

}  // namespace

TEST(Assembly, BlockShapesAndSymmetry)
{
    Spaces s(disk_mesh(1), 2, 1);
    const Material mat;
    const SparseMatrix A = assemble_a(s.V, mat, 10);
    const SparseMatrix B = assemble_b(s.V, s.W, false, 10, 10);
    EXPECT_EQ(A.rows(), s.V.num_dofs());
    EXPECT_EQ(A.cols(), s.V.num_dofs());
    EXPECT_EQ(B.rows(), s.W.num_dofs());
    EXPECT_EQ(B.cols(), s.V.num_dofs());
    EXPECT_EQ(symmetry_error(A), 0.0);
    EXPECT_TRUE(is_positive_definite(A));
}

// (K tau, tau) for constant tau on straight cells: oracle from the material
// law and the polygon area.
TEST(Assembly, MassFormOnConstants)
{
    Spaces s(disk_mesh(1), 1, 0);
    const Material mat{2.0, 0.25};
    const SparseMatrix A = assemble_a(s.V, mat, 12);
    const Mat2 tau = sym(1.0, 0.3, -0.5);
    const VectorX t = hhj_interpolate(s.V, [&](const Vec2&) { return tau; });
    EXPECT_NEAR(t.dot(A * t), ddot(mat.K(tau), tau) * s.maps->area(), 1e-11);
}

// (f, v) against the interpolant of 1 integrates f over the discrete domain.
TEST(Assembly, LoadIntegratesOverCurvedDomain)
{
    Spaces s(disk_mesh(3), 3, 1);
    const VectorX one = lagrange_interpolate(s.W, [](const Vec2&) { return 1.0; });
    const VectorX F = assemble_load(s.W, [](const Vec2& x) { return 1.0 + x.squaredNorm(); }, 12);
    // Integral of 1 + |x|^2 over the unit disk is 3 pi / 2; the discrete domain is within O(h^4).
    EXPECT_NEAR(F.dot(one), 1.5 * std::numbers::pi, 1e-5);
}

TEST(Assembly, FortinIdentityOnStraightMesh)
{
    Spaces s(square_mesh(1), 1, 2);
    const SparseMatrix B = assemble_b(s.V, s.W, false, 12, 12);
    std::mt19937 rng(2);
    std::uniform_real_distribution<double> u(-1, 1);
    const double a = u(rng), b = u(rng), c = u(rng);
    const TensorField phi = [&](const Vec2& x) {
        return sym(a * x.x() * x.x() * x.y() + x.y(), b * x.x() * x.y() - std::pow(x.y(), 3), c * x.x() * x.x() + 0.5);
    };
    const VectorX exact = apply_b(s.W, phi, 16, 16);
    const VectorX interp = B * hhj_interpolate(s.V, phi);
    EXPECT_LT((exact - interp).lpNorm<Eigen::Infinity>(), 1e-10 * exact.lpNorm<Eigen::Infinity>());
}

TEST(Assembly, EssentialDataAndReduction)
{
    Spaces s(disk_mesh(1, BoundaryCondition::simply_supported), 2, 1);
    const Material mat;
    const auto exact = manufactured("ss_disk", mat);
    const auto sys = assemble_system(s.V, s.W, mat, plate_data(*exact));
    const auto red = reduce_system(sys);
    const auto nfix_w = std::count(sys.w_fixed.begin(), sys.w_fixed.end(), 1);
    const auto nfix_s = std::count(sys.sigma_fixed.begin(), sys.sigma_fixed.end(), 1);
    EXPECT_EQ(static_cast<Index>(red.w_free.size()), s.W.num_dofs() - nfix_w);
    EXPECT_EQ(static_cast<Index>(red.sigma_free.size()), s.V.num_dofs() - nfix_s);
    EXPECT_EQ(nfix_s, 2 * s.V.mesh().num_boundary_edges());
    EXPECT_EQ(red.B.rows(), static_cast<Index>(red.w_free.size()));
    EXPECT_EQ(red.A.rows(), static_cast<Index>(red.sigma_free.size()));
    // Reduced right-hand side: G' = G - A sigma_c - B^T w_c, F' = F + B sigma_c.
    const VectorX Gfull = sys.G - sys.A * sys.sigma_data - sys.B.transpose() * sys.w_data;
    const VectorX Ffull = sys.F + sys.B * sys.sigma_data;
    for (std::size_t i = 0; i < red.sigma_free.size(); ++i) EXPECT_NEAR(red.G[i], Gfull[red.sigma_free[i]], 1e-12);
    for (std::size_t i = 0; i < red.w_free.size(); ++i) EXPECT_NEAR(red.F[i], Ffull[red.w_free[i]], 1e-12);
}

TEST(Assembly, GramMatricesArePositiveDefinite)
{
    Spaces s(disk_mesh(1), 2, 1);
    const double h = s.V.mesh().h_max();
    const SparseMatrix g0 = gram_0h(s.V, h, 10, 10);
    EXPECT_LT(symmetry_error(g0), 1e-14);
    EXPECT_TRUE(is_positive_definite(g0));
    const SparseMatrix g2 = gram_2h(s.W, h, 10, 10);
    EXPECT_LT(symmetry_error(g2), 1e-14);
    // The broken norm vanishes on affine functions only through the clamped boundary term.
    const VectorX lin = lagrange_interpolate(s.W, [](const Vec2& x) { return 1.0 + 2.0 * x.x() - x.y(); });
    EXPECT_GT(lin.dot(g2 * lin), 0.0);
    const VectorX one = lagrange_interpolate(s.W, [](const Vec2&) { return 1.0; });
    EXPECT_NEAR(one.dot(g2 * one), 0.0, 1e-10);
}
