#include "hhj/error.hpp"
#include "hhj/solutions.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace hhj;

namespace {

// Fourth-order central differences of w.
Mat2 fd_hessian(const ManufacturedSolution& s, const Vec2& x)
{
    const double h = 1e-3;
    Mat2 H;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            auto g = [&](double t) { return s.grad(x + t * Vec2::Unit(j))[i]; };
            H(i, j) = (-g(2 * h) + 8 * g(h) - 8 * g(-h) + g(-2 * h)) / (12 * h);
        }
    return H;
}

Vec2 fd_grad(const ManufacturedSolution& s, const Vec2& x)
{
    const double h = 1e-3;
    Vec2 g;
    for (int i = 0; i < 2; ++i) {
        auto w = [&](double t) { return s.w(x + t * Vec2::Unit(i)); };
        g[i] = (-w(2 * h) + 8 * w(h) - 8 * w(-h) + w(-2 * h)) / (12 * h);
    }
    return g;
}

double fd_bilaplacian(const ManufacturedSolution& s, const Vec2& x)
{
    // Laplacian of the exact Laplacian (trace of the Hessian).
    const double h = 2e-3;
    auto lap = [&](const Vec2& y) { return s.hessian(y).trace(); };
    return (lap(x + Vec2(h, 0)) + lap(x - Vec2(h, 0)) + lap(x + Vec2(0, h)) + lap(x - Vec2(0, h)) - 4 * lap(x)) /
           (h * h);
}

}  // namespace

TEST(Solutions, DerivativesMatchFiniteDifferences)
{
    const Material mat{1.3, 0.2};
    for (const char* name : {"clamped_disk", "ss_disk", "clamped_three_leaf", "uniform_load"}) {
        const auto s = manufactured(name, mat, 2.0);
        for (const Vec2& x : {Vec2(0.3, -0.2), Vec2(-0.55, 0.4), Vec2(0.05, 0.02), Vec2(0.9, 0.3)}) {
            EXPECT_LT((s->grad(x) - fd_grad(*s, x)).norm(), 1e-8 * (1 + s->grad(x).norm())) << name;
            EXPECT_LT((s->hessian(x) - fd_hessian(*s, x)).norm(), 1e-7 * (1 + s->hessian(x).norm())) << name;
            EXPECT_NEAR(s->bilaplacian(x), fd_bilaplacian(*s, x), 2e-4 * (1 + std::abs(s->bilaplacian(x)))) << name;
            EXPECT_LT((s->sigma(x) - mat.C(s->hessian(x))).norm(), 1e-14 * (1 + s->sigma(x).norm()));
            EXPECT_NEAR(s->load(x), mat.D * s->bilaplacian(x), 1e-12 * (1 + std::abs(s->load(x))));
        }
    }
}

TEST(Solutions, BoundaryConditionsOnTheUnitCircle)
{
    const Material mat{1.0, 0.3};
    const auto clamped = manufactured("clamped_disk", mat);
    const auto ss = manufactured("ss_disk", mat);
    for (double t : {0.0, 0.7, 2.0, 4.4}) {
        const Vec2 x(std::cos(t), std::sin(t));
        EXPECT_NEAR(clamped->w(x), 0.0, 1e-14);
        EXPECT_LT(clamped->grad(x).norm(), 1e-13);
        EXPECT_NEAR(ss->w(x), 0.0, 1e-14);
    }
}

TEST(Solutions, PolynomialSolution)
{
    const Material mat;
    const PolynomialSolution p(mat, {{2.0, 2, 1}, {-1.0, 0, 4}, {0.5, 1, 0}});
    const Vec2 x(0.7, -0.4);
    EXPECT_NEAR(p.w(x), 2 * 0.49 * -0.4 - std::pow(-0.4, 4) + 0.35, 1e-15);
    // bilaplacian: d4/dy4 (-y^4) = -24
    EXPECT_NEAR(p.bilaplacian(x), -24.0, 1e-12);
    EXPECT_LT((p.hessian(x) - sym(4 * -0.4, 4 * 0.7, -12 * 0.16)).norm(), 1e-14);
}

TEST(Solutions, MaterialLawInverse)
{
    const Material mat{2.5, -0.4};
    const Mat2 t = sym(0.3, -1.1, 0.8);
    EXPECT_LT((mat.K(mat.C(t)) - t).norm(), 1e-14);
    EXPECT_THROW((Material{1.0, 1.0}.validate()), ConfigError);
    EXPECT_THROW((Material{0.0, 0.3}.validate()), ConfigError);
}

// Oracle for the paradox values: radial collocation of D bilap w = q with
// w = sum_k c_k r^(2k), k = 0..3, and the boundary conditions at r = 1.
namespace {

double radial_collocation(double nu_moment, double q, double D)
{
    // Unknowns c_0..c_3. bilap r^(2k) = (2k)^2 (2k-2)^2 r^(2k-4).
    Eigen::Matrix4d M = Eigen::Matrix4d::Zero();
    Eigen::Vector4d b = Eigen::Vector4d::Zero();
    const double rc[] = {0.3, 0.8};
    for (int i = 0; i < 2; ++i) {
        for (int k = 2; k <= 3; ++k)
            M(i, k) = std::pow(2.0 * k, 2) * std::pow(2.0 * k - 2, 2) * std::pow(rc[i], 2 * k - 4);
        b[i] = q / D;
    }
    // w(1) = 0.
    for (int k = 0; k <= 3; ++k) M(2, k) = 1.0;
    // w''(1) + nu w'(1) = 0: d2 r^(2k) = 2k(2k-1), d1 = 2k.
    for (int k = 0; k <= 3; ++k) M(3, k) = 2.0 * k * (2.0 * k - 1) + nu_moment * 2.0 * k;
    return M.fullPivLu().solve(b)[0];
}

}  // namespace

TEST(Solutions, ParadoxReferenceValues)
{
    for (double nu : {0.0, 0.3, 0.45}) {
        const auto p = paradox_reference(nu, 2.0, 0.5);
        EXPECT_NEAR(p.w_ss0, radial_collocation(nu, 2.0, 0.5), 1e-12);
        // Navier limit: w = 0 and lap w = w'' + w'/r = 0 at r = 1.
        EXPECT_NEAR(p.w_lim0, radial_collocation(1.0, 2.0, 0.5), 1e-12);
        EXPECT_GT(p.w_ss0, p.w_lim0);
    }
    EXPECT_NEAR(paradox_reference(0.3, 1, 1).w_lim0, 3.0 / 64.0, 1e-15);
    EXPECT_THROW(paradox_reference(1.0, 1, 1), ConfigError);
}

TEST(Solutions, UnknownCaseIsRejected)
{
    EXPECT_THROW(manufactured("nope", Material{}), ConfigError);
    EXPECT_EQ(default_case("three_leaf", "simply_supported"), "ss_three_leaf");
}
