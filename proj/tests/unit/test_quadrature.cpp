#include "hhj/quadrature.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace hhj;

namespace {

double factorial(int n) { return n <= 1 ? 1.0 : n * factorial(n - 1); }

}  // namespace

// Integral of x^a y^b over the reference triangle is a! b! / (a + b + 2)!.
TEST(Quadrature, TriangleRulesAreExact)
{
    for (int deg = 0; deg <= 20; ++deg) {
        const auto rule = triangle_rule(deg);
        ASSERT_GE(rule.degree, deg);
        for (int a = 0; a <= deg; ++a)
            for (int b = 0; a + b <= deg; ++b) {
                double s = 0.0;
                for (std::size_t q = 0; q < rule.points.size(); ++q)
                    s += rule.weights[q] * std::pow(rule.points[q].x(), a) * std::pow(rule.points[q].y(), b);
                EXPECT_NEAR(s, factorial(a) * factorial(b) / factorial(a + b + 2), 1e-14) << deg << " " << a << " " << b;
            }
    }
}

TEST(Quadrature, TrianglePointsInside)
{
    for (int deg = 0; deg <= 16; ++deg)
        for (const auto& p : triangle_rule(deg).points) {
            EXPECT_GT(p.x(), 0.0);
            EXPECT_GT(p.y(), 0.0);
            EXPECT_LT(p.x() + p.y(), 1.0);
        }
}

TEST(Quadrature, LineRulesAreExact)
{
    for (int deg = 0; deg <= 30; ++deg) {
        const auto rule = line_rule(deg);
        for (int k = 0; k <= deg; ++k) {
            double s = 0.0;
            for (std::size_t q = 0; q < rule.points.size(); ++q) s += rule.weights[q] * std::pow(rule.points[q], k);
            EXPECT_NEAR(s, 1.0 / (k + 1), 1e-14);
        }
    }
}

TEST(Quadrature, GaussJacobiWeight)
{
    // int_0^1 (1-u)^alpha u^k du = alpha! k! / (alpha + k + 1)!
    for (int alpha = 0; alpha <= 1; ++alpha) {
        const auto rule = gauss_jacobi(6, alpha);
        for (int k = 0; k <= 11; ++k) {
            double s = 0.0;
            for (std::size_t q = 0; q < rule.points.size(); ++q) s += rule.weights[q] * std::pow(rule.points[q], k);
            EXPECT_NEAR(s, factorial(alpha) * factorial(k) / factorial(alpha + k + 1), 1e-14);
        }
    }
}
