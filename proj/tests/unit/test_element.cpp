#include "hhj/element.hpp"
#include "hhj/fespace.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace hhj;

// Basis functions are dual to the degrees of freedom.
TEST(Element, LagrangeDuality)
{
    for (int p = 1; p <= 6; ++p) {
        const LagrangeElement el(p);
        EXPECT_EQ(el.num_dofs(), (p + 1) * (p + 2) / 2);
        const auto funcs = el.functionals(2 * p + 2);
        std::vector<double> v(el.num_dofs());
        for (int i = 0; i < el.num_dofs(); ++i) {
            std::vector<double> acc(el.num_dofs(), 0.0);
            for (std::size_t q = 0; q < funcs[i].points.size(); ++q) {
                el.eval(funcs[i].points[q], v.data());
                for (int j = 0; j < el.num_dofs(); ++j) acc[j] += funcs[i].weights[q] * v[j];
            }
            for (int j = 0; j < el.num_dofs(); ++j) EXPECT_NEAR(acc[j], i == j ? 1.0 : 0.0, 1e-10) << p << " " << i << " " << j;
        }
    }
}

TEST(Element, HHJDuality)
{
    for (int r = 0; r <= 4; ++r) {
        const HHJElement el(r);
        EXPECT_EQ(el.num_dofs(), 3 * (r + 1) * (r + 2) / 2);
        EXPECT_EQ(el.num_dofs(), 3 * el.dofs_per_edge() + el.dofs_interior());
        const auto funcs = el.functionals(2 * r + 2);
        std::vector<Mat2> v(el.num_dofs());
        for (int i = 0; i < el.num_dofs(); ++i) {
            std::vector<double> acc(el.num_dofs(), 0.0);
            for (std::size_t q = 0; q < funcs[i].points.size(); ++q) {
                el.eval(funcs[i].points[q], v.data());
                for (int j = 0; j < el.num_dofs(); ++j) acc[j] += ddot(funcs[i].weights[q], v[j]);
            }
            for (int j = 0; j < el.num_dofs(); ++j) EXPECT_NEAR(acc[j], i == j ? 1.0 : 0.0, 1e-11) << r << " " << i << " " << j;
        }
    }
}

// Interior HHJ basis functions have vanishing normal-normal trace on every edge.
TEST(Element, HHJInteriorFunctionsAreNnFree)
{
    for (int r = 1; r <= 4; ++r) {
        const HHJElement el(r);
        std::vector<Mat2> v(el.num_dofs());
        for (int e = 0; e < 3; ++e) {
            const Vec2 t = reference::edge_vector(e).normalized();
            const Vec2 n = right_normal(t);
            for (double s : {0.1, 0.5, 0.83}) {
                el.eval(reference::edge_point(e, s), v.data());
                for (int k = 0; k < el.dofs_interior(); ++k) EXPECT_NEAR(n.dot(v[el.interior_dof(k)] * n), 0.0, 1e-12);
                for (int f = 0; f < 3; ++f)
                    if (f != e)
                        for (int k = 0; k < el.dofs_per_edge(); ++k)
                            EXPECT_NEAR(n.dot(v[el.edge_dof(f, k)] * n), 0.0, 1e-12);
            }
        }
    }
}

TEST(Element, PiolaProperties)
{
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int trial = 0; trial < 20; ++trial) {
        Mat2 J;
        J << 1 + u(rng), 0.4 * u(rng), 0.4 * u(rng), 1 + u(rng) * 0.5;
        if (J.determinant() < 0.2) continue;
        const Mat2 X = sym(u(rng), u(rng), u(rng));
        EXPECT_LT((piola_pull(piola_push(X, J), J) - X).norm(), 1e-13);
        // Oracle: push = J X J^T / det^2 directly.
        EXPECT_LT((piola_push(X, J) - J * X * J.transpose() / std::pow(J.determinant(), 2)).norm(), 1e-13);
        // nn trace of the pushed tensor from the reference trace.
        const Vec2 that = Vec2(u(rng), u(rng)).normalized();
        const Vec2 nhat = right_normal(that);
        const Vec2 n = right_normal((J * that).normalized());
        EXPECT_NEAR(nn_trace_transform(nhat.dot(X * nhat), J, that), n.dot(piola_push(X, J) * n), 1e-12);
    }
}
