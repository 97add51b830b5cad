#include "helpers.hpp"
#include "hhj/analysis.hpp"
#include "hhj/curved.hpp"
#include "hhj/element.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace hhj;
using namespace testing_helpers;

namespace {

// Distance of x from the three-leaf curve, by a fine parameter search.
double leaf_distance(const Chart& c, const Vec2& x)
{
    double best = 1e9, tbest = 0;
    for (int i = 0; i < 20000; ++i) {
        const double t = 2 * std::numbers::pi * i / 20000;
        const double d = (c.eval(t) - x).norm();
        if (d < best) best = d, tbest = t;
    }
    double lo = tbest - 4e-4, hi = tbest + 4e-4;
    for (int it = 0; it < 100; ++it) {
        const double a = lo + (hi - lo) / 3, b = hi - (hi - lo) / 3;
        if ((c.eval(a) - x).norm() < (c.eval(b) - x).norm()) hi = b;
        else lo = a;
    }
    return (c.eval(0.5 * (lo + hi)) - x).norm();
}

}  // namespace

TEST(Curved, BoundaryEdgeInterpolatesTheCurve)
{
    const auto mesh = refined(builtin_domain("three_leaf", BoundaryCondition::clamped), 0);
    const auto leaf = make_three_leaf_chart();
    for (int m = 2; m <= 4; ++m) {
        const CurvedMapSet maps(mesh, m);
        for (int c = 0; c < mesh->num_cells(); c += 3) {
            const int e = mesh->boundary_local_edge(c);
            if (e < 0) continue;
            // Vertices exactly, the rest of the edge to within the geometric error.
            for (int k = 0; k < 2; ++k) {
                const Vec2 x = maps.jet(c, reference::edge_point(e, k)).x;
                EXPECT_LT(leaf_distance(*leaf, x), 1e-12);
            }
            EXPECT_LT(leaf_distance(*leaf, maps.jet(c, reference::edge_point(e, 0.37)).x), 1e-3);
        }
    }
}

TEST(Curved, InteriorEdgesStayStraight)
{
    const auto mesh = refined(builtin_domain("three_leaf", BoundaryCondition::clamped), 0);
    for (int m = 1; m <= 4; ++m) {
        const CurvedMapSet maps(mesh, m);
        for (int c = 0; c < mesh->num_cells(); ++c) {
            const int be = mesh->boundary_local_edge(c);
            const PolyMap aff = maps.affine_map(c);
            for (int e = 0; e < 3; ++e) {
                if (e == be) continue;
                for (double s : {0.2, 0.5, 0.9}) {
                    const Vec2 p = reference::edge_point(e, s);
                    EXPECT_LT((maps.jet(c, p).x - aff(p)).norm(), 1e-15);
                    const Vec2 t = reference::edge_vector(e);
                    EXPECT_LT((maps.jet(c, p).J * t - aff.jet(p).J * t).norm(), 1e-14);
                }
            }
        }
    }
}

TEST(Curved, JetMatchesFiniteDifferences)
{
    const auto mesh = refined(builtin_domain("three_leaf", BoundaryCondition::clamped), 0);
    const CurvedMapSet maps(mesh, 4);
    const double h = 1e-5;
    int checked = 0;
    for (int c = 0; c < mesh->num_cells() && checked < 10; ++c) {
        if (!maps.is_curved(c)) continue;
        ++checked;
        const Vec2 p(0.3, 0.25);
        const MapJet j = maps.jet(c, p);
        for (int d = 0; d < 2; ++d) {
            const Vec2 dp = h * Vec2::Unit(d);
            const MapJet jp = maps.jet(c, p + dp), jm = maps.jet(c, p - dp);
            EXPECT_LT(((jp.x - jm.x) / (2 * h) - j.J.col(d)).norm(), 1e-8);
            for (int k = 0; k < 2; ++k)
                EXPECT_LT(((jp.J.row(k) - jm.J.row(k)).transpose() / (2 * h) - j.hessian[k].col(d)).norm(), 1e-7);
        }
    }
    EXPECT_EQ(checked, 10);
}

TEST(Curved, AreaConvergesWithGeometryOrder)
{
    for (int m = 1; m <= 3; ++m) {
        std::vector<double> err;
        for (int level = 1; level <= 3; ++level)
            err.push_back(std::abs(CurvedMapSet(disk_mesh(level), m).area() - std::numbers::pi));
        EXPECT_GT(eoc(err[1], err[2]), m + 1 - 0.3) << "m=" << m;
    }
}

TEST(Curved, MapsArePositive)
{
    for (int m = 1; m <= 4; ++m) {
        const CurvedMapSet maps(refined(builtin_domain("three_leaf", BoundaryCondition::clamped), 1), m);
        EXPECT_GT(maps.min_jacobian_ratio(), 0.3);
    }
}

TEST(Curved, DeviationFromExactMapHasExpectedOrder)
{
    const CurvedMapSet a(disk_mesh(2), 2), b(disk_mesh(3), 2);
    const auto da = map_deviation(a), db = map_deviation(b);
    for (int s = 0; s <= 2; ++s) EXPECT_NEAR(eoc(da[s], db[s]), 3.0 - s, 0.3) << "s=" << s;
}
