#include "helpers.hpp"
#include "hhj/error.hpp"
#include "hhj/fespace.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace hhj;
using namespace testing_helpers;

TEST(FESpace, DofCounts)
{
    const auto mesh = refined(builtin_domain("three_leaf", BoundaryCondition::clamped), 0);
    const auto maps = std::make_shared<const CurvedMapSet>(mesh, 2);
    const Index nv = mesh->num_vertices(), ne = mesh->num_edges(), nc = mesh->num_cells();
    for (int p = 1; p <= 5; ++p)
        EXPECT_EQ(LagrangeSpace(maps, p).num_dofs(), nv + (p - 1) * ne + (p - 1) * (p - 2) / 2 * nc);
    for (int r = 0; r <= 4; ++r)
        EXPECT_EQ(HHJSpace(maps, r).num_dofs(), (r + 1) * ne + 3 * r * (r + 1) / 2 * nc);
}

TEST(FESpace, BoundaryMasks)
{
    const auto mesh = disk_mesh(1, BoundaryCondition::simply_supported);
    const auto maps = std::make_shared<const CurvedMapSet>(mesh, 2);
    const LagrangeSpace W(maps, 3);
    const HHJSpace V(maps, 2);
    const auto wm = W.boundary_mask();
    const auto vm = V.simply_supported_mask();
    const Index nb = mesh->num_boundary_edges();
    EXPECT_EQ(std::count(wm.begin(), wm.end(), 1), nb + 2 * nb);
    EXPECT_EQ(std::count(vm.begin(), vm.end(), 1), 3 * nb);
    const HHJSpace Vc(std::make_shared<const CurvedMapSet>(disk_mesh(1), 2), 2);
    const auto cm = Vc.simply_supported_mask();
    EXPECT_EQ(std::count(cm.begin(), cm.end(), 1), 0);
}

// Interpolation reproduces polynomials of the space degree on straight meshes.
TEST(FESpace, InterpolationReproducesPolynomials)
{
    const auto maps = std::make_shared<const CurvedMapSet>(square_mesh(1), 1);
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int p = 1; p <= 4; ++p) {
        std::vector<double> c(poly_dim(p));
        for (double& v : c) v = u(rng);
        const MonomialBasis mb(p);
        auto f = [&](const Vec2& x) {
            std::vector<double> v(mb.size());
            mb.eval(x, v.data());
            double s = 0;
            for (int i = 0; i < mb.size(); ++i) s += c[i] * v[i];
            return s;
        };
        const LagrangeSpace W(maps, p);
        const VectorX coef = lagrange_interpolate(W, f);
        for (int cell = 0; cell < W.mesh().num_cells(); cell += 5) {
            const Vec2 xhat(0.2, 0.3);
            EXPECT_NEAR(eval_lagrange(W, coef, cell, xhat), f(maps->jet(cell, xhat).x), 1e-12);
        }
        const int r = p - 1;
        const HHJSpace V(maps, r);
        std::vector<double> d(3 * poly_dim(r));
        for (double& v : d) v = u(rng);
        const MonomialBasis rb(r);
        auto phi = [&](const Vec2& x) {
            std::vector<double> v(rb.size());
            rb.eval(x, v.data());
            double a = 0, b = 0, e = 0;
            for (int i = 0; i < rb.size(); ++i) a += d[i] * v[i], b += d[rb.size() + i] * v[i], e += d[2 * rb.size() + i] * v[i];
            return sym(a, b, e);
        };
        const VectorX s = hhj_interpolate(V, phi);
        for (int cell = 0; cell < V.mesh().num_cells(); cell += 5) {
            const Vec2 xhat(0.6, 0.1);
            EXPECT_LT((eval_hhj(V, s, cell, xhat) - phi(maps->jet(cell, xhat).x)).norm(), 1e-11);
        }
    }
}

TEST(FESpace, LocatePoint)
{
    const auto maps = std::make_shared<const CurvedMapSet>(
        refined(builtin_domain("three_leaf", BoundaryCondition::clamped), 0), 3);
    for (int c = 0; c < maps->mesh().num_cells(); c += 7) {
        const Vec2 xhat(0.31, 0.42);
        const Vec2 x = maps->jet(c, xhat).x;
        Vec2 found;
        const int cell = locate_point(*maps, x, &found);
        ASSERT_GE(cell, 0);
        EXPECT_LT((maps->jet(cell, found).x - x).norm(), 1e-12);
    }
    Vec2 dummy;
    EXPECT_EQ(locate_point(*maps, Vec2(5, 5), &dummy), -1);
}

TEST(FESpace, FieldJsonRoundTrip)
{
    FieldCoefficients f{"hhj", 2, VectorX::LinSpaced(7, -1.0, 1.0 / 3.0)};
    const std::string text = field_to_json(f, {{"case", "unit"}});
    EXPECT_NE(text.find("\"case\""), std::string::npos);
    const auto g = field_from_json(text);
    EXPECT_EQ(g.kind, "hhj");
    EXPECT_EQ(g.degree, 2);
    ASSERT_EQ(g.values.size(), 7);
    for (int i = 0; i < 7; ++i) EXPECT_EQ(g.values[i], f.values[i]);
    EXPECT_THROW(field_from_json(R"({"kind":"nedelec","degree":1,"values":[]})"), Error);
}

// The cell-wise Lagrange basis is globally continuous across edges.
TEST(FESpace, LagrangeContinuity)
{
    const auto maps = std::make_shared<const CurvedMapSet>(
        refined(builtin_domain("three_leaf", BoundaryCondition::clamped), 0), 3);
    const LagrangeSpace W(maps, 4);
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> u(-1, 1);
    VectorX coef(W.num_dofs());
    for (Index i = 0; i < coef.size(); ++i) coef[i] = u(rng);
    const auto& mesh = W.mesh();
    double worst = 0;
    for (int e = 0; e < mesh.num_edges(); ++e) {
        if (mesh.is_boundary_edge(e)) continue;
        const int ca = mesh.edge_cells(e)[0], cb = mesh.edge_cells(e)[1];
        const int la = mesh.edge_local(e)[0], lb = mesh.edge_local(e)[1];
        for (double s : {0.15, 0.5, 0.7}) {
            const double va = eval_lagrange(W, coef, ca, reference::edge_point(la, s));
            const double vb = eval_lagrange(W, coef, cb, reference::edge_point(lb, 1 - s));
            worst = std::max(worst, std::abs(va - vb));
        }
    }
    EXPECT_LT(worst, 1e-11);
}
