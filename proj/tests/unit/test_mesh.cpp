#include "helpers.hpp"
#include "hhj/error.hpp"
#include "hhj/mesh.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

using namespace hhj;
using namespace testing_helpers;

namespace {

void expect_euler(const Triangulation& m)
{
    // Simply connected: V - E + T = 1.
    EXPECT_EQ(m.num_vertices() - m.num_edges() + m.num_cells(), 1);
}

}  // namespace

TEST(Mesh, DiskFanAndRefinement)
{
    auto m = disk_mesh(0);
    EXPECT_EQ(m->num_cells(), 6);
    for (int level = 1; level <= 4; ++level) {
        const auto fine = std::make_shared<const Triangulation>(refine_uniform(*m));
        EXPECT_EQ(fine->num_cells(), 4 * m->num_cells());
        EXPECT_EQ(fine->num_boundary_edges(), 2 * m->num_boundary_edges());
        EXPECT_LT(fine->h_max(), 0.75 * m->h_max());
        m = fine;
        const auto rep = validate(*m);
        EXPECT_TRUE(rep.ok) << (rep.problems.empty() ? "" : rep.problems[0]);
        EXPECT_LT(rep.max_boundary_vertex_offset, 1e-14);
        EXPECT_EQ(rep.cells_with_multiple_boundary_edges, 0);
        expect_euler(*m);
    }
}

TEST(Mesh, ThreeLeafCoarseMesh)
{
    const auto m = refined(builtin_domain("three_leaf", BoundaryCondition::clamped), 0);
    const auto rep = validate(*m);
    EXPECT_TRUE(rep.ok);
    EXPECT_GE(rep.min_angle_deg, 15.0);
    // Default sampling: about 6.75 boundary vertices per unit of perimeter;
    // quality refinement may split a few encroached boundary edges.
    const long target = std::lround(6.75 * m->domain().perimeter());
    EXPECT_GE(m->num_boundary_edges(), target);
    EXPECT_LE(m->num_boundary_edges(), target + 4);
    EXPECT_GT(m->num_cells(), 300);
    EXPECT_LT(m->num_cells(), 420);
    expect_euler(*m);
    for (int c = 0; c < m->num_cells(); ++c) EXPECT_LE(m->boundary_edge_count(c), 1);
}

TEST(Mesh, EdgeOrientationAndAdjacency)
{
    const auto m = refined(builtin_domain("three_leaf", BoundaryCondition::clamped), 1);
    for (int e = 0; e < m->num_edges(); ++e) {
        EXPECT_LT(m->edges()[e][0], m->edges()[e][1]);
        const auto& cells = m->edge_cells(e);
        EXPECT_EQ(cells[1] < 0, m->is_boundary_edge(e));
        for (int s = 0; s < 2; ++s) {
            if (cells[s] < 0) continue;
            EXPECT_EQ(m->cell_edges(cells[s])[m->edge_local(e)[s]], e);
        }
    }
    for (int c = 0; c < m->num_cells(); ++c) {
        const auto& t = m->cells()[c];
        const auto& v = m->vertices();
        EXPECT_GT(cross(v[t[1]] - v[t[0]], v[t[2]] - v[t[0]]), 0.0);
    }
}

TEST(Mesh, JsonRoundTrip)
{
    const auto m = disk_mesh(1, BoundaryCondition::simply_supported);
    const std::string text = mesh_to_json(*m, {{"purpose", "test"}});
    EXPECT_NE(text.find("plate-hhj-mesh-v1"), std::string::npos);
    EXPECT_NE(text.find("library_version"), std::string::npos);
    const Triangulation back = mesh_from_json(text);
    ASSERT_EQ(back.num_cells(), m->num_cells());
    ASSERT_EQ(back.num_vertices(), m->num_vertices());
    for (int v = 0; v < m->num_vertices(); ++v) EXPECT_EQ(back.vertices()[v], m->vertices()[v]);
    EXPECT_EQ(back.cells(), m->cells());
    EXPECT_EQ(back.num_boundary_edges(), m->num_boundary_edges());
    EXPECT_EQ(mesh_to_json(back, {{"purpose", "test"}}), text);
}

TEST(Mesh, RejectsMalformedJson)
{
    EXPECT_THROW(mesh_from_json(R"({"version":"other"})"), Error);
    EXPECT_THROW(mesh_from_json("[1,2"), Error);
}

TEST(Mesh, RenumberingKeepsGeometry)
{
    const auto m = disk_mesh(1);
    std::vector<int> perm(m->num_vertices());
    std::iota(perm.begin(), perm.end(), 0);
    std::mt19937 rng(3);
    std::shuffle(perm.begin(), perm.end(), rng);
    const Triangulation p = renumber_vertices(*m, perm);
    EXPECT_NEAR(p.area(), m->area(), 1e-14);
    EXPECT_EQ(p.num_edges(), m->num_edges());
    for (int v = 0; v < m->num_vertices(); ++v) EXPECT_EQ(p.vertices()[perm[v]], m->vertices()[v]);
    EXPECT_TRUE(validate(p).ok);
}
