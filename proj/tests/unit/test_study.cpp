#include "helpers.hpp"
#include "hhj/assembly.hpp"
#include "hhj/error.hpp"
#include "hhj/study.hpp"
#include "hhj/version.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <numeric>

using namespace hhj;
using namespace testing_helpers;
namespace fs = std::filesystem;

namespace {

ErrorQuadruple solve_on(MeshPtr mesh, const ManufacturedSolution& exact, int m, int r, BoundaryCondition)
{
    const auto maps = std::make_shared<const CurvedMapSet>(mesh, m);
    const HHJSpace V(maps, r);
    const LagrangeSpace W(maps, r + 1);
    const auto sol = solve_plate(assemble_system(V, W, exact.material(), plate_data(exact, true)));
    return compute_errors(W, sol.w, V, sol.sigma, exact, mesh->h_max(), 14, 14);
}

}  // namespace

TEST(Study, WritesFilesWithConfigAndVersion)
{
    const auto dir = temp_dir("study");
    StudyConfig c;
    c.domain = "disk";
    c.m = 2;
    c.r = 1;
    c.levels = 3;
    c.deterministic = true;
    c.out_dir = dir.string();
    c.export_matrices = true;
    const auto rep = run_convergence_study(c);
    EXPECT_TRUE(rep.solver_converged);
    for (const char* f : {"disk_clamped_m2_r1.csv", "disk_clamped_m2_r1.md", "disk_clamped_m2_r1_mesh.json",
                          "disk_clamped_m2_r1_w.json", "disk_clamped_m2_r1_sigma.json", "disk_clamped_m2_r1_A.mtx",
                          "disk_clamped_m2_r1_B.mtx"}) {
        ASSERT_TRUE(fs::exists(dir / f)) << f;
        const std::string text = slurp(dir / f);
        EXPECT_NE(text.find(library_version()), std::string::npos) << f;
        EXPECT_EQ(text.find("wall_time"), std::string::npos) << f;
    }
    const std::string csv = slurp(dir / "disk_clamped_m2_r1.csv");
    EXPECT_NE(csv.find("# domain: disk"), std::string::npos);
    EXPECT_NE(csv.find("# m: 2"), std::string::npos);
    const SparseMatrix B = read_matrix_market((dir / "disk_clamped_m2_r1_B.mtx").string());
    EXPECT_EQ(B.rows(), rep.table.levels.back().dofs - B.cols());
    const auto mesh = mesh_from_json(slurp(dir / "disk_clamped_m2_r1_mesh.json"));
    EXPECT_EQ(mesh.num_cells(), 6);
    const auto w = field_from_json(slurp(dir / "disk_clamped_m2_r1_w.json"));
    EXPECT_EQ(w.kind, "lagrange");
    EXPECT_EQ(w.degree, 2);
}

TEST(Study, DeterministicOutputsAreReproducible)
{
    const auto d1 = temp_dir("det1"), d2 = temp_dir("det2");
    StudyConfig c;
    c.domain = "three_leaf";
    c.bc = BoundaryCondition::simply_supported;
    c.m = 1;
    c.r = 0;
    c.levels = 2;
    c.deterministic = true;
    c.out_dir = d1.string();
    run_convergence_study(c);
    c.out_dir = d2.string();
    run_convergence_study(c);
    for (const auto& e : fs::directory_iterator(d1))
        EXPECT_EQ(slurp(e.path()), slurp(d2 / e.path().filename())) << e.path().filename();
}

TEST(Study, RejectsInvalidConfigs)
{
    StudyConfig c;
    c.r = 5;
    EXPECT_THROW(run_convergence_study(c), ConfigError);
    c = StudyConfig();
    c.levels = 1;
    EXPECT_THROW(run_convergence_study(c), ConfigError);
    c = StudyConfig();
    c.domain = "square";
    EXPECT_THROW(run_convergence_study(c), ConfigError);
    c = StudyConfig();
    c.material.nu = 1.5;
    EXPECT_THROW(run_convergence_study(c), ConfigError);
    c = StudyConfig();
    c.m = 2;
    c.r = 1;
    EXPECT_THROW(run_suboptimality_demo(c), ConfigError);
}

TEST(Study, SuboptimalityDemoMarksExpectedOrder)
{
    StudyConfig c;
    c.bc = BoundaryCondition::simply_supported;
    c.m = 1;
    c.r = 1;
    c.levels = 2;
    const auto rep = run_suboptimality_demo(c);
    EXPECT_DOUBLE_EQ(rep.expected_sigma_order, 0.5);
}

TEST(Study, LevelCallbackSeesEveryLevel)
{
    StudyConfig c;
    c.m = 1;
    c.r = 0;
    c.levels = 3;
    std::vector<int> seen;
    run_convergence_study(c, [&](const LevelResult& l, double residual) {
        seen.push_back(l.level);
        EXPECT_LT(residual, 1e-10);
    });
    EXPECT_EQ(seen, (std::vector<int>{0, 1, 2}));
}

// Relabelling the vertices changes edge orientations and dof numbering but
// not the discrete solution.
TEST(Study, RenumberingInvariance)
{
    const Material mat{1.0, 0.3};
    const auto exact = manufactured("clamped_three_leaf", mat);
    const auto mesh = refined(builtin_domain("three_leaf", BoundaryCondition::clamped), 0);
    std::vector<int> perm(mesh->num_vertices());
    std::iota(perm.begin(), perm.end(), 0);
    std::mt19937 rng(17);
    std::shuffle(perm.begin(), perm.end(), rng);
    const auto other = std::make_shared<const Triangulation>(renumber_vertices(*mesh, perm));
    for (int r = 0; r <= 2; ++r) {
        const auto a = solve_on(mesh, *exact, r + 1, r, BoundaryCondition::clamped).as_array();
        const auto b = solve_on(other, *exact, r + 1, r, BoundaryCondition::clamped).as_array();
        for (int k = 0; k < 4; ++k) EXPECT_NEAR(a[k], b[k], 1e-9 * a[k]) << "r=" << r << " k=" << k;
    }
}

TEST(Study, BabuskaShortRun)
{
    const auto dir = temp_dir("babuska");
    BabuskaConfig c;
    c.levels = 4;
    c.deterministic = true;
    c.out_dir = dir.string();
    const auto rep = run_babuska(c);
    ASSERT_EQ(rep.levels.size(), 4u);
    for (std::size_t i = 1; i < rep.levels.size(); ++i) {
        EXPECT_EQ(rep.levels[i].polygon_sides, 2 * rep.levels[i - 1].polygon_sides);
        EXPECT_LT(rep.levels[i].rel_gap_ss, rep.levels[i - 1].rel_gap_ss);
    }
    EXPECT_TRUE(fs::exists(dir / "babuska.csv"));
    EXPECT_TRUE(fs::exists(dir / "babuska.md"));
    EXPECT_NE(slurp(dir / "babuska.csv").find(library_version()), std::string::npos);
}
