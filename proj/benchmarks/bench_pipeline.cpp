#include "hhj/assembly.hpp"
#include "hhj/curved.hpp"
#include "hhj/mesh.hpp"
#include "hhj/solutions.hpp"

#include <benchmark/benchmark.h>

namespace {

std::shared_ptr<const hhj::Triangulation> mesh_at(const std::string& domain, int level)
{
    auto mesh = std::make_shared<const hhj::Triangulation>(
        hhj::initial_mesh(hhj::builtin_domain(domain, hhj::BoundaryCondition::clamped)));
    for (int i = 0; i < level; ++i) mesh = std::make_shared<const hhj::Triangulation>(hhj::refine_uniform(*mesh));
    return mesh;
}

void BM_InitialMeshThreeLeaf(benchmark::State& state)
{
    const auto dom = hhj::builtin_domain("three_leaf", hhj::BoundaryCondition::clamped);
    for (auto _ : state) benchmark::DoNotOptimize(hhj::initial_mesh(dom));
}
BENCHMARK(BM_InitialMeshThreeLeaf)->Unit(benchmark::kMillisecond);

void BM_RefineUniform(benchmark::State& state)
{
    const auto mesh = mesh_at("three_leaf", static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(hhj::refine_uniform(*mesh));
    state.counters["cells"] = mesh->num_cells();
}
BENCHMARK(BM_RefineUniform)->Arg(1)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_CurvedMaps(benchmark::State& state)
{
    const auto mesh = mesh_at("three_leaf", 2);
    const int m = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(hhj::CurvedMapSet(mesh, m));
}
BENCHMARK(BM_CurvedMaps)->DenseRange(1, 4)->Unit(benchmark::kMillisecond);

void BM_AssembleSystem(benchmark::State& state)
{
    const int r = static_cast<int>(state.range(0));
    const auto maps = std::make_shared<const hhj::CurvedMapSet>(mesh_at("disk", 3), r + 1);
    const hhj::HHJSpace V(maps, r);
    const hhj::LagrangeSpace W(maps, r + 1);
    const hhj::Material mat;
    const auto exact = hhj::manufactured("clamped_disk", mat);
    const auto data = hhj::plate_data(*exact, true);
    for (auto _ : state) benchmark::DoNotOptimize(hhj::assemble_system(V, W, mat, data));
    state.counters["dofs"] = static_cast<double>(V.num_dofs() + W.num_dofs());
}
BENCHMARK(BM_AssembleSystem)->DenseRange(0, 3)->Unit(benchmark::kMillisecond);

void BM_SolvePlate(benchmark::State& state)
{
    const int level = static_cast<int>(state.range(0));
    const auto maps = std::make_shared<const hhj::CurvedMapSet>(mesh_at("disk", level), 2);
    const hhj::HHJSpace V(maps, 1);
    const hhj::LagrangeSpace W(maps, 2);
    const hhj::Material mat;
    const auto exact = hhj::manufactured("clamped_disk", mat);
    const auto sys = hhj::assemble_system(V, W, mat, hhj::plate_data(*exact, true));
    for (auto _ : state) benchmark::DoNotOptimize(hhj::solve_plate(sys));
    state.counters["dofs"] = static_cast<double>(V.num_dofs() + W.num_dofs());
}
BENCHMARK(BM_SolvePlate)->DenseRange(2, 5)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
