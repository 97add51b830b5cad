#include "hhj/study.hpp"

#include "hhj/assembly.hpp"
#include "hhj/curved.hpp"
#include "hhj/error.hpp"
#include "hhj/fespace.hpp"
#include "hhj/mesh.hpp"
#include "hhj/version.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace hhj {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string num(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_file(const std::string& path, const std::string& text)
{
    std::ofstream f(path, std::ios::binary);
    HHJ_THROW_IF(!f, ConfigError, "cannot write " + path);
    f << text;
    HHJ_THROW_IF(!f, ConfigError, "write failed for " + path);
}

std::shared_ptr<const Domain> study_domain(const StudyConfig& c)
{
    return c.custom_domain ? c.custom_domain : builtin_domain(c.domain, c.bc);
}

std::string domain_name(const StudyConfig& c)
{
    return c.custom_domain ? c.custom_domain->name() : c.domain;
}

std::string stem(const StudyConfig& c)
{
    if (!c.prefix.empty()) return c.prefix;
    return domain_name(c) + "_" + to_string(c.bc) + "_m" + std::to_string(c.m) + "_r" + std::to_string(c.r);
}

// Rethrows the active exception with the level prepended, keeping its type.
[[noreturn]] void rethrow_at_level(int level)
{
    const std::string at = "level " + std::to_string(level) + ": ";
    try {
        throw;
    } catch (const ConfigError& e) {
        throw ConfigError(at + e.what());
    } catch (const DomainError& e) {
        throw DomainError(at + e.what());
    } catch (const MeshError& e) {
        throw MeshError(at + e.what());
    } catch (const GeometryError& e) {
        throw GeometryError(at + e.what());
    } catch (const SolverError& e) {
        throw SolverError(at + e.what());
    } catch (const NumericError& e) {
        throw NumericError(at + e.what());
    } catch (const Error& e) {
        throw Error(at + e.what());
    }
}

}  // namespace

void validate(const StudyConfig& c)
{
    HHJ_THROW_IF(c.m < 1, ConfigError, "geometry degree m must be at least 1");
    HHJ_THROW_IF(c.r < 0 || c.r > 4, ConfigError, "order r must lie in [0, 4]");
    HHJ_THROW_IF(c.levels < 2, ConfigError, "a convergence study needs at least 2 levels");
    HHJ_THROW_IF(c.n_boundary < 0, ConfigError, "n_boundary must be non-negative");
    HHJ_THROW_IF(!c.custom_domain && c.domain != "disk" && c.domain != "three_leaf", ConfigError,
                 "unknown domain " + c.domain);
    HHJ_THROW_IF(c.custom_domain && c.solution.empty(), ConfigError, "a custom domain needs an explicit solution case");
    c.material.validate();
}

std::string resolved_solution(const StudyConfig& c)
{
    return c.solution.empty() ? default_case(c.domain, to_string(c.bc)) : c.solution;
}

ConfigEcho config_echo(const StudyConfig& c)
{
    const int r = c.r, m = c.m;
    ConfigEcho e = {
        {"library", std::string("plate_hhj ") + library_version()},
        {"experiment", "convergence_study"},
        {"domain", domain_name(c)},
        {"bc", to_string(c.bc)},
        {"solution", resolved_solution(c)},
        {"m", std::to_string(m)},
        {"r", std::to_string(r)},
        {"levels", std::to_string(c.levels)},
        {"D", num(c.material.D)},
        {"nu", num(c.material.nu)},
        {"n_boundary", std::to_string(c.n_boundary)},
        {"data_transport", c.transport ? "exact_cell_maps" : "direct"},
        {"quad_interior", std::to_string(c.quadrature.resolved_interior(r, m))},
        {"quad_edge", std::to_string(c.quadrature.resolved_edge(r, m))},
        {"quad_error_bonus", std::to_string(c.quadrature.error_bonus)},
        {"solver", saddle_solver_name()},
        {"solver_tolerance", num(c.solver.tolerance)},
        {"refinement_steps", std::to_string(c.solver.refinement_steps)},
        {"deterministic", c.deterministic ? "true" : "false"},
    };
    return e;
}

StudyReport run_convergence_study(const StudyConfig& config, const LevelCallback& on_level)
{
    validate(config);
    const auto domain = study_domain(config);
    const Material& mat = config.material;
    const auto exact = manufactured(resolved_solution(config), mat);
    const int r = config.r, m = config.m;
    const int qi = config.quadrature.resolved_interior(r, m), qe = config.quadrature.resolved_edge(r, m);
    const ConfigEcho echo = config_echo(config);
    const bool write = !config.out_dir.empty();
    if (write) std::filesystem::create_directories(config.out_dir);
    const std::string base = write ? (std::filesystem::path(config.out_dir) / stem(config)).string() : std::string();

    StudyReport report;
    report.table.m = m;
    report.table.r = r;
    MeshOptions mopt;
    mopt.n_boundary = config.n_boundary;
    std::shared_ptr<const Triangulation> mesh;
    for (int level = 0; level < config.levels; ++level) {
        try {
            LevelTiming timing;
            auto t0 = Clock::now();
            mesh = level == 0 ? std::make_shared<const Triangulation>(initial_mesh(domain, mopt))
                              : std::make_shared<const Triangulation>(refine_uniform(*mesh));
            if (level == 0 && write) {
                write_file(base + "_mesh.json", mesh_to_json(*mesh, echo));
                report.files.push_back(base + "_mesh.json");
            }
            auto maps = std::make_shared<const CurvedMapSet>(mesh, m);
            HHJSpace V(maps, r);
            LagrangeSpace W(maps, r + 1);
            timing.mesh = seconds_since(t0);

            t0 = Clock::now();
            AssemblyOptions aopt;
            aopt.quadrature = config.quadrature;
            SaddleSystem sys = assemble_system(V, W, mat, plate_data(*exact, config.transport), aopt);
            const bool last = level + 1 == config.levels;
            if (last && write && config.export_matrices) {
                ConfigEcho hdr = echo;
                hdr.emplace_back("level", std::to_string(level));
                std::vector<std::string> lines;
                for (const auto& [k, v] : hdr) lines.push_back(k + ": " + v);
                lines.insert(lines.begin(), "block A (nV x nV), boundary rows included");
                write_matrix_market(sys.A, base + "_A.mtx", lines);
                lines[0] = "block B (nW x nV), rows are displacement dofs, boundary rows included";
                write_matrix_market(sys.B, base + "_B.mtx", lines);
                report.files.push_back(base + "_A.mtx");
                report.files.push_back(base + "_B.mtx");
            }
            ReducedSystem red = reduce_system(sys);
            // Only the constrained values are needed from here on; swapping
            // releases the storage, assignment would keep its capacity.
            SparseMatrix().swap(sys.A);
            SparseMatrix().swap(sys.B);
            timing.assemble = seconds_since(t0);

            t0 = Clock::now();
            KktMatrix K = kkt_matrix(red.A, red.B);
            const Index nv = red.A.rows();
            SparseMatrix().swap(red.A);
            SparseMatrix().swap(red.B);
            SaddleSolveResult res = solve_kkt(K, nv, red.F, red.G, config.solver);
            KktMatrix().swap(K);
            VectorX sigma = sys.sigma_data, w = sys.w_data;
            for (std::size_t i = 0; i < red.sigma_free.size(); ++i) sigma[red.sigma_free[i]] = res.sigma[i];
            for (std::size_t i = 0; i < red.w_free.size(); ++i) w[red.w_free[i]] = res.w[i];
            red = ReducedSystem();
            timing.solve = seconds_since(t0);

            t0 = Clock::now();
            LevelResult lr;
            lr.level = level;
            lr.n_cells = mesh->num_cells();
            lr.h = mesh->h_max();
            lr.dofs = V.num_dofs() + W.num_dofs();
            const int bonus = config.quadrature.error_bonus;
            lr.errors = compute_errors(W, w, V, sigma, *exact, lr.h, qi + bonus, qe + bonus);
            timing.errors = seconds_since(t0);

            const double resid = std::max(res.residual_moment, res.residual_load);
            report.table.levels.push_back(lr);
            report.residuals.push_back(resid);
            report.timings.push_back(timing);
            report.solver_converged = report.solver_converged && res.converged;
            if (on_level) on_level(lr, resid);

            if (last && write) {
                FieldCoefficients fw{"lagrange", r + 1, w}, fs{"hhj", r, sigma};
                write_file(base + "_w.json", field_to_json(fw, echo));
                write_file(base + "_sigma.json", field_to_json(fs, echo));
                report.files.push_back(base + "_w.json");
                report.files.push_back(base + "_sigma.json");
            }
        } catch (const Error&) {
            rethrow_at_level(level);
        }
    }

    if (write) {
        ConfigEcho out = echo;
        if (!config.deterministic) {
            double total = 0.0;
            for (const auto& t : report.timings) total += t.mesh + t.assemble + t.solve + t.errors;
            out.emplace_back("wall_time_s", num(total));
        }
        std::string md = to_markdown(report.table, out, "EoC, " + domain_name(config) + ", " + to_string(config.bc));
        if (report.expected_sigma_order >= 0.0)
            md += "\nExpected sigma order for m < r + 1: O(h^" + num(report.expected_sigma_order) + ").\n";
        write_file(base + ".csv", to_csv(report.table, out));
        write_file(base + ".md", md);
        report.files.push_back(base + ".csv");
        report.files.push_back(base + ".md");
    }
    return report;
}

StudyReport run_suboptimality_demo(const StudyConfig& config, const LevelCallback& on_level)
{
    HHJ_THROW_IF(config.m >= config.r + 1, ConfigError, "the suboptimality demo needs m < r + 1");
    // Files are written after the marker is known.
    StudyConfig quiet = config;
    quiet.out_dir.clear();
    StudyReport report = run_convergence_study(quiet, on_level);
    report.expected_sigma_order = config.m - 0.5;
    if (!config.out_dir.empty()) {
        std::filesystem::create_directories(config.out_dir);
        const std::string base = (std::filesystem::path(config.out_dir) / stem(config)).string();
        ConfigEcho out = config_echo(config);
        out[1].second = "suboptimality_demo";
        out.emplace_back("expected_sigma_order", num(report.expected_sigma_order));
        std::string md = to_markdown(report.table, out, "EoC, " + domain_name(config) + ", " + to_string(config.bc));
        md += "\nExpected sigma order for m < r + 1: O(h^" + num(report.expected_sigma_order) + ").\n";
        write_file(base + ".csv", to_csv(report.table, out));
        write_file(base + ".md", md);
        report.files = {base + ".csv", base + ".md"};
    }
    return report;
}

ConfigEcho config_echo(const BabuskaConfig& c)
{
    return {
        {"library", std::string("plate_hhj ") + library_version()},
        {"experiment", "babuska_paradox"},
        {"domain", "disk"},
        {"bc", "simply_supported"},
        {"m", "1"},
        {"r", "0"},
        {"levels", std::to_string(c.levels)},
        {"D", num(c.D)},
        {"nu", num(c.nu)},
        {"q", num(c.q)},
        {"n_boundary", std::to_string(c.n_boundary)},
        {"solver", saddle_solver_name()},
        {"deterministic", c.deterministic ? "true" : "false"},
    };
}

BabuskaReport run_babuska(const BabuskaConfig& config)
{
    HHJ_THROW_IF(config.levels < 3, ConfigError, "the paradox experiment needs at least 3 levels");
    HHJ_THROW_IF(!(config.q > 0.0), ConfigError, "load q must be positive");
    Material mat;
    mat.D = config.D;
    mat.nu = config.nu;
    mat.validate();
    BabuskaReport report;
    report.reference = paradox_reference(config.nu, config.q, config.D);
    const double wss = report.reference.w_ss0, wlim = report.reference.w_lim0;

    const auto domain = builtin_domain("disk", BoundaryCondition::simply_supported);
    MeshOptions mopt;
    mopt.n_boundary = config.n_boundary;
    std::shared_ptr<const Triangulation> mesh;
    for (int level = 0; level < config.levels; ++level) {
        try {
            mesh = level == 0 ? std::make_shared<const Triangulation>(initial_mesh(domain, mopt))
                              : std::make_shared<const Triangulation>(refine_uniform(*mesh));
            // m = 1: every cell is straight, so the discrete domain is the
            // inscribed polygon and the data are taken on it directly.
            auto maps = std::make_shared<const CurvedMapSet>(mesh, 1);
            HHJSpace V(maps, 0);
            LagrangeSpace W(maps, 1);
            const SaddleSystem sys = assemble_system(V, W, mat, uniform_load_data(config.q));
            const PlateSolution sol = solve_plate(sys);
            HHJ_THROW_IF(!sol.solve.converged, SolverError, "saddle solve did not reach the tolerance");
            Vec2 xhat;
            const int cell = locate_point(*maps, Vec2::Zero(), &xhat);
            HHJ_THROW_IF(cell < 0, GeometryError, "the disk center is not inside the mesh");
            BabuskaLevel bl;
            bl.level = level;
            bl.n_cells = mesh->num_cells();
            bl.polygon_sides = mesh->num_boundary_edges();
            bl.h = mesh->h_max();
            bl.w_center = eval_lagrange(W, sol.w, cell, xhat);
            bl.rel_gap_ss = std::abs(bl.w_center - wss) / wss;
            bl.rel_gap_lim = std::abs(bl.w_center - wlim) / wlim;
            report.levels.push_back(bl);
        } catch (const Error&) {
            rethrow_at_level(level);
        }
    }
    const auto& last = report.levels.back();
    report.converges = last.rel_gap_ss < 0.02;
    const double sep = 0.25 * std::abs(wss - wlim);
    report.separated = true;
    for (std::size_t i = report.levels.size() - 2; i < report.levels.size(); ++i)
        report.separated = report.separated && std::abs(report.levels[i].w_center - wlim) >= sep;

    if (!config.out_dir.empty()) {
        std::filesystem::create_directories(config.out_dir);
        const ConfigEcho echo = config_echo(config);
        const std::string base = (std::filesystem::path(config.out_dir) / "babuska").string();
        write_file(base + ".csv", babuska_csv(report, echo));
        write_file(base + ".md", babuska_markdown(report, echo));
        report.files = {base + ".csv", base + ".md"};
    }
    return report;
}

std::string babuska_csv(const BabuskaReport& report, const ConfigEcho& config)
{
    std::ostringstream os;
    for (const auto& [k, v] : config) os << "# " << k << ": " << v << "\n";
    os << "# w_ss0: " << num(report.reference.w_ss0) << "\n";
    os << "# w_lim0: " << num(report.reference.w_lim0) << "\n";
    os << "level,N_T,polygon_sides,h,w_center,rel_gap_ss,rel_gap_lim\n";
    char buf[256];
    for (const auto& l : report.levels) {
        std::snprintf(buf, sizeof buf, "%d,%d,%d,%.10e,%.10e,%.10e,%.10e\n", l.level, l.n_cells, l.polygon_sides, l.h,
                      l.w_center, l.rel_gap_ss, l.rel_gap_lim);
        os << buf;
    }
    return os.str();
}

std::string babuska_markdown(const BabuskaReport& report, const ConfigEcho& config)
{
    std::ostringstream os;
    os << "<!--\n";
    for (const auto& [k, v] : config) os << k << ": " << v << "\n";
    os << "-->\n\n";
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "## Center deflection on inscribed polygons\n\nDisk solution w_ss(0) = %.6f, polygon limit w_lim(0) = "
                  "%.6f.\n\n",
                  report.reference.w_ss0, report.reference.w_lim0);
    os << buf;
    os << "| level | N_T | sides | h | w_h(0) | gap to w_ss | gap to w_lim |\n|---:|---:|---:|---:|---:|---:|---:|\n";
    for (const auto& l : report.levels) {
        std::snprintf(buf, sizeof buf, "| %d | %d | %d | %.4e | %.6f | %.2f%% | %.2f%% |\n", l.level, l.n_cells,
                      l.polygon_sides, l.h, l.w_center, 100.0 * l.rel_gap_ss, 100.0 * l.rel_gap_lim);
        os << buf;
    }
    os << "\nConverges to the disk solution: " << (report.converges ? "yes" : "no")
       << "; separated from the polygon limit: " << (report.separated ? "yes" : "no") << ".\n";
    return os.str();
}

}  // namespace hhj
