// plate_hhj: convergence studies, the polygon paradox and the acceptance suite.
//
// Exit codes: 0 all checks passed, 1 a tolerance failed, 2 bad input, 3 runtime error.

#include "hhj/acceptance.hpp"
#include "hhj/error.hpp"
#include "hhj/study.hpp"
#include "hhj/version.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

constexpr int kOk = 0, kToleranceFailed = 1, kBadInput = 2, kRuntimeError = 3;

struct StudyArgs {
    std::string domain = "disk";
    std::string bc = "clamped";
    std::string config_file;
    std::string solution;
    int m = 2, r = 1, levels = 4, n0 = 0;
    double nu = 0.3, D = 1.0;
    std::string out;
    bool deterministic = false;
    bool export_matrices = false;
    bool no_transport = false;
    std::vector<double> expect;
    double tol = 0.2;
    double residual_tol = 1e-8;
};

std::string read_file(const std::string& path)
{
    std::ifstream f(path);
    if (!f) throw hhj::ConfigError("cannot read " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void print_level(const hhj::LevelResult& l, double residual)
{
    const auto e = l.errors;
    std::printf("level %d  N_T %7d  dofs %8lld  h %.4e  H1 %.3e  H2h %.3e  sigma %.3e  nn %.3e  res %.1e\n", l.level,
                l.n_cells, static_cast<long long>(l.dofs), l.h, e.h1, e.h2h, e.sigma, e.nn, residual);
    std::fflush(stdout);
}

int cmd_study(StudyArgs a, CLI::App& sub)
{
    hhj::StudyConfig c;
    c.domain = a.domain;
    c.bc = hhj::boundary_condition_from_string(a.bc);
    c.m = a.m;
    c.r = a.r;
    c.levels = a.levels;
    c.n_boundary = a.n0;
    c.solution = a.solution;
    c.transport = !a.no_transport;
    c.deterministic = a.deterministic;
    c.out_dir = a.out;
    c.export_matrices = a.export_matrices;
    c.material.nu = a.nu;
    c.material.D = a.D;
    if (!a.config_file.empty()) {
        // Domain config {name, nu, D, bc, [segments]}; explicit flags win.
        const std::string text = read_file(a.config_file);
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(text);
        } catch (const nlohmann::json::exception& e) {
            throw hhj::ConfigError(a.config_file + ": " + e.what());
        }
        if (j.contains("nu") && sub.count("--nu") == 0) c.material.nu = j.at("nu").get<double>();
        if (j.contains("D") && sub.count("--D") == 0) c.material.D = j.at("D").get<double>();
        if (j.contains("bc") && sub.count("--bc") == 0) c.bc = hhj::boundary_condition_from_string(j.at("bc"));
        if (j.contains("segments")) {
            c.custom_domain = hhj::domain_from_json(text);
            if (c.solution.empty()) c.solution = "clamped_three_leaf";
        } else {
            c.domain = j.value("name", c.domain);
        }
    }

    const bool demo = c.m < c.r + 1;
    const auto report = demo ? hhj::run_suboptimality_demo(c, print_level) : hhj::run_convergence_study(c, print_level);
    const auto orders = report.table.final_orders();
    std::printf("orders  H1 %.3f  H2h %.3f  sigma %.3f  nn %.3f\n", orders[0], orders[1], orders[2], orders[3]);
    if (demo) std::printf("expected sigma order for m < r + 1: %.2f\n", report.expected_sigma_order);
    for (const auto& f : report.files) std::printf("wrote %s\n", f.c_str());

    bool ok = report.solver_converged;
    for (double res : report.residuals) ok = ok && res <= a.residual_tol;
    if (!ok) std::printf("FAIL solver residual above %.1e\n", a.residual_tol);
    if (!a.expect.empty()) {
        if (a.expect.size() != 4) throw hhj::ConfigError("--expect takes four orders: H1 H2h sigma nn");
        const char* names[] = {"H1", "H2h", "sigma", "nn"};
        for (int k = 0; k < 4; ++k) {
            const bool pass = std::abs(orders[k] - a.expect[k]) <= a.tol;
            if (!pass) std::printf("FAIL %s order %.3f, expected %.3f +- %.2f\n", names[k], orders[k], a.expect[k], a.tol);
            ok = ok && pass;
        }
    }
    return ok ? kOk : kToleranceFailed;
}

int cmd_babuska(const hhj::BabuskaConfig& c)
{
    const auto rep = hhj::run_babuska(c);
    std::printf("w_ss(0) %.8f  w_lim(0) %.8f\n", rep.reference.w_ss0, rep.reference.w_lim0);
    for (const auto& l : rep.levels)
        std::printf("level %d  sides %4d  N_T %7d  w_h(0) %.8f  gap_ss %6.2f%%  gap_lim %6.2f%%\n", l.level,
                    l.polygon_sides, l.n_cells, l.w_center, 100 * l.rel_gap_ss, 100 * l.rel_gap_lim);
    std::printf("converges to the disk solution: %s\nseparated from the polygon limit: %s\n",
                rep.converges ? "yes" : "no", rep.separated ? "yes" : "no");
    for (const auto& f : rep.files) std::printf("wrote %s\n", f.c_str());
    return rep.passed() ? kOk : kToleranceFailed;
}

int cmd_selftest(const hhj::AcceptanceOptions& o)
{
    int failed = 0;
    const auto results = hhj::run_acceptance(o, [](const hhj::CriterionResult& r) {
        std::printf("%s\n", hhj::format_result(r).c_str());
        std::fflush(stdout);
    });
    for (const auto& r : results) failed += r.passed ? 0 : 1;
    std::printf("%zu criteria, %d failed\n", results.size(), failed);
    return failed == 0 && !results.empty() ? kOk : kToleranceFailed;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"HHJ mixed finite elements for Kirchhoff plates on curved domains"};
    app.set_version_flag("--version", std::string(hhj::library_version()));
    app.require_subcommand(1);

    StudyArgs sa;
    auto* study = app.add_subcommand("study", "convergence study on a sequence of uniformly refined meshes");
    study->add_option("--domain", sa.domain, "built-in domain")->check(CLI::IsMember({"disk", "three_leaf"}));
    study->add_option("--bc", sa.bc, "boundary condition")->check(CLI::IsMember({"clamped", "simply_supported"}));
    study->add_option("--config", sa.config_file, "domain config JSON {name, nu, D, bc, [segments]}")
        ->check(CLI::ExistingFile);
    study->add_option("--m", sa.m, "geometry degree")->check(CLI::PositiveNumber);
    study->add_option("--r", sa.r, "moment order; displacement degree is r + 1")->check(CLI::Range(0, 4));
    study->add_option("--levels", sa.levels, "number of meshes")->check(CLI::Range(2, 12));
    study->add_option("--nu", sa.nu, "Poisson ratio");
    study->add_option("--D", sa.D, "bending stiffness");
    study->add_option("--n0", sa.n0, "boundary vertices of the coarse mesh, 0 for the default")
        ->check(CLI::NonNegativeNumber);
    study->add_option("--solution", sa.solution, "manufactured solution")
        ->check(CLI::IsMember({"clamped_disk", "ss_disk", "clamped_three_leaf", "ss_three_leaf", "uniform_load"}));
    study->add_option("--out", sa.out, "output directory");
    study->add_flag("--deterministic", sa.deterministic, "omit timings from output files");
    study->add_flag("--export-matrices", sa.export_matrices, "write A and B of the finest level (Matrix Market)");
    study->add_flag("--no-transport", sa.no_transport, "use the exact data directly on the discrete domain");
    study->add_option("--expect", sa.expect, "expected final orders H1 H2h sigma nn")->expected(4);
    study->add_option("--tol", sa.tol, "tolerance on the expected orders");
    study->add_option("--residual-tol", sa.residual_tol, "largest accepted backward error");

    hhj::BabuskaConfig bc;
    auto* bab = app.add_subcommand("babuska", "simply supported disk approximated by inscribed polygons");
    bab->add_option("--levels", bc.levels, "number of meshes")->check(CLI::Range(3, 12));
    bab->add_option("--nu", bc.nu, "Poisson ratio");
    bab->add_option("--q", bc.q, "uniform load");
    bab->add_option("--D", bc.D, "bending stiffness");
    bab->add_option("--n0", bc.n_boundary, "sides of the coarse polygon, 0 for the default")
        ->check(CLI::NonNegativeNumber);
    bab->add_option("--out", bc.out_dir, "output directory");
    bab->add_flag("--deterministic", bc.deterministic, "omit timings from output files");

    hhj::AcceptanceOptions ao;
    auto* self = app.add_subcommand("selftest", "run the acceptance criteria");
    self->add_option("--only", ao.only, "criterion ids to run")
        ->check(CLI::Range(1, hhj::acceptance_criterion_count()));
    self->add_option("--seed", ao.seed, "seed for the randomized criteria");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kBadInput;
    }

    try {
        if (*study) return cmd_study(sa, *study);
        if (*bab) return cmd_babuska(bc);
        if (*self) return cmd_selftest(ao);
    } catch (const hhj::ConfigError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kBadInput;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kRuntimeError;
    }
    return kBadInput;
}
