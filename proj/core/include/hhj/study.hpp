#pragma once

#include "hhj/analysis.hpp"
#include "hhj/geometry.hpp"
#include "hhj/linalg.hpp"
#include "hhj/material.hpp"
#include "hhj/quadrature.hpp"
#include "hhj/solutions.hpp"

#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace hhj {

struct StudyConfig {
    std::string domain = "disk";  // built-in domain name, ignored when custom_domain is set
    std::shared_ptr<const Domain> custom_domain;
    BoundaryCondition bc = BoundaryCondition::clamped;
    int m = 2;
    int r = 1;
    int levels = 4;  // number of meshes, the coarse one included
    Material material;
    int n_boundary = 0;     // coarse boundary vertices, 0 for the default
    std::string solution;   // manufactured case, empty for the default of (domain, bc)
    // Carry the exact data onto the discrete domain through the exact cell maps.
    bool transport = true;
    QuadratureOptions quadrature;
    SolverOptions solver;
    // Deterministic outputs carry no timings.
    bool deterministic = false;
    std::string out_dir;  // empty: no files
    std::string prefix;   // file name stem, empty for <domain>_<bc>_m<m>_r<r>
    bool export_matrices = false;
};

// Throws ConfigError for out-of-range settings.
void validate(const StudyConfig& config);
std::string resolved_solution(const StudyConfig& config);
ConfigEcho config_echo(const StudyConfig& config);

struct LevelTiming {
    double mesh = 0.0, assemble = 0.0, solve = 0.0, errors = 0.0;
};

struct StudyReport {
    EocTable table;
    std::vector<double> residuals;  // largest backward error per level
    std::vector<LevelTiming> timings;
    bool solver_converged = true;
    // Set by the suboptimality demo: the expected sigma order m - 1/2.
    double expected_sigma_order = -1.0;
    std::vector<std::string> files;
};

using LevelCallback = std::function<void(const LevelResult&, double residual)>;

// Mesh -> curved maps -> spaces -> assembly -> solve -> errors on each level.
// Errors carry the level as context. Writes CSV, Markdown, the coarse mesh,
// the finest fields and optionally the finest blocks A and B when out_dir is set.
StudyReport run_convergence_study(const StudyConfig& config, const LevelCallback& on_level = {});

// Same pipeline for m < r + 1; the Markdown marks the expected sigma order.
StudyReport run_suboptimality_demo(const StudyConfig& config, const LevelCallback& on_level = {});

struct BabuskaConfig {
    int levels = 6;
    double nu = 0.3;
    double q = 1.0;
    double D = 1.0;
    int n_boundary = 0;  // polygon sides of the coarse mesh, 0 for the default
    bool deterministic = false;
    std::string out_dir;
};

struct BabuskaLevel {
    int level = 0;
    int n_cells = 0;
    int polygon_sides = 0;
    double h = 0.0;
    double w_center = 0.0;
    double rel_gap_ss = 0.0;   // |w_h(0) - w_ss(0)| / w_ss(0)
    double rel_gap_lim = 0.0;  // |w_h(0) - w_lim(0)| / w_lim(0)
};

struct BabuskaReport {
    ParadoxReference reference;
    std::vector<BabuskaLevel> levels;
    bool converges = false;  // finest level within 2% of w_ss(0)
    bool separated = false;  // |w_h(0) - w_lim(0)| >= 0.25 |w_ss(0) - w_lim(0)| on the last two levels
    std::vector<std::string> files;

    bool passed() const { return converges && separated; }
};

// Lowest order method (r = 0) on the inscribed polygons of the uniformly
// loaded simply supported disk.
BabuskaReport run_babuska(const BabuskaConfig& config);
ConfigEcho config_echo(const BabuskaConfig& config);
std::string babuska_csv(const BabuskaReport& report, const ConfigEcho& config);
std::string babuska_markdown(const BabuskaReport& report, const ConfigEcho& config);

}  // namespace hhj
