#pragma once

#include "hhj/fespace.hpp"
#include "hhj/solutions.hpp"

#include <array>
#include <string>
#include <utility>
#include <vector>

namespace hhj {

struct ErrorQuadruple {
    double h1 = 0.0;     // |grad(w - w_h)| on the curved domain
    double h2h = 0.0;    // broken Hessian seminorm
    double sigma = 0.0;  // |sigma - sigma_h|
    double nn = 0.0;     // h^{1/2} |n^T (sigma - sigma_h) n| over all edges

    std::array<double, 4> as_array() const { return {h1, h2h, sigma, nn}; }
};

// Errors against an exact solution evaluated directly on the curved cells;
// h is the global mesh size weighting the edge term.
ErrorQuadruple compute_errors(const LagrangeSpace& W, const VectorX& w, const HHJSpace& V, const VectorX& sigma,
                              const ManufacturedSolution& exact, double h, int quad_degree, int edge_degree);

// Mesh-dependent norms of discrete fields.
double norm_2h(const LagrangeSpace& W, const VectorX& v, double h, int quad_degree, int edge_degree);
double norm_0h(const HHJSpace& V, const VectorX& phi, double h, int quad_degree, int edge_degree);
double l2_norm(const HHJSpace& V, const VectorX& phi, int quad_degree);

// log2(coarse / fine); NaN when either value is not positive.
double eoc(double coarse, double fine);
// Orders for consecutive pairs; entry 0 is NaN.
std::vector<double> eoc_series(const std::vector<double>& errors);

struct LevelResult {
    int level = 0;
    int n_cells = 0;
    double h = 0.0;
    Index dofs = 0;
    ErrorQuadruple errors;
};

struct EocTable {
    int m = 1;
    int r = 0;
    std::vector<LevelResult> levels;

    // Per-level orders of the four error columns.
    std::array<std::vector<double>, 4> orders() const;
    // Orders between the last two levels.
    std::array<double, 4> final_orders() const;
};

// Columns level, N_T, h, eH1, eH2h, eSigma, eNN, eocH1, eocH2h, eocSigma, eocNN,
// preceded by '#' comment lines holding the configuration.
std::string to_csv(const EocTable& table, const ConfigEcho& config);
// Per-level table plus the summary row N_T | m | r | four orders.
std::string to_markdown(const EocTable& table, const ConfigEcho& config, const std::string& title);
// Summary rows of several studies in one table.
std::string summary_markdown(const std::vector<EocTable>& tables, const std::string& title, const ConfigEcho& config);

}  // namespace hhj
