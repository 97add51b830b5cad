#include "hhj/analysis.hpp"

#include "hhj/assembly.hpp"
#include "hhj/error.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace hhj {

ErrorQuadruple compute_errors(const LagrangeSpace& W, const VectorX& w, const HHJSpace& V, const VectorX& sigma,
                              const ManufacturedSolution& exact, double h, int quad_degree, int edge_degree)
{
    HHJ_THROW_IF(w.size() != W.num_dofs() || sigma.size() != V.num_dofs(), ConfigError,
                 "coefficient vectors do not match the spaces");
    const auto& mesh = W.mesh();
    CellValues cv(&W, &V, triangle_rule(quad_degree), true);
    double e1 = 0.0, e2 = 0.0, es = 0.0, en = 0.0;
    for (int c = 0; c < mesh.num_cells(); ++c) {
        cv.reinit(c);
        for (int q = 0; q < cv.num_points(); ++q) {
            Vec2 g = Vec2::Zero();
            Mat2 H = Mat2::Zero(), S = Mat2::Zero();
            for (int k = 0; k < cv.num_lagrange(); ++k) {
                const double a = w[cv.lagrange_dofs()[k]];
                g += a * cv.grad(q, k);
                H += a * cv.hessian(q, k);
            }
            for (int i = 0; i < cv.num_hhj(); ++i) S += sigma[cv.hhj_dofs()[i]] * cv.tensor(q, i);
            Vec2 ge;
            Mat2 He;
            exact.eval(cv.x(q), nullptr, &ge, &He);
            const Mat2 Se = exact.material().C(He);
            e1 += cv.JxW(q) * (ge - g).squaredNorm();
            e2 += cv.JxW(q) * (He - H).squaredNorm();
            es += cv.JxW(q) * (Se - S).squaredNorm();
        }
    }
    EdgeValues ev(nullptr, &V, line_rule(edge_degree));
    for (int e = 0; e < mesh.num_edges(); ++e) {
        ev.reinit(mesh.edge_cells(e)[0], mesh.edge_local(e)[0]);
        for (int q = 0; q < ev.num_points(); ++q) {
            double nn = 0.0;
            for (int i = 0; i < ev.num_hhj(); ++i) nn += sigma[ev.hhj_dofs()[i]] * ev.nn(q, i);
            const Vec2& n = ev.normal(q);
            const double d = n.dot(exact.sigma(ev.x(q)) * n) - nn;
            en += ev.JxW(q) * d * d;
        }
    }
    ErrorQuadruple out;
    out.h1 = std::sqrt(e1);
    out.h2h = std::sqrt(e2);
    out.sigma = std::sqrt(es);
    out.nn = std::sqrt(h * en);
    return out;
}

double norm_2h(const LagrangeSpace& W, const VectorX& v, double h, int quad_degree, int edge_degree)
{
    const SparseMatrix G = gram_2h(W, h, quad_degree, edge_degree);
    return std::sqrt(std::max(0.0, v.dot(G * v)));
}

double norm_0h(const HHJSpace& V, const VectorX& phi, double h, int quad_degree, int edge_degree)
{
    const SparseMatrix G = gram_0h(V, h, quad_degree, edge_degree);
    return std::sqrt(std::max(0.0, phi.dot(G * phi)));
}

double l2_norm(const HHJSpace& V, const VectorX& phi, int quad_degree)
{
    CellValues cv(nullptr, &V, triangle_rule(quad_degree), false);
    double s = 0.0;
    for (int c = 0; c < V.mesh().num_cells(); ++c) {
        cv.reinit(c);
        for (int q = 0; q < cv.num_points(); ++q) {
            Mat2 t = Mat2::Zero();
            for (int i = 0; i < cv.num_hhj(); ++i) t += phi[cv.hhj_dofs()[i]] * cv.tensor(q, i);
            s += cv.JxW(q) * t.squaredNorm();
        }
    }
    return std::sqrt(s);
}

double eoc(double coarse, double fine)
{
    if (!(coarse > 0.0) || !(fine > 0.0)) return std::numeric_limits<double>::quiet_NaN();
    return std::log2(coarse / fine);
}

std::vector<double> eoc_series(const std::vector<double>& errors)
{
    std::vector<double> out(errors.size(), std::numeric_limits<double>::quiet_NaN());
    for (std::size_t i = 1; i < errors.size(); ++i) out[i] = eoc(errors[i - 1], errors[i]);
    return out;
}

std::array<std::vector<double>, 4> EocTable::orders() const
{
    std::array<std::vector<double>, 4> out;
    for (int k = 0; k < 4; ++k) {
        std::vector<double> e;
        for (const auto& l : levels) e.push_back(l.errors.as_array()[k]);
        out[k] = eoc_series(e);
    }
    return out;
}

std::array<double, 4> EocTable::final_orders() const
{
    std::array<double, 4> out;
    out.fill(std::numeric_limits<double>::quiet_NaN());
    if (levels.size() < 2) return out;
    const auto& a = levels[levels.size() - 2].errors;
    const auto& b = levels.back().errors;
    for (int k = 0; k < 4; ++k) out[k] = eoc(a.as_array()[k], b.as_array()[k]);
    return out;
}

namespace {

std::string fmt(const char* f, double v)
{
    if (std::isnan(v)) return "nan";
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

}  // namespace

std::string to_csv(const EocTable& table, const ConfigEcho& config)
{
    std::ostringstream os;
    for (const auto& [k, v] : config) os << "# " << k << ": " << v << "\n";
    os << "level,N_T,h,eH1,eH2h,eSigma,eNN,eocH1,eocH2h,eocSigma,eocNN\n";
    const auto ord = table.orders();
    for (std::size_t i = 0; i < table.levels.size(); ++i) {
        const auto& l = table.levels[i];
        os << l.level << "," << l.n_cells << "," << fmt("%.10e", l.h);
        for (double e : l.errors.as_array()) os << "," << fmt("%.10e", e);
        for (int k = 0; k < 4; ++k) os << "," << fmt("%.6f", ord[k][i]);
        os << "\n";
    }
    return os.str();
}

namespace {

const char* kHeader =
    "| N_T | m | r | \\|grad(w - w_h)\\| | \\|w - w_h\\|_H2h | \\|sigma - sigma_h\\| | h^1/2 \\|(sigma - sigma_h)^nn\\| |\n"
    "|---:|:-:|:-:|---:|---:|---:|---:|\n";

std::string summary_row(const EocTable& t)
{
    std::ostringstream os;
    const auto f = t.final_orders();
    os << "| " << (t.levels.empty() ? 0 : t.levels.back().n_cells) << " | " << t.m << " | " << t.r;
    for (double v : f) os << " | " << fmt("%.4f", v);
    os << " |\n";
    return os.str();
}

void echo(std::ostringstream& os, const ConfigEcho& config)
{
    os << "<!--\n";
    for (const auto& [k, v] : config) os << k << ": " << v << "\n";
    os << "-->\n\n";
}

}  // namespace

std::string to_markdown(const EocTable& table, const ConfigEcho& config, const std::string& title)
{
    std::ostringstream os;
    echo(os, config);
    os << "## " << title << "\n\n" << kHeader << summary_row(table) << "\n";
    os << "| level | N_T | h | eH1 | eH2h | eSigma | eNN | eocH1 | eocH2h | eocSigma | eocNN |\n"
       << "|---:|---:|---:|---:|---:|---:|---:|---:|---:|---:|---:|\n";
    const auto ord = table.orders();
    for (std::size_t i = 0; i < table.levels.size(); ++i) {
        const auto& l = table.levels[i];
        os << "| " << l.level << " | " << l.n_cells << " | " << fmt("%.4e", l.h);
        for (double e : l.errors.as_array()) os << " | " << fmt("%.4e", e);
        for (int k = 0; k < 4; ++k) os << " | " << (i == 0 ? std::string("-") : fmt("%.4f", ord[k][i]));
        os << " |\n";
    }
    return os.str();
}

std::string summary_markdown(const std::vector<EocTable>& tables, const std::string& title, const ConfigEcho& config)
{
    std::ostringstream os;
    echo(os, config);
    os << "## " << title << "\n\n" << kHeader;
    for (const auto& t : tables) os << summary_row(t);
    return os.str();
}

}  // namespace hhj
