#include "hhj/curved.hpp"

#include "hhj/element.hpp"
#include "hhj/error.hpp"
#include "hhj/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>

namespace hhj {

namespace {

const MonomialBasis& monomials(int degree)
{
    static std::mutex mutex;
    static std::map<int, std::unique_ptr<MonomialBasis>> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto& slot = cache[degree];
    if (!slot) slot = std::make_unique<MonomialBasis>(degree);
    return *slot;
}

const LagrangeElement& lagrange(int degree)
{
    static std::mutex mutex;
    static std::map<int, std::unique_ptr<LagrangeElement>> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto& slot = cache[degree];
    if (!slot) slot = std::make_unique<LagrangeElement>(degree);
    return *slot;
}
}  // namespace

PolyMap::PolyMap(int degree, Eigen::Matrix<double, 2, Eigen::Dynamic> coefficients)
    : degree_(degree), coeffs_(std::move(coefficients))
{
    HHJ_THROW_IF(coeffs_.cols() != poly_dim(degree), NumericError, "map coefficient count mismatch");
}

PolyMap PolyMap::affine(const Vec2& a, const Vec2& b, const Vec2& c)
{
    Eigen::Matrix<double, 2, Eigen::Dynamic> k(2, 3);
    k.col(0) = a;
    k.col(1) = b - a;
    k.col(2) = c - a;
    return PolyMap(1, std::move(k));
}

MapJet PolyMap::jet(const Vec2& xhat) const
{
    const MonomialBasis& mb = monomials(degree_);
    const int n = mb.size();
    double v[128];
    Vec2 g[128];
    Mat2 h[128];
    mb.eval(xhat, v, g, h);
    MapJet out;
    out.x.setZero();
    out.J.setZero();
    for (int j = 0; j < n; ++j) {
        const double cx = coeffs_(0, j), cy = coeffs_(1, j);
        out.x += Vec2(cx, cy) * v[j];
        out.J.row(0) += cx * g[j].transpose();
        out.J.row(1) += cy * g[j].transpose();
        if (j >= 3) {
            out.hessian[0] += cx * h[j];
            out.hessian[1] += cy * h[j];
        }
    }
    return out;
}

BlendedBoundaryMap::BlendedBoundaryMap(const Triangulation& mesh, int cell) : domain_(&mesh.domain())
{
    edge_ = mesh.boundary_local_edge(cell);
    HHJ_THROW_IF(edge_ < 0, GeometryError, "blended map requested for a cell without boundary edge");
    HHJ_THROW_IF(mesh.boundary_edge_count(cell) > 1, MeshError,
                 "cell " + std::to_string(cell) + " has more than one boundary edge");
    const auto& t = mesh.cells()[cell];
    a_ = reference::edge_start(edge_);
    b_ = reference::edge_end(edge_);
    for (int i = 0; i < 3; ++i) v_[i] = mesh.vertices()[t[i]];
    const int e = mesh.cell_edges(cell)[edge_];
    const auto& info = mesh.boundary_info(e);
    segment_ = info.segment;
    if (mesh.edges()[e][0] == t[a_]) {
        ta_ = info.t0;
        tb_ = info.t1;
    } else {
        ta_ = info.t1;
        tb_ = info.t0;
    }
}

MapJet BlendedBoundaryMap::jet(const Vec2& xhat) const
{
    MapJet out;
    out.x = v_[0] + (v_[1] - v_[0]) * xhat.x() + (v_[2] - v_[0]) * xhat.y();
    out.J.col(0) = v_[1] - v_[0];
    out.J.col(1) = v_[2] - v_[0];

    const auto lam = reference::barycentric(xhat);
    const auto& gl = reference::barycentric_gradients();
    const double la = lam[a_], lb = lam[b_];
    if (std::abs(la * lb) < 1e-300) return out;

    // d(s) = chart - chord on the boundary edge, e(s) = d(s) / (s (1 - s)).
    const double s = lb, g = s * (1.0 - s), g1 = 1.0 - 2.0 * s;
    const double dt = tb_ - ta_, t = ta_ + s * dt;
    const Vec2 va = v_[a_], vb = v_[b_];
    const Vec2 d0 = domain_->eval(segment_, t) - (va + s * (vb - va));
    const Vec2 d1 = dt * domain_->derivative(segment_, t, 1) - (vb - va);
    const Vec2 d2 = dt * dt * domain_->derivative(segment_, t, 2);
    const Vec2 e0 = d0 / g;
    const Vec2 e1 = (d1 - g1 * e0) / g;
    const Vec2 e2 = (d2 - 2.0 * g1 * e1 + 2.0 * e0) / g;

    // D = la lb e(lb)
    const Vec2 gp = lb * gl[a_] + la * gl[b_];  // grad(la lb)
    const Mat2 hp = gl[a_] * gl[b_].transpose() + gl[b_] * gl[a_].transpose();
    const Vec2& gb = gl[b_];
    out.x += la * lb * e0;
    for (int k = 0; k < 2; ++k) {
        out.J.row(k) += (gp * e0[k] + la * lb * e1[k] * gb).transpose();
        out.hessian[k] += hp * e0[k] + e1[k] * (gp * gb.transpose() + gb * gp.transpose()) +
                          la * lb * e2[k] * gb * gb.transpose();
    }
    return out;
}

template <class MapLike>
PolyMap nodal_interpolant(const MapLike& map, int degree)
{
    const MonomialBasis& mb = monomials(degree);
    const int n = mb.size();
    MatrixX V(n, n);
    Eigen::Matrix<double, Eigen::Dynamic, 2> rhs(n, 2);
    std::vector<double> vals(n);
    int row = 0;
    for (int j = 0; j <= degree; ++j) {
        for (int i = 0; i + j <= degree; ++i) {
            const Vec2 node(static_cast<double>(i) / degree, static_cast<double>(j) / degree);
            mb.eval(node, vals.data());
            for (int c = 0; c < n; ++c) V(row, c) = vals[c];
            rhs.row(row) = map.jet(node).x.transpose();
            ++row;
        }
    }
    Eigen::Matrix<double, Eigen::Dynamic, 2> coef = V.fullPivLu().solve(rhs);
    return PolyMap(degree, coef.transpose());
}

template PolyMap nodal_interpolant<BlendedBoundaryMap>(const BlendedBoundaryMap&, int);
template PolyMap nodal_interpolant<PolyMap>(const PolyMap&, int);

PolyMap moment_interpolant(const PolyMap& map, int degree)
{
    const LagrangeElement& el = lagrange(degree);
    const auto funcs = el.functionals(map.degree() + degree + 2);
    Eigen::Matrix<double, 2, Eigen::Dynamic> coef = Eigen::Matrix<double, 2, Eigen::Dynamic>::Zero(2, el.num_dofs());
    for (int i = 0; i < el.num_dofs(); ++i) {
        Vec2 dof = Vec2::Zero();
        for (std::size_t q = 0; q < funcs[i].points.size(); ++q) dof += funcs[i].weights[q] * map(funcs[i].points[q]);
        coef += dof * el.coefficients().row(i);
    }
    return PolyMap(degree, std::move(coef));
}

namespace {

// Rewrites a boundary cell map as F + lambda_a lambda_b q with q of degree m - 2,
// so it coincides with the affine map F on the two interior edges up to
// rounding in the small correction only.
PolyMap factor_correction(const PolyMap& map, const PolyMap& affine, int a, int b)
{
    const int m = map.degree();
    if (m < 2) return affine;
    const MonomialBasis& qb = monomials(m - 2);
    const TriangleRule rule = triangle_rule(2 * m + 2);
    const int np = static_cast<int>(rule.points.size()), n = qb.size();
    Eigen::MatrixXd V(np, n), rhs(np, 2);
    double v[128];
    for (int p = 0; p < np; ++p) {
        const Vec2& x = rule.points[p];
        const auto lam = reference::barycentric(x);
        const double bubble = lam[a] * lam[b];
        qb.eval(x, v);
        for (int j = 0; j < n; ++j) V(p, j) = v[j];
        rhs.row(p) = ((map(x) - affine(x)) / bubble).transpose();
    }
    const Eigen::MatrixXd q = V.colPivHouseholderQr().solve(rhs);

    // lambda_0 = 1 - x - y, lambda_1 = x, lambda_2 = y as {constant, x, y} coefficients.
    const std::array<std::array<double, 3>, 3> lin = {{{1.0, -1.0, -1.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}}};
    const std::array<std::array<int, 2>, 3> lexp = {{{0, 0}, {1, 0}, {0, 1}}};
    const MonomialBasis& mb = monomials(m);
    std::map<std::array<int, 2>, int> index;
    for (int j = 0; j < mb.size(); ++j) index[mb.exponents()[j]] = j;
    Eigen::Matrix<double, 2, Eigen::Dynamic> coef = Eigen::Matrix<double, 2, Eigen::Dynamic>::Zero(2, mb.size());
    coef.leftCols(3) = affine.coefficients();
    for (int j = 0; j < n; ++j)
        for (int s = 0; s < 3; ++s)
            for (int t = 0; t < 3; ++t) {
                const double w = lin[a][s] * lin[b][t];
                if (w == 0.0) continue;
                const auto& e = qb.exponents()[j];
                const int k = index.at({e[0] + lexp[s][0] + lexp[t][0], e[1] + lexp[s][1] + lexp[t][1]});
                coef.col(k) += w * q.row(j).transpose();
            }
    return PolyMap(m, std::move(coef));
}

}  // namespace

PolyMap lenoir_map(const Triangulation& mesh, int cell, int degree)
{
    HHJ_THROW_IF(degree < 1, ConfigError, "map degree must be at least 1");
    const BlendedBoundaryMap blend(mesh, cell);
    return nodal_interpolant(blend, degree);
}

CurvedMapSet::CurvedMapSet(std::shared_ptr<const Triangulation> mesh, int m) : mesh_(std::move(mesh)), m_(m)
{
    HHJ_THROW_IF(!mesh_, ConfigError, "curved maps without mesh");
    HHJ_THROW_IF(m < 1 || m > 8, ConfigError, "geometry degree must lie in [1, 8]");
    const int nc = mesh_->num_cells();
    maps_.resize(nc);
    curved_.assign(nc, 0);
    const TriangleRule rule = triangle_rule(2 * m + 2);
    exact_.resize(nc);
    for (int c = 0; c < nc; ++c) {
        maps_[c] = affine_map(c);
        if (mesh_->boundary_local_edge(c) >= 0) exact_[c].emplace(*mesh_, c);
        if (m == 1 || mesh_->boundary_local_edge(c) < 0) continue;
        HHJ_THROW_IF(mesh_->boundary_edge_count(c) > 1, MeshError,
                     "cell " + std::to_string(c) + " has more than one boundary edge");
        const int e = mesh_->boundary_local_edge(c);
        maps_[c] = factor_correction(moment_interpolant(lenoir_map(*mesh_, c, m + 1), m), affine_map(c),
                                     reference::edge_start(e), reference::edge_end(e));
        curved_[c] = 1;
        const double det0 = affine_map(c).jet(Vec2(0, 0)).det();
        auto check = [&](const Vec2& p) {
            const double d = maps_[c].jet(p).det();
            HHJ_THROW_IF(!(d > 0.0) || d < 1e-6 * det0, GeometryError,
                         "curved map of cell " + std::to_string(c) + " is inverted or degenerate");
        };
        for (const auto& p : rule.points) check(p);
        for (const auto& p : reference::vertices()) check(p);
    }
}

CurvedMapSet::CurvedMapSet(std::shared_ptr<const Triangulation> mesh, int m, std::vector<PolyMap> maps)
    : mesh_(std::move(mesh)), m_(m), maps_(std::move(maps))
{
    HHJ_THROW_IF(!mesh_, ConfigError, "curved maps without mesh");
    const int nc = mesh_->num_cells();
    HHJ_THROW_IF(static_cast<int>(maps_.size()) != nc, ConfigError, "one map per cell required");
    curved_.assign(nc, 0);
    exact_.resize(nc);
    const TriangleRule rule = triangle_rule(2 * m + 2);
    for (int c = 0; c < nc; ++c) {
        if (mesh_->boundary_local_edge(c) >= 0 && mesh_->boundary_edge_count(c) == 1) exact_[c].emplace(*mesh_, c);
        const PolyMap aff = affine_map(c);
        for (const auto& p : rule.points) {
            const MapJet a = aff.jet(p), b = maps_[c].jet(p);
            HHJ_THROW_IF(!(b.det() > 0.0), GeometryError, "map of cell " + std::to_string(c) + " is inverted");
            if ((a.x - b.x).norm() > 0.0 || (a.J - b.J).norm() > 0.0) curved_[c] = 1;
        }
    }
}

MapJet CurvedMapSet::exact_jet(int cell, const Vec2& xhat) const
{
    if (exact_[cell]) return exact_[cell]->jet(xhat);
    return affine_map(cell).jet(xhat);
}

PolyMap CurvedMapSet::affine_map(int cell) const
{
    const auto& t = mesh_->cells()[cell];
    const auto& v = mesh_->vertices();
    return PolyMap::affine(v[t[0]], v[t[1]], v[t[2]]);
}

double CurvedMapSet::min_jacobian_ratio() const
{
    const TriangleRule rule = triangle_rule(2 * m_ + 2);
    double r = 1e300;
    for (int c = 0; c < mesh_->num_cells(); ++c) {
        if (!curved_[c]) continue;
        const double d0 = affine_map(c).jet(Vec2(0, 0)).det();
        for (const auto& p : rule.points) r = std::min(r, maps_[c].jet(p).det() / d0);
    }
    return r == 1e300 ? 1.0 : r;
}

double CurvedMapSet::area(int quad_degree) const
{
    const TriangleRule rule = triangle_rule(quad_degree);
    double a = 0.0;
    for (int c = 0; c < mesh_->num_cells(); ++c)
        for (std::size_t q = 0; q < rule.points.size(); ++q) a += rule.weights[q] * maps_[c].jet(rule.points[q]).det();
    return a;
}

std::array<double, 3> map_deviation(const CurvedMapSet& maps, int quad_degree)
{
    const Triangulation& mesh = maps.mesh();
    const TriangleRule rule = triangle_rule(quad_degree);
    std::array<double, 3> dev = {0.0, 0.0, 0.0};
    for (int c = 0; c < mesh.num_cells(); ++c) {
        if (mesh.boundary_local_edge(c) < 0) continue;
        const BlendedBoundaryMap exact(mesh, c);
        const Mat2 Ainv = maps.affine_map(c).jet(Vec2(0, 0)).J.inverse();
        for (const auto& p : rule.points) {
            const MapJet a = maps.jet(c, p), b = exact.jet(p);
            dev[0] = std::max(dev[0], (a.x - b.x).norm());
            dev[1] = std::max(dev[1], ((a.J - b.J) * Ainv).norm());
            double h2 = 0.0;
            for (int k = 0; k < 2; ++k) h2 += (Ainv.transpose() * (a.hessian[k] - b.hessian[k]) * Ainv).squaredNorm();
            dev[2] = std::max(dev[2], std::sqrt(h2));
        }
    }
    return dev;
}

}  // namespace hhj
