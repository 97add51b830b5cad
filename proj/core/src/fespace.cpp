#include "hhj/fespace.hpp"

#include "hhj/error.hpp"
#include "hhj/version.hpp"

#include <nlohmann/json.hpp>

#include <cmath>

namespace hhj {

Mat2 piola_push(const Mat2& phi_hat, const Mat2& J)
{
    const double det = J.determinant();
    HHJ_THROW_IF(!(std::abs(det) > 0.0), NumericError, "singular Jacobian in Piola transform");
    return J * phi_hat * J.transpose() / (det * det);
}

Mat2 piola_pull(const Mat2& phi, const Mat2& J)
{
    const double det = J.determinant();
    HHJ_THROW_IF(!(std::abs(det) > 0.0), NumericError, "singular Jacobian in Piola transform");
    const Mat2 Jinv = J.inverse();
    return det * det * Jinv * phi * Jinv.transpose();
}

double nn_trace_transform(double phi_hat_nn, const Mat2& J, const Vec2& t_hat)
{
    return phi_hat_nn / (J * t_hat).squaredNorm();
}

namespace {

double flip_sign(bool agrees, int k) { return (agrees || k % 2 == 0) ? 1.0 : -1.0; }

}  // namespace

LagrangeSpace::LagrangeSpace(std::shared_ptr<const CurvedMapSet> maps, int degree)
    : maps_(std::move(maps)), element_(degree)
{
    HHJ_THROW_IF(!maps_, ConfigError, "Lagrange space needs curved maps");
    const auto& mesh = maps_->mesh();
    ndofs_ = static_cast<Index>(mesh.num_vertices()) + static_cast<Index>(mesh.num_edges()) * element_.dofs_per_edge() +
             static_cast<Index>(mesh.num_cells()) * element_.dofs_interior();
}

void LagrangeSpace::cell_dofs(int cell, Index* dofs, double* signs) const
{
    const auto& mesh = maps_->mesh();
    const auto& verts = mesh.cells()[cell];
    const auto& edges = mesh.cell_edges(cell);
    const int pe = element_.dofs_per_edge(), pi = element_.dofs_interior();
    const Index nv = mesh.num_vertices();
    for (int v = 0; v < 3; ++v) {
        dofs[v] = verts[v];
        signs[v] = 1.0;
    }
    for (int e = 0; e < 3; ++e) {
        const bool agrees = mesh.edge_agrees(cell, e);
        for (int k = 0; k < pe; ++k) {
            const int l = element_.edge_dof(e, k);
            dofs[l] = nv + static_cast<Index>(edges[e]) * pe + k;
            signs[l] = flip_sign(agrees, k);
        }
    }
    const Index base = nv + static_cast<Index>(mesh.num_edges()) * pe + static_cast<Index>(cell) * pi;
    for (int k = 0; k < pi; ++k) {
        dofs[element_.interior_dof(k)] = base + k;
        signs[element_.interior_dof(k)] = 1.0;
    }
}

std::vector<char> LagrangeSpace::boundary_mask() const
{
    const auto& mesh = maps_->mesh();
    std::vector<char> mask(ndofs_, 0);
    const int pe = element_.dofs_per_edge();
    for (int v = 0; v < mesh.num_vertices(); ++v)
        if (mesh.is_boundary_vertex(v)) mask[v] = 1;
    for (int e = 0; e < mesh.num_edges(); ++e)
        if (mesh.is_boundary_edge(e))
            for (int k = 0; k < pe; ++k) mask[mesh.num_vertices() + static_cast<Index>(e) * pe + k] = 1;
    return mask;
}

HHJSpace::HHJSpace(std::shared_ptr<const CurvedMapSet> maps, int order) : maps_(std::move(maps)), element_(order)
{
    HHJ_THROW_IF(!maps_, ConfigError, "HHJ space needs curved maps");
    const auto& mesh = maps_->mesh();
    ndofs_ = static_cast<Index>(mesh.num_edges()) * element_.dofs_per_edge() +
             static_cast<Index>(mesh.num_cells()) * element_.dofs_interior();
}

void HHJSpace::cell_dofs(int cell, Index* dofs, double* signs) const
{
    const auto& mesh = maps_->mesh();
    const auto& edges = mesh.cell_edges(cell);
    const int pe = element_.dofs_per_edge(), pi = element_.dofs_interior();
    for (int e = 0; e < 3; ++e) {
        const bool agrees = mesh.edge_agrees(cell, e);
        for (int k = 0; k < pe; ++k) {
            const int l = element_.edge_dof(e, k);
            dofs[l] = static_cast<Index>(edges[e]) * pe + k;
            signs[l] = flip_sign(agrees, k);
        }
    }
    const Index base = static_cast<Index>(mesh.num_edges()) * pe + static_cast<Index>(cell) * pi;
    for (int k = 0; k < pi; ++k) {
        dofs[element_.interior_dof(k)] = base + k;
        signs[element_.interior_dof(k)] = 1.0;
    }
}

std::vector<char> HHJSpace::simply_supported_mask() const
{
    const auto& mesh = maps_->mesh();
    std::vector<char> mask(ndofs_, 0);
    for (int e = 0; e < mesh.num_edges(); ++e) {
        if (!mesh.is_boundary_edge(e) || mesh.boundary_info(e).bc != BoundaryCondition::simply_supported) continue;
        for (int k = 0; k <= order(); ++k) mask[edge_dof(e, k)] = 1;
    }
    return mask;
}

std::string field_to_json(const FieldCoefficients& field, const ConfigEcho& config)
{
    nlohmann::json j;
    j["format"] = "plate-hhj-field-v1";
    j["library_version"] = library_version();
    if (!config.empty()) {
        auto& c = j["config"] = nlohmann::json::array();
        for (const auto& [k, v] : config) c.push_back({k, v});
    }
    j["space"] = {{"kind", field.kind}, {"degree", field.degree}};
    j["coefficients"] = std::vector<double>(field.values.data(), field.values.data() + field.values.size());
    return j.dump(1);
}

FieldCoefficients field_from_json(const std::string& text)
{
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("invalid field JSON: ") + e.what());
    }
    HHJ_THROW_IF(j.value("format", "") != "plate-hhj-field-v1", ConfigError, "unsupported field format");
    FieldCoefficients f;
    try {
        f.kind = j.at("space").at("kind").get<std::string>();
        f.degree = j.at("space").at("degree").get<int>();
        const auto v = j.at("coefficients").get<std::vector<double>>();
        f.values = Eigen::Map<const VectorX>(v.data(), static_cast<Index>(v.size()));
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("invalid field JSON: ") + e.what());
    }
    HHJ_THROW_IF(f.kind != "lagrange" && f.kind != "hhj", ConfigError, "unknown field kind " + f.kind);
    return f;
}

namespace {

void physical_lagrange(const MapJet& jet, const Mat2& Jinv, const Vec2& g_hat, const Mat2* h_hat, Vec2& g, Mat2* h)
{
    g = Jinv.transpose() * g_hat;
    if (h) *h = Jinv.transpose() * (*h_hat - g.x() * jet.hessian[0] - g.y() * jet.hessian[1]) * Jinv;
}

}  // namespace

CellValues::CellValues(const LagrangeSpace* lagrange, const HHJSpace* hhj, const TriangleRule& rule, bool hessians)
    : lagrange_(lagrange), hhj_(hhj), want_hessians_(hessians), points_(rule.points), weights_(rule.weights)
{
    const int nq = num_points();
    if (lagrange_) {
        nl_ = lagrange_->dofs_per_cell();
        ref_lval_.resize(nq * nl_);
        ref_lgrad_.resize(nq * nl_);
        ref_lhess_.resize(nq * nl_);
        for (int q = 0; q < nq; ++q)
            lagrange_->element().eval(points_[q], &ref_lval_[q * nl_], &ref_lgrad_[q * nl_], &ref_lhess_[q * nl_]);
        ldofs_.resize(nl_);
        lsign_.resize(nl_);
        lval_.resize(nq * nl_);
        lgrad_.resize(nq * nl_);
        if (want_hessians_) lhess_.resize(nq * nl_);
    }
    if (hhj_) {
        nh_ = hhj_->dofs_per_cell();
        ref_hval_.resize(nq * nh_);
        for (int q = 0; q < nq; ++q) hhj_->element().eval(points_[q], &ref_hval_[q * nh_]);
        hdofs_.resize(nh_);
        hsign_.resize(nh_);
        hval_.resize(nq * nh_);
    }
    jets_.resize(nq);
    jxw_.resize(nq);
}

void CellValues::reinit(int cell)
{
    const CurvedMapSet& maps = lagrange_ ? lagrange_->maps() : hhj_->maps();
    cell_ = cell;
    if (lagrange_) lagrange_->cell_dofs(cell, ldofs_.data(), lsign_.data());
    if (hhj_) hhj_->cell_dofs(cell, hdofs_.data(), hsign_.data());
    const PolyMap& map = maps.cell_map(cell);
    for (int q = 0; q < num_points(); ++q) {
        const MapJet& jet = jets_[q] = map.jet(points_[q]);
        const double det = jet.det();
        HHJ_THROW_IF(!(det > 0.0), GeometryError, "non-positive Jacobian in cell " + std::to_string(cell));
        jxw_[q] = weights_[q] * det;
        const Mat2 Jinv = jet.J.inverse();
        for (int i = 0; i < nl_; ++i) {
            const int k = q * nl_ + i;
            lval_[k] = lsign_[i] * ref_lval_[k];
            Vec2 g;
            if (want_hessians_) {
                physical_lagrange(jet, Jinv, ref_lgrad_[k], &ref_lhess_[k], g, &lhess_[k]);
                lhess_[k] *= lsign_[i];
            } else {
                physical_lagrange(jet, Jinv, ref_lgrad_[k], nullptr, g, nullptr);
            }
            lgrad_[k] = lsign_[i] * g;
        }
        if (nh_ > 0) {
            const Mat2 S = jet.J / det;
            for (int i = 0; i < nh_; ++i) {
                const int k = q * nh_ + i;
                hval_[k] = hsign_[i] * (S * ref_hval_[k] * S.transpose());
            }
        }
    }
}

EdgeValues::EdgeValues(const LagrangeSpace* lagrange, const HHJSpace* hhj, const LineRule& rule)
    : lagrange_(lagrange), hhj_(hhj), rule_(rule)
{
    const int nq = num_points();
    if (lagrange_) nl_ = lagrange_->dofs_per_cell();
    if (hhj_) nh_ = hhj_->dofs_per_cell();
    for (int e = 0; e < 3; ++e) {
        ref_lval_[e].resize(nq * nl_);
        ref_lgrad_[e].resize(nq * nl_);
        ref_hval_[e].resize(nq * nh_);
        for (int q = 0; q < nq; ++q) {
            const Vec2 xh = reference::edge_point(e, rule_.points[q]);
            if (lagrange_) lagrange_->element().eval(xh, &ref_lval_[e][q * nl_], &ref_lgrad_[e][q * nl_]);
            if (hhj_) hhj_->element().eval(xh, &ref_hval_[e][q * nh_]);
        }
    }
    ldofs_.resize(nl_);
    lsign_.resize(nl_);
    hdofs_.resize(nh_);
    hsign_.resize(nh_);
    lval_.resize(nq * nl_);
    lgrad_.resize(nq * nl_);
    hval_.resize(nq * nh_);
    jets_.resize(nq);
    jxw_.resize(nq);
    normals_.resize(nq);
}

void EdgeValues::reinit(int cell, int local_edge)
{
    const CurvedMapSet& maps = lagrange_ ? lagrange_->maps() : hhj_->maps();
    cell_ = cell;
    edge_ = local_edge;
    if (lagrange_) lagrange_->cell_dofs(cell, ldofs_.data(), lsign_.data());
    if (hhj_) hhj_->cell_dofs(cell, hdofs_.data(), hsign_.data());
    const PolyMap& map = maps.cell_map(cell);
    const Vec2 that = reference::edge_vector(local_edge);
    for (int q = 0; q < num_points(); ++q) {
        const MapJet& jet = jets_[q] = map.jet(reference::edge_point(local_edge, rule_.points[q]));
        const double det = jet.det();
        HHJ_THROW_IF(!(det > 0.0), GeometryError, "non-positive Jacobian in cell " + std::to_string(cell));
        const Vec2 t = jet.J * that;
        const double len = t.norm();
        jxw_[q] = rule_.weights[q] * len;
        normals_[q] = right_normal(t) / len;
        const Mat2 Jinv = jet.J.inverse();
        for (int i = 0; i < nl_; ++i) {
            const int k = q * nl_ + i;
            lval_[k] = lsign_[i] * ref_lval_[local_edge][k];
            lgrad_[k] = lsign_[i] * (Jinv.transpose() * ref_lgrad_[local_edge][k]);
        }
        if (nh_ > 0) {
            const Mat2 S = jet.J / det;
            for (int i = 0; i < nh_; ++i) {
                const int k = q * nh_ + i;
                hval_[k] = hsign_[i] * (S * ref_hval_[local_edge][k] * S.transpose());
            }
        }
    }
}

VectorX lagrange_interpolate(const LagrangeSpace& space, const ScalarField& f, bool transport)
{
    const auto& mesh = space.mesh();
    const auto funcs = space.element().functionals(2 * space.degree() + 2 * space.maps().degree() + 4);
    const int n = space.dofs_per_cell();
    std::vector<Index> dofs(n);
    std::vector<double> signs(n);
    VectorX out = VectorX::Zero(space.num_dofs());
    for (int c = 0; c < mesh.num_cells(); ++c) {
        space.cell_dofs(c, dofs.data(), signs.data());
        const PolyMap& map = space.maps().cell_map(c);
        const bool exact = transport && space.maps().has_exact_map(c);
        for (int i = 0; i < n; ++i) {
            double d = 0.0;
            for (std::size_t q = 0; q < funcs[i].points.size(); ++q) {
                const Vec2& p = funcs[i].points[q];
                d += funcs[i].weights[q] * f(exact ? space.maps().exact_jet(c, p).x : map(p));
            }
            out[dofs[i]] = signs[i] * d;
        }
    }
    return out;
}

VectorX hhj_interpolate(const HHJSpace& space, const TensorField& phi, bool transport)
{
    const auto& mesh = space.mesh();
    const auto funcs = space.element().functionals(2 * space.order() + 2 * space.maps().degree() + 6);
    const int n = space.dofs_per_cell();
    std::vector<Index> dofs(n);
    std::vector<double> signs(n);
    VectorX out = VectorX::Zero(space.num_dofs());
    for (int c = 0; c < mesh.num_cells(); ++c) {
        space.cell_dofs(c, dofs.data(), signs.data());
        const PolyMap& map = space.maps().cell_map(c);
        const bool exact = transport && space.maps().has_exact_map(c);
        for (int i = 0; i < n; ++i) {
            double d = 0.0;
            for (std::size_t q = 0; q < funcs[i].points.size(); ++q) {
                const Vec2& p = funcs[i].points[q];
                const MapJet jet = exact ? space.maps().exact_jet(c, p) : map.jet(p);
                d += ddot(funcs[i].weights[q], piola_pull(phi(jet.x), jet.J));
            }
            out[dofs[i]] = signs[i] * d;
        }
    }
    return out;
}

double eval_lagrange(const LagrangeSpace& space, const VectorX& coeffs, int cell, const Vec2& xhat, Vec2* grad,
                     Mat2* hessian)
{
    HHJ_THROW_IF(coeffs.size() != space.num_dofs(), ConfigError, "coefficient vector does not match the space");
    const int n = space.dofs_per_cell();
    std::vector<Index> dofs(n);
    std::vector<double> signs(n), v(n);
    std::vector<Vec2> g(n);
    std::vector<Mat2> h(n);
    space.cell_dofs(cell, dofs.data(), signs.data());
    space.element().eval(xhat, v.data(), g.data(), h.data());
    const MapJet jet = space.maps().jet(cell, xhat);
    const Mat2 Jinv = jet.J.inverse();
    double value = 0.0;
    Vec2 gh = Vec2::Zero();
    Mat2 hh = Mat2::Zero();
    for (int i = 0; i < n; ++i) {
        const double c = signs[i] * coeffs[dofs[i]];
        value += c * v[i];
        gh += c * g[i];
        hh += c * h[i];
    }
    Vec2 gp;
    Mat2 hp;
    physical_lagrange(jet, Jinv, gh, &hh, gp, &hp);
    if (grad) *grad = gp;
    if (hessian) *hessian = hp;
    return value;
}

Mat2 eval_hhj(const HHJSpace& space, const VectorX& coeffs, int cell, const Vec2& xhat)
{
    HHJ_THROW_IF(coeffs.size() != space.num_dofs(), ConfigError, "coefficient vector does not match the space");
    const int n = space.dofs_per_cell();
    std::vector<Index> dofs(n);
    std::vector<double> signs(n);
    std::vector<Mat2> v(n);
    space.cell_dofs(cell, dofs.data(), signs.data());
    space.element().eval(xhat, v.data());
    Mat2 ref = Mat2::Zero();
    for (int i = 0; i < n; ++i) ref += signs[i] * coeffs[dofs[i]] * v[i];
    return piola_push(ref, space.maps().jet(cell, xhat).J);
}

int locate_point(const CurvedMapSet& maps, const Vec2& x, Vec2* xhat)
{
    const auto& mesh = maps.mesh();
    const double tol = 1e-10;
    for (int c = 0; c < mesh.num_cells(); ++c) {
        const auto& t = mesh.cells()[c];
        const Vec2 a = mesh.vertices()[t[0]], b = mesh.vertices()[t[1]], d = mesh.vertices()[t[2]];
        Mat2 F;
        F.col(0) = b - a;
        F.col(1) = d - a;
        Vec2 y = F.inverse() * (x - a);
        // Curved cells may bulge past the straight edge; allow a margin before Newton.
        const double margin = maps.is_curved(c) ? 0.25 : tol;
        if (y.x() < -margin || y.y() < -margin || y.x() + y.y() > 1.0 + margin) continue;
        if (maps.is_curved(c)) {
            for (int it = 0; it < 30; ++it) {
                const MapJet jet = maps.jet(c, y);
                const Vec2 step = jet.J.inverse() * (x - jet.x);
                y += step;
                if (step.norm() < 1e-15) break;
            }
            if ((maps.jet(c, y).x - x).norm() > 1e-10) continue;
            if (y.x() < -tol || y.y() < -tol || y.x() + y.y() > 1.0 + tol) continue;
        }
        if (xhat) *xhat = y;
        return c;
    }
    return -1;
}

}  // namespace hhj
