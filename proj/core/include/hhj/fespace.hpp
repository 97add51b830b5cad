#pragma once

#include "hhj/curved.hpp"
#include "hhj/element.hpp"
#include "hhj/quadrature.hpp"
#include "hhj/types.hpp"

#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace hhj {

using ScalarField = std::function<double(const Vec2&)>;
using TensorField = std::function<Mat2(const Vec2&)>;

// Matrix Piola transform phi = (det J)^-2 J phi_hat J^T and its inverse.
Mat2 piola_push(const Mat2& phi_hat, const Mat2& J);
Mat2 piola_pull(const Mat2& phi, const Mat2& J);
// Normal-normal trace of a pushed tensor from the reference nn-trace and the
// reference unit tangent of the edge.
double nn_trace_transform(double phi_hat_nn, const Mat2& J, const Vec2& t_hat);

// Continuous scalar space of degree p on the curved mesh. Global numbering:
// vertices, then p-1 moments per edge, then interior moments per cell.
class LagrangeSpace {
public:
    LagrangeSpace(std::shared_ptr<const CurvedMapSet> maps, int degree);

    int degree() const { return element_.degree(); }
    const LagrangeElement& element() const { return element_; }
    const CurvedMapSet& maps() const { return *maps_; }
    std::shared_ptr<const CurvedMapSet> maps_ptr() const { return maps_; }
    const Triangulation& mesh() const { return maps_->mesh(); }

    Index num_dofs() const { return ndofs_; }
    int dofs_per_cell() const { return element_.num_dofs(); }
    // Global indices and signs (+1/-1) of the local basis functions.
    void cell_dofs(int cell, Index* dofs, double* signs) const;
    // Vertex and edge degrees of freedom on the boundary.
    std::vector<char> boundary_mask() const;

private:
    std::shared_ptr<const CurvedMapSet> maps_;
    LagrangeElement element_;
    Index ndofs_ = 0;
};

// Normal-normal continuous symmetric tensors of order r on the curved mesh,
// defined through the matrix Piola transform. Global numbering: r+1 moments
// per edge, then interior moments per cell.
class HHJSpace {
public:
    HHJSpace(std::shared_ptr<const CurvedMapSet> maps, int order);

    int order() const { return element_.order(); }
    const HHJElement& element() const { return element_; }
    const CurvedMapSet& maps() const { return *maps_; }
    std::shared_ptr<const CurvedMapSet> maps_ptr() const { return maps_; }
    const Triangulation& mesh() const { return maps_->mesh(); }

    Index num_dofs() const { return ndofs_; }
    int dofs_per_cell() const { return element_.num_dofs(); }
    void cell_dofs(int cell, Index* dofs, double* signs) const;
    Index edge_dof(int edge, int k) const { return static_cast<Index>(edge) * (order() + 1) + k; }
    // Edge degrees of freedom on simply supported boundary edges.
    std::vector<char> simply_supported_mask() const;

private:
    std::shared_ptr<const CurvedMapSet> maps_;
    HHJElement element_;
    Index ndofs_ = 0;
};

// Coefficient vector of a discrete field together with its space descriptor.
struct FieldCoefficients {
    std::string kind;  // "lagrange" or "hhj"
    int degree = 0;
    VectorX values;
};

std::string field_to_json(const FieldCoefficients& field, const ConfigEcho& config = {});
FieldCoefficients field_from_json(const std::string& text);

// Physical basis values at the points of a reference rule on one cell, with
// global signs already applied. Either space may be null.
class CellValues {
public:
    CellValues(const LagrangeSpace* lagrange, const HHJSpace* hhj, const TriangleRule& rule,
               bool hessians = true);

    void reinit(int cell);
    int cell() const { return cell_; }
    int num_points() const { return static_cast<int>(points_.size()); }
    const Vec2& ref_point(int q) const { return points_[q]; }
    const Vec2& x(int q) const { return jets_[q].x; }
    const MapJet& jet(int q) const { return jets_[q]; }
    double JxW(int q) const { return jxw_[q]; }

    const Index* lagrange_dofs() const { return ldofs_.data(); }
    const Index* hhj_dofs() const { return hdofs_.data(); }
    int num_lagrange() const { return nl_; }
    int num_hhj() const { return nh_; }

    double value(int q, int i) const { return lval_[q * nl_ + i]; }
    const Vec2& grad(int q, int i) const { return lgrad_[q * nl_ + i]; }
    const Mat2& hessian(int q, int i) const { return lhess_[q * nl_ + i]; }
    const Mat2& tensor(int q, int i) const { return hval_[q * nh_ + i]; }

private:
    const LagrangeSpace* lagrange_;
    const HHJSpace* hhj_;
    bool want_hessians_;
    int nl_ = 0, nh_ = 0, cell_ = -1;
    std::vector<Vec2> points_;
    std::vector<double> weights_;
    // Reference tabulation.
    std::vector<double> ref_lval_;
    std::vector<Vec2> ref_lgrad_;
    std::vector<Mat2> ref_lhess_;
    std::vector<Mat2> ref_hval_;
    // Physical values for the current cell.
    std::vector<MapJet> jets_;
    std::vector<double> jxw_;
    std::vector<Index> ldofs_, hdofs_;
    std::vector<double> lsign_, hsign_;
    std::vector<double> lval_;
    std::vector<Vec2> lgrad_;
    std::vector<Mat2> lhess_;
    std::vector<Mat2> hval_;
};

// Same as CellValues on one local edge; JxW includes the arc-length factor and
// normal() is the outward unit normal of the cell.
class EdgeValues {
public:
    EdgeValues(const LagrangeSpace* lagrange, const HHJSpace* hhj, const LineRule& rule);

    void reinit(int cell, int local_edge);
    int cell() const { return cell_; }
    int local_edge() const { return edge_; }
    int num_points() const { return static_cast<int>(rule_.points.size()); }
    double ref_parameter(int q) const { return rule_.points[q]; }
    Vec2 ref_point(int q) const { return reference::edge_point(edge_, rule_.points[q]); }
    const Vec2& x(int q) const { return jets_[q].x; }
    const MapJet& jet(int q) const { return jets_[q]; }
    double JxW(int q) const { return jxw_[q]; }
    const Vec2& normal(int q) const { return normals_[q]; }

    const Index* lagrange_dofs() const { return ldofs_.data(); }
    const Index* hhj_dofs() const { return hdofs_.data(); }
    int num_lagrange() const { return nl_; }
    int num_hhj() const { return nh_; }

    double value(int q, int i) const { return lval_[q * nl_ + i]; }
    const Vec2& grad(int q, int i) const { return lgrad_[q * nl_ + i]; }
    const Mat2& tensor(int q, int i) const { return hval_[q * nh_ + i]; }
    double normal_derivative(int q, int i) const { return normals_[q].dot(grad(q, i)); }
    double nn(int q, int i) const { return normals_[q].dot(tensor(q, i) * normals_[q]); }

private:
    const LagrangeSpace* lagrange_;
    const HHJSpace* hhj_;
    LineRule rule_;
    int nl_ = 0, nh_ = 0, cell_ = -1, edge_ = -1;
    std::array<std::vector<double>, 3> ref_lval_;
    std::array<std::vector<Vec2>, 3> ref_lgrad_;
    std::array<std::vector<Mat2>, 3> ref_hval_;
    std::vector<MapJet> jets_;
    std::vector<double> jxw_;
    std::vector<Vec2> normals_;
    std::vector<Index> ldofs_, hdofs_;
    std::vector<double> lsign_, hsign_;
    std::vector<double> lval_;
    std::vector<Vec2> lgrad_;
    std::vector<Mat2> hval_;
};

// Canonical interpolants: degrees of freedom of f o Phi on the reference
// cell, and of the Piola pull-back of phi. With transport = true the fields
// are sampled on the exact domain through the exact cell maps instead
// (f o Psi and the Piola pull-back through Psi).
VectorX lagrange_interpolate(const LagrangeSpace& space, const ScalarField& f, bool transport = false);
VectorX hhj_interpolate(const HHJSpace& space, const TensorField& phi, bool transport = false);

// Point evaluation of discrete fields at a reference point of a cell.
double eval_lagrange(const LagrangeSpace& space, const VectorX& coeffs, int cell, const Vec2& xhat,
                     Vec2* grad = nullptr, Mat2* hessian = nullptr);
Mat2 eval_hhj(const HHJSpace& space, const VectorX& coeffs, int cell, const Vec2& xhat);

// Locates a physical point in the curved mesh: returns the cell (or -1) and
// the reference coordinates.
int locate_point(const CurvedMapSet& maps, const Vec2& x, Vec2* xhat);

}  // namespace hhj
