#pragma once

#include "hhj/mesh.hpp"
#include "hhj/polynomial.hpp"
#include "hhj/types.hpp"

#include <array>
#include <memory>
#include <optional>
#include <vector>

namespace hhj {

// Value, Jacobian and second derivatives of a map from the reference
// triangle; hessian[k] is the Hessian of component k.
struct MapJet {
    Vec2 x = Vec2::Zero();
    Mat2 J = Mat2::Identity();
    std::array<Mat2, 2> hessian = {Mat2::Zero(), Mat2::Zero()};
    double det() const { return J.determinant(); }
};

// Polynomial map reference triangle -> plane in the monomial basis.
class PolyMap {
public:
    PolyMap() = default;
    PolyMap(int degree, Eigen::Matrix<double, 2, Eigen::Dynamic> coefficients);

    // Affine map sending the reference vertices to a, b, c.
    static PolyMap affine(const Vec2& a, const Vec2& b, const Vec2& c);

    int degree() const { return degree_; }
    const Eigen::Matrix<double, 2, Eigen::Dynamic>& coefficients() const { return coeffs_; }
    MapJet jet(const Vec2& xhat) const;
    Vec2 operator()(const Vec2& xhat) const { return jet(xhat).x; }

private:
    int degree_ = 1;
    Eigen::Matrix<double, 2, Eigen::Dynamic> coeffs_;
};

// Map of a boundary cell onto the curved triangle fitting the boundary
// exactly:
//   G(xhat) = F(xhat) + lambda_a lambda_b e(lambda_b),  e(s) = d(s) / (s (1 - s)),
// where d(s) is the displacement of the chart from the straight boundary edge
// (local vertices a -> b, chart parameter linear in s). It is the identity on
// the two other edges, and its k-th reference derivatives scale like h^max(2,k).
class BlendedBoundaryMap {
public:
    BlendedBoundaryMap(const Triangulation& mesh, int cell);

    int boundary_local_edge() const { return edge_; }
    MapJet jet(const Vec2& xhat) const;

private:
    const Domain* domain_;
    int edge_, a_, b_, segment_;
    double ta_, tb_;
    std::array<Vec2, 3> v_;
};

// Lagrange (nodal, equispaced) interpolant of a map of the reference triangle.
template <class MapLike>
PolyMap nodal_interpolant(const MapLike& map, int degree);

// Interpolant in the moment-based Lagrange space of the given degree
// (vertex values, edge moments, interior moments).
PolyMap moment_interpolant(const PolyMap& map, int degree);

// Nodal map of the given degree for a boundary cell: boundary-edge nodes land
// on the curve at equispaced chart parameters, interior nodes follow the blend.
PolyMap lenoir_map(const Triangulation& mesh, int cell, int degree);

// Per-cell maps of degree m from the reference triangle to the curved cells;
// boundary cells use the moment interpolant of the degree-(m+1) Lenoir map,
// all other cells the affine map.
class CurvedMapSet {
public:
    CurvedMapSet(std::shared_ptr<const Triangulation> mesh, int m);
    // Explicit per-cell maps, e.g. for testing; a cell counts as curved when
    // its map differs from the affine one.
    CurvedMapSet(std::shared_ptr<const Triangulation> mesh, int m, std::vector<PolyMap> maps);

    int degree() const { return m_; }
    const Triangulation& mesh() const { return *mesh_; }
    std::shared_ptr<const Triangulation> mesh_ptr() const { return mesh_; }

    bool is_curved(int cell) const { return curved_[cell] != 0; }
    const PolyMap& cell_map(int cell) const { return maps_[cell]; }
    MapJet jet(int cell, const Vec2& xhat) const { return maps_[cell].jet(xhat); }
    // Straight cell map F_T.
    PolyMap affine_map(int cell) const;
    // Map from the reference cell onto the cell of the exact domain (the
    // blended map on boundary cells, affine otherwise). Composed with the
    // inverse of cell_map it transports points of the discrete domain onto
    // the exact one.
    MapJet exact_jet(int cell, const Vec2& xhat) const;
    bool has_exact_map(int cell) const { return exact_[cell].has_value(); }

    // Smallest det J over a quadrature sample of every curved cell.
    double min_jacobian_ratio() const;
    double area(int quad_degree = 20) const;

private:
    std::shared_ptr<const Triangulation> mesh_;
    int m_;
    std::vector<PolyMap> maps_;
    std::vector<char> curved_;
    std::vector<std::optional<BlendedBoundaryMap>> exact_;
};

// max over boundary cells and sample points of |grad^s (Phi^m - Psi)| for
// s = 0, 1, 2, derivatives taken on the straight cell, where Psi is the
// blended map.
std::array<double, 3> map_deviation(const CurvedMapSet& maps, int quad_degree = 12);

}  // namespace hhj
