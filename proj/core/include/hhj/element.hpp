#pragma once

#include "hhj/polynomial.hpp"
#include "hhj/types.hpp"

#include <array>
#include <vector>

namespace hhj {

// Reference triangle (0,0), (1,0), (0,1). Local edge e joins local vertices
// (e+1)%3 -> (e+2)%3 and lies opposite vertex e; this runs counter-clockwise.
namespace reference {

const std::array<Vec2, 3>& vertices();
inline int edge_start(int e) { return (e + 1) % 3; }
inline int edge_end(int e) { return (e + 2) % 3; }
Vec2 edge_vector(int e);
Vec2 edge_point(int e, double s);
// Barycentric coordinates lambda_0 = 1-x-y, lambda_1 = x, lambda_2 = y.
std::array<double, 3> barycentric(const Vec2& x);
const std::array<Vec2, 3>& barycentric_gradients();

}  // namespace reference

// Linear functional f -> sum_q weights[q] f(points[q]).
struct ScalarFunctional {
    std::vector<Vec2> points;
    std::vector<double> weights;
};

// Linear functional phi -> sum_q weights[q] : phi(points[q]).
struct TensorFunctional {
    std::vector<Vec2> points;
    std::vector<Mat2> weights;
};

// Orthonormal (in L2 of the reference triangle) basis of P_k, as rows of
// monomial coefficients.
MatrixX orthonormal_polynomials(int k);

// Scalar element of degree p >= 1 whose degrees of freedom are vertex values,
// edge moments against Legendre P_0..P_{p-2} in the local edge direction, and
// interior moments against an orthonormal basis of P_{p-3}.
class LagrangeElement {
public:
    explicit LagrangeElement(int degree);

    int degree() const { return p_; }
    int num_dofs() const { return monomials_.size(); }
    int dofs_per_edge() const { return p_ - 1; }
    int dofs_interior() const { return (p_ - 1) * (p_ - 2) / 2; }
    int edge_dof(int e, int k) const { return 3 + e * dofs_per_edge() + k; }
    int interior_dof(int k) const { return 3 + 3 * dofs_per_edge() + k; }

    const MonomialBasis& monomials() const { return monomials_; }
    // Row i holds the monomial coefficients of basis function i.
    const MatrixX& coefficients() const { return coeffs_; }

    // Degree-of-freedom functionals evaluated with quadrature of the given degree.
    std::vector<ScalarFunctional> functionals(int quad_degree) const;

    // Basis values, gradients and Hessians; output arrays hold num_dofs() entries.
    void eval(const Vec2& x, double* values, Vec2* grads = nullptr, Mat2* hessians = nullptr) const;

private:
    int p_;
    MonomialBasis monomials_;
    MatrixX coeffs_;
    MatrixX interior_test_;
};

// Hellan-Herrmann-Johnson element of order r >= 0 (symmetric-matrix valued
// P_r). Degrees of freedom: for each edge, moments of nu^T phi nu against
// Legendre P_0..P_r, where nu is the edge vector rotated outward (so the edge
// length squared times the normal-normal component); interior moments against
// an orthonormal basis of P_{r-1}(S).
class HHJElement {
public:
    explicit HHJElement(int order);

    int order() const { return r_; }
    int num_dofs() const { return 3 * monomials_.size(); }
    int dofs_per_edge() const { return r_ + 1; }
    int dofs_interior() const { return 3 * r_ * (r_ + 1) / 2; }
    int edge_dof(int e, int k) const { return e * dofs_per_edge() + k; }
    int interior_dof(int k) const { return 3 * dofs_per_edge() + k; }

    const MonomialBasis& monomials() const { return monomials_; }
    // Row i: coefficients of (phi_11, phi_22, phi_12) in blocks of monomials().size().
    const MatrixX& coefficients() const { return coeffs_; }

    std::vector<TensorFunctional> functionals(int quad_degree) const;

    void eval(const Vec2& x, Mat2* values) const;

private:
    int r_;
    MonomialBasis monomials_;
    MatrixX coeffs_;
    MatrixX interior_test_;
};

}  // namespace hhj
