#pragma once

#include "hhj/types.hpp"

#include <vector>

namespace hhj {

// Points and weights on [0, 1].
struct LineRule {
    std::vector<double> points;
    std::vector<double> weights;
    int degree = 0;  // exact for polynomials up to this degree
};

// Points and weights on the reference triangle (0,0), (1,0), (0,1).
struct TriangleRule {
    std::vector<Vec2> points;
    std::vector<double> weights;
    int degree = 0;
};

// Gauss-Legendre with n points on [0, 1].
LineRule gauss_legendre(int n);

// Gauss-Jacobi with n points on [0, 1] for the weight (1-u)^alpha.
LineRule gauss_jacobi(int n, int alpha);

// Collapsed (Duffy) product rule exact to the given total degree.
TriangleRule triangle_rule(int degree);

// Gauss-Legendre rule exact to the given degree.
LineRule line_rule(int degree);

struct QuadratureOptions {
    int interior_degree = -1;  // -1: 2(r+1) + 2m + 2
    int edge_degree = -1;      // -1: same as interior_degree
    int error_bonus = 4;       // extra degree for error integrals

    int resolved_interior(int r, int m) const { return interior_degree >= 0 ? interior_degree : 2 * (r + 1) + 2 * m + 2; }
    int resolved_edge(int r, int m) const { return edge_degree >= 0 ? edge_degree : resolved_interior(r, m); }
};

}  // namespace hhj
