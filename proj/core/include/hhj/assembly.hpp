#pragma once

#include "hhj/fespace.hpp"
#include "hhj/linalg.hpp"
#include "hhj/material.hpp"
#include "hhj/quadrature.hpp"
#include "hhj/solutions.hpp"

#include <functional>
#include <memory>

namespace hhj {

using VectorField = std::function<Vec2(const Vec2&)>;

// a(tau, phi) = (K tau, phi) over the curved cells.
SparseMatrix assemble_a(const HHJSpace& V, const Material& material, int quad_degree);

// b(phi, v) = sum_T [-(phi, hess v)_T + <phi^nn, n.grad v>_dT], rows are the
// Lagrange dofs. With ring = true the terms on clamped boundary edges are dropped.
SparseMatrix assemble_b(const HHJSpace& V, const LagrangeSpace& W, bool ring, int quad_degree, int edge_degree);

// The data routines below take a transport flag. When set, fields given on
// the exact domain are carried to the discrete domain through
// Psi = (exact cell map) o (discrete cell map)^-1 on boundary cells:
// f o Psi det(grad Psi), g o Psi, (grad g) o Psi and the Piola pull-back of rho.
// Otherwise they are evaluated directly at the discrete points.

// b(phi, v_k) for every Lagrange basis function, phi any tensor field
// (all edge terms included).
VectorX apply_b(const LagrangeSpace& W, const TensorField& phi, int quad_degree, int edge_degree);

// F_k = (f, v_k) on the curved cells.
VectorX assemble_load(const LagrangeSpace& W, const ScalarField& f, int quad_degree, bool transport = false);

// G_i = <phi_i^nn, n.xi> on the clamped part of the discrete boundary.
VectorX assemble_clamped_data(const HHJSpace& V, const VectorField& xi, int edge_degree, bool transport = false);

// Edge-local L2 projection of n^T rho n onto the edge dofs of simply supported
// boundary edges; all other entries are zero.
VectorX boundary_nn_projection(const HHJSpace& V, const TensorField& rho, int edge_degree, bool transport = false);

// Gram matrices of the mesh-dependent norms with global mesh size h:
//   |phi|_{0,h}^2 = |phi|^2 + h sum_E |phi^nn|_E^2,
//   |v|_{2,h}^2 = |hess v|^2 + 1/h sum_{E interior} |[n.grad v]|_E^2 + 1/h |n.grad v|_{Gamma_c}^2.
SparseMatrix gram_0h(const HHJSpace& V, double h, int quad_degree, int edge_degree);
SparseMatrix gram_2h(const LagrangeSpace& W, double h, int quad_degree, int edge_degree);

// Problem data: load f; displacement g, its gradient xi and moment rho for the
// boundary conditions. Empty functions are treated as zero.
struct PlateData {
    ScalarField load;
    ScalarField g;
    VectorField xi;
    TensorField rho;
    bool transport = false;
};

// The returned data refers to exact, which must outlive it.
PlateData plate_data(const ManufacturedSolution& exact, bool transport = false);
PlateData uniform_load_data(double q);

struct SaddleSystem {
    SparseMatrix A;  // nV x nV
    SparseMatrix B;  // nW x nV
    VectorX F;       // load, nW
    VectorX G;       // clamped moment data, nV
    std::vector<char> sigma_fixed;  // constrained HHJ dofs
    std::vector<char> w_fixed;      // constrained Lagrange dofs
    VectorX sigma_data;             // values of constrained HHJ dofs (zero elsewhere)
    VectorX w_data;                 // values of constrained Lagrange dofs
    bool homogeneous = true;
};

struct AssemblyOptions {
    QuadratureOptions quadrature;
};

// Full blocks with all boundary terms plus essential data: w = g_h on every
// boundary dof and sigma^nn = projected rho on simply supported edges.
SaddleSystem assemble_system(const HHJSpace& V, const LagrangeSpace& W, const Material& material,
                             const PlateData& data, const AssemblyOptions& options = {});

// Blocks restricted to the free dofs with the constrained values moved to the
// right-hand side.
struct ReducedSystem {
    SparseMatrix A, B;
    VectorX F, G;
    std::vector<Index> sigma_free;  // reduced index -> full index
    std::vector<Index> w_free;
};

ReducedSystem reduce_system(const SaddleSystem& system);

struct PlateSolution {
    VectorX sigma;
    VectorX w;
    SaddleSolveResult solve;
};

PlateSolution solve_plate(const SaddleSystem& system, const SolverOptions& options = {});

}  // namespace hhj
