#pragma once

#include "hhj/types.hpp"

#include <Eigen/Sparse>

#include <string>
#include <vector>

namespace hhj {

// Compressed row storage; column indices are sorted and unique per row.
using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor, int>;

// Zero-valued matrix whose pattern couples every row dof of a cell with every
// column dof of the same cell. row_dofs holds rows_per_cell entries per cell.
SparseMatrix cell_pattern(Index rows, Index cols, const std::vector<Index>& row_dofs, int rows_per_cell,
                          const std::vector<Index>& col_dofs, int cols_per_cell);

// Adds a dense local block into a matrix whose pattern already contains it.
void add_block(SparseMatrix& M, const Index* rows, int nr, const Index* cols, int nc, const MatrixX& block);

// max |A - A^T| / max |A|.
double symmetry_error(const SparseMatrix& A);

// Submatrix selected by index maps (new index or -1 for dropped entries).
SparseMatrix extract(const SparseMatrix& M, const std::vector<Index>& row_map, Index rows,
                     const std::vector<Index>& col_map, Index cols);

bool is_positive_definite(const SparseMatrix& A);

struct SolverOptions {
    double tolerance = 1e-10;  // relative residual
    int refinement_steps = 3;
};

struct SaddleSolveResult {
    VectorX sigma;
    VectorX w;
    // Normwise backward errors, e.g. |A sigma + B^T w - G| / (|A||sigma| + |B^T||w| + |G|) in max norms.
    double residual_moment = 0.0;
    double residual_load = 0.0;
    bool converged = true;
};

// Solves [[A, B^T], [B, 0]] [sigma; w] = [G; -F] with B of size nW x nV.
// A must be exactly symmetric. Throws SolverError when the factorization
// breaks down.
SaddleSolveResult solve_saddle(const SparseMatrix& A, const SparseMatrix& B, const VectorX& F, const VectorX& G,
                               const SolverOptions& options = {});

// [[A, B^T], [B, 0]] in compressed column storage.
using KktMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;
KktMatrix kkt_matrix(const SparseMatrix& A, const SparseMatrix& B);
// solve_saddle on a prebuilt KKT matrix whose first nv unknowns are sigma, so
// the caller can release the blocks before the factorization.
SaddleSolveResult solve_kkt(const KktMatrix& K, Index nv, const VectorX& F, const VectorX& G,
                            const SolverOptions& options = {});

// Name of the sparse direct solver compiled in.
const char* saddle_solver_name();

// min over w of max over phi of b(phi, w) / (|phi|_V |w|_W) through the dense
// eigenproblem B GV^{-1} B^T x = lambda^2 GW x. Throws when a dimension exceeds cap.
double smallest_generalized_singular_value(const SparseMatrix& B, const SparseMatrix& GramV, const SparseMatrix& GramW,
                                           Index cap = 3000);

// Matrix Market coordinate format; header lines are written as comments.
void write_matrix_market(const SparseMatrix& M, const std::string& path, const std::vector<std::string>& header = {});
SparseMatrix read_matrix_market(const std::string& path);

}  // namespace hhj
