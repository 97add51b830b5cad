#include "hhj/assembly.hpp"

#include "hhj/error.hpp"

#include <cmath>

namespace hhj {

namespace {

std::vector<Index> all_cell_dofs(const LagrangeSpace& W)
{
    const int n = W.dofs_per_cell();
    std::vector<Index> out(static_cast<std::size_t>(W.mesh().num_cells()) * n);
    std::vector<double> signs(n);
    for (int c = 0; c < W.mesh().num_cells(); ++c) W.cell_dofs(c, &out[static_cast<std::size_t>(c) * n], signs.data());
    return out;
}

std::vector<Index> all_cell_dofs(const HHJSpace& V)
{
    const int n = V.dofs_per_cell();
    std::vector<Index> out(static_cast<std::size_t>(V.mesh().num_cells()) * n);
    std::vector<double> signs(n);
    for (int c = 0; c < V.mesh().num_cells(); ++c) V.cell_dofs(c, &out[static_cast<std::size_t>(c) * n], signs.data());
    return out;
}

void check_degree(int degree, int floor, const char* what)
{
    HHJ_THROW_IF(degree < floor, ConfigError,
                 std::string(what) + " quadrature degree " + std::to_string(degree) + " is below the floor " +
                     std::to_string(floor));
}

// Components (11, 22, sqrt2 * 12) so that the dot product is the Frobenius product.
inline void put_components(MatrixX& M, int row, int q, double s, const Mat2& t)
{
    M(row, 3 * q) = s * t(0, 0);
    M(row, 3 * q + 1) = s * t(1, 1);
    M(row, 3 * q + 2) = s * std::sqrt(2.0) * t(0, 1);
}

bool is_clamped_edge(const Triangulation& mesh, int cell, int le)
{
    const int e = mesh.cell_edges(cell)[le];
    return mesh.is_boundary_edge(e) && mesh.boundary_info(e).bc == BoundaryCondition::clamped;
}

using Triplets = std::vector<Eigen::Triplet<double>>;

void add_triplets(Triplets& t, const Index* rows, int nr, const Index* cols, int nc, const MatrixX& block)
{
    for (int i = 0; i < nr; ++i)
        for (int j = 0; j < nc; ++j)
            if (block(i, j) != 0.0) t.emplace_back(static_cast<int>(rows[i]), static_cast<int>(cols[j]), block(i, j));
}

}  // namespace

SparseMatrix assemble_a(const HHJSpace& V, const Material& material, int quad_degree)
{
    material.validate();
    check_degree(quad_degree, 2 * V.order(), "a-form");
    const auto dofs = all_cell_dofs(V);
    const int nh = V.dofs_per_cell();
    SparseMatrix A = cell_pattern(V.num_dofs(), V.num_dofs(), dofs, nh, dofs, nh);
    CellValues cv(nullptr, &V, triangle_rule(quad_degree), false);
    const int nq = cv.num_points();
    MatrixX Fm(nh, 3 * nq), Tm(nh, nq), local(nh, nh);
    const double c1 = 1.0 / (material.D * (1.0 - material.nu));
    const double c2 = material.nu / (material.D * (1.0 - material.nu * material.nu));
    for (int c = 0; c < V.mesh().num_cells(); ++c) {
        cv.reinit(c);
        for (int q = 0; q < nq; ++q) {
            const double s = std::sqrt(cv.JxW(q));
            for (int i = 0; i < nh; ++i) {
                const Mat2& t = cv.tensor(q, i);
                put_components(Fm, i, q, s, t);
                Tm(i, q) = s * t.trace();
            }
        }
        local.noalias() = c1 * Fm * Fm.transpose();
        local.noalias() -= c2 * Tm * Tm.transpose();
        local = 0.5 * (local + local.transpose()).eval();
        add_block(A, cv.hhj_dofs(), nh, cv.hhj_dofs(), nh, local);
    }
    return A;
}

SparseMatrix assemble_b(const HHJSpace& V, const LagrangeSpace& W, bool ring, int quad_degree, int edge_degree)
{
    check_degree(quad_degree, 2 * V.order(), "b-form");
    check_degree(edge_degree, 2 * V.order() + 1, "b-form edge");
    const auto& mesh = V.mesh();
    const auto hd = all_cell_dofs(V);
    const auto ld = all_cell_dofs(W);
    const int nh = V.dofs_per_cell(), nl = W.dofs_per_cell();
    SparseMatrix B = cell_pattern(W.num_dofs(), V.num_dofs(), ld, nl, hd, nh);
    CellValues cv(&W, &V, triangle_rule(quad_degree), true);
    EdgeValues ev(&W, &V, line_rule(edge_degree));
    const int nq = cv.num_points(), ne = ev.num_points();
    MatrixX Fm(nh, 3 * nq), Hm(nl, 3 * nq), Dn(nl, ne), Nn(nh, ne), local(nl, nh);
    for (int c = 0; c < mesh.num_cells(); ++c) {
        cv.reinit(c);
        for (int q = 0; q < nq; ++q) {
            const double s = std::sqrt(cv.JxW(q));
            for (int i = 0; i < nh; ++i) put_components(Fm, i, q, s, cv.tensor(q, i));
            for (int k = 0; k < nl; ++k) put_components(Hm, k, q, s, cv.hessian(q, k));
        }
        local.noalias() = -Hm * Fm.transpose();
        for (int le = 0; le < 3; ++le) {
            if (ring && is_clamped_edge(mesh, c, le)) continue;
            ev.reinit(c, le);
            for (int q = 0; q < ne; ++q) {
                for (int k = 0; k < nl; ++k) Dn(k, q) = ev.JxW(q) * ev.normal_derivative(q, k);
                for (int i = 0; i < nh; ++i) Nn(i, q) = ev.nn(q, i);
            }
            local.noalias() += Dn * Nn.transpose();
        }
        add_block(B, cv.lagrange_dofs(), nl, cv.hhj_dofs(), nh, local);
    }
    return B;
}

VectorX apply_b(const LagrangeSpace& W, const TensorField& phi, int quad_degree, int edge_degree)
{
    VectorX out = VectorX::Zero(W.num_dofs());
    CellValues cv(&W, nullptr, triangle_rule(quad_degree), true);
    EdgeValues ev(&W, nullptr, line_rule(edge_degree));
    for (int c = 0; c < W.mesh().num_cells(); ++c) {
        cv.reinit(c);
        for (int q = 0; q < cv.num_points(); ++q) {
            const Mat2 p = phi(cv.x(q));
            for (int k = 0; k < cv.num_lagrange(); ++k)
                out[cv.lagrange_dofs()[k]] -= cv.JxW(q) * ddot(p, cv.hessian(q, k));
        }
        for (int le = 0; le < 3; ++le) {
            ev.reinit(c, le);
            for (int q = 0; q < ev.num_points(); ++q) {
                const Vec2& n = ev.normal(q);
                const double pnn = n.dot(phi(ev.x(q)) * n);
                for (int k = 0; k < ev.num_lagrange(); ++k)
                    out[ev.lagrange_dofs()[k]] += ev.JxW(q) * pnn * ev.normal_derivative(q, k);
            }
        }
    }
    return out;
}

VectorX assemble_load(const LagrangeSpace& W, const ScalarField& f, int quad_degree, bool transport)
{
    VectorX F = VectorX::Zero(W.num_dofs());
    if (!f) return F;
    const auto& maps = W.maps();
    CellValues cv(&W, nullptr, triangle_rule(quad_degree), false);
    for (int c = 0; c < W.mesh().num_cells(); ++c) {
        cv.reinit(c);
        const bool exact = transport && maps.has_exact_map(c);
        for (int q = 0; q < cv.num_points(); ++q) {
            double fx;
            if (exact) {
                const MapJet y = maps.exact_jet(c, cv.ref_point(q));
                fx = f(y.x) * cv.JxW(q) * std::abs(y.det() / cv.jet(q).det());
            } else {
                fx = f(cv.x(q)) * cv.JxW(q);
            }
            for (int k = 0; k < cv.num_lagrange(); ++k) F[cv.lagrange_dofs()[k]] += fx * cv.value(q, k);
        }
    }
    return F;
}

VectorX assemble_clamped_data(const HHJSpace& V, const VectorField& xi, int edge_degree, bool transport)
{
    VectorX G = VectorX::Zero(V.num_dofs());
    if (!xi) return G;
    const auto& mesh = V.mesh();
    EdgeValues ev(nullptr, &V, line_rule(edge_degree));
    for (int e = 0; e < mesh.num_edges(); ++e) {
        if (!mesh.is_boundary_edge(e) || mesh.boundary_info(e).bc != BoundaryCondition::clamped) continue;
        const int c = mesh.edge_cells(e)[0];
        ev.reinit(c, mesh.edge_local(e)[0]);
        for (int q = 0; q < ev.num_points(); ++q) {
            const Vec2 y = transport ? V.maps().exact_jet(c, ev.ref_point(q)).x : ev.x(q);
            const double d = ev.JxW(q) * ev.normal(q).dot(xi(y));
            for (int i = 0; i < ev.num_hhj(); ++i) G[ev.hhj_dofs()[i]] += d * ev.nn(q, i);
        }
    }
    return G;
}

VectorX boundary_nn_projection(const HHJSpace& V, const TensorField& rho, int edge_degree, bool transport)
{
    VectorX out = VectorX::Zero(V.num_dofs());
    if (!rho) return out;
    const auto& mesh = V.mesh();
    const int ndof = V.order() + 1;
    EdgeValues ev(nullptr, &V, line_rule(edge_degree));
    MatrixX M(ndof, ndof);
    VectorX b(ndof);
    for (int e = 0; e < mesh.num_edges(); ++e) {
        if (!mesh.is_boundary_edge(e) || mesh.boundary_info(e).bc != BoundaryCondition::simply_supported) continue;
        const int c = mesh.edge_cells(e)[0], le = mesh.edge_local(e)[0];
        ev.reinit(c, le);
        M.setZero();
        b.setZero();
        for (int q = 0; q < ev.num_points(); ++q) {
            const Vec2& n = ev.normal(q);
            Mat2 value;
            if (transport) {
                const MapJet y = V.maps().exact_jet(c, ev.ref_point(q));
                const Mat2 Jpsi = y.J * ev.jet(q).J.inverse();
                value = piola_pull(rho(y.x), Jpsi);
            } else {
                value = rho(ev.x(q));
            }
            const double data = n.dot(value * n);
            for (int j = 0; j < ndof; ++j) {
                const double pj = ev.nn(q, V.element().edge_dof(le, j));
                b[j] += ev.JxW(q) * pj * data;
                for (int k = 0; k < ndof; ++k) M(j, k) += ev.JxW(q) * pj * ev.nn(q, V.element().edge_dof(le, k));
            }
        }
        const VectorX x = M.ldlt().solve(b);
        for (int j = 0; j < ndof; ++j) out[ev.hhj_dofs()[V.element().edge_dof(le, j)]] = x[j];
    }
    return out;
}

SparseMatrix gram_0h(const HHJSpace& V, double h, int quad_degree, int edge_degree)
{
    const auto& mesh = V.mesh();
    const int nh = V.dofs_per_cell();
    CellValues cv(nullptr, &V, triangle_rule(quad_degree), false);
    EdgeValues ev(nullptr, &V, line_rule(edge_degree));
    Triplets t;
    MatrixX local(nh, nh);
    for (int c = 0; c < mesh.num_cells(); ++c) {
        cv.reinit(c);
        local.setZero();
        for (int q = 0; q < cv.num_points(); ++q)
            for (int i = 0; i < nh; ++i)
                for (int j = 0; j < nh; ++j) local(i, j) += cv.JxW(q) * ddot(cv.tensor(q, i), cv.tensor(q, j));
        add_triplets(t, cv.hhj_dofs(), nh, cv.hhj_dofs(), nh, local);
    }
    for (int e = 0; e < mesh.num_edges(); ++e) {
        ev.reinit(mesh.edge_cells(e)[0], mesh.edge_local(e)[0]);
        local.setZero();
        for (int q = 0; q < ev.num_points(); ++q)
            for (int i = 0; i < nh; ++i)
                for (int j = 0; j < nh; ++j) local(i, j) += h * ev.JxW(q) * ev.nn(q, i) * ev.nn(q, j);
        add_triplets(t, ev.hhj_dofs(), nh, ev.hhj_dofs(), nh, local);
    }
    Eigen::SparseMatrix<double, Eigen::RowMajor, int> G(V.num_dofs(), V.num_dofs());
    G.setFromTriplets(t.begin(), t.end());
    return G;
}

SparseMatrix gram_2h(const LagrangeSpace& W, double h, int quad_degree, int edge_degree)
{
    const auto& mesh = W.mesh();
    const int nl = W.dofs_per_cell();
    CellValues cv(&W, nullptr, triangle_rule(quad_degree), true);
    const LineRule rule = line_rule(edge_degree);
    EdgeValues e0(&W, nullptr, rule), e1(&W, nullptr, rule);
    Triplets t;
    MatrixX local(nl, nl);
    for (int c = 0; c < mesh.num_cells(); ++c) {
        cv.reinit(c);
        local.setZero();
        for (int q = 0; q < cv.num_points(); ++q)
            for (int i = 0; i < nl; ++i)
                for (int j = 0; j < nl; ++j) local(i, j) += cv.JxW(q) * ddot(cv.hessian(q, i), cv.hessian(q, j));
        add_triplets(t, cv.lagrange_dofs(), nl, cv.lagrange_dofs(), nl, local);
    }
    const int ne = static_cast<int>(rule.points.size());
    std::vector<Index> dofs(2 * nl);
    MatrixX jump(2 * nl, ne), block(2 * nl, 2 * nl);
    for (int e = 0; e < mesh.num_edges(); ++e) {
        const auto& cells = mesh.edge_cells(e);
        const auto& locs = mesh.edge_local(e);
        if (mesh.is_boundary_edge(e)) {
            if (mesh.boundary_info(e).bc != BoundaryCondition::clamped) continue;
            e0.reinit(cells[0], locs[0]);
            local.setZero();
            for (int q = 0; q < ne; ++q)
                for (int i = 0; i < nl; ++i)
                    for (int j = 0; j < nl; ++j)
                        local(i, j) += e0.JxW(q) / h * e0.normal_derivative(q, i) * e0.normal_derivative(q, j);
            add_triplets(t, e0.lagrange_dofs(), nl, e0.lagrange_dofs(), nl, local);
            continue;
        }
        e0.reinit(cells[0], locs[0]);
        e1.reinit(cells[1], locs[1]);
        // The neighbour traverses the shared edge in the opposite direction;
        // the Gauss rule is symmetric, so point q matches point ne-1-q.
        for (int i = 0; i < nl; ++i) {
            dofs[i] = e0.lagrange_dofs()[i];
            dofs[nl + i] = e1.lagrange_dofs()[i];
        }
        for (int q = 0; q < ne; ++q) {
            const double s = std::sqrt(e0.JxW(q) / h);
            for (int i = 0; i < nl; ++i) {
                jump(i, q) = s * e0.normal_derivative(q, i);
                jump(nl + i, q) = s * e1.normal_derivative(ne - 1 - q, i);
            }
        }
        block.noalias() = jump * jump.transpose();
        add_triplets(t, dofs.data(), 2 * nl, dofs.data(), 2 * nl, block);
    }
    Eigen::SparseMatrix<double, Eigen::RowMajor, int> G(W.num_dofs(), W.num_dofs());
    G.setFromTriplets(t.begin(), t.end());
    return G;
}

PlateData plate_data(const ManufacturedSolution& exact, bool transport)
{
    PlateData d;
    d.transport = transport;
    d.load = [&exact](const Vec2& x) { return exact.load(x); };
    d.g = [&exact](const Vec2& x) { return exact.w(x); };
    d.xi = [&exact](const Vec2& x) { return exact.grad(x); };
    d.rho = [&exact](const Vec2& x) { return exact.sigma(x); };
    return d;
}

PlateData uniform_load_data(double q)
{
    PlateData d;
    d.load = [q](const Vec2&) { return q; };
    return d;
}

SaddleSystem assemble_system(const HHJSpace& V, const LagrangeSpace& W, const Material& material,
                             const PlateData& data, const AssemblyOptions& options)
{
    HHJ_THROW_IF(&V.maps() != &W.maps(), ConfigError, "spaces must share the curved maps");
    HHJ_THROW_IF(W.degree() != V.order() + 1, ConfigError, "Lagrange degree must be the HHJ order plus one");
    const int r = V.order(), m = V.maps().degree();
    const int qi = options.quadrature.resolved_interior(r, m);
    const int qe = options.quadrature.resolved_edge(r, m);
    SaddleSystem s;
    s.A = assemble_a(V, material, qi);
    s.B = assemble_b(V, W, false, qi, qe);
    s.F = assemble_load(W, data.load, qi, data.transport);
    s.G = assemble_clamped_data(V, data.xi, qe, data.transport);
    s.sigma_fixed = V.simply_supported_mask();
    s.w_fixed = W.boundary_mask();
    s.sigma_data = boundary_nn_projection(V, data.rho, qe, data.transport);
    s.w_data = VectorX::Zero(W.num_dofs());
    if (data.g) {
        const VectorX gh = lagrange_interpolate(W, data.g, data.transport);
        for (Index i = 0; i < W.num_dofs(); ++i)
            if (s.w_fixed[i]) s.w_data[i] = gh[i];
    }
    s.homogeneous = s.G.isZero(0.0) && s.sigma_data.isZero(0.0) && s.w_data.isZero(0.0);
    return s;
}

ReducedSystem reduce_system(const SaddleSystem& s)
{
    ReducedSystem red;
    const Index nv = s.A.rows(), nw = s.B.rows();
    std::vector<Index> vmap(nv, -1), wmap(nw, -1);
    for (Index i = 0; i < nv; ++i)
        if (!s.sigma_fixed[i]) {
            vmap[i] = static_cast<Index>(red.sigma_free.size());
            red.sigma_free.push_back(i);
        }
    for (Index i = 0; i < nw; ++i)
        if (!s.w_fixed[i]) {
            wmap[i] = static_cast<Index>(red.w_free.size());
            red.w_free.push_back(i);
        }
    const Index fv = static_cast<Index>(red.sigma_free.size()), fw = static_cast<Index>(red.w_free.size());
    red.A = extract(s.A, vmap, fv, vmap, fv);
    red.B = extract(s.B, wmap, fw, vmap, fv);
    // Moment equations: A sigma + B^T w = G, load equations: B sigma = -F.
    const VectorX Gfull = s.G - s.A * s.sigma_data - s.B.transpose() * s.w_data;
    const VectorX Ffull = s.F + s.B * s.sigma_data;
    red.G.resize(fv);
    red.F.resize(fw);
    for (Index i = 0; i < fv; ++i) red.G[i] = Gfull[red.sigma_free[i]];
    for (Index i = 0; i < fw; ++i) red.F[i] = Ffull[red.w_free[i]];
    return red;
}

PlateSolution solve_plate(const SaddleSystem& system, const SolverOptions& options)
{
    const ReducedSystem red = reduce_system(system);
    PlateSolution out;
    out.solve = solve_saddle(red.A, red.B, red.F, red.G, options);
    out.sigma = system.sigma_data;
    out.w = system.w_data;
    for (std::size_t i = 0; i < red.sigma_free.size(); ++i) out.sigma[red.sigma_free[i]] = out.solve.sigma[i];
    for (std::size_t i = 0; i < red.w_free.size(); ++i) out.w[red.w_free[i]] = out.solve.w[i];
    return out;
}

}  // namespace hhj
