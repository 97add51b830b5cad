#include "hhj/element.hpp"

#include "hhj/error.hpp"
#include "hhj/quadrature.hpp"

#include <cmath>

namespace hhj {

namespace reference {

const std::array<Vec2, 3>& vertices()
{
    static const std::array<Vec2, 3> v = {Vec2(0.0, 0.0), Vec2(1.0, 0.0), Vec2(0.0, 1.0)};
    return v;
}

Vec2 edge_vector(int e) { return vertices()[edge_end(e)] - vertices()[edge_start(e)]; }

Vec2 edge_point(int e, double s) { return vertices()[edge_start(e)] + s * edge_vector(e); }

std::array<double, 3> barycentric(const Vec2& x) { return {1.0 - x.x() - x.y(), x.x(), x.y()}; }

const std::array<Vec2, 3>& barycentric_gradients()
{
    static const std::array<Vec2, 3> g = {Vec2(-1.0, -1.0), Vec2(1.0, 0.0), Vec2(0.0, 1.0)};
    return g;
}

}  // namespace reference

MatrixX orthonormal_polynomials(int k)
{
    if (k < 0) return MatrixX(0, 0);
    const MonomialBasis mb(k);
    const int n = mb.size();
    const TriangleRule rule = triangle_rule(2 * k);
    MatrixX mass = MatrixX::Zero(n, n);
    std::vector<double> v(n);
    for (std::size_t q = 0; q < rule.points.size(); ++q) {
        mb.eval(rule.points[q], v.data());
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) mass(i, j) += rule.weights[q] * v[i] * v[j];
    }
    // mass = L L^T; rows of L^{-1} give orthonormal polynomials.
    Eigen::LLT<MatrixX> llt(mass);
    HHJ_THROW_IF(llt.info() != Eigen::Success, NumericError, "monomial mass matrix not positive definite");
    MatrixX Linv = llt.matrixL().solve(MatrixX::Identity(n, n));
    return Linv;
}

namespace {

int functional_degree(int base, int quad_degree) { return quad_degree >= 0 ? quad_degree : base; }

}  // namespace

LagrangeElement::LagrangeElement(int degree) : p_(degree), monomials_(degree)
{
    HHJ_THROW_IF(degree < 1, ConfigError, "Lagrange degree must be at least 1");
    interior_test_ = orthonormal_polynomials(p_ - 3);
    const auto funcs = functionals(2 * p_);
    const int n = num_dofs();
    HHJ_THROW_IF(static_cast<int>(funcs.size()) != n, NumericError, "Lagrange functional count mismatch");
    MatrixX M = MatrixX::Zero(n, n);  // M(i, j) = dof_i(monomial_j)
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) {
        for (std::size_t q = 0; q < funcs[i].points.size(); ++q) {
            monomials_.eval(funcs[i].points[q], v.data());
            for (int j = 0; j < n; ++j) M(i, j) += funcs[i].weights[q] * v[j];
        }
    }
    coeffs_ = M.transpose().fullPivLu().inverse();
}

std::vector<ScalarFunctional> LagrangeElement::functionals(int quad_degree) const
{
    std::vector<ScalarFunctional> out;
    for (int v = 0; v < 3; ++v) out.push_back({{reference::vertices()[v]}, {1.0}});
    const LineRule line = line_rule(functional_degree(2 * p_, quad_degree));
    for (int e = 0; e < 3; ++e) {
        for (int k = 0; k < dofs_per_edge(); ++k) {
            ScalarFunctional f;
            for (std::size_t q = 0; q < line.points.size(); ++q) {
                f.points.push_back(reference::edge_point(e, line.points[q]));
                f.weights.push_back(line.weights[q] * legendre01(k, line.points[q]));
            }
            out.push_back(std::move(f));
        }
    }
    if (dofs_interior() > 0) {
        const TriangleRule tri = triangle_rule(functional_degree(2 * p_, quad_degree));
        const MonomialBasis tb(p_ - 3);
        std::vector<double> m(tb.size());
        for (int k = 0; k < dofs_interior(); ++k) {
            ScalarFunctional f;
            for (std::size_t q = 0; q < tri.points.size(); ++q) {
                tb.eval(tri.points[q], m.data());
                double t = 0.0;
                for (int j = 0; j < tb.size(); ++j) t += interior_test_(k, j) * m[j];
                f.points.push_back(tri.points[q]);
                f.weights.push_back(tri.weights[q] * t);
            }
            out.push_back(std::move(f));
        }
    }
    return out;
}

void LagrangeElement::eval(const Vec2& x, double* values, Vec2* grads, Mat2* hessians) const
{
    const int n = num_dofs();
    double mv[128];
    Vec2 mg[128];
    Mat2 mh[128];
    monomials_.eval(x, values ? mv : nullptr, grads ? mg : nullptr, hessians ? mh : nullptr);
    for (int i = 0; i < n; ++i) {
        double v = 0.0;
        Vec2 g = Vec2::Zero();
        Mat2 h = Mat2::Zero();
        for (int j = 0; j < n; ++j) {
            const double c = coeffs_(i, j);
            if (c == 0.0) continue;
            if (values) v += c * mv[j];
            if (grads) g += c * mg[j];
            if (hessians) h += c * mh[j];
        }
        if (values) values[i] = v;
        if (grads) grads[i] = g;
        if (hessians) hessians[i] = h;
    }
}

namespace {

const std::array<Mat2, 3>& unit_tensors()
{
    static const std::array<Mat2, 3> e = {sym(1.0, 0.0, 0.0), sym(0.0, 0.0, 1.0), sym(0.0, 1.0, 0.0)};
    return e;
}

}  // namespace

HHJElement::HHJElement(int order) : r_(order), monomials_(order)
{
    HHJ_THROW_IF(order < 0, ConfigError, "HHJ order must be non-negative");
    interior_test_ = orthonormal_polynomials(r_ - 1);
    const auto funcs = functionals(2 * r_ + 2);
    const int n = num_dofs(), nm = monomials_.size();
    HHJ_THROW_IF(static_cast<int>(funcs.size()) != n, NumericError, "HHJ functional count mismatch");
    MatrixX M = MatrixX::Zero(n, n);
    std::vector<double> v(nm);
    for (int i = 0; i < n; ++i) {
        for (std::size_t q = 0; q < funcs[i].points.size(); ++q) {
            monomials_.eval(funcs[i].points[q], v.data());
            const Mat2& w = funcs[i].weights[q];
            for (int c = 0; c < 3; ++c) {
                const double wc = ddot(w, unit_tensors()[c]);
                for (int j = 0; j < nm; ++j) M(i, c * nm + j) += wc * v[j];
            }
        }
    }
    coeffs_ = M.transpose().fullPivLu().inverse();
}

std::vector<TensorFunctional> HHJElement::functionals(int quad_degree) const
{
    std::vector<TensorFunctional> out;
    const LineRule line = line_rule(functional_degree(2 * r_ + 2, quad_degree));
    for (int e = 0; e < 3; ++e) {
        const Vec2 nu = right_normal(reference::edge_vector(e));
        const Mat2 nn = nu * nu.transpose();
        for (int k = 0; k <= r_; ++k) {
            TensorFunctional f;
            for (std::size_t q = 0; q < line.points.size(); ++q) {
                f.points.push_back(reference::edge_point(e, line.points[q]));
                f.weights.push_back(line.weights[q] * legendre01(k, line.points[q]) * nn);
            }
            out.push_back(std::move(f));
        }
    }
    if (r_ >= 1) {
        const TriangleRule tri = triangle_rule(functional_degree(2 * r_ + 2, quad_degree));
        const MonomialBasis tb(r_ - 1);
        const int nt = tb.size();
        std::vector<double> m(nt);
        for (int c = 0; c < 3; ++c) {
            // Frobenius-normalized symmetric unit tensor.
            const Mat2 E = unit_tensors()[c] / std::sqrt(ddot(unit_tensors()[c], unit_tensors()[c]));
            for (int k = 0; k < nt; ++k) {
                TensorFunctional f;
                for (std::size_t q = 0; q < tri.points.size(); ++q) {
                    tb.eval(tri.points[q], m.data());
                    double t = 0.0;
                    for (int j = 0; j < nt; ++j) t += interior_test_(k, j) * m[j];
                    f.points.push_back(tri.points[q]);
                    f.weights.push_back(tri.weights[q] * t * E);
                }
                out.push_back(std::move(f));
            }
        }
    }
    return out;
}

void HHJElement::eval(const Vec2& x, Mat2* values) const
{
    const int n = num_dofs(), nm = monomials_.size();
    double mv[128];
    monomials_.eval(x, mv);
    for (int i = 0; i < n; ++i) {
        double c11 = 0.0, c22 = 0.0, c12 = 0.0;
        for (int j = 0; j < nm; ++j) {
            c11 += coeffs_(i, j) * mv[j];
            c22 += coeffs_(i, nm + j) * mv[j];
            c12 += coeffs_(i, 2 * nm + j) * mv[j];
        }
        values[i] = sym(c11, c12, c22);
    }
}

}  // namespace hhj
