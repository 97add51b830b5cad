#include "hhj/solutions.hpp"

#include "hhj/error.hpp"

#include <cmath>
#include <numbers>

namespace hhj {

double ManufacturedSolution::w(const Vec2& x) const
{
    double v;
    eval(x, &v, nullptr, nullptr);
    return v;
}

Vec2 ManufacturedSolution::grad(const Vec2& x) const
{
    Vec2 g;
    eval(x, nullptr, &g, nullptr);
    return g;
}

Mat2 ManufacturedSolution::hessian(const Vec2& x) const
{
    Mat2 h;
    eval(x, nullptr, nullptr, &h);
    return h;
}

RadialSolution::RadialSolution(std::string name, Material material, Derivatives derivs)
    : ManufacturedSolution(material), name_(std::move(name)), derivs_(std::move(derivs))
{
}

void RadialSolution::eval(const Vec2& x, double* w, Vec2* grad, Mat2* hessian) const
{
    const auto W = derivs_(x.squaredNorm());
    if (w) *w = W[0];
    if (grad) *grad = 2.0 * W[1] * x;
    if (hessian) *hessian = 2.0 * W[1] * Mat2::Identity() + 4.0 * W[2] * x * x.transpose();
}

double RadialSolution::bilaplacian(const Vec2& x) const
{
    const double rho = x.squaredNorm();
    const auto W = derivs_(rho);
    return 32.0 * W[2] + 64.0 * rho * W[3] + 16.0 * rho * rho * W[4];
}

PolynomialSolution::PolynomialSolution(Material material, std::vector<Term> terms)
    : ManufacturedSolution(material), terms_(std::move(terms))
{
    for (const auto& t : terms_) HHJ_THROW_IF(t.a < 0 || t.b < 0, ConfigError, "negative polynomial exponent");
}

double PolynomialSolution::derivative(const Vec2& x, int dx, int dy) const
{
    double s = 0.0;
    for (const auto& t : terms_) {
        if (t.a < dx || t.b < dy) continue;
        double c = t.c;
        for (int i = 0; i < dx; ++i) c *= t.a - i;
        for (int i = 0; i < dy; ++i) c *= t.b - i;
        s += c * std::pow(x.x(), t.a - dx) * std::pow(x.y(), t.b - dy);
    }
    return s;
}

void PolynomialSolution::eval(const Vec2& x, double* w, Vec2* grad, Mat2* hessian) const
{
    if (w) *w = derivative(x, 0, 0);
    if (grad) *grad = Vec2(derivative(x, 1, 0), derivative(x, 0, 1));
    if (hessian) *hessian = sym(derivative(x, 2, 0), derivative(x, 1, 1), derivative(x, 0, 2));
}

double PolynomialSolution::bilaplacian(const Vec2& x) const
{
    return derivative(x, 4, 0) + 2.0 * derivative(x, 2, 2) + derivative(x, 0, 4);
}

void TrigSolution::eval(const Vec2& x, double* w, Vec2* grad, Mat2* hessian) const
{
    const double k = 2.0 * std::numbers::pi;
    const double sx = std::sin(k * x.x()), cx = std::cos(k * x.x());
    const double sy = std::sin(k * x.y()), cy = std::cos(k * x.y());
    if (w) *w = sx * cy;
    if (grad) *grad = k * Vec2(cx * cy, -sx * sy);
    if (hessian) *hessian = -k * k * sym(sx * cy, cx * sy, sx * cy);
}

double TrigSolution::bilaplacian(const Vec2& x) const
{
    const double k = 2.0 * std::numbers::pi;
    return 4.0 * k * k * k * k * std::sin(k * x.x()) * std::cos(k * x.y());
}

namespace {

// g_n(s) = j_n(s) / s^n for n = -1..3, with j_{-1}(s) = cos(s) / s.
std::array<double, 5> scaled_bessel(double s)
{
    std::array<double, 5> g{};
    g[0] = std::cos(s);
    if (s < 4.0) {
        const double x = -0.5 * s * s;
        for (int n = 0; n <= 3; ++n) {
            double dfact = 1.0;  // (2n+1)!!
            for (int i = 3; i <= 2 * n + 1; i += 2) dfact *= i;
            double term = 1.0 / dfact, sum = term;
            for (int k = 1; k < 60; ++k) {
                term *= x / (k * (2.0 * n + 2.0 * k + 1.0));
                sum += term;
                if (std::abs(term) < 1e-18 * std::abs(sum)) break;
            }
            g[n + 1] = sum;
        }
    } else {
        g[1] = std::sin(s) / s;
        for (int n = 0; n < 3; ++n) g[n + 2] = ((2.0 * n + 1.0) * g[n + 1] - g[n]) / (s * s);
    }
    return g;
}

}  // namespace

std::array<double, 5> cos_sqrt_derivatives(double z)
{
    HHJ_THROW_IF(z < 0.0, NumericError, "cos(sqrt z) derivatives need z >= 0");
    const auto g = scaled_bessel(std::sqrt(z));
    std::array<double, 5> out{};
    double f = 1.0;
    for (int k = 0; k <= 4; ++k) {
        out[k] = f * g[k];
        f *= -0.5;
    }
    return out;
}

std::unique_ptr<ManufacturedSolution> manufactured(const std::string& name, const Material& material, double q)
{
    const double pi = std::numbers::pi;
    if (name == "clamped_disk") {
        // sin^2(pi r) = (1 - cos(sqrt(4 pi^2 rho))) / 2
        return std::make_unique<RadialSolution>(name, material, [pi](double rho) {
            const double a = 4.0 * pi * pi;
            const auto c = cos_sqrt_derivatives(a * rho);
            std::array<double, 5> W{};
            double f = 1.0;
            for (int k = 0; k <= 4; ++k) {
                W[k] = -0.5 * f * c[k];
                f *= a;
            }
            W[0] += 0.5;
            return W;
        });
    }
    if (name == "ss_disk") {
        // cos(3 pi r / 2) = cos(sqrt(9 pi^2 rho / 4))
        return std::make_unique<RadialSolution>(name, material, [pi](double rho) {
            const double a = 2.25 * pi * pi;
            const auto c = cos_sqrt_derivatives(a * rho);
            std::array<double, 5> W{};
            double f = 1.0;
            for (int k = 0; k <= 4; ++k) {
                W[k] = f * c[k];
                f *= a;
            }
            return W;
        });
    }
    if (name == "clamped_three_leaf" || name == "ss_three_leaf") return std::make_unique<TrigSolution>(material);
    if (name == "uniform_load") {
        // q/(64D) (1 - rho)(c - rho), c = (5 + nu)/(1 + nu)
        const double s = q / (64.0 * material.D);
        const double c = (5.0 + material.nu) / (1.0 + material.nu);
        return std::make_unique<RadialSolution>(name, material, [s, c](double rho) {
            return std::array<double, 5>{s * (rho * rho - (1.0 + c) * rho + c), s * (2.0 * rho - 1.0 - c), 2.0 * s, 0.0,
                                         0.0};
        });
    }
    throw ConfigError("unknown manufactured solution '" + name + "'");
}

std::string default_case(const std::string& domain, const std::string& bc)
{
    const std::string prefix = bc == "clamped" ? "clamped_" : bc == "simply_supported" ? "ss_" : "";
    HHJ_THROW_IF(prefix.empty(), ConfigError, "unknown boundary condition '" + bc + "'");
    HHJ_THROW_IF(domain != "disk" && domain != "three_leaf", ConfigError, "unknown domain '" + domain + "'");
    return prefix + domain;
}

double paradox_w_ss(double r, double nu, double q, double D)
{
    const double rho = r * r;
    return q * (1.0 - rho) / (64.0 * D) * ((5.0 + nu) / (1.0 + nu) - rho);
}

double paradox_w_lim(double r, double q, double D)
{
    const double rho = r * r;
    return q / (64.0 * D) * (rho * rho - 4.0 * rho + 3.0);
}

ParadoxReference paradox_reference(double nu, double q, double D)
{
    HHJ_THROW_IF(!(nu > -1.0 && nu < 1.0), ConfigError, "Poisson ratio must lie in (-1, 1)");
    HHJ_THROW_IF(!(q > 0.0 && D > 0.0), ConfigError, "load and bending modulus must be positive");
    ParadoxReference p;
    p.nu = nu;
    p.q = q;
    p.D = D;
    p.w_ss0 = paradox_w_ss(0.0, nu, q, D);
    p.w_lim0 = paradox_w_lim(0.0, q, D);
    return p;
}

}  // namespace hhj
