#include "hhj/quadrature.hpp"

#include "hhj/error.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

namespace hhj {

namespace {

// Jacobi polynomial P_n^{(a,0)} and its derivative at x in (-1, 1).
void jacobi(int n, double a, double x, double& p, double& dp)
{
    double p0 = 1.0, p1 = 0.5 * (a + 2.0) * x + 0.5 * a;
    if (n == 0) {
        p = 1.0;
        dp = 0.0;
        return;
    }
    for (int k = 2; k <= n; ++k) {
        const double a1 = 2.0 * k * (k + a) * (2.0 * k + a - 2.0);
        const double a2 = (2.0 * k + a - 1.0) * a * a;
        const double a3 = (2.0 * k + a - 2.0) * (2.0 * k + a - 1.0) * (2.0 * k + a);
        const double a4 = 2.0 * (k + a - 1.0) * (k - 1.0) * (2.0 * k + a);
        const double p2 = ((a2 + a3 * x) * p1 - a4 * p0) / a1;
        p0 = p1;
        p1 = p2;
    }
    p = p1;
    // (2n + a)(1 - x^2) P_n' = n (a - (2n + a) x) P_n + 2 n (n + a) P_{n-1}
    dp = n * ((a - (2.0 * n + a) * x) * p1 + 2.0 * (n + a) * p0) / ((2.0 * n + a) * (1.0 - x * x));
}

LineRule compute_gauss_jacobi(int n, int alpha)
{
    HHJ_THROW_IF(n < 1, ConfigError, "quadrature needs at least one point");
    const double a = alpha;
    // Golub-Welsch for starting values, then Newton polishing.
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(n, n);
    for (int k = 0; k < n; ++k) {
        const double s = 2.0 * k + a;
        T(k, k) = (k == 0) ? -a / (a + 2.0) : (-a * a) / (s * (s + 2.0));
        if (k + 1 < n) {
            const double kk = k + 1.0;
            const double s1 = 2.0 * kk + a;
            const double b = std::sqrt(4.0 * kk * (kk + a) * kk * (kk + a) / (s1 * s1 * (s1 * s1 - 1.0)));
            T(k, k + 1) = T(k + 1, k) = b;
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(T);
    LineRule rule;
    rule.degree = 2 * n - 1;
    const double norm = (alpha == 0) ? 2.0 : 4.0;  // 2^{a+1}, weight-independent factor below
    for (int i = 0; i < n; ++i) {
        double x = eig.eigenvalues()(i), p = 0.0, dp = 0.0;
        for (int it = 0; it < 8; ++it) {
            jacobi(n, a, x, p, dp);
            const double dx = p / dp;
            x -= dx;
            if (std::abs(dx) < 1e-17) break;
        }
        jacobi(n, a, x, p, dp);
        // w = 2^{a+1} Gamma(n+a+1) Gamma(n+1) / (Gamma(n+a+1) n!) / ((1-x^2) P'^2) with beta = 0.
        const double w = norm / ((1.0 - x * x) * dp * dp);
        // Map from [-1,1] with weight (1-x)^a to [0,1] with weight (1-u)^a.
        rule.points.push_back(0.5 * (1.0 + x));
        rule.weights.push_back(w / std::pow(2.0, a + 1.0));
    }
    return rule;
}

}  // namespace

LineRule gauss_jacobi(int n, int alpha)
{
    HHJ_THROW_IF(alpha < 0 || alpha > 1, ConfigError, "gauss_jacobi supports alpha in {0, 1}");
    static std::mutex mutex;
    static std::map<std::pair<int, int>, LineRule> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find({n, alpha});
    if (it != cache.end()) return it->second;
    return cache.emplace(std::make_pair(n, alpha), compute_gauss_jacobi(n, alpha)).first->second;
}

LineRule gauss_legendre(int n) { return gauss_jacobi(n, 0); }

LineRule line_rule(int degree)
{
    HHJ_THROW_IF(degree < 0, ConfigError, "quadrature degree must be non-negative");
    return gauss_legendre(degree / 2 + 1);
}

TriangleRule triangle_rule(int degree)
{
    HHJ_THROW_IF(degree < 0, ConfigError, "quadrature degree must be non-negative");
    const int n = degree / 2 + 1;
    const LineRule gu = gauss_jacobi(n, 1);
    const LineRule gv = gauss_legendre(n);
    TriangleRule rule;
    rule.degree = 2 * n - 1;
    // x = u, y = (1-u) v, dx dy = (1-u) du dv; the (1-u) factor is in gu's weight.
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double u = gu.points[i], v = gv.points[j];
            rule.points.emplace_back(u, (1.0 - u) * v);
            rule.weights.push_back(gu.weights[i] * gv.weights[j]);
        }
    }
    return rule;
}

}  // namespace hhj
