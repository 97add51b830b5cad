#include "hhj/polynomial.hpp"

#include "hhj/error.hpp"

#include <cmath>

namespace hhj {

MonomialBasis::MonomialBasis(int degree) : degree_(degree)
{
    HHJ_THROW_IF(degree < 0, ConfigError, "polynomial degree must be non-negative");
    for (int d = 0; d <= degree; ++d)
        for (int j = 0; j <= d; ++j) exps_.push_back({d - j, j});
}

void MonomialBasis::eval(const Vec2& x, double* values, Vec2* grads, Mat2* hessians) const
{
    const int p = degree_;
    // Powers up to degree p.
    double px[16], py[16];
    HHJ_THROW_IF(p > 14, ConfigError, "polynomial degree above 14 not supported");
    px[0] = py[0] = 1.0;
    for (int k = 1; k <= p; ++k) {
        px[k] = px[k - 1] * x.x();
        py[k] = py[k - 1] * x.y();
    }
    auto pw = [](const double* a, int k) { return k < 0 ? 0.0 : a[k]; };
    for (std::size_t n = 0; n < exps_.size(); ++n) {
        const int i = exps_[n][0], j = exps_[n][1];
        if (values) values[n] = px[i] * py[j];
        if (grads) grads[n] = Vec2(i * pw(px, i - 1) * py[j], j * px[i] * pw(py, j - 1));
        if (hessians) {
            const double hxx = i * (i - 1) * pw(px, i - 2) * py[j];
            const double hxy = i * j * pw(px, i - 1) * pw(py, j - 1);
            const double hyy = j * (j - 1) * px[i] * pw(py, j - 2);
            hessians[n] = sym(hxx, hxy, hyy);
        }
    }
}

double legendre01(int k, double s)
{
    const double x = 2.0 * s - 1.0;
    if (k == 0) return 1.0;
    double p0 = 1.0, p1 = x;
    for (int n = 2; n <= k; ++n) {
        const double p2 = ((2.0 * n - 1.0) * x * p1 - (n - 1.0) * p0) / n;
        p0 = p1;
        p1 = p2;
    }
    return p1;
}

}  // namespace hhj
