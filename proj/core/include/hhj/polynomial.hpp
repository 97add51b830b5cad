#pragma once

#include "hhj/types.hpp"

#include <array>
#include <vector>

namespace hhj {

// Monomials x^i y^j with i + j <= degree, ordered by total degree, then by j.
class MonomialBasis {
public:
    explicit MonomialBasis(int degree);

    int degree() const { return degree_; }
    int size() const { return static_cast<int>(exps_.size()); }
    const std::vector<std::array<int, 2>>& exponents() const { return exps_; }

    // Any output pointer may be null; arrays must hold size() entries.
    void eval(const Vec2& x, double* values, Vec2* grads = nullptr, Mat2* hessians = nullptr) const;

private:
    int degree_;
    std::vector<std::array<int, 2>> exps_;
};

inline int poly_dim(int degree) { return degree < 0 ? 0 : (degree + 1) * (degree + 2) / 2; }

// Shifted Legendre polynomial P_k(2s - 1) on [0, 1].
double legendre01(int k, double s);

}  // namespace hhj
