#pragma once

#include "hhj/types.hpp"

namespace hhj {

// Isotropic plate: C tau = D[(1-nu) tau + nu tr(tau) I], K = C^{-1}.
struct Material {
    double D = 1.0;
    double nu = 0.3;

    void validate() const;

    Mat2 C(const Mat2& tau) const
    {
        return D * ((1.0 - nu) * tau + nu * tau.trace() * Mat2::Identity());
    }

    Mat2 K(const Mat2& tau) const
    {
        return (1.0 / D) * (tau / (1.0 - nu) - nu * tau.trace() / (1.0 - nu * nu) * Mat2::Identity());
    }
};

}  // namespace hhj
