#pragma once

#include "hhj/material.hpp"
#include "hhj/types.hpp"

#include <array>
#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace hhj {

// Smooth exact plate solution, defined on a neighbourhood of the domain.
// The moment is sigma = C hess(w) and the load f = div div sigma = D bilap(w).
class ManufacturedSolution {
public:
    explicit ManufacturedSolution(Material material) : material_(material) {}
    virtual ~ManufacturedSolution() = default;

    virtual std::string name() const = 0;
    // Any output pointer may be null.
    virtual void eval(const Vec2& x, double* w, Vec2* grad, Mat2* hessian) const = 0;
    virtual double bilaplacian(const Vec2& x) const = 0;

    const Material& material() const { return material_; }

    double w(const Vec2& x) const;
    Vec2 grad(const Vec2& x) const;
    Mat2 hessian(const Vec2& x) const;
    Mat2 sigma(const Vec2& x) const { return material_.C(hessian(x)); }
    double load(const Vec2& x) const { return material_.D * bilaplacian(x); }

private:
    Material material_;
};

// Radial solution w = W(rho), rho = x^2 + y^2; derivs(rho) returns W and its
// first four derivatives.
class RadialSolution : public ManufacturedSolution {
public:
    using Derivatives = std::function<std::array<double, 5>(double)>;
    RadialSolution(std::string name, Material material, Derivatives derivs);

    std::string name() const override { return name_; }
    void eval(const Vec2& x, double* w, Vec2* grad, Mat2* hessian) const override;
    double bilaplacian(const Vec2& x) const override;

private:
    std::string name_;
    Derivatives derivs_;
};

// w = sum_k c_k x^a_k y^b_k.
class PolynomialSolution : public ManufacturedSolution {
public:
    struct Term {
        double c;
        int a, b;
    };
    PolynomialSolution(Material material, std::vector<Term> terms);

    std::string name() const override { return "polynomial"; }
    void eval(const Vec2& x, double* w, Vec2* grad, Mat2* hessian) const override;
    double bilaplacian(const Vec2& x) const override;
    const std::vector<Term>& terms() const { return terms_; }

private:
    double derivative(const Vec2& x, int dx, int dy) const;
    std::vector<Term> terms_;
};

// w = sin(2 pi x) cos(2 pi y).
class TrigSolution : public ManufacturedSolution {
public:
    explicit TrigSolution(Material material) : ManufacturedSolution(material) {}
    std::string name() const override { return "sin2pix_cos2piy"; }
    void eval(const Vec2& x, double* w, Vec2* grad, Mat2* hessian) const override;
    double bilaplacian(const Vec2& x) const override;
};

// Derivatives d^k/dz^k cos(sqrt z), k = 0..4, valid for z >= 0.
std::array<double, 5> cos_sqrt_derivatives(double z);

// Cases: clamped_disk, ss_disk, clamped_three_leaf, ss_three_leaf, uniform_load.
std::unique_ptr<ManufacturedSolution> manufactured(const std::string& name, const Material& material, double q = 1.0);
// Case used by a convergence study on a built-in domain.
std::string default_case(const std::string& domain, const std::string& bc);

// Center deflections of the uniformly loaded disk: simply supported, and the
// limit of the exact solutions on inscribed polygons (Navier conditions).
struct ParadoxReference {
    double nu = 0.3;
    double q = 1.0;
    double D = 1.0;
    double w_ss0 = 0.0;
    double w_lim0 = 0.0;
};

ParadoxReference paradox_reference(double nu, double q, double D);
double paradox_w_ss(double r, double nu, double q, double D);
double paradox_w_lim(double r, double q, double D);

}  // namespace hhj
