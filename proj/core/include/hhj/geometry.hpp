#pragma once

#include "hhj/types.hpp"

#include <memory>
#include <string>
#include <vector>

namespace hhj {

enum class BoundaryCondition { clamped, simply_supported };

std::string to_string(BoundaryCondition bc);
BoundaryCondition boundary_condition_from_string(const std::string& s);

// Smooth parametrized curve piece. Derivatives are with respect to the
// chart parameter t in [t_begin, t_end].
class Chart {
public:
    virtual ~Chart() = default;

    virtual double t_begin() const = 0;
    virtual double t_end() const = 0;
    // Closed curves accept any t and wrap it into the parameter range.
    virtual bool periodic() const { return false; }
    virtual std::string kind() const = 0;

    // k-th derivative, 0 <= k <= 4, without range checks.
    virtual Vec2 derivative_unchecked(double t, int k) const = 0;

    Vec2 eval(double t) const { return derivative(t, 0); }
    Vec2 derivative(double t, int k) const;
    double wrap(double t) const;
};

class CircleArc final : public Chart {
public:
    CircleArc(Vec2 center, double radius, double angle0, double angle1);

    double t_begin() const override { return a0_; }
    double t_end() const override { return a1_; }
    bool periodic() const override;
    std::string kind() const override { return "circle_arc"; }
    Vec2 derivative_unchecked(double t, int k) const override;

    const Vec2& center() const { return c_; }
    double radius() const { return r_; }

private:
    Vec2 c_;
    double r_, a0_, a1_;
};

// Closed curve given by a finite Fourier series on [0, 2 pi].
class FourierCurve final : public Chart {
public:
    struct Term {
        int k;
        double ax, bx, ay, by;  // x += ax cos kt + bx sin kt, likewise y
    };

    explicit FourierCurve(std::vector<Term> terms, std::string name = "fourier");

    double t_begin() const override { return 0.0; }
    double t_end() const override;
    bool periodic() const override { return true; }
    std::string kind() const override { return name_; }
    Vec2 derivative_unchecked(double t, int k) const override;

    const std::vector<Term>& terms() const { return terms_; }

private:
    std::vector<Term> terms_;
    std::string name_;
};

// x(t) = sum_i cx[i] t^i, y(t) = sum_i cy[i] t^i on [t0, t1].
class PolynomialCurve final : public Chart {
public:
    PolynomialCurve(std::vector<double> cx, std::vector<double> cy, double t0, double t1);

    double t_begin() const override { return t0_; }
    double t_end() const override { return t1_; }
    std::string kind() const override { return "polynomial"; }
    Vec2 derivative_unchecked(double t, int k) const override;

    const std::vector<double>& cx() const { return cx_; }
    const std::vector<double>& cy() const { return cy_; }

private:
    std::vector<double> cx_, cy_;
    double t0_, t1_;
};

// The three-leaf boundary
//   x = (1 + 0.4 cos 3t) cos t,  y = (1 + (0.4 + 0.22 sin t) cos 3t) sin t.
std::shared_ptr<const Chart> make_three_leaf_chart();

struct BoundarySegment {
    std::shared_ptr<const Chart> chart;
    double t0 = 0.0;
    double t1 = 0.0;
    BoundaryCondition bc = BoundaryCondition::clamped;
};

// Closed, counter-clockwise boundary made of chart segments. Consecutive
// segments meet at corners; a single periodic segment has none.
class Domain {
public:
    Domain(std::string name, std::vector<BoundarySegment> segments);

    const std::string& name() const { return name_; }
    const std::vector<BoundarySegment>& segments() const { return segments_; }
    std::size_t num_segments() const { return segments_.size(); }

    Vec2 eval(int segment, double t) const;
    Vec2 derivative(int segment, double t, int k) const;

    // Global parameter: segment i covers [offset(i), offset(i+1)).
    double parameter_length() const;
    Vec2 eval_global(double tau, bool wrap = true) const;

    // Dense-sampling estimates.
    std::array<double, 4> bounding_box(int samples_per_segment = 4000) const;  // xmin,xmax,ymin,ymax
    double perimeter(int samples_per_segment = 4000) const;
    double signed_area(int samples_per_segment = 4000) const;

    bool has_clamped() const;
    bool has_simply_supported() const;
    std::shared_ptr<Domain> with_bc(BoundaryCondition bc) const;

private:
    std::string name_;
    std::vector<BoundarySegment> segments_;
    std::vector<double> offsets_;
};

// "disk" (unit circle) or "three_leaf".
std::shared_ptr<const Domain> builtin_domain(const std::string& name, BoundaryCondition bc);

// Polygon through the given counter-clockwise corners, one straight segment per side.
std::shared_ptr<const Domain> polygon_domain(const std::string& name, const std::vector<Vec2>& corners,
                                             BoundaryCondition bc);

// Parses either a builtin name or a table of chart primitives:
// {"name":..., "bc":..., "segments":[{"type":"circle_arc","center":[..],"radius":..,
//  "angles":[a0,a1]}, {"type":"polynomial","x":[..],"y":[..],"t":[t0,t1],"bc":..}]}
std::shared_ptr<const Domain> domain_from_json(const std::string& json_text);
std::string domain_to_json(const Domain& d);

}  // namespace hhj
