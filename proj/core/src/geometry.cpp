#include "hhj/geometry.hpp"

#include "hhj/error.hpp"
#include "hhj/material.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <numbers>
#include <sstream>

namespace hhj {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double trig_derivative(bool is_cos, double k, double t, int order)
{
    // d^n/dt^n cos(kt) = k^n cos(kt + n pi/2), same shift for sin.
    const double phase = k * t + order * std::numbers::pi / 2.0;
    return std::pow(k, order) * (is_cos ? std::cos(phase) : std::sin(phase));
}

double poly_derivative(const std::vector<double>& c, double t, int k)
{
    double result = 0.0;
    for (int i = static_cast<int>(c.size()) - 1; i >= k; --i) {
        double f = 1.0;
        for (int j = 0; j < k; ++j) f *= (i - j);
        result = result * t + f * c[i];
    }
    return result;
}

}  // namespace

std::string to_string(BoundaryCondition bc)
{
    return bc == BoundaryCondition::clamped ? "clamped" : "simply_supported";
}

BoundaryCondition boundary_condition_from_string(const std::string& s)
{
    if (s == "clamped") return BoundaryCondition::clamped;
    if (s == "simply_supported" || s == "simply-supported" || s == "ss") return BoundaryCondition::simply_supported;
    throw ConfigError("unknown boundary condition '" + s + "'");
}

double Chart::wrap(double t) const
{
    const double a = t_begin(), b = t_end(), len = b - a;
    const double tol = 1e-12 * std::max(1.0, std::abs(len));
    if (t >= a - tol && t <= b + tol) return t;
    if (!periodic()) {
        std::ostringstream os;
        os << "chart parameter " << t << " outside [" << a << ", " << b << "]";
        throw DomainError(os.str());
    }
    return a + (t - a) - len * std::floor((t - a) / len);
}

Vec2 Chart::derivative(double t, int k) const
{
    HHJ_THROW_IF(k < 0 || k > 4, ConfigError, "chart derivative order must be in [0, 4]");
    return derivative_unchecked(wrap(t), k);
}

CircleArc::CircleArc(Vec2 center, double radius, double angle0, double angle1)
    : c_(std::move(center)), r_(radius), a0_(angle0), a1_(angle1)
{
    HHJ_THROW_IF(!(radius > 0.0), ConfigError, "circle arc radius must be positive");
    HHJ_THROW_IF(!(angle1 > angle0), ConfigError, "circle arc needs angle1 > angle0");
    HHJ_THROW_IF(angle1 - angle0 > kTwoPi * (1 + 1e-14), ConfigError, "circle arc spans more than a full turn");
}

bool CircleArc::periodic() const { return std::abs(a1_ - a0_ - kTwoPi) < 1e-12; }

Vec2 CircleArc::derivative_unchecked(double t, int k) const
{
    Vec2 d(trig_derivative(true, 1.0, t, k), trig_derivative(false, 1.0, t, k));
    d *= r_;
    if (k == 0) d += c_;
    return d;
}

FourierCurve::FourierCurve(std::vector<Term> terms, std::string name) : terms_(std::move(terms)), name_(std::move(name))
{
    HHJ_THROW_IF(terms_.empty(), ConfigError, "Fourier curve without terms");
}

double FourierCurve::t_end() const { return kTwoPi; }

Vec2 FourierCurve::derivative_unchecked(double t, int k) const
{
    Vec2 d = Vec2::Zero();
    for (const auto& term : terms_) {
        const double c = trig_derivative(true, term.k, t, k);
        const double s = trig_derivative(false, term.k, t, k);
        if (term.k == 0 && k > 0) continue;
        d.x() += term.ax * c + term.bx * s;
        d.y() += term.ay * c + term.by * s;
    }
    return d;
}

PolynomialCurve::PolynomialCurve(std::vector<double> cx, std::vector<double> cy, double t0, double t1)
    : cx_(std::move(cx)), cy_(std::move(cy)), t0_(t0), t1_(t1)
{
    HHJ_THROW_IF(cx_.empty() || cy_.empty(), ConfigError, "polynomial curve needs coefficients");
    HHJ_THROW_IF(!(t1 > t0), ConfigError, "polynomial curve needs t1 > t0");
}

Vec2 PolynomialCurve::derivative_unchecked(double t, int k) const
{
    return Vec2(poly_derivative(cx_, t, k), poly_derivative(cy_, t, k));
}

std::shared_ptr<const Chart> make_three_leaf_chart()
{
    // Product-to-sum expansion of the closed form:
    //   x = cos t + 0.2 cos 4t + 0.2 cos 2t
    //   y = sin t + 0.2 sin 4t - 0.2 sin 2t + 0.11 cos 3t - 0.055 cos 5t - 0.055 cos t
    std::vector<FourierCurve::Term> terms = {
        {1, 1.0, 0.0, -0.055, 1.0},
        {2, 0.2, 0.0, 0.0, -0.2},
        {3, 0.0, 0.0, 0.11, 0.0},
        {4, 0.2, 0.0, 0.0, 0.2},
        {5, 0.0, 0.0, -0.055, 0.0},
    };
    return std::make_shared<FourierCurve>(std::move(terms), "three_leaf");
}

Domain::Domain(std::string name, std::vector<BoundarySegment> segments)
    : name_(std::move(name)), segments_(std::move(segments))
{
    HHJ_THROW_IF(segments_.empty(), ConfigError, "domain without boundary segments");
    offsets_.push_back(0.0);
    for (const auto& s : segments_) {
        HHJ_THROW_IF(!s.chart, ConfigError, "boundary segment without chart");
        HHJ_THROW_IF(!(s.t1 > s.t0), ConfigError, "boundary segment needs t1 > t0");
        s.chart->wrap(s.t0);
        s.chart->wrap(s.t1);
        offsets_.push_back(offsets_.back() + (s.t1 - s.t0));
    }
    // Consecutive segments must join up.
    const std::size_t n = segments_.size();
    for (std::size_t i = 0; i < n; ++i) {
        const auto& a = segments_[i];
        const auto& b = segments_[(i + 1) % n];
        const Vec2 pa = a.chart->eval(a.t1), pb = b.chart->eval(b.t0);
        HHJ_THROW_IF((pa - pb).norm() > 1e-10, ConfigError, "boundary segments of '" + name_ + "' do not form a closed curve");
    }
    HHJ_THROW_IF(signed_area(400) <= 0.0, ConfigError, "boundary of '" + name_ + "' is not counter-clockwise");
}

Vec2 Domain::eval(int segment, double t) const { return derivative(segment, t, 0); }

Vec2 Domain::derivative(int segment, double t, int k) const
{
    HHJ_THROW_IF(segment < 0 || segment >= static_cast<int>(segments_.size()), ConfigError, "segment index out of range");
    return segments_[segment].chart->derivative(t, k);
}

double Domain::parameter_length() const { return offsets_.back(); }

Vec2 Domain::eval_global(double tau, bool wrap) const
{
    const double len = parameter_length();
    if (tau < 0.0 || tau > len) {
        HHJ_THROW_IF(!wrap, DomainError, "global boundary parameter outside domain");
        tau -= len * std::floor(tau / len);
    }
    std::size_t i = 0;
    while (i + 1 < segments_.size() && tau >= offsets_[i + 1]) ++i;
    const auto& s = segments_[i];
    return s.chart->eval(std::min(s.t0 + (tau - offsets_[i]), s.t1));
}

std::array<double, 4> Domain::bounding_box(int samples) const
{
    std::array<double, 4> box = {1e300, -1e300, 1e300, -1e300};
    for (const auto& s : segments_) {
        for (int i = 0; i <= samples; ++i) {
            const Vec2 p = s.chart->eval(s.t0 + (s.t1 - s.t0) * i / samples);
            box[0] = std::min(box[0], p.x());
            box[1] = std::max(box[1], p.x());
            box[2] = std::min(box[2], p.y());
            box[3] = std::max(box[3], p.y());
        }
    }
    return box;
}

double Domain::perimeter(int samples) const
{
    double len = 0.0;
    for (const auto& s : segments_) {
        Vec2 prev = s.chart->eval(s.t0);
        for (int i = 1; i <= samples; ++i) {
            const Vec2 p = s.chart->eval(s.t0 + (s.t1 - s.t0) * i / samples);
            len += (p - prev).norm();
            prev = p;
        }
    }
    return len;
}

double Domain::signed_area(int samples) const
{
    double a = 0.0;
    for (const auto& s : segments_) {
        Vec2 prev = s.chart->eval(s.t0);
        for (int i = 1; i <= samples; ++i) {
            const Vec2 p = s.chart->eval(s.t0 + (s.t1 - s.t0) * i / samples);
            a += 0.5 * cross(prev, p);
            prev = p;
        }
    }
    return a;
}

bool Domain::has_clamped() const
{
    for (const auto& s : segments_)
        if (s.bc == BoundaryCondition::clamped) return true;
    return false;
}

bool Domain::has_simply_supported() const
{
    for (const auto& s : segments_)
        if (s.bc == BoundaryCondition::simply_supported) return true;
    return false;
}

std::shared_ptr<Domain> Domain::with_bc(BoundaryCondition bc) const
{
    auto segs = segments_;
    for (auto& s : segs) s.bc = bc;
    return std::make_shared<Domain>(name_, std::move(segs));
}

std::shared_ptr<const Domain> builtin_domain(const std::string& name, BoundaryCondition bc)
{
    if (name == "disk") {
        auto chart = std::make_shared<CircleArc>(Vec2(0.0, 0.0), 1.0, 0.0, kTwoPi);
        return std::make_shared<Domain>(name, std::vector<BoundarySegment>{{chart, 0.0, kTwoPi, bc}});
    }
    if (name == "three_leaf") {
        return std::make_shared<Domain>(name, std::vector<BoundarySegment>{{make_three_leaf_chart(), 0.0, kTwoPi, bc}});
    }
    throw ConfigError("unknown domain '" + name + "' (expected disk or three_leaf)");
}

std::shared_ptr<const Domain> polygon_domain(const std::string& name, const std::vector<Vec2>& corners,
                                             BoundaryCondition bc)
{
    HHJ_THROW_IF(corners.size() < 3, ConfigError, "polygon needs at least three corners");
    std::vector<BoundarySegment> segs;
    for (std::size_t i = 0; i < corners.size(); ++i) {
        const Vec2& a = corners[i];
        const Vec2& b = corners[(i + 1) % corners.size()];
        auto chart = std::make_shared<PolynomialCurve>(std::vector<double>{a.x(), b.x() - a.x()},
                                                       std::vector<double>{a.y(), b.y() - a.y()}, 0.0, 1.0);
        segs.push_back({chart, 0.0, 1.0, bc});
    }
    return std::make_shared<Domain>(name, std::move(segs));
}

std::shared_ptr<const Domain> domain_from_json(const std::string& json_text)
{
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed domain JSON: ") + e.what());
    }
    try {
        const std::string name = j.at("name").get<std::string>();
        const BoundaryCondition bc = boundary_condition_from_string(j.value("bc", std::string("clamped")));
        if (!j.contains("segments")) return builtin_domain(name, bc);

        std::vector<BoundarySegment> segs;
        for (const auto& s : j.at("segments")) {
            const std::string type = s.at("type").get<std::string>();
            const BoundaryCondition sbc =
                s.contains("bc") ? boundary_condition_from_string(s.at("bc").get<std::string>()) : bc;
            if (type == "circle_arc") {
                const auto c = s.at("center").get<std::vector<double>>();
                const auto a = s.at("angles").get<std::vector<double>>();
                HHJ_THROW_IF(c.size() != 2 || a.size() != 2, ConfigError, "circle_arc needs center[2] and angles[2]");
                auto chart = std::make_shared<CircleArc>(Vec2(c[0], c[1]), s.at("radius").get<double>(), a[0], a[1]);
                segs.push_back({chart, a[0], a[1], sbc});
            } else if (type == "polynomial") {
                const auto t = s.value("t", std::vector<double>{0.0, 1.0});
                HHJ_THROW_IF(t.size() != 2, ConfigError, "polynomial segment needs t[2]");
                auto chart = std::make_shared<PolynomialCurve>(s.at("x").get<std::vector<double>>(),
                                                               s.at("y").get<std::vector<double>>(), t[0], t[1]);
                segs.push_back({chart, t[0], t[1], sbc});
            } else if (type == "three_leaf") {
                segs.push_back({make_three_leaf_chart(), 0.0, kTwoPi, sbc});
            } else {
                throw ConfigError("unknown chart primitive '" + type + "'");
            }
        }
        return std::make_shared<Domain>(name, std::move(segs));
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("invalid domain JSON: ") + e.what());
    }
}

std::string domain_to_json(const Domain& d)
{
    nlohmann::json j;
    j["name"] = d.name();
    nlohmann::json segs = nlohmann::json::array();
    for (const auto& s : d.segments()) {
        nlohmann::json js;
        js["bc"] = to_string(s.bc);
        if (auto* c = dynamic_cast<const CircleArc*>(s.chart.get())) {
            js["type"] = "circle_arc";
            js["center"] = {c->center().x(), c->center().y()};
            js["radius"] = c->radius();
            js["angles"] = {s.t0, s.t1};
        } else if (auto* p = dynamic_cast<const PolynomialCurve*>(s.chart.get())) {
            js["type"] = "polynomial";
            js["x"] = p->cx();
            js["y"] = p->cy();
            js["t"] = {s.t0, s.t1};
        } else if (s.chart->kind() == "three_leaf") {
            js["type"] = "three_leaf";
        } else {
            throw ConfigError("chart kind '" + s.chart->kind() + "' has no JSON form");
        }
        segs.push_back(js);
    }
    j["segments"] = segs;
    return j.dump();
}

void Material::validate() const
{
    HHJ_THROW_IF(!(D > 0.0) || !std::isfinite(D), ConfigError, "flexural rigidity D must be positive");
    HHJ_THROW_IF(!(nu > -1.0 && nu < 1.0), ConfigError, "Poisson ratio must lie in (-1, 1)");
}

}  // namespace hhj
