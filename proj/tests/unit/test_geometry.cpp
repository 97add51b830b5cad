#include "hhj/error.hpp"
#include "hhj/geometry.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace hhj;

namespace {

// Central differences of order 4 for the k-th derivative from the (k-1)-th.
Vec2 fd(const Chart& c, double t, int k)
{
    const double h = 1e-3;
    return (-c.derivative(t + 2 * h, k - 1) + 8.0 * c.derivative(t + h, k - 1) - 8.0 * c.derivative(t - h, k - 1) +
            c.derivative(t - 2 * h, k - 1)) /
           (12.0 * h);
}

}  // namespace

TEST(Geometry, ChartDerivativesMatchFiniteDifferences)
{
    const CircleArc arc(Vec2(0.3, -0.2), 1.7, 0.0, 2 * std::numbers::pi);
    const auto leaf = make_three_leaf_chart();
    const PolynomialCurve poly({0.1, 1.0, -0.5, 0.25}, {0.0, 0.3, 0.7, -0.1}, -1.0, 2.0);
    for (const Chart* c : {static_cast<const Chart*>(&arc), leaf.get(), static_cast<const Chart*>(&poly)})
        for (double t : {0.1, 0.77, 1.3})
            for (int k = 1; k <= 4; ++k)
                EXPECT_LT((c->derivative(t, k) - fd(*c, t, k)).norm(), 1e-7 * (1 + c->derivative(t, k).norm()))
                    << c->kind() << " t=" << t << " k=" << k;
}

TEST(Geometry, ThreeLeafFormulaAndBoundingBox)
{
    const auto leaf = make_three_leaf_chart();
    double xmin = 1e9, xmax = -1e9, ymin = 1e9, ymax = -1e9;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double t = 2 * std::numbers::pi * i / n;
        const double x = (1 + 0.4 * std::cos(3 * t)) * std::cos(t);
        const double y = (1 + (0.4 + 0.22 * std::sin(t)) * std::cos(3 * t)) * std::sin(t);
        if (i % 997 == 0) EXPECT_LT((leaf->eval(t) - Vec2(x, y)).norm(), 1e-14);
        xmin = std::min(xmin, x), xmax = std::max(xmax, x), ymin = std::min(ymin, y), ymax = std::max(ymax, y);
    }
    const auto box = builtin_domain("three_leaf", BoundaryCondition::clamped)->bounding_box();
    EXPECT_NEAR(box[0], xmin, 1e-5);
    EXPECT_NEAR(box[1], xmax, 1e-5);
    EXPECT_NEAR(box[2], ymin, 1e-5);
    EXPECT_NEAR(box[3], ymax, 1e-5);
    EXPECT_NEAR(xmax, 1.4, 1e-12);
}

TEST(Geometry, DiskMeasures)
{
    const auto d = builtin_domain("disk", BoundaryCondition::simply_supported);
    EXPECT_NEAR(d->perimeter(), 2 * std::numbers::pi, 1e-5);
    EXPECT_NEAR(d->signed_area(), std::numbers::pi, 1e-5);
    EXPECT_TRUE(d->has_simply_supported());
    EXPECT_FALSE(d->has_clamped());
}

TEST(Geometry, PolygonDomainIsCounterClockwise)
{
    const auto sq = polygon_domain("sq", {{0, 0}, {2, 0}, {2, 1}, {0, 1}}, BoundaryCondition::clamped);
    EXPECT_EQ(sq->num_segments(), 4u);
    EXPECT_NEAR(sq->signed_area(), 2.0, 1e-12);
    EXPECT_NEAR(sq->perimeter(), 6.0, 1e-9);
}

TEST(Geometry, JsonRoundTrip)
{
    const std::string text = R"({"name":"half_disk","bc":"clamped","segments":[
        {"type":"circle_arc","center":[0,0],"radius":1,"angles":[0,3.141592653589793],"bc":"simply_supported"},
        {"type":"polynomial","x":[-1,2],"y":[0,0],"t":[0,1]}]})";
    const auto d = domain_from_json(text);
    ASSERT_EQ(d->num_segments(), 2u);
    EXPECT_EQ(d->segments()[0].bc, BoundaryCondition::simply_supported);
    EXPECT_EQ(d->segments()[1].bc, BoundaryCondition::clamped);
    EXPECT_NEAR(d->signed_area(), std::numbers::pi / 2, 1e-5);
    const auto again = domain_from_json(domain_to_json(*d));
    for (double tau : {0.1, 0.9, 1.5})
        EXPECT_LT((again->eval_global(tau) - d->eval_global(tau)).norm(), 1e-14);
}

TEST(Geometry, RejectsBadInput)
{
    EXPECT_THROW(builtin_domain("square", BoundaryCondition::clamped), ConfigError);
    EXPECT_THROW(boundary_condition_from_string("free"), ConfigError);
    EXPECT_THROW(domain_from_json("{not json"), ConfigError);
}
