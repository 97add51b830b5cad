#pragma once

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace hhj {

using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;
using VectorX = Eigen::VectorXd;
using MatrixX = Eigen::MatrixXd;
using Index = std::int64_t;

// Ordered key/value pairs describing a run, embedded in every output file.
using ConfigEcho = std::vector<std::pair<std::string, std::string>>;

// Symmetric 2x2 tensors are stored as full Mat2.
inline Mat2 sym(double a11, double a12, double a22)
{
    Mat2 m;
    m << a11, a12, a12, a22;
    return m;
}

inline double ddot(const Mat2& a, const Mat2& b) { return (a.array() * b.array()).sum(); }

inline double cross(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

// Right-hand normal of a tangent, outward for a counter-clockwise boundary.
inline Vec2 right_normal(const Vec2& t) { return Vec2(t.y(), -t.x()); }

}  // namespace hhj
