#pragma once

#include "hhj/curved.hpp"
#include "hhj/geometry.hpp"
#include "hhj/mesh.hpp"

#include <filesystem>
#include <fstream>
#include <memory>
#include <random>
#include <sstream>
#include <string>

namespace testing_helpers {

using MeshPtr = std::shared_ptr<const hhj::Triangulation>;

inline MeshPtr refined(std::shared_ptr<const hhj::Domain> dom, int levels, const hhj::MeshOptions& o = {})
{
    auto mesh = std::make_shared<const hhj::Triangulation>(hhj::initial_mesh(dom, o));
    for (int i = 0; i < levels; ++i) mesh = std::make_shared<const hhj::Triangulation>(hhj::refine_uniform(*mesh));
    return mesh;
}

inline MeshPtr disk_mesh(int levels, hhj::BoundaryCondition bc = hhj::BoundaryCondition::clamped)
{
    return refined(hhj::builtin_domain("disk", bc), levels);
}

inline MeshPtr square_mesh(int levels, hhj::BoundaryCondition bc = hhj::BoundaryCondition::clamped)
{
    hhj::MeshOptions o;
    o.n_boundary = 12;
    return refined(hhj::polygon_domain("square", {{0, 0}, {1, 0}, {1, 1}, {0, 1}}, bc), levels, o);
}

inline std::string slurp(const std::filesystem::path& p)
{
    std::ifstream f(p);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

// Fresh empty directory below the system temp dir.
inline std::filesystem::path temp_dir(const std::string& name)
{
    const auto p = std::filesystem::temp_directory_path() / ("plate_hhj_test_" + name);
    std::filesystem::remove_all(p);
    std::filesystem::create_directories(p);
    return p;
}

}  // namespace testing_helpers
