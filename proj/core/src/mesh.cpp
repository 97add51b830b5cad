#include "hhj/mesh.hpp"

#include "hhj/error.hpp"
#include "hhj/version.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <unordered_map>

namespace hhj {

namespace {

std::uint64_t edge_key(int a, int b)
{
    if (a > b) std::swap(a, b);
    return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
}

double tri_min_angle(const Vec2& a, const Vec2& b, const Vec2& c)
{
    auto angle = [](const Vec2& p, const Vec2& q, const Vec2& r) {
        const Vec2 u = q - p, v = r - p;
        return std::atan2(std::abs(cross(u, v)), u.dot(v));
    };
    return std::min({angle(a, b, c), angle(b, c, a), angle(c, a, b)}) * 180.0 / std::numbers::pi;
}

}  // namespace

Triangulation::Triangulation(std::shared_ptr<const Domain> domain, std::vector<Vec2> vertices,
                             std::vector<std::array<int, 3>> cells, const std::vector<BoundaryEdgeSpec>& boundary)
    : domain_(std::move(domain)), vertices_(std::move(vertices)), cells_(std::move(cells))
{
    HHJ_THROW_IF(!domain_, MeshError, "triangulation without domain");
    HHJ_THROW_IF(cells_.empty(), MeshError, "triangulation without cells");
    const int nv = num_vertices();
    for (const auto& v : vertices_)
        HHJ_THROW_IF(!std::isfinite(v.x()) || !std::isfinite(v.y()), MeshError, "non-finite vertex coordinate");

    std::unordered_map<std::uint64_t, int> index;
    index.reserve(cells_.size() * 2);
    cell_edges_.resize(cells_.size());
    for (std::size_t c = 0; c < cells_.size(); ++c) {
        const auto& t = cells_[c];
        for (int i = 0; i < 3; ++i)
            HHJ_THROW_IF(t[i] < 0 || t[i] >= nv, MeshError, "cell references a missing vertex");
        const double area2 = cross(vertices_[t[1]] - vertices_[t[0]], vertices_[t[2]] - vertices_[t[0]]);
        HHJ_THROW_IF(!(area2 > 0.0), MeshError, "cell " + std::to_string(c) + " is not counter-clockwise or degenerate");
        for (int i = 0; i < 3; ++i) {
            const int a = t[(i + 1) % 3], b = t[(i + 2) % 3];
            const auto key = edge_key(a, b);
            auto it = index.find(key);
            int e;
            if (it == index.end()) {
                e = static_cast<int>(edges_.size());
                index.emplace(key, e);
                edges_.push_back({std::min(a, b), std::max(a, b)});
                edge_cells_.push_back({static_cast<int>(c), -1});
                edge_local_.push_back({i, -1});
            } else {
                e = it->second;
                HHJ_THROW_IF(edge_cells_[e][1] >= 0, MeshError, "edge shared by more than two cells");
                edge_cells_[e][1] = static_cast<int>(c);
                edge_local_[e][1] = i;
            }
            cell_edges_[c][i] = e;
        }
    }

    binfo_.assign(edges_.size(), EdgeBoundaryInfo{});
    vbnd_.assign(nv, 0);
    std::vector<char> seen(edges_.size(), 0);
    for (const auto& s : boundary) {
        auto it = index.find(edge_key(s.va, s.vb));
        HHJ_THROW_IF(it == index.end(), MeshError, "boundary specification names a missing edge");
        const int e = it->second;
        HHJ_THROW_IF(edge_cells_[e][1] >= 0, MeshError, "boundary specification names an interior edge");
        HHJ_THROW_IF(s.segment < 0 || s.segment >= static_cast<int>(domain_->num_segments()), MeshError,
                     "boundary edge segment out of range");
        auto& info = binfo_[e];
        info.segment = s.segment;
        info.bc = domain_->segments()[s.segment].bc;
        if (s.va == edges_[e][0]) {
            info.t0 = s.ta;
            info.t1 = s.tb;
        } else {
            info.t0 = s.tb;
            info.t1 = s.ta;
        }
        seen[e] = 1;
        vbnd_[s.va] = vbnd_[s.vb] = 1;
    }
    for (std::size_t e = 0; e < edges_.size(); ++e)
        HHJ_THROW_IF(edge_cells_[e][1] < 0 && !seen[e], MeshError,
                     "boundary edge " + std::to_string(e) + " has no chart information");
}

int Triangulation::num_boundary_edges() const
{
    int n = 0;
    for (const auto& b : binfo_) n += b.segment >= 0;
    return n;
}

int Triangulation::boundary_edge_count(int c) const
{
    int n = 0;
    for (int e : cell_edges_[c]) n += is_boundary_edge(e);
    return n;
}

int Triangulation::boundary_local_edge(int c) const
{
    for (int i = 0; i < 3; ++i)
        if (is_boundary_edge(cell_edges_[c][i])) return i;
    return -1;
}

bool Triangulation::edge_agrees(int c, int le) const { return cells_[c][(le + 1) % 3] < cells_[c][(le + 2) % 3]; }

double Triangulation::cell_diameter(int c) const
{
    const auto& t = cells_[c];
    return std::max({(vertices_[t[0]] - vertices_[t[1]]).norm(), (vertices_[t[1]] - vertices_[t[2]]).norm(),
                     (vertices_[t[2]] - vertices_[t[0]]).norm()});
}

double Triangulation::h_max() const
{
    double h = 0.0;
    for (int c = 0; c < num_cells(); ++c) h = std::max(h, cell_diameter(c));
    return h;
}

double Triangulation::min_angle_deg() const
{
    double a = 180.0;
    for (const auto& t : cells_) a = std::min(a, tri_min_angle(vertices_[t[0]], vertices_[t[1]], vertices_[t[2]]));
    return a;
}

double Triangulation::area() const
{
    double a = 0.0;
    for (const auto& t : cells_) a += 0.5 * cross(vertices_[t[1]] - vertices_[t[0]], vertices_[t[2]] - vertices_[t[0]]);
    return a;
}

std::vector<BoundaryEdgeSpec> Triangulation::boundary_specs() const
{
    std::vector<BoundaryEdgeSpec> out;
    for (int e = 0; e < num_edges(); ++e) {
        if (!is_boundary_edge(e)) continue;
        const auto& b = binfo_[e];
        out.push_back({edges_[e][0], edges_[e][1], b.segment, b.t0, b.t1});
    }
    return out;
}

Triangulation refine_uniform(const Triangulation& mesh)
{
    const int nv = mesh.num_vertices(), ne = mesh.num_edges();
    std::vector<Vec2> verts = mesh.vertices();
    verts.reserve(nv + ne);
    std::vector<BoundaryEdgeSpec> bnd;
    for (int e = 0; e < ne; ++e) {
        const auto& ed = mesh.edges()[e];
        const int mid = nv + e;
        if (mesh.is_boundary_edge(e)) {
            const auto& b = mesh.boundary_info(e);
            const double tm = 0.5 * (b.t0 + b.t1);
            verts.push_back(mesh.domain().eval(b.segment, tm));
            bnd.push_back({ed[0], mid, b.segment, b.t0, tm});
            bnd.push_back({mid, ed[1], b.segment, tm, b.t1});
        } else {
            verts.push_back(0.5 * (mesh.vertices()[ed[0]] + mesh.vertices()[ed[1]]));
        }
    }
    std::vector<std::array<int, 3>> cells;
    cells.reserve(4 * mesh.cells().size());
    for (int c = 0; c < mesh.num_cells(); ++c) {
        const auto& t = mesh.cells()[c];
        const auto& ce = mesh.cell_edges(c);
        const int m0 = nv + ce[0], m1 = nv + ce[1], m2 = nv + ce[2];
        cells.push_back({t[0], m2, m1});
        cells.push_back({m2, t[1], m0});
        cells.push_back({m1, m0, t[2]});
        cells.push_back({m0, m1, m2});
    }
    return Triangulation(mesh.domain_ptr(), std::move(verts), std::move(cells), bnd);
}

MeshReport validate(const Triangulation& mesh)
{
    MeshReport rep;
    rep.min_angle_deg = mesh.min_angle_deg();
    for (int c = 0; c < mesh.num_cells(); ++c) {
        if (mesh.boundary_edge_count(c) > 1) ++rep.cells_with_multiple_boundary_edges;
        const auto& t = mesh.cells()[c];
        if (mesh.is_boundary_vertex(t[0]) && mesh.is_boundary_vertex(t[1]) && mesh.is_boundary_vertex(t[2]))
            ++rep.cells_with_three_boundary_vertices;
    }
    if (rep.cells_with_multiple_boundary_edges > 0) {
        rep.ok = false;
        rep.problems.push_back(std::to_string(rep.cells_with_multiple_boundary_edges) +
                               " cell(s) with more than one boundary edge");
    }
    for (int e = 0; e < mesh.num_edges(); ++e) {
        if (!mesh.is_boundary_edge(e)) continue;
        const auto& b = mesh.boundary_info(e);
        for (int k = 0; k < 2; ++k) {
            const Vec2 p = mesh.domain().eval(b.segment, k == 0 ? b.t0 : b.t1);
            rep.max_boundary_vertex_offset =
                std::max(rep.max_boundary_vertex_offset, (p - mesh.vertices()[mesh.edges()[e][k]]).norm());
        }
    }
    if (rep.max_boundary_vertex_offset > 1e-10) {
        rep.ok = false;
        rep.problems.push_back("boundary vertices are not on the boundary curve");
    }
    // Boundary must be a single closed loop: every boundary vertex has two boundary edges.
    std::vector<int> deg(mesh.num_vertices(), 0);
    for (int e = 0; e < mesh.num_edges(); ++e)
        if (mesh.is_boundary_edge(e)) {
            ++deg[mesh.edges()[e][0]];
            ++deg[mesh.edges()[e][1]];
        }
    for (int v = 0; v < mesh.num_vertices(); ++v)
        if (deg[v] != 0 && deg[v] != 2) {
            rep.ok = false;
            rep.problems.push_back("boundary is not a simple closed polygon at vertex " + std::to_string(v));
            break;
        }
    return rep;
}

Triangulation renumber_vertices(const Triangulation& mesh, const std::vector<int>& perm)
{
    HHJ_THROW_IF(static_cast<int>(perm.size()) != mesh.num_vertices(), MeshError, "permutation size mismatch");
    std::vector<Vec2> verts(mesh.num_vertices());
    for (int v = 0; v < mesh.num_vertices(); ++v) verts[perm[v]] = mesh.vertices()[v];
    std::vector<std::array<int, 3>> cells;
    for (const auto& t : mesh.cells()) cells.push_back({perm[t[0]], perm[t[1]], perm[t[2]]});
    auto bnd = mesh.boundary_specs();
    for (auto& b : bnd) {
        b.va = perm[b.va];
        b.vb = perm[b.vb];
    }
    return Triangulation(mesh.domain_ptr(), std::move(verts), std::move(cells), bnd);
}

std::string mesh_to_json(const Triangulation& mesh, const ConfigEcho& config)
{
    nlohmann::json j;
    j["version"] = "plate-hhj-mesh-v1";
    j["library_version"] = library_version();
    if (!config.empty()) {
        auto& c = j["config"] = nlohmann::json::array();
        for (const auto& [k, v] : config) c.push_back({k, v});
    }
    j["domain"] = nlohmann::json::parse(domain_to_json(mesh.domain()));
    auto& verts = j["vertices"] = nlohmann::json::array();
    for (const auto& v : mesh.vertices()) verts.push_back({v.x(), v.y()});
    auto& cells = j["cells"] = nlohmann::json::array();
    for (const auto& c : mesh.cells()) cells.push_back({c[0], c[1], c[2]});
    auto& edges = j["boundary_edges"] = nlohmann::json::array();
    std::map<int, double> params;
    for (const auto& b : mesh.boundary_specs()) {
        edges.push_back({{"v", {b.va, b.vb}},
                         {"segment", b.segment},
                         {"t", {b.ta, b.tb}},
                         {"bc", to_string(mesh.domain().segments()[b.segment].bc)}});
        params.emplace(b.va, b.ta);
        params.emplace(b.vb, b.tb);
    }
    auto& bp = j["boundary_params"] = nlohmann::json::array();
    for (const auto& [v, t] : params) bp.push_back({{"vid", v}, {"t", t}});
    return j.dump();
}

Triangulation mesh_from_json(const std::string& text)
{
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed mesh JSON: ") + e.what());
    }
    try {
        HHJ_THROW_IF(j.value("version", std::string()) != "plate-hhj-mesh-v1", ConfigError,
                     "unsupported mesh format version");
        auto domain = domain_from_json(j.at("domain").dump());
        std::vector<Vec2> verts;
        for (const auto& v : j.at("vertices")) verts.emplace_back(v.at(0).get<double>(), v.at(1).get<double>());
        std::vector<std::array<int, 3>> cells;
        for (const auto& c : j.at("cells")) cells.push_back({c.at(0).get<int>(), c.at(1).get<int>(), c.at(2).get<int>()});
        std::vector<BoundaryEdgeSpec> bnd;
        for (const auto& b : j.at("boundary_edges"))
            bnd.push_back({b.at("v").at(0).get<int>(), b.at("v").at(1).get<int>(), b.at("segment").get<int>(),
                           b.at("t").at(0).get<double>(), b.at("t").at(1).get<double>()});
        return Triangulation(domain, std::move(verts), std::move(cells), bnd);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("invalid mesh JSON: ") + e.what());
    }
}

}  // namespace hhj
