#pragma once

#include "hhj/geometry.hpp"
#include "hhj/types.hpp"

#include <array>
#include <memory>
#include <string>
#include <vector>

namespace hhj {

// Boundary data for one polygon side: chart segment and the chart parameters
// of its two endpoints (ta at va, tb at vb).
struct BoundaryEdgeSpec {
    int va = -1;
    int vb = -1;
    int segment = -1;
    double ta = 0.0;
    double tb = 0.0;
};

struct EdgeBoundaryInfo {
    int segment = -1;  // -1 for interior edges
    double t0 = 0.0;   // chart parameter at edges()[e][0]
    double t1 = 0.0;   // chart parameter at edges()[e][1]
    BoundaryCondition bc = BoundaryCondition::clamped;
};

// Conforming straight-sided triangulation of a polygon whose boundary
// vertices lie on the domain boundary. Cells are counter-clockwise; edge e
// stores its vertices with the lower id first, which fixes the global edge
// orientation. Immutable after construction.
class Triangulation {
public:
    Triangulation(std::shared_ptr<const Domain> domain, std::vector<Vec2> vertices,
                  std::vector<std::array<int, 3>> cells, const std::vector<BoundaryEdgeSpec>& boundary);

    const Domain& domain() const { return *domain_; }
    std::shared_ptr<const Domain> domain_ptr() const { return domain_; }

    int num_vertices() const { return static_cast<int>(vertices_.size()); }
    int num_cells() const { return static_cast<int>(cells_.size()); }
    int num_edges() const { return static_cast<int>(edges_.size()); }

    const std::vector<Vec2>& vertices() const { return vertices_; }
    const std::vector<std::array<int, 3>>& cells() const { return cells_; }
    const std::vector<std::array<int, 2>>& edges() const { return edges_; }

    // Local edge i of a cell is opposite local vertex i.
    const std::array<int, 3>& cell_edges(int c) const { return cell_edges_[c]; }
    // Adjacent cells (second is -1 on the boundary) and the local edge index in each.
    const std::array<int, 2>& edge_cells(int e) const { return edge_cells_[e]; }
    const std::array<int, 2>& edge_local(int e) const { return edge_local_[e]; }

    bool is_boundary_edge(int e) const { return binfo_[e].segment >= 0; }
    const EdgeBoundaryInfo& boundary_info(int e) const { return binfo_[e]; }
    bool is_boundary_vertex(int v) const { return vbnd_[v] != 0; }
    int num_boundary_edges() const;
    int boundary_edge_count(int c) const;
    // Local edge index of the boundary edge of cell c, or -1.
    int boundary_local_edge(int c) const;

    // True when local edge le of cell c runs along the global orientation.
    bool edge_agrees(int c, int le) const;

    double cell_diameter(int c) const;
    double h_max() const;
    double min_angle_deg() const;
    double area() const;

    std::vector<BoundaryEdgeSpec> boundary_specs() const;

private:
    std::shared_ptr<const Domain> domain_;
    std::vector<Vec2> vertices_;
    std::vector<std::array<int, 3>> cells_;
    std::vector<std::array<int, 2>> edges_;
    std::vector<std::array<int, 3>> cell_edges_;
    std::vector<std::array<int, 2>> edge_cells_;
    std::vector<std::array<int, 2>> edge_local_;
    std::vector<EdgeBoundaryInfo> binfo_;
    std::vector<char> vbnd_;
};

struct MeshOptions {
    int n_boundary = 0;            // 0: 6 for the disk fan, about 6.75 per unit of perimeter otherwise
    double min_angle_deg = 20.0;
    double size_factor = 1.0;      // scales the target edge length perimeter / n_boundary
    double curvature_angle = 0.0;  // if > 0, boundary edges turn by at most about this angle (radians)
    bool fan = false;              // center fan (disk only); automatic for the disk
};

// Coarse mesh: a center-vertex fan for a full circle, otherwise a quality
// Delaunay refinement of the sampled boundary. Cells with two boundary edges
// are split at their incenter.
Triangulation initial_mesh(std::shared_ptr<const Domain> domain, const MeshOptions& options = {});

// Red refinement 1 -> 4; boundary midpoints are placed on the curve at the
// midpoint of the chart parameter interval.
Triangulation refine_uniform(const Triangulation& mesh);

struct MeshReport {
    bool ok = true;
    std::vector<std::string> problems;
    int cells_with_multiple_boundary_edges = 0;
    int cells_with_three_boundary_vertices = 0;
    double min_angle_deg = 0.0;
    double max_boundary_vertex_offset = 0.0;  // distance of boundary vertices from the curve
};

MeshReport validate(const Triangulation& mesh);

// Same mesh with vertices relabelled: new id of old vertex v is perm[v].
Triangulation renumber_vertices(const Triangulation& mesh, const std::vector<int>& perm);

// JSON interchange, version "plate-hhj-mesh-v1". The config pairs and the
// library version are stored alongside and ignored on reading.
std::string mesh_to_json(const Triangulation& mesh, const ConfigEcho& config = {});
Triangulation mesh_from_json(const std::string& text);

}  // namespace hhj
