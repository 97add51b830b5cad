#include "hhj/error.hpp"
#include "hhj/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <unordered_map>

namespace hhj {

namespace {

std::uint64_t ekey(int a, int b)
{
    if (a > b) std::swap(a, b);
    return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
}

double orient(const Vec2& a, const Vec2& b, const Vec2& c) { return cross(b - a, c - a); }

Vec2 circumcenter(const Vec2& a, const Vec2& b, const Vec2& c)
{
    const Vec2 ab = b - a, ac = c - a;
    const double d = 2.0 * cross(ab, ac);
    const double ab2 = ab.squaredNorm(), ac2 = ac.squaredNorm();
    return a + Vec2(ac.y() * ab2 - ab.y() * ac2, ab.x() * ac2 - ac.x() * ab2) / d;
}

double min_angle(const Vec2& a, const Vec2& b, const Vec2& c)
{
    auto ang = [](const Vec2& p, const Vec2& q, const Vec2& r) {
        const Vec2 u = q - p, v = r - p;
        return std::atan2(std::abs(cross(u, v)), u.dot(v));
    };
    return std::min({ang(a, b, c), ang(b, c, a), ang(c, a, b)}) * 180.0 / std::numbers::pi;
}

// Incremental Bowyer-Watson triangulation inside a large super triangle
// (vertices 0, 1, 2).
class Delaunay {
public:
    explicit Delaunay(const std::array<double, 4>& box)
    {
        const Vec2 c(0.5 * (box[0] + box[1]), 0.5 * (box[2] + box[3]));
        const double r = 20.0 * std::max({box[1] - box[0], box[3] - box[2], 1e-3});
        pts.push_back(c + Vec2(-r, -r));
        pts.push_back(c + Vec2(r, -r));
        pts.push_back(c + Vec2(0.0, r));
        add_tri({0, 1, 2});
    }

    int insert(const Vec2& p)
    {
        const int id = static_cast<int>(pts.size());
        pts.push_back(p);
        int start = -1;
        for (int t = 0; t < static_cast<int>(tris.size()); ++t) {
            if (!alive[t]) continue;
            const auto& v = tris[t];
            const double scale = 1e-13 * (pts[v[1]] - pts[v[0]]).squaredNorm();
            if (orient(pts[v[0]], pts[v[1]], p) >= -scale && orient(pts[v[1]], pts[v[2]], p) >= -scale &&
                orient(pts[v[2]], pts[v[0]], p) >= -scale) {
                start = t;
                break;
            }
        }
        HHJ_THROW_IF(start < 0, MeshError, "mesher: point outside the triangulation");

        std::vector<int> cavity{start};
        std::set<int> in_cavity{start};
        for (std::size_t k = 0; k < cavity.size(); ++k) {
            const auto v = tris[cavity[k]];
            for (int i = 0; i < 3; ++i) {
                const int nb = neighbor(cavity[k], v[(i + 1) % 3], v[(i + 2) % 3]);
                if (nb < 0 || in_cavity.count(nb)) continue;
                if (in_circle(nb, p)) {
                    in_cavity.insert(nb);
                    cavity.push_back(nb);
                }
            }
        }
        std::vector<std::array<int, 2>> rim;
        for (int t : cavity) {
            const auto v = tris[t];
            for (int i = 0; i < 3; ++i) {
                const int a = v[(i + 1) % 3], b = v[(i + 2) % 3];
                const int nb = neighbor(t, a, b);
                if (nb < 0 || !in_cavity.count(nb)) rim.push_back({a, b});
            }
        }
        for (int t : cavity) remove_tri(t);
        for (const auto& e : rim) {
            HHJ_THROW_IF(orient(pts[e[0]], pts[e[1]], p) <= 0.0, MeshError, "mesher: cavity is not star-shaped");
            add_tri({e[0], e[1], id});
        }
        return id;
    }

    std::vector<Vec2> pts;
    std::vector<std::array<int, 3>> tris;
    std::vector<char> alive;

private:
    bool in_circle(int t, const Vec2& p) const
    {
        const auto& v = tris[t];
        const Vec2 cc = circumcenter(pts[v[0]], pts[v[1]], pts[v[2]]);
        const double r2 = (pts[v[0]] - cc).squaredNorm();
        return (p - cc).squaredNorm() < r2 * (1.0 - 1e-12);
    }

    int neighbor(int t, int a, int b) const
    {
        auto it = adj_.find(ekey(a, b));
        if (it == adj_.end()) return -1;
        return it->second[0] == t ? it->second[1] : it->second[0];
    }

    void add_tri(const std::array<int, 3>& v)
    {
        const int t = static_cast<int>(tris.size());
        tris.push_back(v);
        alive.push_back(1);
        for (int i = 0; i < 3; ++i) {
            auto& slot = adj_.try_emplace(ekey(v[(i + 1) % 3], v[(i + 2) % 3]), std::array<int, 2>{-1, -1}).first->second;
            (slot[0] < 0 ? slot[0] : slot[1]) = t;
        }
    }

    void remove_tri(int t)
    {
        alive[t] = 0;
        const auto& v = tris[t];
        for (int i = 0; i < 3; ++i) {
            auto it = adj_.find(ekey(v[(i + 1) % 3], v[(i + 2) % 3]));
            auto& slot = it->second;
            if (slot[0] == t) slot[0] = slot[1];
            slot[1] = -1;
            if (slot[0] < 0) adj_.erase(it);
        }
    }

    std::unordered_map<std::uint64_t, std::array<int, 2>> adj_;
};

struct Subsegment {
    int a, b, seg;
    double ta, tb;
};

bool encroaches(const Vec2& p, const Vec2& a, const Vec2& b)
{
    const double d = (p - a).dot(p - b);
    return d < -1e-12 * (b - a).squaredNorm();
}

bool inside_polygon(const Vec2& p, const std::vector<Subsegment>& segs, const std::vector<Vec2>& pts)
{
    bool in = false;
    for (const auto& s : segs) {
        const Vec2& a = pts[s.a];
        const Vec2& b = pts[s.b];
        if ((a.y() > p.y()) != (b.y() > p.y())) {
            const double x = a.x() + (p.y() - a.y()) * (b.x() - a.x()) / (b.y() - a.y());
            if (x > p.x()) in = !in;
        }
    }
    return in;
}

Triangulation fan_mesh(std::shared_ptr<const Domain> domain, int n)
{
    HHJ_THROW_IF(n < 3, ConfigError, "fan mesh needs at least 3 boundary vertices");
    const auto& seg = domain->segments()[0];
    const auto* arc = dynamic_cast<const CircleArc*>(seg.chart.get());
    std::vector<Vec2> verts{arc->center()};
    std::vector<std::array<int, 3>> cells;
    std::vector<BoundaryEdgeSpec> bnd;
    const double dt = (seg.t1 - seg.t0) / n;
    for (int i = 0; i < n; ++i) verts.push_back(domain->eval(0, seg.t0 + i * dt));
    for (int i = 0; i < n; ++i) {
        const int a = 1 + i, b = 1 + (i + 1) % n;
        cells.push_back({0, a, b});
        bnd.push_back({a, b, 0, seg.t0 + i * dt, i + 1 == n ? seg.t1 : seg.t0 + (i + 1) * dt});
    }
    return Triangulation(std::move(domain), std::move(verts), std::move(cells), bnd);
}

bool is_full_circle(const Domain& d)
{
    if (d.num_segments() != 1) return false;
    const auto* arc = dynamic_cast<const CircleArc*>(d.segments()[0].chart.get());
    return arc && arc->periodic();
}

Triangulation delaunay_mesh(std::shared_ptr<const Domain> domain, const MeshOptions& opt)
{
    const double perimeter = domain->perimeter();
    const int n_target = opt.n_boundary > 0 ? opt.n_boundary : std::max(12, static_cast<int>(std::lround(6.75 * perimeter)));
    const double h = opt.size_factor * perimeter / n_target;

    Delaunay dt(domain->bounding_box(400));
    std::vector<Subsegment> segs;
    const int nseg = static_cast<int>(domain->num_segments());
    int first = -1;
    for (int s = 0; s < nseg; ++s) {
        const auto& bs = domain->segments()[s];
        // Point density per unit parameter: speed / local target length, where
        // the target is capped by the curve's own length scale |chi'|^2 / |chi''|.
        const int samples = 2000;
        std::vector<double> cum(samples + 1, 0.0);
        auto density = [&](double t) {
            const double sp = bs.chart->derivative(t, 1).norm();
            const double acc = bs.chart->derivative(t, 2).norm();
            double target = h;
            if (opt.curvature_angle > 0.0 && acc > 0.0) target = std::min(target, opt.curvature_angle * sp * sp / acc);
            return sp / target;
        };
        const double dtp = (bs.t1 - bs.t0) / samples;
        for (int i = 0; i < samples; ++i) {
            const double ta = bs.t0 + i * dtp;
            cum[i + 1] = cum[i] + dtp * (density(ta) + 4.0 * density(ta + 0.5 * dtp) + density(ta + dtp)) / 6.0;
        }
        int ns = std::max(1, static_cast<int>(std::ceil(cum.back() - 1e-9)));
        if (nseg == 1) ns = std::max(ns, 3);
        std::vector<double> params(ns + 1);
        params[0] = bs.t0;
        params[ns] = bs.t1;
        for (int i = 1, j = 0; i < ns; ++i) {
            const double target = cum.back() * i / ns;
            while (cum[j + 1] < target) ++j;
            const double frac = (target - cum[j]) / (cum[j + 1] - cum[j]);
            params[i] = bs.t0 + (j + frac) * dtp;
        }
        for (int i = 0; i < ns; ++i) {
            const int id = dt.insert(bs.chart->eval(params[i]));
            if (first < 0) first = id;
            if (!segs.empty()) segs.back().b = id;
            segs.push_back({id, -1, s, params[i], params[i + 1]});
        }
    }
    segs.back().b = first;

    const int max_points = 200000;

    auto split = [&](std::size_t k) {
        const Subsegment s = segs[k];
        const double tm = 0.5 * (s.ta + s.tb);
        const int id = dt.insert(domain->eval(s.seg, tm));
        segs[k] = {s.a, id, s.seg, s.ta, tm};
        segs.insert(segs.begin() + static_cast<long>(k) + 1, Subsegment{id, s.b, s.seg, tm, s.tb});
        HHJ_THROW_IF(static_cast<int>(dt.pts.size()) > max_points, MeshError, "mesher: point budget exhausted");
    };

    auto encroached_segments = [&](const Vec2& p, int skip_id) {
        std::vector<std::size_t> out;
        for (std::size_t k = 0; k < segs.size(); ++k) {
            if (segs[k].a == skip_id || segs[k].b == skip_id) continue;
            if (encroaches(p, dt.pts[segs[k].a], dt.pts[segs[k].b])) out.push_back(k);
        }
        return out;
    };

    std::set<std::array<int, 3>> rejected;
    for (int iter = 0; iter < 4 * max_points; ++iter) {
        // Segments encroached by existing vertices are split first.
        bool did_split = false;
        for (std::size_t k = 0; k < segs.size() && !did_split; ++k) {
            const Vec2& a = dt.pts[segs[k].a];
            const Vec2& b = dt.pts[segs[k].b];
            const Vec2 mid = 0.5 * (a + b);
            const double r2 = 0.25 * (b - a).squaredNorm();
            for (int i = 3; i < static_cast<int>(dt.pts.size()); ++i) {
                if (i == segs[k].a || i == segs[k].b) continue;
                if ((dt.pts[i] - mid).squaredNorm() >= r2) continue;
                if (encroaches(dt.pts[i], a, b)) {
                    split(k);
                    did_split = true;
                    break;
                }
            }
        }
        if (did_split) continue;

        int worst = -1;
        double worst_score = 0.0;
        for (int t = 0; t < static_cast<int>(dt.tris.size()); ++t) {
            if (!dt.alive[t]) continue;
            const auto& v = dt.tris[t];
            if (v[0] < 3 || v[1] < 3 || v[2] < 3) continue;
            const Vec2 &a = dt.pts[v[0]], &b = dt.pts[v[1]], &c = dt.pts[v[2]];
            if (!inside_polygon((a + b + c) / 3.0, segs, dt.pts)) continue;
            std::array<int, 3> key = v;
            std::sort(key.begin(), key.end());
            if (rejected.count(key)) continue;
            const double ang = min_angle(a, b, c);
            const double R = (a - circumcenter(a, b, c)).norm();
            double score = 0.0;
            if (ang < opt.min_angle_deg) score = 10.0 + (opt.min_angle_deg - ang);
            else if (R > 0.75 * h) score = R / h;
            if (score > worst_score) {
                worst_score = score;
                worst = t;
            }
        }
        if (worst < 0) break;

        const auto v = dt.tris[worst];
        const Vec2 cc = circumcenter(dt.pts[v[0]], dt.pts[v[1]], dt.pts[v[2]]);
        const auto enc = encroached_segments(cc, -1);
        if (!enc.empty()) {
            for (auto it = enc.rbegin(); it != enc.rend(); ++it) split(*it);
            continue;
        }
        if (!inside_polygon(cc, segs, dt.pts)) {
            std::array<int, 3> key = v;
            std::sort(key.begin(), key.end());
            rejected.insert(key);
            continue;
        }
        dt.insert(cc);
        HHJ_THROW_IF(static_cast<int>(dt.pts.size()) > max_points, MeshError, "mesher: point budget exhausted");
    }

    // Collect interior triangles and compact the vertex numbering.
    std::vector<int> remap(dt.pts.size(), -1);
    std::vector<Vec2> verts;
    std::vector<std::array<int, 3>> cells;
    for (int t = 0; t < static_cast<int>(dt.tris.size()); ++t) {
        if (!dt.alive[t]) continue;
        const auto& v = dt.tris[t];
        if (v[0] < 3 || v[1] < 3 || v[2] < 3) continue;
        if (!inside_polygon((dt.pts[v[0]] + dt.pts[v[1]] + dt.pts[v[2]]) / 3.0, segs, dt.pts)) continue;
        std::array<int, 3> c;
        for (int i = 0; i < 3; ++i) {
            if (remap[v[i]] < 0) {
                remap[v[i]] = static_cast<int>(verts.size());
                verts.push_back(dt.pts[v[i]]);
            }
            c[i] = remap[v[i]];
        }
        cells.push_back(c);
    }
    std::vector<BoundaryEdgeSpec> bnd;
    std::set<std::uint64_t> bkeys;
    for (const auto& s : segs) {
        HHJ_THROW_IF(remap[s.a] < 0 || remap[s.b] < 0, MeshError, "mesher: boundary vertex lost");
        bnd.push_back({remap[s.a], remap[s.b], s.seg, s.ta, s.tb});
        bkeys.insert(ekey(remap[s.a], remap[s.b]));
    }

    // Split cells with two boundary edges at their incenter.
    std::vector<std::array<int, 3>> fixed;
    for (const auto& c : cells) {
        int nb = 0;
        for (int i = 0; i < 3; ++i) nb += bkeys.count(ekey(c[(i + 1) % 3], c[(i + 2) % 3])) ? 1 : 0;
        if (nb < 2) {
            fixed.push_back(c);
            continue;
        }
        HHJ_THROW_IF(nb == 3, MeshError, "mesher: domain resolved by a single triangle");
        const Vec2 &A = verts[c[0]], &B = verts[c[1]], &C = verts[c[2]];
        const double a = (B - C).norm(), b = (C - A).norm(), cl = (A - B).norm();
        const int id = static_cast<int>(verts.size());
        verts.push_back((a * A + b * B + cl * C) / (a + b + cl));
        fixed.push_back({c[0], c[1], id});
        fixed.push_back({c[1], c[2], id});
        fixed.push_back({c[2], c[0], id});
    }
    return Triangulation(std::move(domain), std::move(verts), std::move(fixed), bnd);
}

}  // namespace

Triangulation initial_mesh(std::shared_ptr<const Domain> domain, const MeshOptions& options)
{
    HHJ_THROW_IF(!domain, ConfigError, "initial_mesh without domain");
    HHJ_THROW_IF(options.n_boundary < 0, ConfigError, "n_boundary must be non-negative");
    HHJ_THROW_IF(options.n_boundary > 0 && options.n_boundary < 3, ConfigError, "n_boundary must be at least 3");
    const bool circle = is_full_circle(*domain);
    if (options.fan) HHJ_THROW_IF(!circle, ConfigError, "fan meshes need a full circle boundary");
    if (circle && (options.fan || options.n_boundary <= 18)) {
        return fan_mesh(std::move(domain), options.n_boundary > 0 ? options.n_boundary : 6);
    }
    return delaunay_mesh(std::move(domain), options);
}

}  // namespace hhj
