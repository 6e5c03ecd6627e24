#include "seatri/delaunay.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <stack>
#include <stdexcept>
#include <vector>

namespace seatri {

namespace {

struct FlipMesh {
    std::span<const PlanePoint> pts;
    std::set<Triangle> tris;
    std::map<Edge, std::vector<Triangle>> incident;

    void insert(const Triangle& t) {
        tris.insert(t);
        incident[Edge(t.a, t.b)].push_back(t);
        incident[Edge(t.a, t.c)].push_back(t);
        incident[Edge(t.b, t.c)].push_back(t);
    }
    void erase(const Triangle& t) {
        tris.erase(t);
        for (const Edge e : {Edge(t.a, t.b), Edge(t.a, t.c), Edge(t.b, t.c)}) {
            auto& v = incident[e];
            v.erase(std::find(v.begin(), v.end(), t));
            if (v.empty()) incident.erase(e);
        }
    }

    // Opposite vertices of an interior edge, or nothing.
    bool opposite(const Edge& e, std::uint32_t& w, std::uint32_t& z) const {
        auto it = incident.find(e);
        if (it == incident.end() || it->second.size() != 2) return false;
        w = it->second[0].third(e.u, e.v);
        z = it->second[1].third(e.u, e.v);
        return true;
    }

    bool quad_convex(const Edge& e, std::uint32_t w, std::uint32_t z) const {
        const Orientation s1 = orientation(pts[w], pts[z], pts[e.u]);
        const Orientation s2 = orientation(pts[w], pts[z], pts[e.v]);
        return (s1 == Orientation::CounterClockwise && s2 == Orientation::Clockwise) ||
               (s1 == Orientation::Clockwise && s2 == Orientation::CounterClockwise);
    }

    void flip(const Edge& e, std::uint32_t w, std::uint32_t z) {
        erase(Triangle(e.u, e.v, w));
        erase(Triangle(e.u, e.v, z));
        insert(Triangle(w, z, e.u));
        insert(Triangle(w, z, e.v));
    }
};

// Legalize every edge: flip while some opposite vertex lies strictly inside the
// circumcircle (Lawson). OnCircle counts as legal, so flips strictly improve
// and the loop terminates.
void legalize(FlipMesh& mesh) {
    for (;;) {
        std::stack<Edge> pending;
        for (const auto& [e, tv] : mesh.incident)
            if (tv.size() == 2) pending.push(e);
        bool flipped_any = false;
        while (!pending.empty()) {
            const Edge e = pending.top();
            pending.pop();
            std::uint32_t w, z;
            if (!mesh.opposite(e, w, z)) continue;
            if (in_circumcircle(mesh.pts[e.u], mesh.pts[e.v], mesh.pts[w], mesh.pts[z]) !=
                CirclePosition::Inside)
                continue;
            if (!mesh.quad_convex(e, w, z))
                throw std::runtime_error("delaunay: illegal edge with non-convex quad");
            mesh.flip(e, w, z);
            flipped_any = true;
            pending.push(Edge(w, z));
            pending.push(Edge(e.u, w));
            pending.push(Edge(e.u, z));
            pending.push(Edge(e.v, w));
            pending.push(Edge(e.v, z));
        }
        if (!flipped_any) return;
    }
}

// Deterministic resolution of cocircular degeneracies: where both diagonals are
// Delaunay, keep the one whose smaller endpoint index is smaller. Each flip
// strictly decreases the multiset of edge minima, so this terminates.
void canonicalize(FlipMesh& mesh) {
    bool changed = true;
    while (changed) {
        changed = false;
        std::vector<Edge> edges;
        for (const auto& [e, tv] : mesh.incident)
            if (tv.size() == 2) edges.push_back(e);
        for (const Edge& e : edges) {
            std::uint32_t w, z;
            if (!mesh.opposite(e, w, z)) continue;
            if (in_circumcircle(mesh.pts[e.u], mesh.pts[e.v], mesh.pts[w], mesh.pts[z]) !=
                CirclePosition::OnCircle)
                continue;
            if (std::min(w, z) >= e.u) continue;
            if (!mesh.quad_convex(e, w, z)) continue;
            mesh.flip(e, w, z);
            changed = true;
        }
    }
}

} // namespace

Triangulation delaunay(std::span<const PlanePoint> points) {
    const std::size_t n = points.size();
    if (n < 3) throw std::invalid_argument("delaunay: need at least 3 points");

    std::vector<std::uint32_t> order(n);
    std::iota(order.begin(), order.end(), 0u);
    std::sort(order.begin(), order.end(), [&](std::uint32_t i, std::uint32_t j) {
        if (points[i].x != points[j].x) return points[i].x < points[j].x;
        return points[i].y < points[j].y;
    });
    for (std::size_t i = 1; i < n; ++i)
        if (points[order[i - 1]].x == points[order[i]].x &&
            points[order[i - 1]].y == points[order[i]].y)
            throw std::invalid_argument("delaunay: duplicate points");

    // Longest all-collinear prefix of the sweep order.
    std::size_t f = 2;
    while (f < n && orientation(points[order[0]], points[order[1]], points[order[f]]) ==
                        Orientation::Collinear)
        ++f;
    if (f == n) throw std::invalid_argument("delaunay: all points collinear");

    FlipMesh mesh;
    mesh.pts = points;
    for (std::size_t t = 0; t + 1 < f; ++t)
        mesh.insert(Triangle(order[t], order[t + 1], order[f]));

    std::vector<std::uint32_t> processed(order.begin(), order.begin() + f + 1);
    for (std::size_t next = f + 1; next < n; ++next) {
        const std::uint32_t p = order[next];
        // The new point is strictly outside the hull of the processed prefix;
        // a triangle over every strictly visible boundary sub-edge fills
        // conv(old hull + p) exactly.
        std::vector<PlanePoint> sub;
        sub.reserve(processed.size());
        for (std::uint32_t i : processed) sub.push_back(points[i]);
        const std::vector<std::size_t> chain = boundary_chain(sub);
        for (std::size_t i = 0; i < chain.size(); ++i) {
            const std::uint32_t u = processed[chain[i]];
            const std::uint32_t v = processed[chain[(i + 1) % chain.size()]];
            if (orientation(points[u], points[v], points[p]) == Orientation::Clockwise)
                mesh.insert(Triangle(u, v, p));
        }
        processed.push_back(p);
    }

    legalize(mesh);
    canonicalize(mesh);

    std::vector<Triangle> tris(mesh.tris.begin(), mesh.tris.end());
    return Triangulation::from_triangles(std::move(tris));
}

} // namespace seatri
