#include "seatri/exhaustive.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>

namespace seatri {

namespace {

struct SideLists {
    std::vector<std::size_t> pos; // candidates whose third vertex is CCW of (u, v)
    std::vector<std::size_t> neg;
};

struct Enumerator {
    std::span<const PlanePoint> points;
    std::vector<Candidate> cands;
    std::set<Edge> chain_edges;
    std::map<Edge, SideLists> sides;
    std::map<Edge, std::pair<int, int>> coverage; // (pos count, neg count)
    std::vector<std::size_t> chosen;
    std::vector<Triangulation> results;

    int side_of(const Triangle& tri, const Edge& e) const {
        const std::uint32_t w = tri.third(e.u, e.v);
        return orientation(points[e.u], points[e.v], points[w]) == Orientation::CounterClockwise
                   ? +1
                   : -1;
    }

    bool compatible(std::size_t ci) const {
        const Triangle& tri = cands[ci].tri;
        const Edge es[3] = {Edge(tri.a, tri.b), Edge(tri.a, tri.c), Edge(tri.b, tri.c)};
        for (const Edge& e : es) {
            const auto it = coverage.find(e);
            const auto [p, n] = it == coverage.end() ? std::pair<int, int>{0, 0} : it->second;
            if (chain_edges.count(e)) {
                if (p + n != 0) return false;
            } else if (side_of(tri, e) > 0 ? p != 0 : n != 0) {
                return false;
            }
        }
        return true;
    }

    void apply(std::size_t ci, int delta) {
        const Triangle& tri = cands[ci].tri;
        const Edge es[3] = {Edge(tri.a, tri.b), Edge(tri.a, tri.c), Edge(tri.b, tri.c)};
        for (const Edge& e : es) {
            auto& [p, n] = coverage[e];
            (side_of(tri, e) > 0 ? p : n) += delta;
        }
    }

    // Lowest-edge unmet demand: an uncovered chain edge, or an interior edge
    // covered on exactly one side. Returns the candidate list serving it.
    std::optional<std::vector<std::size_t>> next_demand() const {
        for (const auto& [e, lists] : sides) {
            const auto it = coverage.find(e);
            const auto [p, n] = it == coverage.end() ? std::pair<int, int>{0, 0} : it->second;
            if (chain_edges.count(e)) {
                if (p + n == 0) {
                    std::vector<std::size_t> all = lists.pos;
                    all.insert(all.end(), lists.neg.begin(), lists.neg.end());
                    std::sort(all.begin(), all.end());
                    return all;
                }
            } else if (p + n == 1) {
                return p == 1 ? lists.neg : lists.pos;
            }
        }
        return std::nullopt;
    }

    void recurse() {
        const auto demand = next_demand();
        if (!demand) {
            std::vector<Triangle> tris;
            tris.reserve(chosen.size());
            for (std::size_t ci : chosen) tris.push_back(cands[ci].tri);
            Triangulation t = Triangulation::from_triangles(std::move(tris));
            validate_triangulation(t, points);
            results.push_back(std::move(t));
            return;
        }
        for (std::size_t ci : *demand) {
            if (!compatible(ci)) continue;
            apply(ci, +1);
            chosen.push_back(ci);
            recurse();
            chosen.pop_back();
            apply(ci, -1);
        }
    }
};

} // namespace

std::vector<Triangulation> enumerate_all_triangulations(std::span<const PlanePoint> points) {
    if (points.size() < 3 || points.size() > 9)
        throw std::invalid_argument("enumerate_all_triangulations: n must be in [3, 9]");

    Enumerator en;
    en.points = points;
    en.cands = enumerate_candidates(points, OrderBound::unbounded()).list;

    const std::vector<std::size_t> chain = boundary_chain(points);
    for (std::size_t i = 0; i < chain.size(); ++i)
        en.chain_edges.insert(Edge(static_cast<std::uint32_t>(chain[i]),
                                   static_cast<std::uint32_t>(chain[(i + 1) % chain.size()])));

    for (std::size_t ci = 0; ci < en.cands.size(); ++ci) {
        const Triangle& tri = en.cands[ci].tri;
        const Edge es[3] = {Edge(tri.a, tri.b), Edge(tri.a, tri.c), Edge(tri.b, tri.c)};
        for (const Edge& e : es)
            (en.side_of(tri, e) > 0 ? en.sides[e].pos : en.sides[e].neg).push_back(ci);
    }

    en.recurse();
    return en.results;
}

BruteForceResult brute_force_min_error(std::span<const PlanePoint> points,
                                       std::span<const double> h, const RasterGrid& grid,
                                       const CellGeometry& geom, ErrorMetric metric,
                                       const RegionMask& mask, OrderBound bound) {
    const std::vector<Triangulation> all = enumerate_all_triangulations(points);

    BruteForceResult best;
    best.enumerated = all.size();
    bool have = false;
    for (const Triangulation& t : all) {
        if (bound.k) {
            bool ok = true;
            for (const Triangle& tri : t.triangles)
                if (!bound.allows(order_of(tri, points))) {
                    ok = false;
                    break;
                }
            if (!ok) continue;
        }
        ++best.feasible;
        double cost = 0.0;
        for (const Triangle& tri : t.triangles)
            cost += triangle_cost(tri, points, h, grid, geom, metric, mask).cost;
        if (!have || cost < best.objective ||
            (cost == best.objective && t.triangles < best.triangulation.triangles)) {
            best.triangulation = t;
            best.objective = cost;
            have = true;
        }
    }
    if (!have) throw std::runtime_error("brute_force_min_error: no feasible triangulation");
    return best;
}

} // namespace seatri
