#include "seatri/cost.hpp"

#include "seatri/textio.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace seatri {

double rate_error(ErrorMetric metric, double delta) {
    return metric == ErrorMetric::SquaredError ? delta * delta : std::abs(delta);
}

ErrorMetric metric_from_name(const std::string& name) {
    if (name == "squared") return ErrorMetric::SquaredError;
    if (name == "absolute") return ErrorMetric::AbsoluteError;
    throw std::invalid_argument("unknown metric '" + name + "' (expected squared|absolute)");
}

std::string metric_name(ErrorMetric metric) {
    return metric == ErrorMetric::SquaredError ? "squared" : "absolute";
}

CellGeometry CellGeometry::from_grid(const RasterGrid& grid, const ProjectionSpec& spec) {
    CellGeometry geom;
    geom.ncols = grid.ncols;
    geom.nrows = grid.nrows;
    geom.centers.resize(grid.ncols * grid.nrows);
    for (std::size_t r = 0; r < grid.nrows; ++r)
        for (std::size_t c = 0; c < grid.ncols; ++c)
            geom.centers[r * grid.ncols + c] =
                project(spec, grid.center_lon(c), grid.center_lat(r));
    return geom;
}

RegionMask build_mask(const CellGeometry& geom, std::span<const PlanePoint> points,
                      const RasterGrid& grid) {
    if (grid.ncols != geom.ncols || grid.nrows != geom.nrows)
        throw std::invalid_argument("build_mask: grid shape does not match cell geometry");
    const std::vector<std::size_t> hull = convex_hull(points);
    std::vector<PlanePoint> poly;
    poly.reserve(hull.size());
    for (std::size_t i : hull) poly.push_back(points[i]);

    RegionMask mask;
    mask.ncols = geom.ncols;
    mask.nrows = geom.nrows;
    mask.in.assign(geom.ncols * geom.nrows, 0);
    for (std::size_t r = 0; r < geom.nrows; ++r)
        for (std::size_t c = 0; c < geom.ncols; ++c) {
            if (grid.is_nodata(r, c)) continue;
            if (!strictly_inside_convex(poly, geom.center(r, c))) continue;
            mask.in[r * geom.ncols + c] = 1;
            ++mask.count;
        }
    return mask;
}

BarycentricWeights barycentric(const PlanePoint& a, const PlanePoint& b, const PlanePoint& c,
                               const PlanePoint& q) {
    const double det = (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x);
    if (det == 0.0) throw std::invalid_argument("barycentric: degenerate triangle");
    const double wa = ((b.x - q.x) * (c.y - q.y) - (b.y - q.y) * (c.x - q.x)) / det;
    const double wb = ((c.x - q.x) * (a.y - q.y) - (c.y - q.y) * (a.x - q.x)) / det;
    const double wc = ((a.x - q.x) * (b.y - q.y) - (a.y - q.y) * (b.x - q.x)) / det;
    return BarycentricWeights{wa, wb, wc};
}

double plane_value(const Triangle& tri, std::span<const PlanePoint> points,
                   std::span<const double> h, const PlanePoint& q) {
    const double ha = h[tri.a], hb = h[tri.b], hc = h[tri.c];
    if (std::isnan(ha) || std::isnan(hb) || std::isnan(hc))
        throw std::invalid_argument("plane_value: observation missing at a vertex");
    const BarycentricWeights w = barycentric(points[tri.a], points[tri.b], points[tri.c], q);
    return w.wa * ha + w.wb * hb + w.wc * hc;
}

namespace {

// q displaced by (eps, eps^2) stays strictly left of directed edge u->v iff q
// is strictly left, or q is on the line and the leading displacement term is:
// sign(uy - vy), then sign(vx - ux).
bool displaced_left(const PlanePoint& u, const PlanePoint& v, const PlanePoint& q) {
    switch (orientation(u, v, q)) {
    case Orientation::CounterClockwise: return true;
    case Orientation::Clockwise: return false;
    case Orientation::Collinear: break;
    }
    if (u.y != v.y) return u.y > v.y;
    return v.x > u.x;
}

} // namespace

bool owns_cell(const Triangle& tri, std::span<const PlanePoint> points, const PlanePoint& q) {
    const PlanePoint& a = points[tri.a];
    PlanePoint b = points[tri.b];
    PlanePoint c = points[tri.c];
    if (orientation(a, b, c) == Orientation::Clockwise) std::swap(b, c);
    return displaced_left(a, b, q) && displaced_left(b, c, q) && displaced_left(c, a, q);
}

TriangleCost triangle_cost(const Triangle& tri, std::span<const PlanePoint> points,
                           std::span<const double> h, const RasterGrid& grid,
                           const CellGeometry& geom, ErrorMetric metric, const RegionMask& mask) {
    const PlanePoint& a = points[tri.a];
    const PlanePoint& b = points[tri.b];
    const PlanePoint& c = points[tri.c];
    const double minx = std::min({a.x, b.x, c.x});
    const double maxx = std::max({a.x, b.x, c.x});
    const double miny = std::min({a.y, b.y, c.y});
    const double maxy = std::max({a.y, b.y, c.y});

    TriangleCost out;
    for (std::size_t r = 0; r < geom.nrows; ++r)
        for (std::size_t col = 0; col < geom.ncols; ++col) {
            if (!mask(r, col)) continue;
            const PlanePoint& q = geom.center(r, col);
            if (q.x < minx || q.x > maxx || q.y < miny || q.y > maxy) continue;
            if (!owns_cell(tri, points, q)) continue;
            const double delta = plane_value(tri, points, h, q) - grid.at(r, col);
            out.cost += rate_error(metric, delta);
            ++out.cells;
        }
    return out;
}

CostTable build_cost_table(const CandidateSet& cands, std::span<const PlanePoint> points,
                           std::span<const double> h, const RasterGrid& grid,
                           const CellGeometry& geom, ErrorMetric metric, const RegionMask& mask,
                           unsigned threads) {
    CostTable table;
    table.entries.resize(cands.list.size());
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<std::size_t>(threads, std::max<std::size_t>(1, cands.list.size()));

    auto worker = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i)
            table.entries[i] =
                triangle_cost(cands.list[i].tri, points, h, grid, geom, metric, mask);
    };
    if (threads <= 1) {
        worker(0, cands.list.size());
    } else {
        std::vector<std::thread> pool;
        const std::size_t chunk = (cands.list.size() + threads - 1) / threads;
        for (unsigned t = 0; t < threads; ++t) {
            const std::size_t begin = t * chunk;
            const std::size_t end = std::min(cands.list.size(), begin + chunk);
            if (begin >= end) break;
            pool.emplace_back(worker, begin, end);
        }
        for (auto& th : pool) th.join();
    }
    return table;
}

std::string cost_table_csv(const CandidateSet& cands, const CostTable& costs) {
    if (cands.list.size() != costs.entries.size())
        throw std::invalid_argument("cost_table_csv: size mismatch");
    std::string out = "triangle,i,j,k,cost,cells\n";
    for (std::size_t i = 0; i < cands.list.size(); ++i) {
        const Triangle& t = cands.list[i].tri;
        out += format_int(static_cast<std::int64_t>(i)) + "," + format_int(t.a) + "," +
               format_int(t.b) + "," + format_int(t.c) + "," +
               format_double(costs.entries[i].cost) + "," +
               format_int(static_cast<std::int64_t>(costs.entries[i].cells)) + "\n";
    }
    return out;
}

} // namespace seatri
