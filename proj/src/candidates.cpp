#include "seatri/candidates.hpp"

#include <stdexcept>

namespace seatri {

std::uint32_t order_of(const Triangle& tri, std::span<const PlanePoint> points) {
    std::uint32_t count = 0;
    for (std::uint32_t p = 0; p < points.size(); ++p) {
        if (tri.contains_vertex(p)) continue;
        if (in_circumcircle(points[tri.a], points[tri.b], points[tri.c], points[p]) ==
            CirclePosition::Inside)
            ++count;
    }
    return count;
}

CandidateSet enumerate_candidates(std::span<const PlanePoint> points, OrderBound bound) {
    const std::size_t n = points.size();
    if (n < 3) throw std::invalid_argument("enumerate_candidates: need at least 3 points");

    CandidateSet out;
    for (std::uint32_t a = 0; a < n; ++a)
        for (std::uint32_t b = a + 1; b < n; ++b)
            for (std::uint32_t c = b + 1; c < n; ++c) {
                if (orientation(points[a], points[b], points[c]) == Orientation::Collinear)
                    continue;
                const Triangle tri(a, b, c);

                // A triangle covering another point can never appear in a
                // triangulation that uses every point as a vertex.
                bool empty = true;
                std::uint32_t order = 0;
                for (std::uint32_t p = 0; p < n && empty; ++p) {
                    if (tri.contains_vertex(p)) continue;
                    if (point_in_triangle(points[a], points[b], points[c], points[p]) !=
                        PointLocation::Outside)
                        empty = false;
                }
                if (!empty) continue;
                for (std::uint32_t p = 0; p < n; ++p) {
                    if (tri.contains_vertex(p)) continue;
                    if (in_circumcircle(points[a], points[b], points[c], points[p]) ==
                        CirclePosition::Inside) {
                        ++order;
                        if (bound.k && order > *bound.k) break;
                    }
                }
                if (!bound.allows(order)) continue;
                out.list.push_back(Candidate{tri, order});
            }
    if (out.list.empty())
        throw std::invalid_argument("enumerate_candidates: all points collinear");
    return out;
}

} // namespace seatri
