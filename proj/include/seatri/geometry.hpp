#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace seatri {

// Projected station location, meters.
struct PlanePoint {
    double x{};
    double y{};
};

enum class Orientation { CounterClockwise, Clockwise, Collinear };

enum class CirclePosition { Inside, Outside, OnCircle };

enum class PointLocation { StrictInterior, OnBoundary, Outside };

// Exact sign of det(q - p, r - p). Filtered double evaluation with an exact
// rational fallback, so the result is correct even for nearly collinear or
// huge/tiny coordinates.
Orientation orientation(const PlanePoint& p, const PlanePoint& q, const PlanePoint& r);

// Exact classification of q against the circle through a, b, c. The result
// does not depend on the order of a, b, c. Throws std::invalid_argument if
// a, b, c are collinear.
CirclePosition in_circumcircle(const PlanePoint& a, const PlanePoint& b, const PlanePoint& c,
                               const PlanePoint& q);

// Classifies q against the closed triangle abc via three orientation tests.
// Throws std::invalid_argument if the triangle is degenerate.
PointLocation point_in_triangle(const PlanePoint& a, const PlanePoint& b, const PlanePoint& c,
                                const PlanePoint& q);

// Indices of the convex hull in counterclockwise order. Points lying strictly
// inside a hull edge are excluded. Throws std::invalid_argument on fewer than
// 3 points or an all-collinear input.
std::vector<std::size_t> convex_hull(std::span<const PlanePoint> points);

// Counterclockwise boundary chain of the hull, including points that lie
// strictly inside hull edges (each such point splits its edge). Consecutive
// chain entries are the boundary edges used by the cocircuit constraints.
std::vector<std::size_t> boundary_chain(std::span<const PlanePoint> points);

// True iff q lies strictly inside the convex polygon given by a CCW vertex
// chain (boundary counts as outside).
bool strictly_inside_convex(std::span<const PlanePoint> polygon, const PlanePoint& q);

// Unordered station-index triple in canonical ascending order.
struct Triangle {
    std::uint32_t a;
    std::uint32_t b;
    std::uint32_t c;

    Triangle(std::uint32_t i, std::uint32_t j, std::uint32_t k);
    bool contains_vertex(std::uint32_t v) const { return v == a || v == b || v == c; }
    std::uint32_t third(std::uint32_t u, std::uint32_t v) const;
    auto operator<=>(const Triangle&) const = default;
};

} // namespace seatri
