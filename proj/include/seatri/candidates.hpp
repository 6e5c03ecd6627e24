#pragma once

#include "seatri/geometry.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace seatri {

// Maximum number of foreign points allowed strictly inside a candidate's
// circumcircle; no bound for the pure min-error problem.
struct OrderBound {
    std::optional<std::uint32_t> k; // nullopt = unbounded

    static OrderBound finite(std::uint32_t k) { return OrderBound{k}; }
    static OrderBound unbounded() { return OrderBound{std::nullopt}; }
    bool allows(std::uint32_t order) const { return !k || order <= *k; }
};

struct Candidate {
    Triangle tri;
    std::uint32_t order; // points strictly inside the circumcircle
};

struct CandidateSet {
    std::vector<Candidate> list; // sorted by canonical vertex triple
};

// Points strictly inside the circumcircle of tri, excluding its vertices;
// OnCircle does not count.
std::uint32_t order_of(const Triangle& tri, std::span<const PlanePoint> points);

// All non-collinear triples with no point in the closed triangle interior or
// strictly inside an edge, filtered by the order bound.
CandidateSet enumerate_candidates(std::span<const PlanePoint> points, OrderBound bound);

} // namespace seatri
