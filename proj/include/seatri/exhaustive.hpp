#pragma once

#include <span>
#include <vector>

#include "seatri/candidates.hpp"
#include "seatri/cost.hpp"
#include "seatri/triangulation.hpp"

namespace seatri {

// Every triangulation of the point set, via backtracking over the unbounded
// candidate set: repeatedly pick the lowest unmet edge demand (an uncovered
// boundary-chain edge, or an interior edge covered on exactly one side) and
// branch over the candidates that can meet it. Guarded to 3 <= n <= 9.
// Deterministic order; each result passes validate_triangulation.
std::vector<Triangulation> enumerate_all_triangulations(std::span<const PlanePoint> points);

struct BruteForceResult {
    Triangulation triangulation;
    double objective = 0.0;       // canonical sum over sorted triangles
    std::size_t feasible = 0;     // triangulations satisfying the order bound
    std::size_t enumerated = 0;   // all triangulations
};

// Minimum-cost triangulation by exhaustive search, filtering the enumeration
// by the per-triangle order bound. Costs use the exact same per-triangle
// accumulation as the solver; ties prefer the lexicographically smaller
// sorted triangle list.
BruteForceResult brute_force_min_error(std::span<const PlanePoint> points,
                                       std::span<const double> h, const RasterGrid& grid,
                                       const CellGeometry& geom, ErrorMetric metric,
                                       const RegionMask& mask, OrderBound bound);

} // namespace seatri
