#pragma once

#include "seatri/candidates.hpp"
#include "seatri/geometry.hpp"
#include "seatri/ingest.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace seatri {

enum class ErrorMetric { SquaredError, AbsoluteError };

double rate_error(ErrorMetric metric, double delta);
ErrorMetric metric_from_name(const std::string& name); // "squared" | "absolute"
std::string metric_name(ErrorMetric metric);

// Projected cell centers of a grid; row-major, row 0 = south.
struct CellGeometry {
    std::size_t ncols{};
    std::size_t nrows{};
    std::vector<PlanePoint> centers;

    static CellGeometry from_grid(const RasterGrid& grid, const ProjectionSpec& spec);
    const PlanePoint& center(std::size_t row, std::size_t col) const {
        return centers[row * ncols + col];
    }
};

// Cells participating in training and evaluation: center strictly inside the
// convex hull of the point set and non-nodata in the given grid.
struct RegionMask {
    std::size_t ncols{};
    std::size_t nrows{};
    std::vector<char> in;
    std::size_t count{};

    bool operator()(std::size_t row, std::size_t col) const { return in[row * ncols + col] != 0; }
};

RegionMask build_mask(const CellGeometry& geom, std::span<const PlanePoint> points,
                      const RasterGrid& grid);

// Barycentric weights of q w.r.t. the triangle's vertices in canonical index
// order. All interpolation goes through this one routine so that training
// costs and evaluation residuals agree bit-for-bit.
struct BarycentricWeights {
    double wa, wb, wc;
};
BarycentricWeights barycentric(const PlanePoint& a, const PlanePoint& b, const PlanePoint& c,
                               const PlanePoint& q);

double plane_value(const Triangle& tri, std::span<const PlanePoint> points,
                   std::span<const double> h, const PlanePoint& q);

// Half-open membership: q belongs to tri iff q displaced by an infinitesimal
// (epsilon, epsilon^2) lands strictly inside. Exactly one triangle of any
// triangulation owns each cell center strictly inside the hull, so per-triangle
// sums partition the masked cell set for every candidate simultaneously.
bool owns_cell(const Triangle& tri, std::span<const PlanePoint> points, const PlanePoint& q);

struct TriangleCost {
    double cost{};
    std::size_t cells{};
};

TriangleCost triangle_cost(const Triangle& tri, std::span<const PlanePoint> points,
                           std::span<const double> h, const RasterGrid& grid,
                           const CellGeometry& geom, ErrorMetric metric, const RegionMask& mask);

struct CostTable {
    std::vector<TriangleCost> entries; // aligned with CandidateSet::list
};

CostTable build_cost_table(const CandidateSet& cands, std::span<const PlanePoint> points,
                           std::span<const double> h, const RasterGrid& grid,
                           const CellGeometry& geom, ErrorMetric metric, const RegionMask& mask,
                           unsigned threads = 0);

// CSV `triangle,i,j,k,cost,cells` for audit.
std::string cost_table_csv(const CandidateSet& cands, const CostTable& costs);

} // namespace seatri
