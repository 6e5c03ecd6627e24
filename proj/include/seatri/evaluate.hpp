#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "seatri/cost.hpp"
#include "seatri/ingest.hpp"
#include "seatri/triangulation.hpp"

namespace seatri {

// Empirical residual variance of the piecewise-linear surface (t, h) against a
// reference grid: per-triangle cost summed over the half-open cell partition,
// divided by (cells - 1). `sum` is the raw pre-division accumulation, which
// under SquaredError equals the ILP objective bit-for-bit when t is the
// solver's triangulation (same accumulation path and order as the cost table).
struct VarianceResult {
    double sum = 0.0;
    std::size_t cells = 0;
    double value = 0.0;
};

VarianceResult surface_variance(const Triangulation& t, std::span<const PlanePoint> points,
                                std::span<const double> h, const RasterGrid& grid,
                                const CellGeometry& geom, ErrorMetric metric,
                                const RegionMask& mask);

// variance(min-error) - variance(Delaunay); negative when the min-error
// triangulation reconstructs the grid better than the Delaunay baseline.
double variance_reduction(const VarianceResult& min_error, const VarianceResult& delaunay);

// One (training epoch i, evaluation epoch j) entry of a sweep.
struct PairResult {
    std::size_t epoch_i = 0;
    std::size_t epoch_j = 0;
    std::size_t delta_d = 0;   // |i - j|
    double var_me = 0.0;       // min-error variance at epoch j
    double var_delaunay = 0.0; // Delaunay variance at epoch j
    std::size_t cells = 0;     // residual cell count at epoch j
};

// q(delta_d) = mean of (var_me - var_delaunay) over all pairs with that epoch
// distance; distances with no pairs are omitted. Sorted by delta_d.
struct QualityPoint {
    std::size_t delta_d = 0;
    double q = 0.0;
    std::size_t count = 0;
};

std::vector<QualityPoint> quality_curve(std::span<const PairResult> pairs);

// All in-range training epochs a whole number of years from j:
// { i in [0, epoch_count) : |i - j| == 0 (mod 12) }, ascending (includes j).
std::vector<std::size_t> climatological_pairs(std::size_t epoch_count, std::size_t j);

// Spatial mean over the grid's non-nodata cells. "uniform" averages plainly;
// "coslat" weights each cell by cos(latitude of its row center). Throws if
// every cell is nodata or the weighting name is unknown.
double area_mean(const RasterGrid& grid, const std::string& weighting);

// Centered moving average over a monthly series. NaN entries are skipped in
// both numerator and denominator; an all-NaN window yields NaN. Output has
// series.size() - window + 1 entries; entry t covers input [t, t + window),
// i.e. is centered on input index t + window/2 (exact for odd windows, the
// later of the two central months for even ones). Window must be >= 1 and
// <= series length.
std::vector<double> moving_average(std::span<const double> series, std::size_t window);

// Ordinary-least-squares slope of value (cm) against month index, scaled to
// mm/yr. NaN entries are skipped; throws if fewer than two non-NaN points
// remain or all remaining points share one month.
double linear_trend_mm_per_year(std::span<const double> series);

} // namespace seatri
