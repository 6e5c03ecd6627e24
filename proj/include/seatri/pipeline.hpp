#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "seatri/candidates.hpp"
#include "seatri/cost.hpp"
#include "seatri/evaluate.hpp"
#include "seatri/ilp.hpp"
#include "seatri/ingest.hpp"
#include "seatri/synthetic.hpp"
#include "seatri/triangulation.hpp"

namespace seatri {

struct DatasetPaths {
    std::string stations;
    std::string gauges;
    std::string grids_dir;
    std::string projection; // empty: derive the default projection from the stations
};

// Everything the commands operate on: projected stations, the anchored gauge
// record, the grid stack (uniform geometry), and the station indices that
// survive the availability filter and anchoring.
struct Dataset {
    StationSet stations;
    ProjectionSpec projection;
    GaugeRecord gauges;                     // anchored
    std::vector<std::size_t> usable;        // availability-filtered and anchored
    std::vector<std::int64_t> grid_months;  // absolute, ascending, within the gauge axis
    std::vector<RasterGrid> grids;          // aligned with grid_months
    CellGeometry geometry;                  // shared by all grids

    std::size_t grid_index_of_month(std::int64_t month) const; // throws when absent
};

Dataset load_dataset(const DatasetPaths& paths, double availability_threshold);

// Build a Dataset directly from generated data (used by tests).
Dataset dataset_from_synthetic(const SyntheticData& data, double availability_threshold);

// Min-error and Delaunay triangulations of the stations observed at both
// epochs, trained against the epoch-i grid.
struct PairLearn {
    std::vector<std::size_t> subset;  // global station indices (ascending)
    std::vector<PlanePoint> points;
    Triangulation t_me;
    Triangulation t_delaunay;
    double objective = 0.0;           // canonical training cost of t_me
    double delaunay_cost = 0.0;       // canonical training cost of t_delaunay
    IlpStats stats;
};

PairLearn learn_pair(const Dataset& ds, std::size_t grid_i, std::size_t grid_j, OrderBound bound,
                     ErrorMetric metric, unsigned threads = 0);

// Same, with the station subset chosen by the caller (every subset station
// must be observed at the training epoch).
PairLearn learn_pair_subset(const Dataset& ds, std::size_t grid_i,
                            std::vector<std::size_t> subset, OrderBound bound, ErrorMetric metric,
                            unsigned threads = 0);

// Residual variances of both triangulations against the epoch-j grid.
struct PairEvaluation {
    VarianceResult me;
    VarianceResult delaunay;
};

PairEvaluation evaluate_pair(const Dataset& ds, const PairLearn& learned, std::size_t grid_j,
                             ErrorMetric metric);

// Full sweep over every ordered (training, evaluation) grid-epoch pair.
struct SweepResult {
    std::vector<PairResult> pairs;     // training-major, evaluation-minor
    std::vector<std::string> labels;   // per grid epoch
};

SweepResult run_sweep(const Dataset& ds, OrderBound bound, ErrorMetric metric,
                      unsigned threads = 0);

std::string sweep_csv(const SweepResult& sweep, OrderBound bound);
std::string quality_csv(const std::vector<QualityPoint>& curve);

// Reconstruction of epoch j from the triangulation learned at grid epoch
// month_i. Residual products are present only when a grid exists at month_j.
struct ReconstructOutcome {
    PairLearn learned;
    RasterGrid recon_me;
    RasterGrid recon_del;
    std::optional<RasterGrid> resid_me;     // reconstruction - grid_j
    std::optional<RasterGrid> resid_del;
    std::optional<RasterGrid> sq_me;        // squared residuals
    std::optional<RasterGrid> sq_del;
    std::optional<RasterGrid> sq_diff;      // sq_me - sq_del
};

ReconstructOutcome run_reconstruct(const Dataset& ds, std::int64_t month_i, std::int64_t month_j,
                                   OrderBound bound, ErrorMetric metric, unsigned threads = 0);

// Area-mean series over the full gauge axis: plain station mean of the
// anchored gauges, area mean of each reference grid, and area mean of the
// reconstruction whose training epoch is the grid month closest to j among
// those a multiple of 12 months away (ties to the earlier month).
struct SeriesResult {
    EpochAxis axis;
    std::vector<double> gauge_mean;       // NaN where no station reports
    std::vector<double> grid_mean;        // NaN where no grid exists
    std::vector<double> recon_mean;       // NaN where no reconstruction is possible
    std::vector<std::string> training;    // chosen training month label, "" if none
};

SeriesResult run_series(const Dataset& ds, OrderBound bound, ErrorMetric metric,
                        const std::string& weighting, unsigned threads = 0);

std::string series_csv(const EpochAxis& axis, const std::vector<double>& values);

// CSV for a moving-average of a series; entry t is labeled by the central
// month of its window (the later one for even windows).
std::string moving_average_csv(const EpochAxis& axis, const std::vector<double>& averaged,
                               std::size_t window);

// Names `--k` values: "inf" or the decimal order bound.
OrderBound order_bound_from_name(const std::string& name);
std::string order_bound_name(OrderBound bound);

} // namespace seatri
