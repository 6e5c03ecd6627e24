#pragma once

#include <cstdint>
#include <vector>

#include "seatri/ingest.hpp"

namespace seatri {

// Fully seed-determined synthetic scenario: random stations in a lon/lat box
// observing a surface made of a static plane, sinusoidal bumps whose weights
// oscillate with a 12-epoch period (each bump with its own temporal phase, so
// the composite spatial pattern repeats exactly every 12 epochs but changes
// shape in between), and an optional spatially uniform linear drift. Gauges
// sample the surface at stations plus Gaussian noise; grids sample it
// noiselessly at cell centers.
struct SyntheticScenario {
    std::size_t station_count = 20;
    std::size_t epoch_count = 60;
    std::uint64_t seed = 1;
    std::int64_t first_month = 2000 * 12; // 2000-01

    double lon_min = 2.0;
    double lon_max = 8.0;
    double lat_min = 52.0;
    double lat_max = 57.0;
    std::size_t grid_ncols = 40;
    std::size_t grid_nrows = 30;

    double plane_amplitude_cm = 10.0; // static planar gradient across the box
    std::size_t bump_count = 4;
    double bump_amplitude_cm = 8.0;
    double seasonal_depth = 0.8;        // bump weight = A*(1 + depth*cos(2*pi*t/12 + phase))
    double drift_cm_per_month = 0.0;    // uniform linear trend
    double noise_cm = 0.0;              // gauge noise standard deviation
    double gap_probability = 0.0;       // per (station, epoch) missing chance
};

struct SyntheticData {
    StationSet stations;
    GaugeRecord gauges;
    std::vector<RasterGrid> grids; // one per epoch, labeled YYYY-MM
    ProjectionSpec projection;     // default projection of the station layout
};

// Deterministic per seed: identical scenario -> bitwise-identical data.
SyntheticData generate(const SyntheticScenario& scenario);

// The underlying noiseless surface, exposed for oracle checks.
double synthetic_surface(const SyntheticScenario& scenario, double lon, double lat,
                         std::size_t epoch);

} // namespace seatri
