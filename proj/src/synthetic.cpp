#include "seatri/synthetic.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>
#include <utility>

#include "seatri/epoch.hpp"

namespace seatri {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Distinct deterministic engine per (seed, purpose) so the surface model can
// be re-derived independently of how many station/noise draws were made.
std::mt19937_64 stream(std::uint64_t seed, std::uint64_t purpose) {
    return std::mt19937_64(splitmix64(seed ^ splitmix64(purpose)));
}

double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Box-Muller; one normal per call, discarding the sibling keeps the draw
// count per (station, epoch) fixed.
double normal01(std::mt19937_64& rng) {
    double u1 = uniform01(rng);
    const double u2 = uniform01(rng);
    if (u1 <= 0.0) u1 = 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

struct Bump {
    double amplitude;
    double freq_u, freq_v; // cycles across the box
    double spatial_phase;
    double temporal_phase;
};

struct SurfaceModel {
    double plane_b, plane_c;
    std::vector<Bump> bumps;
};

SurfaceModel build_surface(const SyntheticScenario& sc) {
    std::mt19937_64 rng = stream(sc.seed, 2);
    SurfaceModel m;
    m.plane_b = sc.plane_amplitude_cm * (2.0 * uniform01(rng) - 1.0);
    m.plane_c = sc.plane_amplitude_cm * (2.0 * uniform01(rng) - 1.0);
    m.bumps.reserve(sc.bump_count);
    for (std::size_t b = 0; b < sc.bump_count; ++b) {
        Bump bump;
        bump.amplitude = sc.bump_amplitude_cm * (0.5 + 0.5 * uniform01(rng));
        bump.freq_u = 0.5 + 2.0 * uniform01(rng);
        bump.freq_v = 0.5 + 2.0 * uniform01(rng);
        bump.spatial_phase = 2.0 * std::numbers::pi * uniform01(rng);
        bump.temporal_phase = 2.0 * std::numbers::pi * uniform01(rng);
        m.bumps.push_back(bump);
    }
    return m;
}

std::vector<std::pair<double, double>> station_layout(const SyntheticScenario& sc) {
    // Uniform in the box, shrunk 5% per side so hull-interior grid cells are
    // not starved at the edges.
    std::mt19937_64 rng = stream(sc.seed, 1);
    const double margin_lon = 0.05 * (sc.lon_max - sc.lon_min);
    const double margin_lat = 0.05 * (sc.lat_max - sc.lat_min);
    std::vector<std::pair<double, double>> lonlat;
    lonlat.reserve(sc.station_count);
    for (std::size_t s = 0; s < sc.station_count; ++s) {
        const double lon = sc.lon_min + margin_lon +
                           uniform01(rng) * (sc.lon_max - sc.lon_min - 2.0 * margin_lon);
        const double lat = sc.lat_min + margin_lat +
                           uniform01(rng) * (sc.lat_max - sc.lat_min - 2.0 * margin_lat);
        lonlat.emplace_back(lon, lat);
    }
    return lonlat;
}

// The planar trend is linear in PROJECTED coordinates — the space the
// reconstruction interpolates in — so a bump-free noiseless scenario is
// fitted exactly by every triangulation. Bumps live in normalized lon/lat.
double surface_value(const SyntheticScenario& sc, const SurfaceModel& m,
                     const ProjectionSpec& proj, double lon, double lat, std::size_t epoch) {
    const PlanePoint p = project(proj, lon, lat);
    constexpr double kPlaneScale = 1.0e5; // metres; ~one box width per unit
    const double u = (lon - sc.lon_min) / (sc.lon_max - sc.lon_min);
    const double v = (lat - sc.lat_min) / (sc.lat_max - sc.lat_min);
    const double t = static_cast<double>(epoch);
    double s = m.plane_b * (p.x / kPlaneScale) + m.plane_c * (p.y / kPlaneScale) +
               sc.drift_cm_per_month * t;
    for (const Bump& b : m.bumps) {
        const double weight =
            1.0 + sc.seasonal_depth * std::cos(std::numbers::pi / 6.0 * t + b.temporal_phase);
        s += b.amplitude * weight *
             std::sin(2.0 * std::numbers::pi * (b.freq_u * u + b.freq_v * v) + b.spatial_phase);
    }
    return s;
}

void check_scenario(const SyntheticScenario& sc) {
    if (!(sc.lon_max > sc.lon_min) || !(sc.lat_max > sc.lat_min))
        throw std::invalid_argument("synthetic: degenerate region box");
    if (sc.station_count < 3) throw std::invalid_argument("synthetic: need at least 3 stations");
    if (sc.epoch_count < 1) throw std::invalid_argument("synthetic: need at least 1 epoch");
    if (sc.grid_ncols < 1 || sc.grid_nrows < 1)
        throw std::invalid_argument("synthetic: empty grid");
    if (sc.gap_probability < 0.0 || sc.gap_probability >= 1.0)
        throw std::invalid_argument("synthetic: gap probability must be in [0, 1)");
}

} // namespace

double synthetic_surface(const SyntheticScenario& scenario, double lon, double lat,
                         std::size_t epoch) {
    check_scenario(scenario);
    const SurfaceModel m = build_surface(scenario);
    const ProjectionSpec proj = default_projection(station_layout(scenario));
    return surface_value(scenario, m, proj, lon, lat, epoch);
}

SyntheticData generate(const SyntheticScenario& sc) {
    check_scenario(sc);
    const SurfaceModel model = build_surface(sc);

    SyntheticData out;
    const std::vector<std::pair<double, double>> lonlat = station_layout(sc);
    out.projection = default_projection(lonlat);

    char idbuf[16];
    for (std::size_t s = 0; s < sc.station_count; ++s) {
        std::snprintf(idbuf, sizeof idbuf, "S%03zu", s + 1);
        Station st;
        st.id = idbuf;
        st.lon = lonlat[s].first;
        st.lat = lonlat[s].second;
        st.pos = project(out.projection, st.lon, st.lat);
        out.stations.stations.push_back(st);
    }

    // Gauges: surface + noise, gapped independently per (station, epoch).
    out.gauges.axis = EpochAxis{sc.first_month, static_cast<std::int64_t>(sc.epoch_count)};
    out.gauges.values.assign(sc.station_count,
                             std::vector<double>(sc.epoch_count,
                                                 std::numeric_limits<double>::quiet_NaN()));
    std::mt19937_64 noise_rng = stream(sc.seed, 3);
    std::mt19937_64 gap_rng = stream(sc.seed, 4);
    for (std::size_t s = 0; s < sc.station_count; ++s)
        for (std::size_t t = 0; t < sc.epoch_count; ++t) {
            const double noise = sc.noise_cm * normal01(noise_rng);
            const bool gap = uniform01(gap_rng) < sc.gap_probability;
            if (gap) continue;
            out.gauges.values[s][t] =
                surface_value(sc, model, out.projection, lonlat[s].first, lonlat[s].second, t) +
                noise;
        }

    // Grids: noiseless surface at cell centers, full coverage.
    out.grids.reserve(sc.epoch_count);
    for (std::size_t t = 0; t < sc.epoch_count; ++t) {
        RasterGrid g;
        g.lon0 = sc.lon_min;
        g.lat0 = sc.lat_min;
        g.dlon = (sc.lon_max - sc.lon_min) / static_cast<double>(sc.grid_ncols);
        g.dlat = (sc.lat_max - sc.lat_min) / static_cast<double>(sc.grid_nrows);
        g.ncols = sc.grid_ncols;
        g.nrows = sc.grid_nrows;
        g.epoch_label = label_from_month(sc.first_month + static_cast<std::int64_t>(t));
        g.values.resize(sc.grid_ncols * sc.grid_nrows);
        for (std::size_t r = 0; r < g.nrows; ++r)
            for (std::size_t c = 0; c < g.ncols; ++c)
                g.at(r, c) =
                    surface_value(sc, model, out.projection, g.center_lon(c), g.center_lat(r), t);
        out.grids.push_back(std::move(g));
    }
    return out;
}

} // namespace seatri
