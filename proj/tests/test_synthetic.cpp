#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "seatri/candidates.hpp"
#include "seatri/cost.hpp"
#include "seatri/epoch.hpp"
#include "seatri/synthetic.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

using namespace seatri;

namespace {

bool same_bits(double a, double b) {
    if (std::isnan(a) || std::isnan(b)) return std::isnan(a) && std::isnan(b);
    return a == b && std::signbit(a) == std::signbit(b);
}

SyntheticScenario small_scenario() {
    SyntheticScenario sc;
    sc.station_count = 8;
    sc.epoch_count = 26;
    sc.seed = 42;
    sc.grid_ncols = 12;
    sc.grid_nrows = 10;
    return sc;
}

} // namespace

TEST_CASE("identical scenarios generate bitwise-identical data") {
    SyntheticScenario sc = small_scenario();
    sc.noise_cm = 1.0;
    sc.gap_probability = 0.2;
    const SyntheticData a = generate(sc);
    const SyntheticData b = generate(sc);

    REQUIRE(a.stations.stations.size() == b.stations.stations.size());
    for (std::size_t s = 0; s < a.stations.stations.size(); ++s) {
        CHECK(a.stations.stations[s].id == b.stations.stations[s].id);
        CHECK(same_bits(a.stations.stations[s].lon, b.stations.stations[s].lon));
        CHECK(same_bits(a.stations.stations[s].lat, b.stations.stations[s].lat));
        CHECK(same_bits(a.stations.stations[s].pos.x, b.stations.stations[s].pos.x));
        CHECK(same_bits(a.stations.stations[s].pos.y, b.stations.stations[s].pos.y));
    }
    REQUIRE(a.gauges.values.size() == b.gauges.values.size());
    for (std::size_t s = 0; s < a.gauges.values.size(); ++s)
        for (std::size_t t = 0; t < a.gauges.values[s].size(); ++t)
            CHECK(same_bits(a.gauges.values[s][t], b.gauges.values[s][t]));
    REQUIRE(a.grids.size() == b.grids.size());
    for (std::size_t g = 0; g < a.grids.size(); ++g) {
        CHECK(a.grids[g].epoch_label == b.grids[g].epoch_label);
        for (std::size_t i = 0; i < a.grids[g].values.size(); ++i)
            CHECK(same_bits(a.grids[g].values[i], b.grids[g].values[i]));
    }
    CHECK(a.projection.parallel1 == b.projection.parallel1);

    // A different seed must actually change the data.
    SyntheticScenario other = sc;
    other.seed = 43;
    const SyntheticData c = generate(other);
    bool any_diff = false;
    for (std::size_t s = 0; s < c.stations.stations.size() && !any_diff; ++s)
        any_diff = c.stations.stations[s].lon != a.stations.stations[s].lon;
    CHECK(any_diff);
}

TEST_CASE("the exposed surface oracle reproduces gauges and grids bit for bit") {
    SyntheticScenario sc = small_scenario(); // noiseless, gap-free
    const SyntheticData data = generate(sc);

    for (std::size_t s = 0; s < sc.station_count; ++s) {
        const Station& st = data.stations.stations[s];
        for (std::size_t t = 0; t < sc.epoch_count; ++t)
            CHECK(same_bits(data.gauges.values[s][t], synthetic_surface(sc, st.lon, st.lat, t)));
    }
    for (std::size_t t = 0; t < sc.epoch_count; t += 7) {
        const RasterGrid& g = data.grids[t];
        for (std::size_t r = 0; r < g.nrows; r += 3)
            for (std::size_t c = 0; c < g.ncols; c += 3)
                CHECK(same_bits(g.at(r, c),
                                synthetic_surface(sc, g.center_lon(c), g.center_lat(r), t)));
    }
}

TEST_CASE("axis, labels, grid metadata, and station ids follow the scenario") {
    SyntheticScenario sc = small_scenario();
    sc.first_month = 1993 * 12 + 4; // 1993-05
    const SyntheticData data = generate(sc);

    CHECK(data.gauges.axis.first_month == sc.first_month);
    CHECK(data.gauges.axis.count == static_cast<std::int64_t>(sc.epoch_count));
    REQUIRE(data.grids.size() == sc.epoch_count);
    CHECK(data.grids[0].epoch_label == "1993-05");
    CHECK(data.grids[7].epoch_label == "1993-12");
    CHECK(data.grids[8].epoch_label == "1994-01");
    for (std::size_t t = 0; t < sc.epoch_count; ++t)
        CHECK(data.grids[t].epoch_label ==
              label_from_month(sc.first_month + static_cast<std::int64_t>(t)));

    const RasterGrid& g = data.grids[0];
    CHECK(g.lon0 == sc.lon_min);
    CHECK(g.lat0 == sc.lat_min);
    CHECK(g.ncols == sc.grid_ncols);
    CHECK(g.nrows == sc.grid_nrows);
    CHECK(g.dlon == (sc.lon_max - sc.lon_min) / 12.0);

    CHECK(data.stations.stations[0].id == "S001");
    CHECK(data.stations.stations[7].id == "S008");
    for (const Station& st : data.stations.stations) {
        CHECK(st.lon > sc.lon_min);
        CHECK(st.lon < sc.lon_max);
        CHECK(st.lat > sc.lat_min);
        CHECK(st.lat < sc.lat_max);
        const PlanePoint p = project(data.projection, st.lon, st.lat);
        CHECK(same_bits(st.pos.x, p.x));
        CHECK(same_bits(st.pos.y, p.y));
    }
}

TEST_CASE("a bump-free noiseless scenario is planar: every candidate fits exactly") {
    SyntheticScenario sc = small_scenario();
    sc.bump_count = 0;
    const SyntheticData data = generate(sc);

    std::vector<PlanePoint> pts;
    for (const Station& st : data.stations.stations) pts.push_back(st.pos);
    std::vector<double> h;
    for (const auto& row : data.gauges.values) h.push_back(row[0]);

    const RasterGrid& grid = data.grids[0];
    const CellGeometry geom = CellGeometry::from_grid(grid, data.projection);
    const RegionMask mask = build_mask(geom, pts, grid);
    REQUIRE(mask.count > 10);

    const CandidateSet cands = enumerate_candidates(pts, OrderBound::unbounded());
    for (const Candidate& c : cands.list) {
        const TriangleCost tc =
            triangle_cost(c.tri, pts, h, grid, geom, ErrorMetric::SquaredError, mask);
        CHECK(tc.cost <= 1e-18);
    }
}

TEST_CASE("bump weights repeat every 12 epochs and vary in between") {
    SyntheticScenario sc = small_scenario();
    sc.epoch_count = 26;
    const double lon = 4.71, lat = 54.3;
    for (std::size_t t : {std::size_t(0), std::size_t(5), std::size_t(11)}) {
        const double a = synthetic_surface(sc, lon, lat, t);
        const double b = synthetic_surface(sc, lon, lat, t + 12);
        CHECK(b == doctest::Approx(a).epsilon(1e-9));
    }
    // Within a period the pattern must actually move.
    bool any_change = false;
    for (double probe_lon : {3.0, 4.5, 6.0, 7.5})
        for (double probe_lat : {52.5, 54.0, 55.5, 56.5})
            if (std::fabs(synthetic_surface(sc, probe_lon, probe_lat, 0) -
                          synthetic_surface(sc, probe_lon, probe_lat, 3)) > 0.1)
                any_change = true;
    CHECK(any_change);
}

TEST_CASE("uniform drift adds exactly its monthly increment") {
    SyntheticScenario sc = small_scenario();
    sc.bump_count = 0;
    sc.drift_cm_per_month = 0.5;
    const double base = synthetic_surface(sc, 5.0, 54.0, 0);
    for (std::size_t t : {std::size_t(1), std::size_t(10), std::size_t(25)})
        CHECK(synthetic_surface(sc, 5.0, 54.0, t) - base ==
              doctest::Approx(0.5 * static_cast<double>(t)).epsilon(1e-12));
}

TEST_CASE("gauge noise has the configured scale and gaps do not disturb it") {
    SyntheticScenario sc = small_scenario();
    sc.station_count = 12;
    sc.epoch_count = 120;
    sc.noise_cm = 1.0;
    const SyntheticData noisy = generate(sc);

    double sum = 0.0, sumsq = 0.0;
    std::size_t n = 0;
    for (std::size_t s = 0; s < sc.station_count; ++s) {
        const Station& st = noisy.stations.stations[s];
        for (std::size_t t = 0; t < sc.epoch_count; ++t) {
            const double resid =
                noisy.gauges.values[s][t] - synthetic_surface(sc, st.lon, st.lat, t);
            sum += resid;
            sumsq += resid * resid;
            ++n;
        }
    }
    const double mean = sum / static_cast<double>(n);
    const double sd = std::sqrt(sumsq / static_cast<double>(n) - mean * mean);
    CHECK(std::fabs(mean) < 0.1); // 1440 draws of unit noise
    CHECK(sd > 0.9);
    CHECK(sd < 1.1);

    // Same seed with gaps: surviving values are bitwise the no-gap values
    // because the noise draw count per (station, epoch) is fixed.
    SyntheticScenario gapped = sc;
    gapped.gap_probability = 0.4;
    const SyntheticData sparse = generate(gapped);
    std::size_t present = 0;
    for (std::size_t s = 0; s < sc.station_count; ++s)
        for (std::size_t t = 0; t < sc.epoch_count; ++t) {
            if (std::isnan(sparse.gauges.values[s][t])) continue;
            ++present;
            CHECK(same_bits(sparse.gauges.values[s][t], noisy.gauges.values[s][t]));
        }
    const double frac = static_cast<double>(present) / static_cast<double>(n);
    CHECK(frac > 0.5);
    CHECK(frac < 0.7);

    // gap_probability zero keeps every observation.
    for (std::size_t s = 0; s < sc.station_count; ++s)
        for (std::size_t t = 0; t < sc.epoch_count; ++t)
            CHECK_FALSE(std::isnan(noisy.gauges.values[s][t]));
}

TEST_CASE("invalid scenarios are rejected") {
    SyntheticScenario sc = small_scenario();
    sc.lon_max = sc.lon_min;
    CHECK_THROWS_AS((void)generate(sc), std::invalid_argument);

    sc = small_scenario();
    sc.station_count = 2;
    CHECK_THROWS_AS((void)generate(sc), std::invalid_argument);

    sc = small_scenario();
    sc.epoch_count = 0;
    CHECK_THROWS_AS((void)generate(sc), std::invalid_argument);

    sc = small_scenario();
    sc.grid_ncols = 0;
    CHECK_THROWS_AS((void)generate(sc), std::invalid_argument);

    sc = small_scenario();
    sc.gap_probability = 1.0;
    CHECK_THROWS_AS((void)generate(sc), std::invalid_argument);
    sc.gap_probability = -0.1;
    CHECK_THROWS_AS((void)generate(sc), std::invalid_argument);
    CHECK_THROWS_AS((void)synthetic_surface(sc, 5.0, 54.0, 0), std::invalid_argument);
}
