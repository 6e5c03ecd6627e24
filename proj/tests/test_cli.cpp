// End-to-end tests of the command-line tool. Every subcommand runs as a real
// subprocess against a small on-disk dataset; the tests check exit codes,
// stdout/stderr, the set of files written, and their parsed contents.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "seatri/epoch.hpp"
#include "seatri/evaluate.hpp"
#include "seatri/ingest.hpp"
#include "seatri/textio.hpp"
#include "seatri/triangulation.hpp"

#include <sys/wait.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

using namespace seatri;
namespace fs = std::filesystem;

namespace {

struct RunResult {
    int code = -1;
    std::string out;
    std::string err;
};

fs::path scratch_root() {
    static const fs::path root = [] {
        fs::path p = fs::temp_directory_path() / "seatri_cli_tests";
        fs::remove_all(p);
        fs::create_directories(p);
        return p;
    }();
    return root;
}

fs::path fresh_dir(const std::string& name) {
    fs::path p = scratch_root() / name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string quoted(const fs::path& p) { return "\"" + p.string() + "\""; }

// Runs the CLI binary with the given arguments, capturing stdout/stderr.
RunResult run_cli(const std::string& args) {
    static int counter = 0;
    const fs::path out_file = scratch_root() / ("stdout_" + std::to_string(counter) + ".txt");
    const fs::path err_file = scratch_root() / ("stderr_" + std::to_string(counter) + ".txt");
    ++counter;
    const std::string cmd = std::string(SEATRI_CLI_PATH) + " " + args + " > " +
                            quoted(out_file) + " 2> " + quoted(err_file);
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = read_text_file(out_file.string());
    r.err = read_text_file(err_file.string());
    return r;
}

std::string run_solver(const fs::path& mps) {
    const std::string cmd = "python3 \"" SEATRI_SOLVER_SCRIPT "\" " + quoted(mps);
    std::string output;
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    char buf[256];
    while (std::fgets(buf, sizeof buf, pipe) != nullptr) output += buf;
    REQUIRE(pclose(pipe) == 0);
    return output;
}

std::size_t count_lines(const std::string& text) {
    std::size_t n = 0;
    for (char c : text)
        if (c == '\n') ++n;
    return n;
}

std::string dataset_flags(const fs::path& dir) {
    return "--stations " + quoted(dir / "stations.csv") + " --gauges " +
           quoted(dir / "gauges.csv") + " --grids " + quoted(dir / "grids") + " --projection " +
           quoted(dir / "projection.txt");
}

// Value of the per-epoch plane v = a*(x/1e5) + b*(y/1e5) + c at a lon/lat
// position, evaluated in the projected coordinates the solver itself uses.
double plane_at(const ProjectionSpec& spec, const std::array<double, 3>& co, double lon,
                double lat) {
    const PlanePoint p = project(spec, lon, lat);
    return co[0] * (p.x / 1e5) + co[1] * (p.y / 1e5) + co[2];
}

struct PlanarFixture {
    fs::path dir;
    ProjectionSpec spec;
    RasterGrid geom;                            // geometry template (values unused)
    std::vector<std::array<double, 3>> coeff;   // per-epoch plane coefficients
    std::vector<std::pair<std::size_t, std::size_t>> cells; // station (row, col)
};

// A dataset whose reference surface is an exact plane in projected coordinates
// at every epoch and whose stations sit exactly on grid-cell centers, so that
// anchoring is (numerically) a no-op and linear interpolation reproduces the
// reference field. Epochs start at 2001-01; grids exist for the first
// `n_grids` epochs only.
PlanarFixture write_planar_fixture(const std::string& name, std::size_t n_epochs,
                                   std::size_t n_grids) {
    PlanarFixture fx;
    fx.dir = fresh_dir(name);
    fx.spec.parallel1 = 41.0;
    fx.spec.parallel2 = 44.0;
    fx.spec.ref_lon = 13.0;
    fx.spec.ref_lat = 42.5;

    fx.geom.lon0 = 10.0;
    fx.geom.lat0 = 40.0;
    fx.geom.dlon = 0.5;
    fx.geom.dlat = 0.5;
    fx.geom.ncols = 12;
    fx.geom.nrows = 10;
    fx.geom.values.assign(fx.geom.ncols * fx.geom.nrows, 0.0);

    for (std::size_t t = 0; t < n_epochs; ++t)
        fx.coeff.push_back({3.0, -2.0, 4.0 + 0.05 * static_cast<double>(t)});

    fx.cells = {{1, 1}, {1, 10}, {8, 1}, {8, 10}, {4, 5}, {6, 3}};
    StationSet stations;
    for (std::size_t s = 0; s < fx.cells.size(); ++s) {
        Station st;
        st.id = "G0" + std::to_string(s + 1);
        st.lon = fx.geom.center_lon(fx.cells[s].second);
        st.lat = fx.geom.center_lat(fx.cells[s].first);
        st.pos = project(fx.spec, st.lon, st.lat);
        stations.stations.push_back(st);
    }

    GaugeRecord rec;
    rec.axis.first_month = month_from_label("2001-01");
    rec.axis.count = static_cast<std::int64_t>(n_epochs);
    rec.values.assign(stations.size(), std::vector<double>(n_epochs, 0.0));
    for (std::size_t s = 0; s < stations.size(); ++s)
        for (std::size_t t = 0; t < n_epochs; ++t)
            rec.values[s][t] =
                plane_at(fx.spec, fx.coeff[t], stations[s].lon, stations[s].lat);

    write_projection_spec(fx.spec, (fx.dir / "projection.txt").string());
    write_stations(stations, (fx.dir / "stations.csv").string());
    write_gauges(rec, stations, (fx.dir / "gauges.csv").string());

    fs::create_directories(fx.dir / "grids");
    for (std::size_t t = 0; t < n_grids; ++t) {
        RasterGrid g = fx.geom;
        g.epoch_label = label_from_month(rec.axis.first_month + static_cast<std::int64_t>(t));
        for (std::size_t r = 0; r < g.nrows; ++r)
            for (std::size_t c = 0; c < g.ncols; ++c)
                g.at(r, c) = plane_at(fx.spec, fx.coeff[t], g.center_lon(c), g.center_lat(r));
        write_grid(g, (fx.dir / "grids" / (g.epoch_label + ".asc")).string());
    }
    return fx;
}

std::size_t count_valid(const RasterGrid& g) {
    std::size_t n = 0;
    for (std::size_t r = 0; r < g.nrows; ++r)
        for (std::size_t c = 0; c < g.ncols; ++c)
            if (!g.is_nodata(r, c)) ++n;
    return n;
}

} // namespace

TEST_CASE("synth writes a complete dataset and reruns are byte-identical") {
    const fs::path a = fresh_dir("synth_a");
    const fs::path b = fresh_dir("synth_b");
    const std::string shape = "--n-stations 9 --epochs 8 --first-epoch 1997-11 "
                              "--grid-cols 14 --grid-rows 11 --noise-cm 0.5 --gap-probability 0.15";
    const std::string flags = "--seed 5 " + shape;

    const RunResult ra = run_cli("synth --out " + quoted(a) + " " + flags);
    CHECK(ra.code == 0);
    CHECK(ra.out.find("wrote 9 stations, 8 epochs, 8 grids") != std::string::npos);
    CHECK(ra.err.empty());

    CHECK(fs::exists(a / "stations.csv"));
    CHECK(fs::exists(a / "gauges.csv"));
    CHECK(fs::exists(a / "projection.txt"));
    // One grid per epoch, named by label: 1997-11 .. 1998-06.
    const std::vector<std::string> labels = {"1997-11", "1997-12", "1998-01", "1998-02",
                                             "1998-03", "1998-04", "1998-05", "1998-06"};
    for (const std::string& l : labels) CHECK(fs::exists(a / "grids" / (l + ".asc")));
    std::size_t grid_files = 0;
    for (const auto& e : fs::directory_iterator(a / "grids")) {
        CHECK(e.path().extension() == ".asc");
        ++grid_files;
    }
    CHECK(grid_files == 8);

    const RunResult rb = run_cli("synth --out " + quoted(b) + " " + flags);
    CHECK(rb.code == 0);
    std::size_t compared = 0;
    for (const auto& e : fs::recursive_directory_iterator(a)) {
        if (!e.is_regular_file()) continue;
        const fs::path rel = fs::relative(e.path(), a);
        CAPTURE(rel.string());
        REQUIRE(fs::exists(b / rel));
        CHECK(read_text_file(e.path().string()) == read_text_file((b / rel).string()));
        ++compared;
    }
    CHECK(compared == 3 + 8);

    // A different seed must change the data.
    const fs::path c = fresh_dir("synth_c");
    const RunResult rc = run_cli("synth --out " + quoted(c) + " --seed 6 " + shape);
    CHECK(rc.code == 0);
    CHECK(read_text_file((a / "gauges.csv").string()) !=
          read_text_file((c / "gauges.csv").string()));
}

TEST_CASE("triangulate writes both triangulations and is deterministic") {
    const fs::path data = fresh_dir("tri_data");
    REQUIRE(run_cli("synth --out " + quoted(data) +
                    " --seed 11 --n-stations 8 --epochs 4 --grid-cols 12 --grid-rows 10 "
                    "--noise-cm 0.3")
                .code == 0);

    const fs::path out1 = fresh_dir("tri_out1");
    const RunResult r1 = run_cli("triangulate " + dataset_flags(data) +
                                 " --epoch 2000-03 --k 1 --dump-costs --out " + quoted(out1));
    CHECK(r1.code == 0);
    CHECK(r1.out.find("epoch 2000-03 k=1: 8 stations, objective ") != std::string::npos);

    const fs::path me_path = out1 / "tri_me_2000-03_k1.txt";
    const fs::path del_path = out1 / "tri_delaunay_2000-03.txt";
    REQUIRE(fs::exists(me_path));
    REQUIRE(fs::exists(del_path));

    const TriangulationFile me = read_triangulation_text(read_text_file(me_path.string()));
    const TriangulationFile del = read_triangulation_text(read_text_file(del_path.string()));
    REQUIRE(me.objective.has_value());
    REQUIRE(del.objective.has_value());
    // Optimum over a superset of triangulations cannot lose to Delaunay.
    CHECK(*me.objective <= *del.objective + 1e-12);
    // Same point set, so both are triangulations with the same triangle count.
    CHECK(me.triangles.size() == del.triangles.size());
    CHECK(me.triangles.size() >= 6); // 8 points, hull size <= 8 => >= 2*7-8

    const std::string costs = read_text_file((out1 / "costs_2000-03_k1.csv").string());
    CHECK(costs.rfind("triangle,i,j,k,cost,cells\n", 0) == 0);
    CHECK(count_lines(costs) >= 2);

    // Rerun into a second directory: byte-identical artifacts.
    const fs::path out2 = fresh_dir("tri_out2");
    REQUIRE(run_cli("triangulate " + dataset_flags(data) +
                    " --epoch 2000-03 --k 1 --dump-costs --out " + quoted(out2))
                .code == 0);
    for (const char* name : {"tri_me_2000-03_k1.txt", "tri_delaunay_2000-03.txt",
                             "costs_2000-03_k1.csv"}) {
        CAPTURE(name);
        CHECK(read_text_file((out1 / name).string()) ==
              read_text_file((out2 / name).string()));
    }

    // Without --dump-costs no cost table appears.
    const fs::path out3 = fresh_dir("tri_out3");
    REQUIRE(run_cli("triangulate " + dataset_flags(data) + " --epoch 2000-03 --k 1 --out " +
                    quoted(out3))
                .code == 0);
    CHECK(!fs::exists(out3 / "costs_2000-03_k1.csv"));
}

TEST_CASE("triangulate at k=0 reproduces the Delaunay file byte for byte") {
    const fs::path data = fresh_dir("tri0_data");
    REQUIRE(run_cli("synth --out " + quoted(data) +
                    " --seed 11 --n-stations 8 --epochs 4 --grid-cols 12 --grid-rows 10 "
                    "--noise-cm 0.3")
                .code == 0);
    const fs::path out = fresh_dir("tri0_out");
    REQUIRE(run_cli("triangulate " + dataset_flags(data) + " --epoch 2000-02 --k 0 --out " +
                    quoted(out))
                .code == 0);
    // At k = 0 the only admissible triangulation is Delaunay, and both files
    // carry the same canonically accumulated objective.
    CHECK(read_text_file((out / "tri_me_2000-02_k0.txt").string()) ==
          read_text_file((out / "tri_delaunay_2000-02.txt").string()));
}

TEST_CASE("reconstruct on an exact planar dataset reproduces the reference field") {
    const PlanarFixture fx = write_planar_fixture("planar_rec", 3, 2);
    const fs::path out = fresh_dir("planar_rec_out");
    const RunResult r = run_cli("reconstruct " + dataset_flags(fx.dir) +
                                " --epoch-i 2001-01 --epoch-j 2001-02 --k 0 --out " + quoted(out));
    CHECK(r.code == 0);
    CHECK(r.err.empty());

    const std::string tag = "2001-01_2001-02_k0";
    for (const std::string stem :
         {"tri_me_", "tri_delaunay_"})
        CHECK(fs::exists(out / (stem + tag + ".txt")));

    const RasterGrid recon = load_grid((out / ("recon_me_" + tag + ".asc")).string());
    CHECK(recon.ncols == fx.geom.ncols);
    CHECK(recon.nrows == fx.geom.nrows);
    CHECK(recon.lon0 == doctest::Approx(fx.geom.lon0));
    CHECK(recon.dlon == doctest::Approx(fx.geom.dlon));

    // Inside the station hull the plane is reproduced; outside it is nodata.
    std::size_t valid = 0;
    for (std::size_t row = 0; row < recon.nrows; ++row)
        for (std::size_t col = 0; col < recon.ncols; ++col) {
            if (recon.is_nodata(row, col)) continue;
            ++valid;
            const double want =
                plane_at(fx.spec, fx.coeff[1], recon.center_lon(col), recon.center_lat(row));
            CHECK(std::abs(recon.at(row, col) - want) < 1e-9);
        }
    CHECK(valid > 0);
    CHECK(recon.is_nodata(0, 0));                       // corner cell outside the hull
    CHECK(recon.is_nodata(fx.geom.nrows - 1, fx.geom.ncols - 1));
    CHECK(!recon.is_nodata(fx.cells[4].first, fx.cells[4].second)); // interior station cell

    // Residual products exist and are numerically zero (reference == plane).
    const RasterGrid resid = load_grid((out / ("resid_me_" + tag + ".asc")).string());
    CHECK(count_valid(resid) == valid);
    for (std::size_t row = 0; row < resid.nrows; ++row)
        for (std::size_t col = 0; col < resid.ncols; ++col)
            if (!resid.is_nodata(row, col)) CHECK(std::abs(resid.at(row, col)) < 1e-9);
    const RasterGrid sqdiff = load_grid((out / ("sqdiff_" + tag + ".asc")).string());
    for (std::size_t row = 0; row < sqdiff.nrows; ++row)
        for (std::size_t col = 0; col < sqdiff.ncols; ++col)
            if (!sqdiff.is_nodata(row, col)) CHECK(std::abs(sqdiff.at(row, col)) < 1e-18);
    for (const std::string stem : {"resid_delaunay_", "sqresid_me_", "sqresid_delaunay_"})
        CHECK(fs::exists(out / (stem + tag + ".asc")));

    // Metadata sidecar.
    const std::string meta = read_text_file((out / ("recon_" + tag + ".meta.txt")).string());
    CHECK(meta.find("training_epoch = 2001-01\n") != std::string::npos);
    CHECK(meta.find("reconstruction_epoch = 2001-02\n") != std::string::npos);
    CHECK(meta.find("k = 0\n") != std::string::npos);
    CHECK(meta.find("metric = squared\n") != std::string::npos);
    const auto obj_pos = meta.find("objective_me = ");
    REQUIRE(obj_pos != std::string::npos);
    const auto obj_end = meta.find('\n', obj_pos);
    const auto obj = parse_double(meta.substr(obj_pos + 15, obj_end - obj_pos - 15));
    REQUIRE(obj.has_value());
    CHECK(std::abs(*obj) < 1e-9); // a plane costs (numerically) nothing
}

TEST_CASE("reconstruct warns but succeeds when the target epoch has no grid") {
    const PlanarFixture fx = write_planar_fixture("planar_nogrid", 3, 2);
    const fs::path out = fresh_dir("planar_nogrid_out");
    const RunResult r = run_cli("reconstruct " + dataset_flags(fx.dir) +
                                " --epoch-i 2001-01 --epoch-j 2001-03 --k 0 --out " + quoted(out));
    CHECK(r.code == 0);
    CHECK(r.err.find("no reference grid at 2001-03; residual grids skipped") !=
          std::string::npos);

    const std::string tag = "2001-01_2001-03_k0";
    CHECK(fs::exists(out / ("recon_me_" + tag + ".asc")));
    CHECK(fs::exists(out / ("recon_delaunay_" + tag + ".asc")));
    CHECK(!fs::exists(out / ("resid_me_" + tag + ".asc")));
    CHECK(!fs::exists(out / ("sqdiff_" + tag + ".asc")));

    // The reconstruction itself is still the epoch-3 plane inside the hull.
    const RasterGrid recon = load_grid((out / ("recon_me_" + tag + ".asc")).string());
    for (std::size_t row = 0; row < recon.nrows; ++row)
        for (std::size_t col = 0; col < recon.ncols; ++col)
            if (!recon.is_nodata(row, col)) {
                const double want = plane_at(fx.spec, fx.coeff[2], recon.center_lon(col),
                                             recon.center_lat(row));
                CHECK(std::abs(recon.at(row, col) - want) < 1e-9);
            }
}

TEST_CASE("sweep writes the pair matrix and both quality curves") {
    const fs::path data = fresh_dir("sweep_data");
    REQUIRE(run_cli("synth --out " + quoted(data) +
                    " --seed 3 --n-stations 8 --epochs 4 --grid-cols 10 --grid-rows 8 "
                    "--noise-cm 0.2")
                .code == 0);
    const fs::path out = fresh_dir("sweep_out");
    const RunResult r =
        run_cli("sweep " + dataset_flags(data) + " --k 1 --out " + quoted(out));
    CHECK(r.code == 0);
    CHECK(r.out.find("swept 4 x 4 epoch pairs (k=1)") != std::string::npos);

    const std::string sweep = read_text_file((out / "sweep.csv").string());
    CHECK(sweep.rfind("i,j,delta_d,k,var_me,var_delaunay,var_reduction,cells\n", 0) == 0);
    CHECK(count_lines(sweep) == 1 + 16);
    // Diagonal rows (i == j) train and evaluate on the same epoch, where the
    // learned triangulation can never lose to Delaunay.
    std::size_t diagonal_rows = 0;
    std::size_t pos = sweep.find('\n') + 1;
    while (pos < sweep.size()) {
        std::size_t end = sweep.find('\n', pos);
        const std::string line = sweep.substr(pos, end - pos);
        const auto fields = split(line, ',');
        REQUIRE(fields.size() == 8);
        if (fields[0] == fields[1]) {
            ++diagonal_rows;
            const auto vme = parse_double(fields[4]);
            const auto vdel = parse_double(fields[5]);
            REQUIRE(vme.has_value());
            REQUIRE(vdel.has_value());
            CHECK(*vme <= *vdel + 1e-12);
        }
        pos = end + 1;
    }
    CHECK(diagonal_rows == 4);

    const std::string quality = read_text_file((out / "quality.csv").string());
    CHECK(quality.rfind("delta_d,q,count\n", 0) == 0);
    CHECK(count_lines(quality) == 1 + 4); // delta 0..3
    const std::string clim = read_text_file((out / "quality_climatological.csv").string());
    CHECK(clim.rfind("delta_d,q,count\n", 0) == 0);
    CHECK(count_lines(clim) == 1 + 1); // only delta 0 is a multiple of 12
    CHECK(clim.find("\n0,") != std::string::npos);

    // Determinism: rerunning reproduces every table byte for byte.
    const fs::path out2 = fresh_dir("sweep_out2");
    REQUIRE(run_cli("sweep " + dataset_flags(data) + " --k 1 --out " + quoted(out2)).code == 0);
    for (const char* name : {"sweep.csv", "quality.csv", "quality_climatological.csv"}) {
        CAPTURE(name);
        CHECK(read_text_file((out / name).string()) == read_text_file((out2 / name).string()));
    }
}

TEST_CASE("series writes gauge, grid, reconstruction, and training tables") {
    const PlanarFixture fx = write_planar_fixture("planar_series", 3, 2);
    const fs::path out = fresh_dir("series_out");
    const RunResult r = run_cli("series " + dataset_flags(fx.dir) +
                                " --k 0 --window 2 --trend --out " + quoted(out));
    CHECK(r.code == 0);
    CHECK(r.out.find("series over 3 epochs") != std::string::npos);

    // Gauge means: plain station mean of the (identity-anchored) plane values.
    const std::string gauges = read_text_file((out / "series_gauges.csv").string());
    CHECK(gauges.rfind("epoch,value_cm\n", 0) == 0);
    REQUIRE(count_lines(gauges) == 1 + 3);
    StationSet stations;
    {
        const ProjectionSpec spec = read_projection_spec((fx.dir / "projection.txt").string());
        stations = load_stations((fx.dir / "stations.csv").string(), spec);
    }
    std::size_t pos = gauges.find('\n') + 1;
    for (std::size_t t = 0; t < 3; ++t) {
        const std::size_t end = gauges.find('\n', pos);
        const std::string line = gauges.substr(pos, end - pos);
        const auto fields = split(line, ',');
        REQUIRE(fields.size() == 2);
        CHECK(fields[0] == label_from_month(month_from_label("2001-01") +
                                            static_cast<std::int64_t>(t)));
        double mean = 0.0;
        for (std::size_t s = 0; s < stations.size(); ++s)
            mean += plane_at(fx.spec, fx.coeff[t], stations[s].lon, stations[s].lat);
        mean /= static_cast<double>(stations.size());
        const auto got = parse_double(fields[1]);
        REQUIRE(got.has_value());
        CHECK(*got == doctest::Approx(mean).epsilon(1e-9));
        pos = end + 1;
    }

    // Grid means exist only at grid epochs and match the library's area mean.
    const std::string grids = read_text_file((out / "series_grids.csv").string());
    REQUIRE(count_lines(grids) == 1 + 3);
    CHECK(grids.find("\n2001-03,nan\n") != std::string::npos);
    const RasterGrid g0 = load_grid((fx.dir / "grids" / "2001-01.asc").string());
    const std::string want0 = "\n2001-01," + format_double(area_mean(g0, "coslat")) + "\n";
    CHECK(grids.find(want0) != std::string::npos);

    // Reconstruction means: epochs 2001-01/02 train on their own grids; no
    // grid shares 2001-03's month of year, so that entry is missing.
    const std::string recon = read_text_file((out / "series_recon.csv").string());
    REQUIRE(count_lines(recon) == 1 + 3);
    CHECK(recon.find("\n2001-03,nan\n") != std::string::npos);
    CHECK(recon.find("\n2001-01,nan") == std::string::npos);
    CHECK(recon.find("\n2001-02,nan") == std::string::npos);

    const std::string training = read_text_file((out / "series_training.csv").string());
    CHECK(training == "epoch,training_epoch\n"
                      "2001-01,2001-01\n"
                      "2001-02,2001-02\n"
                      "2001-03,\n");

    // Moving average over window 2: labels shift to the later month.
    const std::string ma = read_text_file((out / "series_recon_ma2.csv").string());
    CHECK(ma.rfind("epoch,value_cm\n", 0) == 0);
    REQUIRE(count_lines(ma) == 1 + 2);
    CHECK(ma.find("\n2001-02,") != std::string::npos);

    // Trends: the plane's constant term drifts 0.05 cm/month = 6 mm/yr, and
    // every series (gauges, grids, reconstruction) must recover it.
    const std::string trends = read_text_file((out / "trends.txt").string());
    CHECK(trends.find("period = 2001-01..2001-03\n") != std::string::npos);
    for (const std::string key :
         {"gauges_mm_per_year = ", "grids_mm_per_year = ", "reconstruction_mm_per_year = "}) {
        const auto at = trends.find(key);
        REQUIRE(at != std::string::npos);
        const auto end = trends.find('\n', at);
        const auto v = parse_double(trends.substr(at + key.size(), end - at - key.size()));
        REQUIRE(v.has_value());
        CHECK(*v == doctest::Approx(6.0).epsilon(1e-6));
    }

    // A restricted trend window with no room is rejected.
    const RunResult bad = run_cli("series " + dataset_flags(fx.dir) +
                                  " --k 0 --trend --trend-from 2001-03 --trend-to 2001-01 "
                                  "--out " + quoted(fresh_dir("series_bad")));
    CHECK(bad.code == 1);
    CHECK(bad.err.find("error:") != std::string::npos);
}

TEST_CASE("export-mps writes a model the external solver agrees with") {
    const fs::path data = fresh_dir("mps_data");
    REQUIRE(run_cli("synth --out " + quoted(data) +
                    " --seed 9 --n-stations 7 --epochs 3 --grid-cols 10 --grid-rows 8 "
                    "--noise-cm 0.4")
                .code == 0);
    const fs::path out = fresh_dir("mps_out");
    const RunResult r = run_cli("export-mps " + dataset_flags(data) +
                                " --epoch 2000-01 --k inf --solve --out " + quoted(out));
    CHECK(r.code == 0);
    CHECK(r.out.find("columns, objective ") != std::string::npos);

    const fs::path mps_path = out / "model_2000-01_kinf.mps";
    REQUIRE(fs::exists(mps_path));
    const std::string mps = read_text_file(mps_path.string());
    CHECK(mps.rfind("NAME          MINERR\n", 0) == 0);
    CHECK(mps.find("\nROWS\n") != std::string::npos);
    CHECK(mps.find("'INTORG'") != std::string::npos);
    CHECK(mps.find("'INTEND'") != std::string::npos);
    CHECK(mps.substr(mps.size() - 7) == "ENDATA\n");

    const fs::path sol_path = out / "solution_2000-01_kinf.txt";
    REQUIRE(fs::exists(sol_path));
    const TriangulationFile sol = read_triangulation_text(read_text_file(sol_path.string()));
    REQUIRE(sol.objective.has_value());
    CHECK(sol.triangles.size() >= 5);

    // Independent mixed-integer solver on the exported file.
    const std::string solver_out = run_solver(mps_path);
    CAPTURE(solver_out);
    const auto at = solver_out.find("objective ");
    REQUIRE(at != std::string::npos);
    const auto external = parse_double(trim(std::string_view(solver_out).substr(at + 10)));
    REQUIRE(external.has_value());
    const double scale = std::max(1.0, std::abs(*sol.objective));
    CHECK(std::abs(*external - *sol.objective) <= 1e-6 * scale);

    // Without --solve only the model file is produced.
    const fs::path out2 = fresh_dir("mps_out2");
    REQUIRE(run_cli("export-mps " + dataset_flags(data) + " --epoch 2000-01 --k inf --out " +
                    quoted(out2))
                .code == 0);
    CHECK(fs::exists(out2 / "model_2000-01_kinf.mps"));
    CHECK(!fs::exists(out2 / "solution_2000-01_kinf.txt"));
    CHECK(read_text_file((out2 / "model_2000-01_kinf.mps").string()) == mps);
}

TEST_CASE("invalid invocations fail with an error message and nonzero exit") {
    const fs::path data = fresh_dir("err_data");
    REQUIRE(run_cli("synth --out " + quoted(data) +
                    " --seed 2 --n-stations 6 --epochs 2 --grid-cols 8 --grid-rows 6")
                .code == 0);
    const fs::path out = fresh_dir("err_out");

    SUBCASE("missing stations file") {
        const RunResult r = run_cli("triangulate --stations " + quoted(data / "absent.csv") +
                                    " --gauges " + quoted(data / "gauges.csv") + " --grids " +
                                    quoted(data / "grids") + " --epoch 2000-01 --out " +
                                    quoted(out));
        CHECK(r.code == 1);
        CHECK(r.err.rfind("error:", 0) == 0);
    }
    SUBCASE("epoch without a grid") {
        const RunResult r = run_cli("triangulate " + dataset_flags(data) +
                                    " --epoch 1980-01 --out " + quoted(out));
        CHECK(r.code == 1);
        CHECK(r.err.rfind("error:", 0) == 0);
    }
    SUBCASE("malformed order bound") {
        const RunResult r = run_cli("triangulate " + dataset_flags(data) +
                                    " --epoch 2000-01 --k -1 --out " + quoted(out));
        CHECK(r.code == 1);
        CHECK(r.err.rfind("error:", 0) == 0);
    }
    SUBCASE("rejected metric name") {
        const RunResult r = run_cli("triangulate " + dataset_flags(data) +
                                    " --epoch 2000-01 --metric cubic --out " + quoted(out));
        CHECK(r.code != 0); // rejected by the option validator
    }
    SUBCASE("unknown subcommand") {
        CHECK(run_cli("frobnicate").code != 0);
    }
    SUBCASE("empty scenario") {
        const RunResult r = run_cli("synth --out " + quoted(out) + " --epochs 0");
        CHECK(r.code == 1);
        CHECK(r.err.rfind("error:", 0) == 0);
    }
}
