// Command-line front end: learns min-error k-order-Delaunay triangulations of
// tide-gauge stations against gridded reference surfaces, transfers them
// across epochs, and evaluates reconstruction quality. All outputs are plain
// text files with stable names under --out; reruns are byte-identical.

#include <algorithm>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "seatri/delaunay.hpp"
#include "seatri/epoch.hpp"
#include "seatri/evaluate.hpp"
#include "seatri/ilp.hpp"
#include "seatri/pipeline.hpp"
#include "seatri/reconstruct.hpp"
#include "seatri/synthetic.hpp"
#include "seatri/textio.hpp"

namespace {

using namespace seatri;

struct CommonOptions {
    std::string stations;
    std::string gauges;
    std::string grids;
    std::string projection;
    std::string out = ".";
    std::string k = "2";
    std::string metric = "squared";
    double threshold = 0.70;
};

void add_dataset_flags(CLI::App* cmd, CommonOptions& opt) {
    cmd->add_option("--stations", opt.stations, "stations CSV (id,lon,lat)")->required();
    cmd->add_option("--gauges", opt.gauges, "gauge CSV (station_id,epoch,value_cm)")->required();
    cmd->add_option("--grids", opt.grids, "directory of YYYY-MM.asc reference grids")->required();
    cmd->add_option("--projection", opt.projection,
                    "projection spec file (default: derived from the station layout)");
    cmd->add_option("--threshold", opt.threshold,
                    "minimum fraction of observed months per station (default 0.70)");
    cmd->add_option("--out", opt.out, "output directory (default .)");
}

void add_solver_flags(CLI::App* cmd, CommonOptions& opt) {
    cmd->add_option("--k", opt.k, "order bound: nonnegative integer or 'inf' (default 2)");
    cmd->add_option("--metric", opt.metric, "error metric: squared | absolute (default squared)")
        ->check(CLI::IsMember({"squared", "absolute"}));
}

std::string out_path(const CommonOptions& opt, const std::string& name) {
    std::filesystem::create_directories(opt.out);
    return (std::filesystem::path(opt.out) / name).string();
}

void write_triangulation_file(const std::string& path, const Triangulation& t,
                              const std::vector<std::size_t>& subset, double objective) {
    std::vector<std::uint32_t> index_map(subset.size());
    for (std::size_t s = 0; s < subset.size(); ++s)
        index_map[s] = static_cast<std::uint32_t>(subset[s]);
    write_text_file(path, write_triangulation_text(to_file(t, index_map, objective)));
}

int cmd_synth(const std::string& out, const SyntheticScenario& scenario) {
    const SyntheticData data = generate(scenario);
    std::filesystem::create_directories(out);
    const std::filesystem::path dir(out);
    write_stations(data.stations, (dir / "stations.csv").string());
    write_gauges(data.gauges, data.stations, (dir / "gauges.csv").string());
    write_projection_spec(data.projection, (dir / "projection.txt").string());
    std::filesystem::create_directories(dir / "grids");
    for (const RasterGrid& g : data.grids)
        write_grid(g, (dir / "grids" / (g.epoch_label + ".asc")).string());
    std::printf("wrote %zu stations, %lld epochs, %zu grids under %s\n", data.stations.size(),
                static_cast<long long>(data.gauges.axis.count), data.grids.size(), out.c_str());
    return 0;
}

int cmd_triangulate(const CommonOptions& opt, const std::string& epoch, bool dump_costs) {
    const Dataset ds = load_dataset({opt.stations, opt.gauges, opt.grids, opt.projection},
                                    opt.threshold);
    const OrderBound bound = order_bound_from_name(opt.k);
    const ErrorMetric metric = metric_from_name(opt.metric);
    const std::size_t gi = ds.grid_index_of_month(month_from_label(epoch));

    const PairLearn pl = learn_pair(ds, gi, gi, bound, metric);
    const std::string tag = epoch + "_k" + order_bound_name(bound);
    write_triangulation_file(out_path(opt, "tri_me_" + tag + ".txt"), pl.t_me, pl.subset,
                             pl.objective);
    write_triangulation_file(out_path(opt, "tri_delaunay_" + epoch + ".txt"), pl.t_delaunay,
                             pl.subset, pl.delaunay_cost);
    if (dump_costs) {
        const CandidateSet cands = enumerate_candidates(pl.points, bound);
        std::vector<double> h_i(pl.subset.size());
        const std::int64_t i_idx = ds.gauges.axis.index_of_month(ds.grid_months[gi]);
        for (std::size_t s = 0; s < pl.subset.size(); ++s)
            h_i[s] = ds.gauges.at(pl.subset[s], i_idx);
        const RegionMask mask = build_mask(ds.geometry, pl.points, ds.grids[gi]);
        const CostTable costs =
            build_cost_table(cands, pl.points, h_i, ds.grids[gi], ds.geometry, metric, mask);
        write_text_file(out_path(opt, "costs_" + tag + ".csv"), cost_table_csv(cands, costs));
    }
    std::printf("epoch %s k=%s: %zu stations, objective %s (Delaunay %s), %ld nodes\n",
                epoch.c_str(), order_bound_name(bound).c_str(), pl.subset.size(),
                format_double(pl.objective).c_str(), format_double(pl.delaunay_cost).c_str(),
                pl.stats.nodes);
    return 0;
}

int cmd_reconstruct(const CommonOptions& opt, const std::string& epoch_i,
                    const std::string& epoch_j) {
    const Dataset ds = load_dataset({opt.stations, opt.gauges, opt.grids, opt.projection},
                                    opt.threshold);
    const OrderBound bound = order_bound_from_name(opt.k);
    const ErrorMetric metric = metric_from_name(opt.metric);

    const ReconstructOutcome rec = run_reconstruct(ds, month_from_label(epoch_i),
                                                   month_from_label(epoch_j), bound, metric);
    const std::string tag = epoch_i + "_" + epoch_j + "_k" + order_bound_name(bound);

    const std::string tri_me = out_path(opt, "tri_me_" + tag + ".txt");
    write_triangulation_file(tri_me, rec.learned.t_me, rec.learned.subset, rec.learned.objective);
    const std::string tri_del = out_path(opt, "tri_delaunay_" + tag + ".txt");
    write_triangulation_file(tri_del, rec.learned.t_delaunay, rec.learned.subset,
                             rec.learned.delaunay_cost);

    write_grid(rec.recon_me, out_path(opt, "recon_me_" + tag + ".asc"));
    write_grid(rec.recon_del, out_path(opt, "recon_delaunay_" + tag + ".asc"));

    std::string meta;
    meta += "training_epoch = " + epoch_i + "\n";
    meta += "reconstruction_epoch = " + epoch_j + "\n";
    meta += "k = " + order_bound_name(bound) + "\n";
    meta += "metric = " + metric_name(metric) + "\n";
    meta += "triangulation_me = " + tri_me + "\n";
    meta += "triangulation_delaunay = " + tri_del + "\n";
    meta += "objective_me = " + format_double(rec.learned.objective) + "\n";
    meta += "objective_delaunay = " + format_double(rec.learned.delaunay_cost) + "\n";
    write_text_file(out_path(opt, "recon_" + tag + ".meta.txt"), meta);

    if (rec.resid_me) {
        write_grid(*rec.resid_me, out_path(opt, "resid_me_" + tag + ".asc"));
        write_grid(*rec.resid_del, out_path(opt, "resid_delaunay_" + tag + ".asc"));
        write_grid(*rec.sq_me, out_path(opt, "sqresid_me_" + tag + ".asc"));
        write_grid(*rec.sq_del, out_path(opt, "sqresid_delaunay_" + tag + ".asc"));
        write_grid(*rec.sq_diff, out_path(opt, "sqdiff_" + tag + ".asc"));
    } else {
        std::fprintf(stderr, "warning: no reference grid at %s; residual grids skipped\n",
                     epoch_j.c_str());
    }
    std::printf("reconstructed %s from %s (k=%s)\n", epoch_j.c_str(), epoch_i.c_str(),
                order_bound_name(bound).c_str());
    return 0;
}

int cmd_sweep(const CommonOptions& opt) {
    const Dataset ds = load_dataset({opt.stations, opt.gauges, opt.grids, opt.projection},
                                    opt.threshold);
    const OrderBound bound = order_bound_from_name(opt.k);
    const ErrorMetric metric = metric_from_name(opt.metric);

    const SweepResult sweep = run_sweep(ds, bound, metric);
    write_text_file(out_path(opt, "sweep.csv"), sweep_csv(sweep, bound));

    const std::vector<QualityPoint> curve = quality_curve(sweep.pairs);
    write_text_file(out_path(opt, "quality.csv"), quality_csv(curve));

    std::vector<QualityPoint> clim;
    for (const QualityPoint& p : curve)
        if (p.delta_d % 12 == 0) clim.push_back(p);
    write_text_file(out_path(opt, "quality_climatological.csv"), quality_csv(clim));

    std::printf("swept %zu x %zu epoch pairs (k=%s)\n", sweep.labels.size(), sweep.labels.size(),
                order_bound_name(bound).c_str());
    return 0;
}

int cmd_series(const CommonOptions& opt, const std::string& weighting, std::size_t window,
               bool trend, const std::string& trend_from, const std::string& trend_to) {
    const Dataset ds = load_dataset({opt.stations, opt.gauges, opt.grids, opt.projection},
                                    opt.threshold);
    const OrderBound bound = order_bound_from_name(opt.k);
    const ErrorMetric metric = metric_from_name(opt.metric);

    const SeriesResult series = run_series(ds, bound, metric, weighting);
    write_text_file(out_path(opt, "series_gauges.csv"), series_csv(series.axis, series.gauge_mean));
    write_text_file(out_path(opt, "series_grids.csv"), series_csv(series.axis, series.grid_mean));
    write_text_file(out_path(opt, "series_recon.csv"), series_csv(series.axis, series.recon_mean));

    std::string training = "epoch,training_epoch\n";
    for (std::size_t j = 0; j < series.training.size(); ++j) {
        training += series.axis.label_of(static_cast<std::int64_t>(j));
        training += ',';
        training += series.training[j];
        training += '\n';
    }
    write_text_file(out_path(opt, "series_training.csv"), training);

    if (window > 0) {
        write_text_file(out_path(opt, "series_recon_ma" + format_int(static_cast<long long>(window)) + ".csv"),
                        moving_average_csv(series.axis,
                                           moving_average(series.recon_mean, window), window));
    }
    if (trend) {
        // Restrict the OLS window to [--trend-from, --trend-to] when given.
        std::size_t lo = 0;
        std::size_t hi = static_cast<std::size_t>(series.axis.count);
        if (!trend_from.empty())
            lo = static_cast<std::size_t>(
                series.axis.index_of_month(month_from_label(trend_from)));
        if (!trend_to.empty())
            hi = static_cast<std::size_t>(
                     series.axis.index_of_month(month_from_label(trend_to))) +
                 1;
        if (lo >= hi) throw std::invalid_argument("series: empty trend period");
        auto slice = [&](const std::vector<double>& v) {
            return std::span<const double>(v).subspan(lo, hi - lo);
        };
        std::string report;
        report += "period = " + series.axis.label_of(static_cast<std::int64_t>(lo)) + ".." +
                  series.axis.label_of(static_cast<std::int64_t>(hi - 1)) + "\n";
        report += "gauges_mm_per_year = " +
                  format_double(linear_trend_mm_per_year(slice(series.gauge_mean))) + "\n";
        report += "grids_mm_per_year = " +
                  format_double(linear_trend_mm_per_year(slice(series.grid_mean))) + "\n";
        report += "reconstruction_mm_per_year = " +
                  format_double(linear_trend_mm_per_year(slice(series.recon_mean))) + "\n";
        write_text_file(out_path(opt, "trends.txt"), report);
    }
    std::printf("series over %lld epochs written under %s\n",
                static_cast<long long>(series.axis.count), opt.out.c_str());
    return 0;
}

int cmd_export_mps(const CommonOptions& opt, const std::string& epoch, bool solve) {
    const Dataset ds = load_dataset({opt.stations, opt.gauges, opt.grids, opt.projection},
                                    opt.threshold);
    const OrderBound bound = order_bound_from_name(opt.k);
    const ErrorMetric metric = metric_from_name(opt.metric);
    const std::size_t gi = ds.grid_index_of_month(month_from_label(epoch));
    const std::int64_t i_idx = ds.gauges.axis.index_of_month(ds.grid_months[gi]);

    const std::vector<std::size_t> subset = common_stations(ds.gauges, i_idx, i_idx, ds.usable);
    const std::vector<PlanePoint> points = ds.stations.points_of(subset);
    std::vector<double> h_i(subset.size());
    for (std::size_t s = 0; s < subset.size(); ++s) h_i[s] = ds.gauges.at(subset[s], i_idx);

    const CandidateSet cands = enumerate_candidates(points, bound);
    const RegionMask mask = build_mask(ds.geometry, points, ds.grids[gi]);
    const CostTable costs =
        build_cost_table(cands, points, h_i, ds.grids[gi], ds.geometry, metric, mask);
    const IlpModel model = build_model(cands, costs, points);

    const std::string tag = epoch + "_k" + order_bound_name(bound);
    write_text_file(out_path(opt, "model_" + tag + ".mps"), export_mps(model, "MINERR"));

    if (solve) {
        const Triangulation t_d = delaunay(points);
        std::vector<std::uint32_t> warm;
        for (const Triangle& tri : t_d.triangles) {
            const auto it = std::lower_bound(model.tris.begin(), model.tris.end(), tri);
            warm.push_back(static_cast<std::uint32_t>(it - model.tris.begin()));
        }
        const IlpSolution sol = solve_ilp(model, points, warm);
        std::vector<Triangle> chosen;
        for (std::uint32_t v : sol.selected) chosen.push_back(model.tris[v]);
        const Triangulation t = Triangulation::from_triangles(std::move(chosen));
        write_triangulation_file(out_path(opt, "solution_" + tag + ".txt"), t, subset,
                                 sol.objective);
        std::printf("model %s: %zu columns, objective %s\n", tag.c_str(), model.tris.size(),
                    format_double(sol.objective).c_str());
    } else {
        std::printf("model %s: %zu columns\n", tag.c_str(), model.tris.size());
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"min-error k-order-Delaunay triangulation of tide gauges vs reference grids"};
    app.require_subcommand(1);

    // synth
    SyntheticScenario scenario;
    std::string synth_out = ".";
    long long synth_seed = 1;
    std::string synth_first = "2000-01";
    CLI::App* synth = app.add_subcommand("synth", "generate a synthetic dataset");
    synth->add_option("--out", synth_out, "output directory");
    synth->add_option("--seed", synth_seed, "RNG seed (default 1)");
    synth->add_option("--n-stations", scenario.station_count, "station count (default 20)");
    synth->add_option("--epochs", scenario.epoch_count, "epoch count (default 60)");
    synth->add_option("--first-epoch", synth_first, "first epoch label (default 2000-01)");
    synth->add_option("--grid-cols", scenario.grid_ncols, "grid columns (default 40)");
    synth->add_option("--grid-rows", scenario.grid_nrows, "grid rows (default 30)");
    synth->add_option("--noise-cm", scenario.noise_cm, "gauge noise sigma in cm (default 0)");
    synth->add_option("--gap-probability", scenario.gap_probability,
                      "per (station, epoch) missing probability (default 0)");
    synth->add_option("--drift-cm-per-month", scenario.drift_cm_per_month,
                      "uniform linear drift (default 0)");

    // triangulate
    CommonOptions tri_opt;
    std::string tri_epoch;
    bool tri_dump_costs = false;
    CLI::App* tri = app.add_subcommand("triangulate",
                                       "learn the min-error triangulation of one epoch");
    add_dataset_flags(tri, tri_opt);
    add_solver_flags(tri, tri_opt);
    tri->add_option("--epoch", tri_epoch, "training epoch YYYY-MM")->required();
    tri->add_flag("--dump-costs", tri_dump_costs, "also write the per-candidate cost table");

    // reconstruct
    CommonOptions rec_opt;
    std::string rec_i, rec_j;
    CLI::App* rec = app.add_subcommand("reconstruct",
                                       "transfer a learned triangulation to another epoch");
    add_dataset_flags(rec, rec_opt);
    add_solver_flags(rec, rec_opt);
    rec->add_option("--epoch-i", rec_i, "training epoch YYYY-MM (must have a grid)")->required();
    rec->add_option("--epoch-j", rec_j, "reconstruction epoch YYYY-MM")->required();

    // sweep
    CommonOptions sweep_opt;
    CLI::App* sweep = app.add_subcommand("sweep",
                                         "evaluate all training x evaluation epoch pairs");
    add_dataset_flags(sweep, sweep_opt);
    add_solver_flags(sweep, sweep_opt);

    // series
    CommonOptions series_opt;
    std::string weighting = "coslat";
    std::size_t window = 0;
    bool trend = false;
    std::string trend_from, trend_to;
    CLI::App* series = app.add_subcommand("series", "area-mean time series and reconstructions");
    add_dataset_flags(series, series_opt);
    add_solver_flags(series, series_opt);
    series->add_option("--weighting", weighting, "area weighting: uniform | coslat (default)")
        ->check(CLI::IsMember({"uniform", "coslat"}));
    series->add_option("--window", window, "months for a centered moving average (0 = off)");
    series->add_flag("--trend", trend, "write OLS trends in mm/yr");
    series->add_option("--trend-from", trend_from, "first epoch of the trend period (YYYY-MM)");
    series->add_option("--trend-to", trend_to, "last epoch of the trend period (YYYY-MM)");

    // export-mps
    CommonOptions mps_opt;
    std::string mps_epoch;
    bool mps_solve = false;
    CLI::App* mps = app.add_subcommand("export-mps", "write one epoch's model as an MPS file");
    add_dataset_flags(mps, mps_opt);
    add_solver_flags(mps, mps_opt);
    mps->add_option("--epoch", mps_epoch, "training epoch YYYY-MM")->required();
    mps->add_flag("--solve", mps_solve, "also solve and write the solution file");

    CLI11_PARSE(app, argc, argv);

    try {
        if (synth->parsed()) {
            scenario.seed = static_cast<std::uint64_t>(synth_seed);
            scenario.first_month = month_from_label(synth_first);
            return cmd_synth(synth_out, scenario);
        }
        if (tri->parsed()) return cmd_triangulate(tri_opt, tri_epoch, tri_dump_costs);
        if (rec->parsed()) return cmd_reconstruct(rec_opt, rec_i, rec_j);
        if (sweep->parsed()) return cmd_sweep(sweep_opt);
        if (series->parsed())
            return cmd_series(series_opt, weighting, window, trend, trend_from, trend_to);
        if (mps->parsed()) return cmd_export_mps(mps_opt, mps_epoch, mps_solve);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 1;
}
