#include "seatri/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "seatri/delaunay.hpp"
#include "seatri/reconstruct.hpp"
#include "seatri/textio.hpp"

namespace seatri {

namespace {

std::vector<std::size_t> usable_stations(const std::vector<std::size_t>& kept,
                                         const std::vector<bool>& anchored_flags) {
    std::vector<std::size_t> usable;
    for (std::size_t s : kept)
        if (anchored_flags[s]) usable.push_back(s);
    return usable;
}

void check_uniform_geometry(const std::vector<RasterGrid>& grids) {
    if (grids.empty()) throw std::invalid_argument("dataset: no grids");
    const RasterGrid& g0 = grids.front();
    for (const RasterGrid& g : grids)
        if (g.ncols != g0.ncols || g.nrows != g0.nrows || g.lon0 != g0.lon0 || g.lat0 != g0.lat0 ||
            g.dlon != g0.dlon || g.dlat != g0.dlat)
            throw std::invalid_argument("dataset: grids disagree in geometry");
}

Dataset assemble(StationSet stations, ProjectionSpec projection, GaugeRecord gauges,
                 std::vector<std::int64_t> months, std::vector<RasterGrid> grids,
                 double availability_threshold) {
    check_uniform_geometry(grids);

    // Grids outside the gauge axis carry no overlap information; drop them.
    std::vector<std::int64_t> in_months;
    std::vector<RasterGrid> in_grids;
    for (std::size_t g = 0; g < grids.size(); ++g)
        if (gauges.axis.contains_month(months[g])) {
            in_months.push_back(months[g]);
            in_grids.push_back(std::move(grids[g]));
        }
    if (in_grids.empty())
        throw std::invalid_argument("dataset: no grid falls inside the gauge record");

    const std::vector<std::size_t> kept = availability_filter(gauges, availability_threshold);
    if (kept.size() < 3)
        throw std::runtime_error("dataset: fewer than 3 stations pass the availability filter");

    std::vector<std::pair<std::int64_t, const RasterGrid*>> overlap;
    overlap.reserve(in_grids.size());
    for (std::size_t g = 0; g < in_grids.size(); ++g)
        overlap.emplace_back(gauges.axis.index_of_month(in_months[g]), &in_grids[g]);
    AnchorResult anchor = anchor_gauges(gauges, stations, projection, overlap);

    Dataset ds;
    ds.usable = usable_stations(kept, anchor.anchored);
    if (ds.usable.size() < 3)
        throw std::runtime_error("dataset: fewer than 3 stations remain after anchoring");
    ds.stations = std::move(stations);
    ds.projection = projection;
    ds.gauges = std::move(anchor.record);
    ds.grid_months = std::move(in_months);
    ds.grids = std::move(in_grids);
    ds.geometry = CellGeometry::from_grid(ds.grids.front(), ds.projection);
    return ds;
}

} // namespace

std::size_t Dataset::grid_index_of_month(std::int64_t month) const {
    const auto it = std::lower_bound(grid_months.begin(), grid_months.end(), month);
    if (it == grid_months.end() || *it != month)
        throw std::invalid_argument("no grid for epoch " + label_from_month(month));
    return static_cast<std::size_t>(it - grid_months.begin());
}

Dataset load_dataset(const DatasetPaths& paths, double availability_threshold) {
    ProjectionSpec spec;
    StationSet stations;
    if (!paths.projection.empty()) {
        spec = read_projection_spec(paths.projection);
        stations = load_stations(paths.stations, spec);
    } else {
        // Parse with a placeholder, then re-project with the layout's default.
        stations = load_stations(paths.stations, ProjectionSpec{30.0, 60.0, 0.0, 45.0,
                                                                6378137.0, 1.0 / 298.257223563});
        std::vector<std::pair<double, double>> lonlat;
        lonlat.reserve(stations.size());
        for (const Station& st : stations.stations) lonlat.emplace_back(st.lon, st.lat);
        spec = default_projection(lonlat);
        for (Station& st : stations.stations) st.pos = project(spec, st.lon, st.lat);
    }

    GaugeRecord gauges = load_gauges(paths.gauges, stations);

    std::vector<std::int64_t> months;
    std::vector<RasterGrid> grids;
    for (const auto& [month, path] : list_grid_files(paths.grids_dir)) {
        months.push_back(month);
        grids.push_back(load_grid(path));
    }

    return assemble(std::move(stations), spec, std::move(gauges), std::move(months),
                    std::move(grids), availability_threshold);
}

Dataset dataset_from_synthetic(const SyntheticData& data, double availability_threshold) {
    std::vector<std::int64_t> months;
    months.reserve(data.grids.size());
    for (const RasterGrid& g : data.grids) months.push_back(month_from_label(g.epoch_label));
    return assemble(data.stations, data.projection, data.gauges, std::move(months), data.grids,
                    availability_threshold);
}

PairLearn learn_pair_subset(const Dataset& ds, std::size_t grid_i,
                            std::vector<std::size_t> subset, OrderBound bound, ErrorMetric metric,
                            unsigned threads) {
    const std::int64_t i_idx = ds.gauges.axis.index_of_month(ds.grid_months[grid_i]);

    PairLearn out;
    out.subset = std::move(subset);
    out.points = ds.stations.points_of(out.subset);

    std::vector<double> h_i(out.subset.size());
    for (std::size_t s = 0; s < out.subset.size(); ++s)
        h_i[s] = ds.gauges.at(out.subset[s], i_idx);

    out.t_delaunay = delaunay(out.points);

    const CandidateSet cands = enumerate_candidates(out.points, bound);
    const RegionMask mask = build_mask(ds.geometry, out.points, ds.grids[grid_i]);
    const CostTable costs =
        build_cost_table(cands, out.points, h_i, ds.grids[grid_i], ds.geometry, metric, mask,
                         threads);
    const IlpModel model = build_model(cands, costs, out.points);

    std::vector<std::uint32_t> warm;
    warm.reserve(out.t_delaunay.triangles.size());
    for (const Triangle& tri : out.t_delaunay.triangles) {
        const auto it = std::lower_bound(model.tris.begin(), model.tris.end(), tri);
        if (it == model.tris.end() || !(*it == tri))
            throw std::runtime_error("learn_pair: Delaunay triangle missing from candidate set");
        warm.push_back(static_cast<std::uint32_t>(it - model.tris.begin()));
    }
    out.delaunay_cost = canonical_objective(model, warm);

    IlpSolution sol = solve_ilp(model, out.points, warm);
    std::vector<Triangle> chosen;
    chosen.reserve(sol.selected.size());
    for (std::uint32_t v : sol.selected) chosen.push_back(model.tris[v]);
    out.t_me = Triangulation::from_triangles(std::move(chosen));
    out.objective = sol.objective;
    out.stats = sol.stats;
    return out;
}

PairLearn learn_pair(const Dataset& ds, std::size_t grid_i, std::size_t grid_j, OrderBound bound,
                     ErrorMetric metric, unsigned threads) {
    const std::int64_t i_idx = ds.gauges.axis.index_of_month(ds.grid_months[grid_i]);
    const std::int64_t j_idx = ds.gauges.axis.index_of_month(ds.grid_months[grid_j]);
    return learn_pair_subset(ds, grid_i, common_stations(ds.gauges, i_idx, j_idx, ds.usable),
                             bound, metric, threads);
}

PairEvaluation evaluate_pair(const Dataset& ds, const PairLearn& learned, std::size_t grid_j,
                             ErrorMetric metric) {
    const std::int64_t j_idx = ds.gauges.axis.index_of_month(ds.grid_months[grid_j]);
    std::vector<double> h_j(learned.subset.size());
    for (std::size_t s = 0; s < learned.subset.size(); ++s)
        h_j[s] = ds.gauges.at(learned.subset[s], j_idx);

    const RegionMask mask = build_mask(ds.geometry, learned.points, ds.grids[grid_j]);
    PairEvaluation ev;
    ev.me = surface_variance(learned.t_me, learned.points, h_j, ds.grids[grid_j], ds.geometry,
                             metric, mask);
    ev.delaunay = surface_variance(learned.t_delaunay, learned.points, h_j, ds.grids[grid_j],
                                   ds.geometry, metric, mask);
    return ev;
}

SweepResult run_sweep(const Dataset& ds, OrderBound bound, ErrorMetric metric, unsigned threads) {
    const std::size_t D = ds.grids.size();
    if (D < 2) throw std::invalid_argument("sweep: need at least 2 grid epochs");

    // The learned triangulation depends only on (training epoch, station
    // subset); solve each distinct key once, in parallel.
    std::map<std::pair<std::size_t, std::vector<std::size_t>>, std::size_t> key_slot;
    std::vector<std::size_t> slot_of(D * D);
    std::vector<std::pair<std::size_t, std::vector<std::size_t>>> keys;
    for (std::size_t gi = 0; gi < D; ++gi) {
        const std::int64_t i_idx = ds.gauges.axis.index_of_month(ds.grid_months[gi]);
        for (std::size_t gj = 0; gj < D; ++gj) {
            const std::int64_t j_idx = ds.gauges.axis.index_of_month(ds.grid_months[gj]);
            auto key = std::make_pair(gi, common_stations(ds.gauges, i_idx, j_idx, ds.usable));
            auto [it, fresh] = key_slot.try_emplace(key, keys.size());
            if (fresh) keys.push_back(it->first);
            slot_of[gi * D + gj] = it->second;
        }
    }

    std::vector<PairLearn> learned(keys.size());
    {
        const unsigned workers =
            std::max(1u, threads != 0 ? threads : std::thread::hardware_concurrency());
        std::mutex take;
        std::size_t next = 0;
        auto work = [&]() {
            for (;;) {
                std::size_t mine;
                {
                    std::lock_guard<std::mutex> lock(take);
                    if (next == keys.size()) return;
                    mine = next++;
                }
                learned[mine] =
                    learn_pair_subset(ds, keys[mine].first, keys[mine].second, bound, metric, 1);
            }
        };
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
        for (std::thread& t : pool) t.join();
    }

    SweepResult out;
    out.labels.reserve(D);
    for (std::size_t g = 0; g < D; ++g) out.labels.push_back(label_from_month(ds.grid_months[g]));
    out.pairs.reserve(D * D);
    for (std::size_t gi = 0; gi < D; ++gi)
        for (std::size_t gj = 0; gj < D; ++gj) {
            const PairLearn& pl = learned[slot_of[gi * D + gj]];
            const PairEvaluation ev = evaluate_pair(ds, pl, gj, metric);
            PairResult row;
            row.epoch_i = static_cast<std::size_t>(
                ds.gauges.axis.index_of_month(ds.grid_months[gi]));
            row.epoch_j = static_cast<std::size_t>(
                ds.gauges.axis.index_of_month(ds.grid_months[gj]));
            row.delta_d = row.epoch_i > row.epoch_j ? row.epoch_i - row.epoch_j
                                                    : row.epoch_j - row.epoch_i;
            row.var_me = ev.me.value;
            row.var_delaunay = ev.delaunay.value;
            row.cells = ev.me.cells;
            out.pairs.push_back(row);
        }
    return out;
}

std::string sweep_csv(const SweepResult& sweep, OrderBound bound) {
    std::string csv = "i,j,delta_d,k,var_me,var_delaunay,var_reduction,cells\n";
    const std::size_t D = sweep.labels.size();
    for (std::size_t p = 0; p < sweep.pairs.size(); ++p) {
        const PairResult& row = sweep.pairs[p];
        csv += sweep.labels[p / D];
        csv += ',';
        csv += sweep.labels[p % D];
        csv += ',';
        csv += format_int(static_cast<std::int64_t>(row.delta_d));
        csv += ',';
        csv += order_bound_name(bound);
        csv += ',';
        csv += format_double(row.var_me);
        csv += ',';
        csv += format_double(row.var_delaunay);
        csv += ',';
        csv += format_double(row.var_me - row.var_delaunay);
        csv += ',';
        csv += format_int(static_cast<std::int64_t>(row.cells));
        csv += '\n';
    }
    return csv;
}

std::string quality_csv(const std::vector<QualityPoint>& curve) {
    std::string csv = "delta_d,q,count\n";
    for (const QualityPoint& p : curve) {
        csv += format_int(static_cast<std::int64_t>(p.delta_d));
        csv += ',';
        csv += format_double(p.q);
        csv += ',';
        csv += format_int(static_cast<std::int64_t>(p.count));
        csv += '\n';
    }
    return csv;
}

ReconstructOutcome run_reconstruct(const Dataset& ds, std::int64_t month_i, std::int64_t month_j,
                                   OrderBound bound, ErrorMetric metric, unsigned threads) {
    const std::size_t gi = ds.grid_index_of_month(month_i);
    const std::int64_t i_idx = ds.gauges.axis.index_of_month(month_i);
    const std::int64_t j_idx = ds.gauges.axis.index_of_month(month_j);

    ReconstructOutcome out;
    out.learned = learn_pair_subset(
        ds, gi, common_stations(ds.gauges, i_idx, j_idx, ds.usable), bound, metric, threads);

    std::vector<double> h_j(out.learned.subset.size());
    for (std::size_t s = 0; s < out.learned.subset.size(); ++s)
        h_j[s] = ds.gauges.at(out.learned.subset[s], j_idx);

    const RegionMask mask = build_mask(ds.geometry, out.learned.points, ds.grids[gi]);
    out.recon_me = transfer_and_rasterize(out.learned.t_me, out.learned.points, h_j, ds.grids[gi],
                                          ds.geometry, mask);
    out.recon_del = transfer_and_rasterize(out.learned.t_delaunay, out.learned.points, h_j,
                                           ds.grids[gi], ds.geometry, mask);
    out.recon_me.epoch_label = label_from_month(month_j);
    out.recon_del.epoch_label = label_from_month(month_j);

    const auto it = std::lower_bound(ds.grid_months.begin(), ds.grid_months.end(), month_j);
    if (it != ds.grid_months.end() && *it == month_j) {
        const RasterGrid& ref = ds.grids[static_cast<std::size_t>(it - ds.grid_months.begin())];
        auto difference = [&](const RasterGrid& a, const RasterGrid& b, bool square) {
            RasterGrid d = a;
            for (std::size_t cell = 0; cell < d.values.size(); ++cell) {
                if (a.values[cell] == a.nodata || b.values[cell] == b.nodata) {
                    d.values[cell] = d.nodata;
                    continue;
                }
                const double delta = a.values[cell] - b.values[cell];
                d.values[cell] = square ? delta * delta : delta;
            }
            return d;
        };
        out.resid_me = difference(out.recon_me, ref, false);
        out.resid_del = difference(out.recon_del, ref, false);
        out.sq_me = difference(out.recon_me, ref, true);
        out.sq_del = difference(out.recon_del, ref, true);
        out.sq_diff = difference(*out.sq_me, *out.sq_del, false);
    }
    return out;
}

SeriesResult run_series(const Dataset& ds, OrderBound bound, ErrorMetric metric,
                        const std::string& weighting, unsigned threads) {
    SeriesResult out;
    out.axis = ds.gauges.axis;
    const std::size_t D = static_cast<std::size_t>(out.axis.count);
    out.gauge_mean.assign(D, std::numeric_limits<double>::quiet_NaN());
    out.grid_mean.assign(D, std::numeric_limits<double>::quiet_NaN());
    out.recon_mean.assign(D, std::numeric_limits<double>::quiet_NaN());
    out.training.assign(D, "");

    for (std::size_t j = 0; j < D; ++j) {
        double sum = 0.0;
        std::size_t n = 0;
        for (std::size_t s : ds.usable)
            if (ds.gauges.has(s, static_cast<std::int64_t>(j))) {
                sum += ds.gauges.at(s, static_cast<std::int64_t>(j));
                ++n;
            }
        if (n > 0) out.gauge_mean[j] = sum / static_cast<double>(n);
    }

    for (std::size_t g = 0; g < ds.grids.size(); ++g) {
        const std::size_t j =
            static_cast<std::size_t>(ds.gauges.axis.index_of_month(ds.grid_months[g]));
        out.grid_mean[j] = area_mean(ds.grids[g], weighting);
    }

    // Reconstruction with climatological training epochs, cached per
    // (training grid, station subset).
    std::map<std::pair<std::size_t, std::vector<std::size_t>>, PairLearn> cache;
    for (std::size_t j = 0; j < D; ++j) {
        const std::int64_t mj = ds.gauges.axis.month_of(static_cast<std::int64_t>(j));
        std::optional<std::size_t> chosen;
        std::int64_t best_dist = 0;
        for (std::size_t g = 0; g < ds.grid_months.size(); ++g) {
            const std::int64_t d = ds.grid_months[g] - mj;
            if (d % 12 != 0) continue;
            const std::int64_t ad = d < 0 ? -d : d;
            if (!chosen || ad < best_dist) {
                chosen = g;
                best_dist = ad;
            }
        }
        if (!chosen) continue;
        const std::size_t gi = *chosen;
        const std::int64_t i_idx = ds.gauges.axis.index_of_month(ds.grid_months[gi]);

        try {
            const std::vector<std::size_t> subset =
                common_stations(ds.gauges, i_idx, static_cast<std::int64_t>(j), ds.usable);
            auto key = std::make_pair(gi, subset);
            auto it = cache.find(key);
            if (it == cache.end())
                it = cache.emplace(key, learn_pair_subset(ds, gi, subset, bound, metric, threads))
                         .first;
            const PairLearn& pl = it->second;

            std::vector<double> h_j(pl.subset.size());
            for (std::size_t s = 0; s < pl.subset.size(); ++s)
                h_j[s] = ds.gauges.at(pl.subset[s], static_cast<std::int64_t>(j));
            const RegionMask mask = build_mask(ds.geometry, pl.points, ds.grids[gi]);
            const RasterGrid recon =
                transfer_and_rasterize(pl.t_me, pl.points, h_j, ds.grids[gi], ds.geometry, mask);
            out.recon_mean[j] = area_mean(recon, weighting);
            out.training[j] = label_from_month(ds.grid_months[gi]);
        } catch (const std::runtime_error&) {
            // Too few common stations at this epoch: leave the entry missing.
        }
    }
    return out;
}

std::string series_csv(const EpochAxis& axis, const std::vector<double>& values) {
    std::string csv = "epoch,value_cm\n";
    for (std::size_t j = 0; j < values.size(); ++j) {
        csv += axis.label_of(static_cast<std::int64_t>(j));
        csv += ',';
        csv += format_double(values[j]);
        csv += '\n';
    }
    return csv;
}

std::string moving_average_csv(const EpochAxis& axis, const std::vector<double>& averaged,
                               std::size_t window) {
    std::string csv = "epoch,value_cm\n";
    for (std::size_t t = 0; t < averaged.size(); ++t) {
        csv += label_from_month(axis.first_month + static_cast<std::int64_t>(t + window / 2));
        csv += ',';
        csv += format_double(averaged[t]);
        csv += '\n';
    }
    return csv;
}

OrderBound order_bound_from_name(const std::string& name) {
    if (name == "inf") return OrderBound::unbounded();
    const auto k = parse_int(name);
    if (!k || *k < 0) throw std::invalid_argument("order bound must be >= 0 or 'inf'");
    return OrderBound::finite(static_cast<std::uint32_t>(*k));
}

std::string order_bound_name(OrderBound bound) {
    return bound.k ? format_int(static_cast<std::int64_t>(*bound.k)) : std::string("inf");
}

} // namespace seatri
