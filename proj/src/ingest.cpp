#include "seatri/ingest.hpp"

#include "seatri/textio.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <stdexcept>

namespace seatri {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

double wrap_lon_delta(double d) {
    while (d > 180.0) d -= 360.0;
    while (d < -180.0) d += 360.0;
    return d;
}

double need_double(std::string_view token, const std::string& context) {
    const auto v = parse_double(token);
    if (!v) throw std::invalid_argument(context + ": malformed number '" + std::string(token) + "'");
    return *v;
}

long long need_int(std::string_view token, const std::string& context) {
    const auto v = parse_int(token);
    if (!v) throw std::invalid_argument(context + ": malformed integer '" + std::string(token) + "'");
    return *v;
}

} // namespace

std::size_t StationSet::index_of(const std::string& id) const {
    for (std::size_t i = 0; i < stations.size(); ++i)
        if (stations[i].id == id) return i;
    throw std::invalid_argument("unknown station id '" + id + "'");
}

std::vector<PlanePoint> StationSet::points() const {
    std::vector<PlanePoint> out;
    out.reserve(stations.size());
    for (const auto& s : stations) out.push_back(s.pos);
    return out;
}

std::vector<PlanePoint> StationSet::points_of(const std::vector<std::size_t>& subset) const {
    std::vector<PlanePoint> out;
    out.reserve(subset.size());
    for (std::size_t i : subset) out.push_back(stations.at(i).pos);
    return out;
}

bool GaugeRecord::has(std::size_t station, std::int64_t epoch) const {
    return !std::isnan(values.at(station).at(static_cast<std::size_t>(epoch)));
}

double GaugeRecord::at(std::size_t station, std::int64_t epoch) const {
    return values.at(station).at(static_cast<std::size_t>(epoch));
}

std::size_t GaugeRecord::months_present(std::size_t station) const {
    std::size_t n = 0;
    for (double v : values.at(station))
        if (!std::isnan(v)) ++n;
    return n;
}

PlanePoint project(const ProjectionSpec& spec, double lon, double lat) {
    if (!(lat > -90.0 && lat < 90.0))
        throw std::invalid_argument("latitude must be strictly between the poles");
    if (spec.parallel1 == spec.parallel2)
        throw std::invalid_argument("standard parallels must be distinct");

    const double a = spec.semi_major_axis;
    const double f = spec.flattening;
    const double e2 = f * (2.0 - f);
    const double e = std::sqrt(e2);

    auto m_of = [&](double phi) {
        const double s = std::sin(phi);
        return std::cos(phi) / std::sqrt(1.0 - e2 * s * s);
    };
    auto t_of = [&](double phi) {
        const double s = std::sin(phi);
        return std::tan(std::numbers::pi / 4.0 - phi / 2.0) /
               std::pow((1.0 - e * s) / (1.0 + e * s), e / 2.0);
    };

    const double phi1 = spec.parallel1 * kDegToRad;
    const double phi2 = spec.parallel2 * kDegToRad;
    const double phi0 = spec.ref_lat * kDegToRad;
    const double phi = lat * kDegToRad;

    const double m1 = m_of(phi1);
    const double m2 = m_of(phi2);
    const double t1 = t_of(phi1);
    const double t2 = t_of(phi2);
    const double n = (std::log(m1) - std::log(m2)) / (std::log(t1) - std::log(t2));
    const double F = m1 / (n * std::pow(t1, n));
    const double rho0 = a * F * std::pow(t_of(phi0), n);
    const double rho = a * F * std::pow(t_of(phi), n);
    const double theta = n * wrap_lon_delta(lon - spec.ref_lon) * kDegToRad;

    return PlanePoint{rho * std::sin(theta), rho0 - rho * std::cos(theta)};
}

ProjectionSpec default_projection(const std::vector<std::pair<double, double>>& lonlat) {
    if (lonlat.empty()) throw std::invalid_argument("default_projection: no stations");
    double lon_min = lonlat[0].first, lon_max = lonlat[0].first;
    double lat_min = lonlat[0].second, lat_max = lonlat[0].second;
    for (const auto& [lon, lat] : lonlat) {
        lon_min = std::min(lon_min, lon);
        lon_max = std::max(lon_max, lon);
        lat_min = std::min(lat_min, lat);
        lat_max = std::max(lat_max, lat);
    }
    ProjectionSpec spec;
    double range = lat_max - lat_min;
    if (range == 0.0) {
        // Degenerate box: spread the parallels one degree around the row.
        lat_min -= 1.0;
        lat_max += 1.0;
        range = 2.0;
    }
    spec.parallel1 = lat_min + 0.25 * range;
    spec.parallel2 = lat_min + 0.75 * range;
    spec.ref_lon = 0.5 * (lon_min + lon_max);
    spec.ref_lat = 0.5 * (lat_min + lat_max);
    return spec;
}

ProjectionSpec read_projection_spec(const std::string& path) {
    const std::string text = read_text_file(path);
    ProjectionSpec spec;
    std::set<std::string> seen;
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t(trim(line));
        if (t.empty() || t[0] == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument(path + ":" + std::to_string(lineno) +
                                        ": expected 'key = value'");
        const std::string key(trim(t.substr(0, eq)));
        const double value = need_double(trim(t.substr(eq + 1)), path + ":" + std::to_string(lineno));
        if (key == "parallel_1") spec.parallel1 = value;
        else if (key == "parallel_2") spec.parallel2 = value;
        else if (key == "ref_lon") spec.ref_lon = value;
        else if (key == "ref_lat") spec.ref_lat = value;
        else if (key == "semi_major_axis") spec.semi_major_axis = value;
        else if (key == "flattening") spec.flattening = value;
        else
            throw std::invalid_argument(path + ":" + std::to_string(lineno) +
                                        ": unknown projection key '" + key + "'");
        seen.insert(key);
    }
    for (const char* required : {"parallel_1", "parallel_2", "ref_lon", "ref_lat"})
        if (!seen.count(required))
            throw std::invalid_argument(path + ": missing projection key '" +
                                        std::string(required) + "'");
    return spec;
}

void write_projection_spec(const ProjectionSpec& spec, const std::string& path) {
    std::string out;
    out += "parallel_1 = " + format_double(spec.parallel1) + "\n";
    out += "parallel_2 = " + format_double(spec.parallel2) + "\n";
    out += "ref_lon = " + format_double(spec.ref_lon) + "\n";
    out += "ref_lat = " + format_double(spec.ref_lat) + "\n";
    out += "semi_major_axis = " + format_double(spec.semi_major_axis) + "\n";
    out += "flattening = " + format_double(spec.flattening) + "\n";
    write_text_file(path, out);
}

namespace {

std::vector<std::vector<std::string>> read_csv(const std::string& path,
                                               const std::string& expected_header) {
    const std::string text = read_text_file(path);
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || trim(line) != expected_header)
        throw std::invalid_argument(path + ": expected header '" + expected_header + "'");
    std::vector<std::vector<std::string>> rows;
    const std::size_t nfields = split(expected_header, ',').size();
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        const auto fields = split(line, ',');
        if (fields.size() != nfields)
            throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": expected " +
                                        std::to_string(nfields) + " fields");
        rows.emplace_back(fields.begin(), fields.end());
    }
    return rows;
}

} // namespace

StationSet load_stations(const std::string& path, const ProjectionSpec& spec) {
    StationSet set;
    std::set<std::string> ids;
    for (const auto& row : read_csv(path, "id,lon,lat")) {
        Station s;
        s.id = row[0];
        s.lon = need_double(row[1], path);
        s.lat = need_double(row[2], path);
        s.pos = project(spec, s.lon, s.lat);
        if (!ids.insert(s.id).second)
            throw std::invalid_argument(path + ": duplicate station id '" + s.id + "'");
        set.stations.push_back(std::move(s));
    }
    for (std::size_t i = 0; i < set.size(); ++i)
        for (std::size_t j = i + 1; j < set.size(); ++j)
            if (set[i].pos.x == set[j].pos.x && set[i].pos.y == set[j].pos.y)
                throw std::invalid_argument(path + ": stations '" + set[i].id + "' and '" +
                                            set[j].id + "' project to the same point");
    return set;
}

void write_stations(const StationSet& set, const std::string& path) {
    std::string out = "id,lon,lat\n";
    for (const auto& s : set.stations)
        out += s.id + "," + format_double(s.lon) + "," + format_double(s.lat) + "\n";
    write_text_file(path, out);
}

GaugeRecord load_gauges(const std::string& path, const StationSet& stations) {
    const auto rows = read_csv(path, "station_id,epoch,value_cm");
    std::int64_t lo = std::numeric_limits<std::int64_t>::max();
    std::int64_t hi = std::numeric_limits<std::int64_t>::min();
    for (const auto& row : rows) {
        const std::int64_t m = month_from_label(row[1]);
        lo = std::min(lo, m);
        hi = std::max(hi, m);
    }
    if (rows.empty()) throw std::invalid_argument(path + ": no gauge rows");
    return load_gauges(path, stations, EpochAxis{lo, hi - lo + 1});
}

GaugeRecord load_gauges(const std::string& path, const StationSet& stations, EpochAxis axis) {
    GaugeRecord rec;
    rec.axis = axis;
    rec.values.assign(stations.size(),
                      std::vector<double>(static_cast<std::size_t>(axis.count),
                                          std::numeric_limits<double>::quiet_NaN()));
    std::set<std::pair<std::size_t, std::int64_t>> seen;
    for (const auto& row : read_csv(path, "station_id,epoch,value_cm")) {
        const std::size_t s = stations.index_of(row[0]);
        const std::int64_t m = month_from_label(row[1]);
        if (!axis.contains_month(m)) continue; // outside the forced axis
        const std::int64_t e = axis.index_of_month(m);
        if (!seen.insert({s, e}).second)
            throw std::invalid_argument(path + ": duplicate entry for " + row[0] + " at " +
                                        row[1]);
        rec.values[s][static_cast<std::size_t>(e)] = need_double(row[2], path);
    }
    return rec;
}

void write_gauges(const GaugeRecord& rec, const StationSet& stations, const std::string& path) {
    if (rec.values.size() != stations.size())
        throw std::invalid_argument("write_gauges: record/station size mismatch");
    std::string out = "station_id,epoch,value_cm\n";
    for (std::size_t s = 0; s < stations.size(); ++s)
        for (std::int64_t e = 0; e < rec.axis.count; ++e) {
            const double v = rec.values[s][static_cast<std::size_t>(e)];
            out += stations[s].id + "," + rec.axis.label_of(e) + "," +
                   (std::isnan(v) ? "NaN" : format_double(v)) + "\n";
        }
    write_text_file(path, out);
}

RasterGrid load_grid(const std::string& path) {
    const std::string text = read_text_file(path);
    std::istringstream in(text);
    RasterGrid g;
    std::map<std::string, std::string> header;
    const char* keys[] = {"ncols",        "nrows",        "xllcorner",   "yllcorner",
                          "cellsize_lon", "cellsize_lat", "nodata_value"};
    std::string key, line;
    for (const char* expected : keys) {
        if (!(in >> key) || key != expected)
            throw std::invalid_argument(path + ": expected header key '" +
                                        std::string(expected) + "', got '" + key + "'");
        std::string value;
        if (!(in >> value)) throw std::invalid_argument(path + ": missing header value");
        header[key] = value;
    }
    g.ncols = static_cast<std::size_t>(need_int(header["ncols"], path));
    g.nrows = static_cast<std::size_t>(need_int(header["nrows"], path));
    g.lon0 = need_double(header["xllcorner"], path);
    g.lat0 = need_double(header["yllcorner"], path);
    g.dlon = need_double(header["cellsize_lon"], path);
    g.dlat = need_double(header["cellsize_lat"], path);
    g.nodata = need_double(header["nodata_value"], path);
    if (g.ncols == 0 || g.nrows == 0) throw std::invalid_argument(path + ": empty grid");
    if (g.dlon <= 0.0 || g.dlat <= 0.0)
        throw std::invalid_argument(path + ": cell sizes must be positive");
    g.values.resize(g.ncols * g.nrows);
    // north row first on disk; stored south-up
    for (std::size_t r = 0; r < g.nrows; ++r)
        for (std::size_t c = 0; c < g.ncols; ++c) {
            std::string tok;
            if (!(in >> tok))
                throw std::invalid_argument(path + ": truncated grid body");
            g.at(g.nrows - 1 - r, c) = need_double(tok, path);
        }
    std::string rest;
    if (in >> rest) throw std::invalid_argument(path + ": trailing data after grid body");
    g.epoch_label = std::filesystem::path(path).stem().string();
    return g;
}

void write_grid(const RasterGrid& grid, const std::string& path) {
    if (grid.values.size() != grid.ncols * grid.nrows)
        throw std::invalid_argument("write_grid: value count mismatch");
    std::string out;
    out += "ncols " + format_int(static_cast<std::int64_t>(grid.ncols)) + "\n";
    out += "nrows " + format_int(static_cast<std::int64_t>(grid.nrows)) + "\n";
    out += "xllcorner " + format_double(grid.lon0) + "\n";
    out += "yllcorner " + format_double(grid.lat0) + "\n";
    out += "cellsize_lon " + format_double(grid.dlon) + "\n";
    out += "cellsize_lat " + format_double(grid.dlat) + "\n";
    out += "nodata_value " + format_double(grid.nodata) + "\n";
    for (std::size_t r = grid.nrows; r-- > 0;) {
        for (std::size_t c = 0; c < grid.ncols; ++c) {
            if (c) out += ' ';
            out += format_double(grid.at(r, c));
        }
        out += '\n';
    }
    write_text_file(path, out);
}

std::vector<std::pair<std::int64_t, std::string>> list_grid_files(const std::string& dir) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir)) throw std::invalid_argument("not a directory: " + dir);
    std::vector<std::pair<std::int64_t, std::string>> out;
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file() || entry.path().extension() != ".asc") continue;
        out.emplace_back(month_from_label(entry.path().stem().string()), entry.path().string());
    }
    std::sort(out.begin(), out.end());
    for (std::size_t i = 1; i < out.size(); ++i)
        if (out[i].first == out[i - 1].first)
            throw std::invalid_argument("duplicate grid epoch in " + dir);
    return out;
}

std::vector<std::size_t> availability_filter(const GaugeRecord& rec, double threshold) {
    if (threshold < 0.0 || threshold > 1.0)
        throw std::invalid_argument("availability threshold must lie in [0,1]");
    std::vector<std::size_t> kept;
    const double bar = threshold * static_cast<double>(rec.axis.count);
    for (std::size_t s = 0; s < rec.values.size(); ++s)
        if (static_cast<double>(rec.months_present(s)) > bar) kept.push_back(s);
    return kept;
}

AnchorResult anchor_gauges(const GaugeRecord& rec, const StationSet& stations,
                           const ProjectionSpec& spec,
                           const std::vector<std::pair<std::int64_t, const RasterGrid*>>& grids) {
    if (grids.empty()) throw std::invalid_argument("anchor_gauges: no overlap grids");
    if (rec.values.size() != stations.size())
        throw std::invalid_argument("anchor_gauges: record/station size mismatch");

    AnchorResult res;
    res.record = rec;
    res.anchored.assign(stations.size(), false);
    res.cell_row.assign(stations.size(), -1);
    res.cell_col.assign(stations.size(), -1);

    const RasterGrid& g0 = *grids.front().second;
    for (const auto& [epoch, grid] : grids) {
        (void)epoch;
        if (grid->ncols != g0.ncols || grid->nrows != g0.nrows)
            throw std::invalid_argument("anchor_gauges: overlap grids disagree in shape");
    }
    const std::size_t ncells = g0.nrows * g0.ncols;
    std::vector<PlanePoint> centers(ncells);
    for (std::size_t r = 0; r < g0.nrows; ++r)
        for (std::size_t c = 0; c < g0.ncols; ++c)
            centers[r * g0.ncols + c] = project(spec, g0.center_lon(c), g0.center_lat(r));

    // Cells valid (non-nodata) over a given month set, cached per distinct set.
    std::map<std::vector<std::int64_t>, std::vector<char>> valid_cache;
    auto validity = [&](const std::vector<std::int64_t>& months) -> const std::vector<char>& {
        auto it = valid_cache.find(months);
        if (it != valid_cache.end()) return it->second;
        std::vector<char> valid(ncells, 1);
        for (std::int64_t epoch : months) {
            const RasterGrid* g = nullptr;
            for (const auto& [e, gp] : grids)
                if (e == epoch) { g = gp; break; }
            for (std::size_t cell = 0; cell < ncells; ++cell)
                if (g->values[cell] == g->nodata) valid[cell] = 0;
        }
        return valid_cache.emplace(months, std::move(valid)).first->second;
    };

    for (std::size_t s = 0; s < stations.size(); ++s) {
        // Overlap months this station observes.
        std::vector<std::int64_t> months;
        for (const auto& [epoch, grid] : grids) {
            (void)grid;
            if (rec.has(s, epoch)) months.push_back(epoch);
        }
        if (months.empty()) {
            // No data inside the grid period: the record cannot be tied to the
            // reference surface, so it is dropped.
            for (double& v : res.record.values[s]) v = std::numeric_limits<double>::quiet_NaN();
            continue;
        }

        const std::vector<char>& valid = validity(months);
        double best = std::numeric_limits<double>::infinity();
        std::int64_t best_r = -1, best_c = -1;
        for (std::size_t r = 0; r < g0.nrows; ++r)
            for (std::size_t c = 0; c < g0.ncols; ++c) {
                if (!valid[r * g0.ncols + c]) continue;
                const PlanePoint& p = centers[r * g0.ncols + c];
                const double dx = p.x - stations[s].pos.x;
                const double dy = p.y - stations[s].pos.y;
                const double d2 = dx * dx + dy * dy;
                if (d2 < best) {
                    best = d2;
                    best_r = static_cast<std::int64_t>(r);
                    best_c = static_cast<std::int64_t>(c);
                }
            }
        if (best_r < 0)
            throw std::runtime_error("anchor_gauges: no grid cell valid over the months of '" +
                                     stations[s].id + "'");

        double gauge_sum = 0.0, cell_sum = 0.0;
        for (std::int64_t epoch : months) {
            gauge_sum += rec.at(s, epoch);
            const RasterGrid* g = nullptr;
            for (const auto& [e, gp] : grids)
                if (e == epoch) { g = gp; break; }
            cell_sum += g->at(static_cast<std::size_t>(best_r), static_cast<std::size_t>(best_c));
        }
        const double offset = (cell_sum - gauge_sum) / static_cast<double>(months.size());
        for (double& v : res.record.values[s])
            if (!std::isnan(v)) v += offset;
        res.anchored[s] = true;
        res.cell_row[s] = best_r;
        res.cell_col[s] = best_c;
    }
    return res;
}

std::vector<std::size_t> common_stations(const GaugeRecord& rec, std::int64_t i, std::int64_t j) {
    std::vector<std::size_t> all(rec.values.size());
    for (std::size_t s = 0; s < all.size(); ++s) all[s] = s;
    return common_stations(rec, i, j, all);
}

std::vector<std::size_t> common_stations(const GaugeRecord& rec, std::int64_t i, std::int64_t j,
                                         const std::vector<std::size_t>& among) {
    std::vector<std::size_t> out;
    for (std::size_t s : among)
        if (rec.has(s, i) && rec.has(s, j)) out.push_back(s);
    if (out.size() < 3)
        throw std::runtime_error("fewer than 3 stations observed at both epochs " +
                                 rec.axis.label_of(i) + " and " + rec.axis.label_of(j));
    return out;
}

} // namespace seatri
