#pragma once

#include "seatri/epoch.hpp"
#include "seatri/geometry.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace seatri {

struct Station {
    std::string id;
    double lon{};
    double lat{};
    PlanePoint pos{}; // projected
};

struct StationSet {
    std::vector<Station> stations;

    std::size_t size() const { return stations.size(); }
    const Station& operator[](std::size_t i) const { return stations[i]; }
    std::size_t index_of(const std::string& id) const; // throws on unknown id
    std::vector<PlanePoint> points() const;
    std::vector<PlanePoint> points_of(const std::vector<std::size_t>& subset) const;
};

// Gauge values per (station, epoch); NaN marks a missing month.
struct GaugeRecord {
    EpochAxis axis;
    std::vector<std::vector<double>> values; // [station][epoch index]

    bool has(std::size_t station, std::int64_t epoch) const;
    double at(std::size_t station, std::int64_t epoch) const;
    std::size_t months_present(std::size_t station) const;
};

struct RasterGrid {
    double lon0{};  // west edge of the west column
    double lat0{};  // south edge of the south row
    double dlon{};
    double dlat{};
    std::size_t ncols{};
    std::size_t nrows{};
    double nodata{-9999.0};
    std::vector<double> values; // row-major, row 0 = south row
    std::string epoch_label;

    double& at(std::size_t row, std::size_t col) { return values[row * ncols + col]; }
    double at(std::size_t row, std::size_t col) const { return values[row * ncols + col]; }
    bool is_nodata(std::size_t row, std::size_t col) const { return at(row, col) == nodata; }
    double center_lon(std::size_t col) const { return lon0 + (static_cast<double>(col) + 0.5) * dlon; }
    double center_lat(std::size_t row) const { return lat0 + (static_cast<double>(row) + 0.5) * dlat; }
};

struct ProjectionSpec {
    double parallel1{}; // degrees
    double parallel2{};
    double ref_lon{};
    double ref_lat{};
    double semi_major_axis{6378137.0};
    double flattening{1.0 / 298.257223563};
};

// Two-parallel Lambert conformal conic forward mapping on the ellipsoid.
PlanePoint project(const ProjectionSpec& spec, double lon, double lat);

// Parallels at the 25th/75th latitude percentiles of the station bounding box,
// reference point at its center.
ProjectionSpec default_projection(const std::vector<std::pair<double, double>>& lonlat);

ProjectionSpec read_projection_spec(const std::string& path);
void write_projection_spec(const ProjectionSpec& spec, const std::string& path);

// stations CSV: header `id,lon,lat`
StationSet load_stations(const std::string& path, const ProjectionSpec& spec);
void write_stations(const StationSet& set, const std::string& path);

// gauges CSV: header `station_id,epoch,value_cm`, epoch = YYYY-MM, missing = NaN
// or absent row. The axis spans the min..max epoch present unless forced.
GaugeRecord load_gauges(const std::string& path, const StationSet& stations);
GaugeRecord load_gauges(const std::string& path, const StationSet& stations, EpochAxis axis);
void write_gauges(const GaugeRecord& rec, const StationSet& stations, const std::string& path);

// grid file: ESRI-ASCII-style, north row first on disk.
RasterGrid load_grid(const std::string& path);
void write_grid(const RasterGrid& grid, const std::string& path);

// (absolute month, path) for every `YYYY-MM.asc` in the directory, sorted.
std::vector<std::pair<std::int64_t, std::string>> list_grid_files(const std::string& dir);

// Stations whose month count strictly exceeds threshold * axis length.
std::vector<std::size_t> availability_filter(const GaugeRecord& rec, double threshold);

struct AnchorResult {
    GaugeRecord record;
    std::vector<bool> anchored;          // false: no overlap data, values cleared
    std::vector<std::int64_t> cell_row;  // chosen nearest cell, -1 when not anchored
    std::vector<std::int64_t> cell_col;
};

// De-mean each gauge over the grid-covered months it observes and add the
// temporal mean (same months) of the nearest reference cell that is non-nodata
// in all of them. Nearest = smallest projected Euclidean distance, ties by
// (row, col). `grids` pairs are (epoch axis index, grid); grids outside the
// record's axis must be dropped by the caller.
AnchorResult anchor_gauges(const GaugeRecord& rec, const StationSet& stations,
                           const ProjectionSpec& spec,
                           const std::vector<std::pair<std::int64_t, const RasterGrid*>>& grids);

// Stations observed at both epochs; throws when fewer than 3 remain.
std::vector<std::size_t> common_stations(const GaugeRecord& rec, std::int64_t i, std::int64_t j);
std::vector<std::size_t> common_stations(const GaugeRecord& rec, std::int64_t i, std::int64_t j,
                                         const std::vector<std::size_t>& among);

} // namespace seatri
