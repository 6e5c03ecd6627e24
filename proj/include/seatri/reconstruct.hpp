#pragma once

#include "seatri/cost.hpp"
#include "seatri/triangulation.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace seatri {

// Per-cell owning triangle (index into t.triangles) for every masked-in cell,
// -1 elsewhere. Uses the same half-open ownership rule as the cost module.
std::vector<std::int32_t> assign_cells(const Triangulation& t, std::span<const PlanePoint> points,
                                       const CellGeometry& geom, const RegionMask& mask);

// Evaluate the piecewise-linear surface of (t, h) on every masked-in cell of
// the template grid; everything else is nodata. The template's values are only
// read for its shape and nodata sentinel.
RasterGrid transfer_and_rasterize(const Triangulation& t, std::span<const PlanePoint> points,
                                  std::span<const double> h, const RasterGrid& tmpl,
                                  const CellGeometry& geom, const RegionMask& mask);

} // namespace seatri
