#include "seatri/reconstruct.hpp"

#include <cmath>
#include <stdexcept>

namespace seatri {

std::vector<std::int32_t> assign_cells(const Triangulation& t, std::span<const PlanePoint> points,
                                       const CellGeometry& geom, const RegionMask& mask) {
    std::vector<std::int32_t> owner(geom.ncols * geom.nrows, -1);
    for (std::size_t ti = 0; ti < t.triangles.size(); ++ti) {
        const Triangle& tri = t.triangles[ti];
        for (std::size_t r = 0; r < geom.nrows; ++r)
            for (std::size_t c = 0; c < geom.ncols; ++c) {
                if (!mask(r, c)) continue;
                if (!owns_cell(tri, points, geom.center(r, c))) continue;
                auto& slot = owner[r * geom.ncols + c];
                if (slot != -1)
                    throw std::runtime_error("assign_cells: cell owned by two triangles");
                slot = static_cast<std::int32_t>(ti);
            }
    }
    for (std::size_t r = 0; r < geom.nrows; ++r)
        for (std::size_t c = 0; c < geom.ncols; ++c)
            if (mask(r, c) && owner[r * geom.ncols + c] == -1)
                throw std::runtime_error("assign_cells: masked cell left unowned");
    return owner;
}

RasterGrid transfer_and_rasterize(const Triangulation& t, std::span<const PlanePoint> points,
                                  std::span<const double> h, const RasterGrid& tmpl,
                                  const CellGeometry& geom, const RegionMask& mask) {
    for (const Triangle& tri : t.triangles)
        if (std::isnan(h[tri.a]) || std::isnan(h[tri.b]) || std::isnan(h[tri.c]))
            throw std::invalid_argument(
                "transfer_and_rasterize: vertex unobserved at the reconstruction epoch");

    RasterGrid out = tmpl;
    for (double& v : out.values) v = out.nodata;

    const std::vector<std::int32_t> owner = assign_cells(t, points, geom, mask);
    for (std::size_t r = 0; r < geom.nrows; ++r)
        for (std::size_t c = 0; c < geom.ncols; ++c) {
            const std::int32_t ti = owner[r * geom.ncols + c];
            if (ti < 0) continue;
            out.at(r, c) =
                plane_value(t.triangles[static_cast<std::size_t>(ti)], points, h, geom.center(r, c));
        }
    return out;
}

} // namespace seatri
