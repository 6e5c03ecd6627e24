#pragma once

#include "seatri/triangulation.hpp"

#include <span>

namespace seatri {

// Delaunay triangulation with an exact empty-circumdisk guarantee. Cocircular
// ties are resolved deterministically: among Delaunay-equivalent diagonals the
// one with the smaller minimum vertex index wins.
Triangulation delaunay(std::span<const PlanePoint> points);

} // namespace seatri
