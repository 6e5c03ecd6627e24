#pragma once

#include "seatri/geometry.hpp"

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace seatri {

// Undirected edge, endpoints ascending.
struct Edge {
    std::uint32_t u;
    std::uint32_t v;
    Edge(std::uint32_t a, std::uint32_t b) : u(a), v(b) {
        if (u > v) std::swap(u, v);
    }
    auto operator<=>(const Edge&) const = default;
};

struct Triangulation {
    std::vector<Triangle> triangles; // sorted ascending, unique
    std::map<Edge, std::vector<std::size_t>> edge_triangles;

    static Triangulation from_triangles(std::vector<Triangle> tris);
};

// Checks the partition invariants: triangles cover conv(points) exactly once,
// hull (sub-)edges are single-covered and interior edges double-covered, and no
// point lies strictly inside a triangle or an edge. Throws std::runtime_error
// naming the first violation.
void validate_triangulation(const Triangulation& t, std::span<const PlanePoint> points);

// Text format: `n_triangles <N>`, then one `i j k` line per triangle, then an
// optional trailing `# objective <value>`.
struct TriangulationFile {
    std::vector<std::array<std::uint32_t, 3>> triangles;
    std::optional<double> objective;
};

std::string write_triangulation_text(const TriangulationFile& file);
TriangulationFile read_triangulation_text(const std::string& text);

// index_map[local] = index written to / read from the file.
TriangulationFile to_file(const Triangulation& t, std::span<const std::uint32_t> index_map,
                          std::optional<double> objective);
Triangulation from_file(const TriangulationFile& file, std::span<const std::uint32_t> index_map);

} // namespace seatri
