#include "seatri/triangulation.hpp"

#include "seatri/textio.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace seatri {

Triangulation Triangulation::from_triangles(std::vector<Triangle> tris) {
    std::sort(tris.begin(), tris.end());
    if (std::adjacent_find(tris.begin(), tris.end()) != tris.end())
        throw std::runtime_error("triangulation: duplicate triangle");
    Triangulation t;
    t.triangles = std::move(tris);
    for (std::size_t i = 0; i < t.triangles.size(); ++i) {
        const Triangle& tri = t.triangles[i];
        t.edge_triangles[Edge(tri.a, tri.b)].push_back(i);
        t.edge_triangles[Edge(tri.a, tri.c)].push_back(i);
        t.edge_triangles[Edge(tri.b, tri.c)].push_back(i);
    }
    return t;
}

void validate_triangulation(const Triangulation& t, std::span<const PlanePoint> points) {
    const std::size_t n = points.size();
    if (n < 3) throw std::runtime_error("triangulation: fewer than 3 points");
    if (t.triangles.empty()) throw std::runtime_error("triangulation: no triangles");

    // Directed edge tally of CCW-oriented triangles. A triangulation covering
    // conv(P) exactly once must cancel every interior edge and trace the
    // boundary chain once in CCW direction (winding-number argument).
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::size_t> directed;
    std::vector<char> used(n, 0);
    for (const Triangle& tri : t.triangles) {
        if (tri.c >= n) throw std::runtime_error("triangulation: vertex index out of range");
        const Orientation o = orientation(points[tri.a], points[tri.b], points[tri.c]);
        if (o == Orientation::Collinear)
            throw std::runtime_error("triangulation: degenerate triangle");
        std::uint32_t x = tri.a, y = tri.b, z = tri.c;
        if (o == Orientation::Clockwise) std::swap(y, z);
        ++directed[{x, y}];
        ++directed[{y, z}];
        ++directed[{z, x}];
        used[tri.a] = used[tri.b] = used[tri.c] = 1;
    }
    for (std::size_t i = 0; i < n; ++i)
        if (!used[i]) throw std::runtime_error("triangulation: point not used as a vertex");

    const std::vector<std::size_t> chain = boundary_chain(points);
    std::map<std::pair<std::uint32_t, std::uint32_t>, char> chain_edges;
    for (std::size_t i = 0; i < chain.size(); ++i) {
        const auto u = static_cast<std::uint32_t>(chain[i]);
        const auto v = static_cast<std::uint32_t>(chain[(i + 1) % chain.size()]);
        chain_edges[{u, v}] = 1;
    }

    std::map<Edge, std::pair<std::size_t, std::size_t>> undirected; // (forward, backward) counts
    for (const auto& [de, cnt] : directed) {
        const Edge e(de.first, de.second);
        auto& [fwd, bwd] = undirected[e];
        (de.first == e.u ? fwd : bwd) += cnt;
    }
    for (const auto& [e, counts] : undirected) {
        const auto [fwd, bwd] = counts;
        const bool hull_fwd = chain_edges.count({e.u, e.v}) != 0;
        const bool hull_bwd = chain_edges.count({e.v, e.u}) != 0;
        if (hull_fwd || hull_bwd) {
            // Boundary sub-edge: exactly once, in the CCW chain direction.
            const std::size_t along = hull_fwd ? fwd : bwd;
            const std::size_t against = hull_fwd ? bwd : fwd;
            if (along != 1 || against != 0)
                throw std::runtime_error("triangulation: hull edge not covered exactly once");
        } else {
            if (fwd != 1 || bwd != 1)
                throw std::runtime_error("triangulation: interior edge not shared by exactly "
                                         "two opposite triangles");
        }
    }
    for (const auto& [de, present] : chain_edges) {
        (void)present;
        if (!directed.count(de))
            throw std::runtime_error("triangulation: boundary edge missing");
    }

    // No point strictly inside a triangle or strictly interior to an edge.
    for (const Triangle& tri : t.triangles)
        for (std::uint32_t p = 0; p < n; ++p) {
            if (tri.contains_vertex(p)) continue;
            if (point_in_triangle(points[tri.a], points[tri.b], points[tri.c], points[p]) !=
                PointLocation::Outside)
                throw std::runtime_error("triangulation: point covered by a triangle");
        }
}

std::string write_triangulation_text(const TriangulationFile& file) {
    std::string out = "n_triangles " + format_int(static_cast<std::int64_t>(file.triangles.size())) + "\n";
    for (const auto& tri : file.triangles)
        out += format_int(tri[0]) + " " + format_int(tri[1]) + " " + format_int(tri[2]) + "\n";
    if (file.objective) out += "# objective " + format_double(*file.objective) + "\n";
    return out;
}

TriangulationFile read_triangulation_text(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("triangulation text: empty");
    auto head = split(trim(line), ' ');
    if (head.size() != 2 || head[0] != "n_triangles")
        throw std::invalid_argument("triangulation text: expected 'n_triangles <N>'");
    const auto count = parse_int(head[1]);
    if (!count || *count < 0)
        throw std::invalid_argument("triangulation text: malformed triangle count");
    TriangulationFile file;
    auto need_index = [](std::string_view tok) {
        const auto v = parse_int(tok);
        if (!v || *v < 0)
            throw std::invalid_argument("triangulation text: malformed vertex index");
        return static_cast<std::uint32_t>(*v);
    };
    while (std::getline(in, line)) {
        const std::string t(trim(line));
        if (t.empty()) continue;
        if (t[0] == '#') {
            auto fields = split(t, ' ');
            if (fields.size() == 3 && fields[0] == "#" && fields[1] == "objective") {
                const auto v = parse_double(fields[2]);
                if (!v) throw std::invalid_argument("triangulation text: malformed objective");
                file.objective = *v;
            }
            continue;
        }
        auto fields = split(t, ' ');
        if (fields.size() != 3)
            throw std::invalid_argument("triangulation text: expected 'i j k', got '" + t + "'");
        file.triangles.push_back({need_index(fields[0]), need_index(fields[1]),
                                  need_index(fields[2])});
    }
    if (static_cast<std::int64_t>(file.triangles.size()) != *count)
        throw std::invalid_argument("triangulation text: triangle count mismatch");
    return file;
}

TriangulationFile to_file(const Triangulation& t, std::span<const std::uint32_t> index_map,
                          std::optional<double> objective) {
    TriangulationFile file;
    file.objective = objective;
    for (const Triangle& tri : t.triangles) {
        std::array<std::uint32_t, 3> mapped = {index_map[tri.a], index_map[tri.b],
                                               index_map[tri.c]};
        std::sort(mapped.begin(), mapped.end());
        file.triangles.push_back(mapped);
    }
    std::sort(file.triangles.begin(), file.triangles.end());
    return file;
}

Triangulation from_file(const TriangulationFile& file, std::span<const std::uint32_t> index_map) {
    std::map<std::uint32_t, std::uint32_t> back;
    for (std::uint32_t local = 0; local < index_map.size(); ++local)
        back[index_map[local]] = local;
    std::vector<Triangle> tris;
    for (const auto& tri : file.triangles) {
        auto lookup = [&](std::uint32_t g) {
            auto it = back.find(g);
            if (it == back.end())
                throw std::invalid_argument("triangulation file references station index " +
                                            format_int(g) + " outside the subset");
            return it->second;
        };
        tris.emplace_back(lookup(tri[0]), lookup(tri[1]), lookup(tri[2]));
    }
    return Triangulation::from_triangles(std::move(tris));
}

} // namespace seatri
