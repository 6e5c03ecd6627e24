#pragma once

#include "seatri/candidates.hpp"
#include "seatri/cost.hpp"
#include "seatri/triangulation.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace seatri {

// Binary program over the candidate set: pick one triangle on the interior
// side of every hull edge, equal counts on both sides of every interior edge.
struct IlpModel {
    struct Row {
        std::vector<std::pair<std::uint32_t, double>> terms; // (variable, coefficient)
        double rhs{};
    };

    std::vector<Triangle> tris;   // variable <-> candidate triangle, canonical order
    std::vector<double> obj;      // frozen candidate costs
    std::vector<Row> rows;        // interior equalities first, then hull equalities
    std::size_t interior_rows{};  // prefix count
};

IlpModel build_model(const CandidateSet& cands, const CostTable& costs,
                     std::span<const PlanePoint> points);

// Selection cost accumulated in ascending variable order — the one summation
// order used everywhere a selection is priced.
double canonical_objective(const IlpModel& model, const std::vector<std::uint32_t>& selected);

struct IlpStats {
    long nodes{};
    long lp_iterations{};
    double wall_seconds{};
};

struct IlpSolution {
    std::vector<std::uint32_t> selected; // variable indices, ascending
    double objective{};                  // sum of frozen costs over the selection
    IlpStats stats;
};

// Branch and bound over the LP relaxation; proves optimality. The returned
// objective is re-accumulated canonically (ascending candidate order) from the
// frozen costs, so it is bit-identical to evaluating the chosen triangulation.
// warm_selected (optionally empty) seeds the incumbent, e.g. with the Delaunay
// triangles. The selection is validated against the Triangulation invariants.
IlpSolution solve_ilp(const IlpModel& model, std::span<const PlanePoint> points,
                      const std::vector<std::uint32_t>& warm_selected);

// Fixed-format MPS with binary bounds; deterministic row/column order.
std::string export_mps(const IlpModel& model, const std::string& name);

} // namespace seatri
