#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace seatri {

// minimize c'x  subject to  A x = b,  lower <= x <= upper
struct LinearProgram {
    std::size_t nrows{};
    std::vector<std::vector<std::pair<std::uint32_t, double>>> cols; // sparse columns
    std::vector<double> obj;
    std::vector<double> rhs;
    std::vector<double> lower;
    std::vector<double> upper;

    // Optional warm start: nonbasic variables flagged here begin at their
    // upper bound instead of the default start. When the flagged point
    // already satisfies A x = b, phase 1 is skipped entirely. Empty = all
    // variables start at the default bound.
    std::vector<std::uint8_t> start_at_upper;

    std::size_t ncols() const { return cols.size(); }
};

enum class LpStatus { Optimal, Infeasible };

struct LpResult {
    LpStatus status{LpStatus::Infeasible};
    double objective{};
    std::vector<double> x;
    long iterations{};
};

// Two-phase bounded-variable revised simplex with an explicit dense basis
// inverse. Dantzig pricing with a Bland fallback after a degenerate stall;
// deterministic tie-breaking throughout (lowest column index).
LpResult solve_lp(const LinearProgram& lp);

} // namespace seatri
