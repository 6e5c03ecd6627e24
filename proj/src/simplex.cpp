#include "seatri/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace seatri {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kCostTol = 1e-9;
constexpr double kPivotTol = 1e-9;
constexpr double kFeasTol = 1e-7;
constexpr int kRefactorInterval = 100;
constexpr int kStallLimit = 64;
constexpr long kIterationCap = 200000;

enum class VarState : std::uint8_t { Basic, AtLower, AtUpper };

struct Tableau {
    std::size_t m;                                                  // rows
    std::size_t total;                                              // columns incl. artificials
    const std::vector<std::vector<std::pair<std::uint32_t, double>>>* cols;
    std::vector<double> lower, upper;
    std::vector<double> rhs;

    std::vector<VarState> state;
    std::vector<std::uint32_t> basic; // column basic in each row
    std::vector<double> binv;         // m*m, row-major
    std::vector<double> xb;           // basic values by row

    double& bi(std::size_t r, std::size_t c) { return binv[r * m + c]; }

    double col_entry_dot(std::size_t j, const std::vector<double>& row_vec) const {
        double s = 0.0;
        for (const auto& [r, v] : (*cols)[j]) s += row_vec[r] * v;
        return s;
    }

    double bound_value(std::size_t j) const {
        return state[j] == VarState::AtUpper ? upper[j] : lower[j];
    }

    // xb = Binv * (b - sum over nonbasic of a_j * x_j)
    void recompute_xb() {
        std::vector<double> res = rhs;
        for (std::size_t j = 0; j < total; ++j) {
            if (state[j] == VarState::Basic) continue;
            const double v = bound_value(j);
            if (v == 0.0) continue;
            for (const auto& [r, coef] : (*cols)[j]) res[r] -= coef * v;
        }
        for (std::size_t i = 0; i < m; ++i) {
            double s = 0.0;
            for (std::size_t r = 0; r < m; ++r) s += binv[i * m + r] * res[r];
            xb[i] = s;
        }
    }

    // Rebuild the dense inverse of the current basis by Gauss-Jordan.
    void refactorize() {
        std::vector<double> work(m * m, 0.0);
        for (std::size_t i = 0; i < m; ++i)
            for (const auto& [r, v] : (*cols)[basic[i]]) work[r * m + i] = v;
        std::vector<double> inv(m * m, 0.0);
        for (std::size_t i = 0; i < m; ++i) inv[i * m + i] = 1.0;
        for (std::size_t col = 0; col < m; ++col) {
            std::size_t piv = col;
            double best = std::abs(work[col * m + col]);
            for (std::size_t r = col + 1; r < m; ++r)
                if (std::abs(work[r * m + col]) > best) {
                    best = std::abs(work[r * m + col]);
                    piv = r;
                }
            if (best < 1e-12) throw std::runtime_error("simplex: singular basis");
            if (piv != col) {
                for (std::size_t c = 0; c < m; ++c) {
                    std::swap(work[piv * m + c], work[col * m + c]);
                    std::swap(inv[piv * m + c], inv[col * m + c]);
                }
            }
            const double d = work[col * m + col];
            for (std::size_t c = 0; c < m; ++c) {
                work[col * m + c] /= d;
                inv[col * m + c] /= d;
            }
            for (std::size_t r = 0; r < m; ++r) {
                if (r == col) continue;
                const double f = work[r * m + col];
                if (f == 0.0) continue;
                for (std::size_t c = 0; c < m; ++c) {
                    work[r * m + c] -= f * work[col * m + c];
                    inv[r * m + c] -= f * inv[col * m + c];
                }
            }
        }
        binv = std::move(inv);
        recompute_xb();
    }

    long iterations = 0;

    // Minimize obj over the current feasible state. Returns the objective.
    double optimize(const std::vector<double>& obj) {
        int since_refactor = 0;
        int stall = 0;
        bool bland = false;
        double last_obj = current_obj(obj);
        for (long iter = 0; iter < kIterationCap; ++iter, ++iterations) {
            // BTRAN: y' = c_B' Binv
            std::vector<double> y(m, 0.0);
            for (std::size_t i = 0; i < m; ++i) {
                const double cb = obj[basic[i]];
                if (cb == 0.0) continue;
                for (std::size_t c = 0; c < m; ++c) y[c] += cb * binv[i * m + c];
            }

            // Pricing.
            std::size_t enter = total;
            double best_score = kCostTol;
            for (std::size_t j = 0; j < total; ++j) {
                if (state[j] == VarState::Basic) continue;
                if (lower[j] == upper[j]) continue; // fixed: no room to move
                const double d = obj[j] - col_entry_dot(j, y);
                const bool eligible = (state[j] == VarState::AtLower && d < -kCostTol) ||
                                      (state[j] == VarState::AtUpper && d > kCostTol);
                if (!eligible) continue;
                if (bland) {
                    enter = j;
                    break;
                }
                if (std::abs(d) > best_score) {
                    best_score = std::abs(d);
                    enter = j;
                }
            }
            if (enter == total) return current_obj(obj);

            const int sigma = state[enter] == VarState::AtLower ? 1 : -1;

            // FTRAN: w = Binv a_enter
            std::vector<double> w(m, 0.0);
            for (const auto& [r, v] : (*cols)[enter])
                for (std::size_t i = 0; i < m; ++i) w[i] += binv[i * m + r] * v;

            // Ratio test: smallest blocking step; ties go to the smallest
            // basic column index (Bland-compatible).
            const double t_limit = upper[enter] - lower[enter]; // bound-flip distance
            std::size_t leave_row = m;
            double leave_t = kInf;
            int leave_to_upper = 0;
            for (std::size_t i = 0; i < m; ++i) {
                const double g = -sigma * w[i]; // d x_B[i] / d t
                double t;
                int to_upper;
                if (g < -kPivotTol) {
                    if (lower[basic[i]] == -kInf) continue;
                    t = (xb[i] - lower[basic[i]]) / (-g);
                    to_upper = 0;
                } else if (g > kPivotTol) {
                    if (upper[basic[i]] == kInf) continue;
                    t = (upper[basic[i]] - xb[i]) / g;
                    to_upper = 1;
                } else {
                    continue;
                }
                if (t < 0.0) t = 0.0; // tiny infeasibility from roundoff
                if (leave_row == m || t < leave_t - 1e-12 ||
                    (t <= leave_t + 1e-12 && basic[i] < basic[leave_row])) {
                    leave_t = std::min(t, leave_t);
                    leave_row = i;
                    leave_to_upper = to_upper;
                }
            }

            if (leave_row == m && t_limit == kInf)
                throw std::runtime_error("simplex: unbounded direction");

            if (leave_row == m || t_limit <= leave_t) {
                // Bound flip: the entering variable crosses to its other bound.
                const double t = t_limit;
                for (std::size_t i = 0; i < m; ++i) xb[i] += -sigma * t * w[i];
                state[enter] =
                    state[enter] == VarState::AtLower ? VarState::AtUpper : VarState::AtLower;
            } else {
                const double t = leave_t;
                const std::uint32_t out = basic[leave_row];
                for (std::size_t i = 0; i < m; ++i) xb[i] += -sigma * t * w[i];
                const double enter_val = bound_value(enter) + sigma * t;

                // Eta update of the dense inverse.
                const double piv = w[leave_row];
                if (std::abs(piv) < kPivotTol)
                    throw std::runtime_error("simplex: zero pivot");
                for (std::size_t c = 0; c < m; ++c) bi(leave_row, c) /= piv;
                for (std::size_t i = 0; i < m; ++i) {
                    if (i == leave_row) continue;
                    const double f = w[i];
                    if (f == 0.0) continue;
                    for (std::size_t c = 0; c < m; ++c) bi(i, c) -= f * bi(leave_row, c);
                }
                basic[leave_row] = static_cast<std::uint32_t>(enter);
                state[enter] = VarState::Basic;
                state[out] = leave_to_upper ? VarState::AtUpper : VarState::AtLower;
                xb[leave_row] = enter_val;

                if (++since_refactor >= kRefactorInterval) {
                    refactorize();
                    since_refactor = 0;
                }
            }

            const double now = current_obj(obj);
            if (now < last_obj - 1e-12) {
                stall = 0;
                bland = false;
            } else if (++stall >= kStallLimit) {
                bland = true;
            }
            last_obj = now;
        }
        throw std::runtime_error("simplex: iteration cap exceeded");
    }

    double current_obj(const std::vector<double>& obj) const {
        double s = 0.0;
        for (std::size_t j = 0; j < total; ++j) {
            if (state[j] == VarState::Basic) continue;
            s += obj[j] * bound_value(j);
        }
        for (std::size_t i = 0; i < m; ++i) s += obj[basic[i]] * xb[i];
        return s;
    }
};

} // namespace

LpResult solve_lp(const LinearProgram& lp) {
    const std::size_t m = lp.nrows;
    const std::size_t n = lp.ncols();
    if (lp.obj.size() != n || lp.lower.size() != n || lp.upper.size() != n ||
        lp.rhs.size() != m)
        throw std::invalid_argument("solve_lp: inconsistent model sizes");
    for (std::size_t j = 0; j < n; ++j)
        if (lp.lower[j] > lp.upper[j])
            throw std::invalid_argument("solve_lp: crossed bounds");

    std::vector<std::vector<std::pair<std::uint32_t, double>>> cols(n + m);
    for (std::size_t j = 0; j < n; ++j) cols[j] = lp.cols[j];

    Tableau tab;
    tab.m = m;
    tab.total = n + m;
    tab.cols = &cols;
    tab.lower = lp.lower;
    tab.upper = lp.upper;
    tab.lower.resize(n + m, 0.0);
    tab.upper.resize(n + m, kInf);
    tab.rhs = lp.rhs;
    tab.state.assign(n + m, VarState::AtLower);
    tab.basic.resize(m);
    tab.xb.assign(m, 0.0);
    tab.binv.assign(m * m, 0.0);
    // Start nonbasic structurals at the requested (or forced) bound; for
    // binary columns the default is the lower bound.
    for (std::size_t j = 0; j < n; ++j) {
        if (lp.lower[j] == -kInf)
            tab.state[j] = VarState::AtUpper;
        else if (j < lp.start_at_upper.size() && lp.start_at_upper[j] && lp.upper[j] < kInf)
            tab.state[j] = VarState::AtUpper;
    }

    // One artificial per row, signed by the residual of the starting point so
    // every artificial begins basic at a nonnegative value and the phase-1
    // objective genuinely measures total infeasibility.
    std::vector<double> residual = lp.rhs;
    for (std::size_t j = 0; j < n; ++j) {
        const double v = tab.bound_value(j);
        if (v == 0.0) continue;
        for (const auto& [r, coef] : cols[j]) residual[r] -= coef * v;
    }
    double infeasibility = 0.0;
    for (std::size_t r = 0; r < m; ++r) {
        const double sign = residual[r] < 0.0 ? -1.0 : 1.0;
        cols[n + r].emplace_back(static_cast<std::uint32_t>(r), sign);
        tab.basic[r] = static_cast<std::uint32_t>(n + r);
        tab.state[n + r] = VarState::Basic;
        tab.bi(r, r) = sign;
        infeasibility += std::abs(residual[r]);
    }
    tab.recompute_xb();

    // Phase 1: drive the artificials to zero (skipped when the starting point
    // is already feasible, e.g. a warm start from a known solution).
    if (infeasibility > kFeasTol) {
        std::vector<double> phase1_obj(n + m, 0.0);
        for (std::size_t r = 0; r < m; ++r) phase1_obj[n + r] = 1.0;
        const double art = tab.optimize(phase1_obj);
        if (art > kFeasTol) return LpResult{LpStatus::Infeasible, 0.0, {}, tab.iterations};
    }

    // Phase 2: pin the artificials and optimize the real objective.
    for (std::size_t r = 0; r < m; ++r) tab.upper[n + r] = 0.0;
    std::vector<double> obj = lp.obj;
    obj.resize(n + m, 0.0);
    tab.optimize(obj);

    LpResult res;
    res.status = LpStatus::Optimal;
    res.x.assign(n, 0.0);
    for (std::size_t j = 0; j < n; ++j)
        if (tab.state[j] != VarState::Basic) res.x[j] = tab.bound_value(j);
    for (std::size_t i = 0; i < m; ++i)
        if (tab.basic[i] < n) res.x[tab.basic[i]] = tab.xb[i];
    double objective = 0.0;
    for (std::size_t j = 0; j < n; ++j) objective += lp.obj[j] * res.x[j];
    res.objective = objective;
    res.iterations = tab.iterations;
    return res;
}

} // namespace seatri
