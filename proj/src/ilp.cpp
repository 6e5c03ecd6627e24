#include "seatri/ilp.hpp"

#include "seatri/simplex.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>

namespace seatri {

namespace {

constexpr double kIntegralityTol = 1e-6;
constexpr long kNodeCap = 500000;

} // namespace

IlpModel build_model(const CandidateSet& cands, const CostTable& costs,
                     std::span<const PlanePoint> points) {
    if (cands.list.empty()) throw std::invalid_argument("build_model: empty candidate set");
    if (cands.list.size() != costs.entries.size())
        throw std::invalid_argument("build_model: cost table does not cover the candidates");

    IlpModel model;
    model.tris.reserve(cands.list.size());
    model.obj.reserve(cands.list.size());
    for (std::size_t i = 0; i < cands.list.size(); ++i) {
        model.tris.push_back(cands.list[i].tri);
        model.obj.push_back(costs.entries[i].cost);
    }

    const std::vector<std::size_t> chain = boundary_chain(points);
    std::set<Edge> hull_edges;
    for (std::size_t i = 0; i < chain.size(); ++i)
        hull_edges.insert(Edge(static_cast<std::uint32_t>(chain[i]),
                               static_cast<std::uint32_t>(chain[(i + 1) % chain.size()])));

    // Incident candidates per edge, split by the side of the third vertex.
    std::map<Edge, std::pair<std::vector<std::uint32_t>, std::vector<std::uint32_t>>> sides;
    for (std::uint32_t v = 0; v < model.tris.size(); ++v) {
        const Triangle& t = model.tris[v];
        auto add_side = [&](Edge e, std::uint32_t third) {
            const Orientation o = orientation(points[e.u], points[e.v], points[third]);
            if (o == Orientation::Collinear)
                throw std::invalid_argument("build_model: degenerate candidate");
            auto& [pos, neg] = sides[e];
            (o == Orientation::CounterClockwise ? pos : neg).push_back(v);
        };
        add_side(Edge(t.a, t.b), t.c);
        add_side(Edge(t.a, t.c), t.b);
        add_side(Edge(t.b, t.c), t.a);
    }

    std::vector<IlpModel::Row> interior, boundary;
    for (const auto& [e, split] : sides) {
        const auto& [pos, neg] = split;
        IlpModel::Row row;
        if (hull_edges.count(e)) {
            for (std::uint32_t v : pos) row.terms.emplace_back(v, 1.0);
            for (std::uint32_t v : neg) row.terms.emplace_back(v, 1.0);
            std::sort(row.terms.begin(), row.terms.end());
            row.rhs = 1.0;
            boundary.push_back(std::move(row));
        } else {
            for (std::uint32_t v : pos) row.terms.emplace_back(v, 1.0);
            for (std::uint32_t v : neg) row.terms.emplace_back(v, -1.0);
            std::sort(row.terms.begin(), row.terms.end());
            row.rhs = 0.0;
            interior.push_back(std::move(row));
        }
    }
    for (const Edge& e : hull_edges)
        if (!sides.count(e))
            throw std::runtime_error("build_model: hull edge without incident candidate");

    model.interior_rows = interior.size();
    model.rows = std::move(interior);
    for (auto& row : boundary) model.rows.push_back(std::move(row));
    return model;
}

double canonical_objective(const IlpModel& model, const std::vector<std::uint32_t>& selected) {
    double s = 0.0;
    for (std::uint32_t v : selected) s += model.obj[v];
    return s;
}

namespace {

LinearProgram relaxation(const IlpModel& model) {
    LinearProgram lp;
    lp.nrows = model.rows.size();
    lp.cols.resize(model.obj.size());
    lp.obj = model.obj;
    lp.rhs.resize(model.rows.size());
    lp.lower.assign(model.obj.size(), 0.0);
    lp.upper.assign(model.obj.size(), 1.0);
    for (std::size_t r = 0; r < model.rows.size(); ++r) {
        lp.rhs[r] = model.rows[r].rhs;
        for (const auto& [v, coef] : model.rows[r].terms)
            lp.cols[v].emplace_back(static_cast<std::uint32_t>(r), coef);
    }
    return lp;
}

struct Node {
    std::vector<std::pair<std::uint32_t, std::uint8_t>> fixes;
    double bound{};
    long seq{};
};

} // namespace

IlpSolution solve_ilp(const IlpModel& model, std::span<const PlanePoint> points,
                      const std::vector<std::uint32_t>& warm_selected) {
    const auto t0 = std::chrono::steady_clock::now();
    const std::size_t nvars = model.obj.size();
    LinearProgram base = relaxation(model);
    if (!warm_selected.empty()) {
        // Seed every node's LP at the known-feasible warm triangulation so
        // phase 1 starts from (near-)zero infeasibility instead of an
        // all-artificial basis on a highly degenerate system.
        base.start_at_upper.assign(nvars, 0);
        for (std::uint32_t v : warm_selected)
            if (v < nvars) base.start_at_upper[v] = 1;
    }

    std::vector<std::uint32_t> best_sel;
    double best_obj = std::numeric_limits<double>::infinity();
    bool have_incumbent = false;
    if (!warm_selected.empty()) {
        best_sel = warm_selected;
        std::sort(best_sel.begin(), best_sel.end());
        best_obj = canonical_objective(model, best_sel);
        have_incumbent = true;
    }

    IlpStats stats;
    std::vector<Node> pool;
    pool.push_back(Node{{}, -std::numeric_limits<double>::infinity(), 0});
    long seq = 0;

    auto accept = [&](const std::vector<std::uint32_t>& sel) {
        const double obj = canonical_objective(model, sel);
        if (!have_incumbent || obj < best_obj || (obj == best_obj && sel < best_sel)) {
            best_obj = obj;
            best_sel = sel;
            have_incumbent = true;
        }
    };

    while (!pool.empty()) {
        // Depth-first diving with periodic best-bound restarts.
        std::size_t pick = pool.size() - 1;
        if (stats.nodes % 16 == 15) {
            for (std::size_t i = 0; i < pool.size(); ++i)
                if (pool[i].bound < pool[pick].bound ||
                    (pool[i].bound == pool[pick].bound && pool[i].seq < pool[pick].seq))
                    pick = i;
        }
        Node node = std::move(pool[pick]);
        pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(pick));

        if (have_incumbent &&
            node.bound > best_obj + 1e-9 * std::max(1.0, std::abs(best_obj)))
            continue;
        if (++stats.nodes > kNodeCap) throw std::runtime_error("solve_ilp: node cap exceeded");

        LinearProgram lp = base;
        for (const auto& [v, val] : node.fixes) {
            lp.lower[v] = val;
            lp.upper[v] = val;
        }
        const LpResult res = solve_lp(lp);
        stats.lp_iterations += res.iterations;
        if (res.status != LpStatus::Optimal) continue; // infeasible subproblem
        if (have_incumbent &&
            res.objective > best_obj + 1e-9 * std::max(1.0, std::abs(best_obj)))
            continue;

        // Most fractional variable, ties to the lowest index.
        std::size_t branch_var = nvars;
        double branch_score = kIntegralityTol;
        for (std::size_t j = 0; j < nvars; ++j) {
            const double frac = std::min(res.x[j], 1.0 - res.x[j]);
            if (frac > branch_score) {
                branch_score = frac;
                branch_var = j;
            }
        }

        if (branch_var == nvars) {
            std::vector<std::uint32_t> sel;
            for (std::size_t j = 0; j < nvars; ++j)
                if (res.x[j] > 0.5) sel.push_back(static_cast<std::uint32_t>(j));
            accept(sel);
            continue;
        }

        // Dive on the 1-branch first.
        for (const std::uint8_t val : {0, 1}) {
            Node child;
            child.fixes = node.fixes;
            child.fixes.emplace_back(static_cast<std::uint32_t>(branch_var), val);
            child.bound = res.objective;
            child.seq = ++seq;
            pool.push_back(std::move(child));
        }
    }

    if (!have_incumbent) throw std::runtime_error("solve_ilp: infeasible model");

    // The certificate is only honest if the selection is a real triangulation.
    std::vector<Triangle> tris;
    tris.reserve(best_sel.size());
    for (std::uint32_t v : best_sel) tris.push_back(model.tris[v]);
    const Triangulation t = Triangulation::from_triangles(std::move(tris));
    validate_triangulation(t, points);

    IlpSolution sol;
    sol.selected = std::move(best_sel);
    sol.objective = canonical_objective(model, sol.selected);
    sol.stats = stats;
    sol.stats.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return sol;
}

namespace {

std::string mps_name(char prefix, std::size_t index) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%c%07zu", prefix, index + 1);
    return buf;
}

std::string mps_value(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6e", v);
    return buf;
}

} // namespace

std::string export_mps(const IlpModel& model, const std::string& name) {
    std::string out;
    out += "NAME          " + name + "\n";
    out += "ROWS\n";
    out += " N  COST\n";
    for (std::size_t r = 0; r < model.rows.size(); ++r)
        out += " E  " + mps_name('R', r) + "\n";

    // Column-major coefficients: objective first, then rows in model order.
    std::vector<std::vector<std::pair<std::size_t, double>>> bycol(model.obj.size());
    for (std::size_t r = 0; r < model.rows.size(); ++r)
        for (const auto& [v, coef] : model.rows[r].terms) bycol[v].emplace_back(r, coef);

    out += "COLUMNS\n";
    out += "    MARKER                 'MARKER'                 'INTORG'\n";
    for (std::size_t v = 0; v < model.obj.size(); ++v) {
        const std::string col = mps_name('X', v);
        std::vector<std::pair<std::string, double>> entries;
        entries.emplace_back("COST", model.obj[v]);
        for (const auto& [r, coef] : bycol[v]) entries.emplace_back(mps_name('R', r), coef);
        for (std::size_t i = 0; i < entries.size(); i += 2) {
            out += "    " + col + "  " + entries[i].first + "  " + mps_value(entries[i].second);
            if (i + 1 < entries.size())
                out += "   " + entries[i + 1].first + "  " + mps_value(entries[i + 1].second);
            out += "\n";
        }
    }
    out += "    MARKER                 'MARKER'                 'INTEND'\n";

    out += "RHS\n";
    for (std::size_t r = 0; r < model.rows.size(); ++r)
        if (model.rows[r].rhs != 0.0)
            out += "    RHS       " + mps_name('R', r) + "  " + mps_value(model.rows[r].rhs) +
                   "\n";

    out += "BOUNDS\n";
    for (std::size_t v = 0; v < model.obj.size(); ++v)
        out += " BV BND       " + mps_name('X', v) + "\n";
    out += "ENDATA\n";
    return out;
}

} // namespace seatri
