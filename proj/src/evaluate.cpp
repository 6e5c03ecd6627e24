#include "seatri/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <stdexcept>

namespace seatri {

VarianceResult surface_variance(const Triangulation& t, std::span<const PlanePoint> points,
                                std::span<const double> h, const RasterGrid& grid,
                                const CellGeometry& geom, ErrorMetric metric,
                                const RegionMask& mask) {
    VarianceResult out;
    for (const Triangle& tri : t.triangles) {
        const TriangleCost tc = triangle_cost(tri, points, h, grid, geom, metric, mask);
        out.sum += tc.cost;
        out.cells += tc.cells;
    }
    if (out.cells < 2) throw std::runtime_error("surface_variance: fewer than two residual cells");
    out.value = out.sum / static_cast<double>(out.cells - 1);
    return out;
}

double variance_reduction(const VarianceResult& min_error, const VarianceResult& delaunay) {
    return min_error.value - delaunay.value;
}

std::vector<QualityPoint> quality_curve(std::span<const PairResult> pairs) {
    std::map<std::size_t, QualityPoint> groups;
    for (const PairResult& p : pairs) {
        QualityPoint& g = groups[p.delta_d];
        g.delta_d = p.delta_d;
        g.q += p.var_me - p.var_delaunay;
        ++g.count;
    }
    std::vector<QualityPoint> out;
    out.reserve(groups.size());
    for (auto& [d, g] : groups) {
        g.q /= static_cast<double>(g.count);
        out.push_back(g);
    }
    return out;
}

std::vector<std::size_t> climatological_pairs(std::size_t epoch_count, std::size_t j) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < epoch_count; ++i) {
        const std::size_t d = i > j ? i - j : j - i;
        if (d % 12 == 0) out.push_back(i);
    }
    return out;
}

double area_mean(const RasterGrid& grid, const std::string& weighting) {
    bool coslat;
    if (weighting == "uniform")
        coslat = false;
    else if (weighting == "coslat")
        coslat = true;
    else
        throw std::invalid_argument("area_mean: unknown weighting '" + weighting + "'");

    double wsum = 0.0;
    double vsum = 0.0;
    for (std::size_t r = 0; r < grid.nrows; ++r) {
        const double w =
            coslat ? std::cos(grid.center_lat(r) * std::numbers::pi / 180.0) : 1.0;
        for (std::size_t c = 0; c < grid.ncols; ++c) {
            if (grid.is_nodata(r, c)) continue;
            wsum += w;
            vsum += w * grid.at(r, c);
        }
    }
    if (wsum == 0.0) throw std::runtime_error("area_mean: grid has no data cells");
    return vsum / wsum;
}

std::vector<double> moving_average(std::span<const double> series, std::size_t window) {
    if (window < 1) throw std::invalid_argument("moving_average: window must be >= 1");
    if (window > series.size())
        throw std::invalid_argument("moving_average: window exceeds series length");
    std::vector<double> out;
    out.reserve(series.size() - window + 1);
    for (std::size_t t = 0; t + window <= series.size(); ++t) {
        double sum = 0.0;
        std::size_t n = 0;
        for (std::size_t u = t; u < t + window; ++u) {
            if (std::isnan(series[u])) continue;
            sum += series[u];
            ++n;
        }
        out.push_back(n == 0 ? std::numeric_limits<double>::quiet_NaN()
                             : sum / static_cast<double>(n));
    }
    return out;
}

double linear_trend_mm_per_year(std::span<const double> series) {
    double sx = 0.0, sy = 0.0;
    std::size_t n = 0;
    for (std::size_t t = 0; t < series.size(); ++t) {
        if (std::isnan(series[t])) continue;
        sx += static_cast<double>(t);
        sy += series[t];
        ++n;
    }
    if (n < 2) throw std::runtime_error("linear_trend: fewer than two data points");
    const double mx = sx / static_cast<double>(n);
    const double my = sy / static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t t = 0; t < series.size(); ++t) {
        if (std::isnan(series[t])) continue;
        const double dx = static_cast<double>(t) - mx;
        sxx += dx * dx;
        sxy += dx * (series[t] - my);
    }
    if (sxx == 0.0) throw std::runtime_error("linear_trend: degenerate time axis");
    // slope is cm/month; 10 mm/cm * 12 months/yr.
    return sxy / sxx * 120.0;
}

} // namespace seatri
