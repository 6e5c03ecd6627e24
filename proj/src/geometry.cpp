#include "seatri/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <utility>

#include <boost/multiprecision/cpp_int.hpp>

namespace seatri {

namespace {

using Rational = boost::multiprecision::cpp_rational;

// Error-bound constants after Shewchuk. The double evaluation is trusted only
// when its magnitude exceeds the bound; otherwise we fall back to exact
// rational arithmetic on the raw coordinates.
constexpr double kEps = 1.1102230246251565e-16; // 2^-53
constexpr double kOrientBound = (3.0 + 16.0 * kEps) * kEps;
constexpr double kIncircleBound = (10.0 + 96.0 * kEps) * kEps;

int sign_of(const Rational& r) {
    if (r > 0) return 1;
    if (r < 0) return -1;
    return 0;
}

int orientation_exact(const PlanePoint& p, const PlanePoint& q, const PlanePoint& r) {
    const Rational px(p.x), py(p.y), qx(q.x), qy(q.y), rx(r.x), ry(r.y);
    const Rational det = (qx - px) * (ry - py) - (qy - py) * (rx - px);
    return sign_of(det);
}

int orientation_sign(const PlanePoint& p, const PlanePoint& q, const PlanePoint& r) {
    const double detleft = (q.x - p.x) * (r.y - p.y);
    const double detright = (q.y - p.y) * (r.x - p.x);
    const double det = detleft - detright;
    double detsum = 0.0;
    if (detleft > 0.0) {
        if (detright <= 0.0) return det > 0.0 ? 1 : (det < 0.0 ? -1 : 0);
        detsum = detleft + detright;
    } else if (detleft < 0.0) {
        if (detright >= 0.0) return det > 0.0 ? 1 : (det < 0.0 ? -1 : 0);
        detsum = -detleft - detright;
    } else {
        return det > 0.0 ? 1 : (det < 0.0 ? -1 : 0);
    }
    const double errbound = kOrientBound * detsum;
    if (det > errbound || -det > errbound) return det > 0.0 ? 1 : -1;
    return orientation_exact(p, q, r);
}

int incircle_exact(const PlanePoint& a, const PlanePoint& b, const PlanePoint& c,
                   const PlanePoint& q) {
    const Rational adx = Rational(a.x) - Rational(q.x);
    const Rational ady = Rational(a.y) - Rational(q.y);
    const Rational bdx = Rational(b.x) - Rational(q.x);
    const Rational bdy = Rational(b.y) - Rational(q.y);
    const Rational cdx = Rational(c.x) - Rational(q.x);
    const Rational cdy = Rational(c.y) - Rational(q.y);

    const Rational alift = adx * adx + ady * ady;
    const Rational blift = bdx * bdx + bdy * bdy;
    const Rational clift = cdx * cdx + cdy * cdy;

    const Rational det = alift * (bdx * cdy - bdy * cdx) + blift * (cdx * ady - cdy * adx) +
                         clift * (adx * bdy - ady * bdx);
    return sign_of(det);
}

// Sign of the incircle determinant, positive when q is inside the circle
// through a, b, c taken in CCW order.
int incircle_sign(const PlanePoint& a, const PlanePoint& b, const PlanePoint& c,
                  const PlanePoint& q) {
    const double adx = a.x - q.x;
    const double bdx = b.x - q.x;
    const double cdx = c.x - q.x;
    const double ady = a.y - q.y;
    const double bdy = b.y - q.y;
    const double cdy = c.y - q.y;

    const double bdxcdy = bdx * cdy;
    const double cdxbdy = cdx * bdy;
    const double alift = adx * adx + ady * ady;

    const double cdxady = cdx * ady;
    const double adxcdy = adx * cdy;
    const double blift = bdx * bdx + bdy * bdy;

    const double adxbdy = adx * bdy;
    const double bdxady = bdx * ady;
    const double clift = cdx * cdx + cdy * cdy;

    const double det = alift * (bdxcdy - cdxbdy) + blift * (cdxady - adxcdy) +
                       clift * (adxbdy - bdxady);

    const double permanent = (std::abs(bdxcdy) + std::abs(cdxbdy)) * alift +
                             (std::abs(cdxady) + std::abs(adxcdy)) * blift +
                             (std::abs(adxbdy) + std::abs(bdxady)) * clift;
    const double errbound = kIncircleBound * permanent;
    if (det > errbound || -det > errbound) return det > 0.0 ? 1 : -1;
    return incircle_exact(a, b, c, q);
}

bool on_segment_closed(const PlanePoint& a, const PlanePoint& b, const PlanePoint& q) {
    // Assumes a, b, q collinear; checks q within the bounding box of ab.
    return std::min(a.x, b.x) <= q.x && q.x <= std::max(a.x, b.x) &&
           std::min(a.y, b.y) <= q.y && q.y <= std::max(a.y, b.y);
}

} // namespace

Orientation orientation(const PlanePoint& p, const PlanePoint& q, const PlanePoint& r) {
    const int s = orientation_sign(p, q, r);
    if (s > 0) return Orientation::CounterClockwise;
    if (s < 0) return Orientation::Clockwise;
    return Orientation::Collinear;
}

CirclePosition in_circumcircle(const PlanePoint& a, const PlanePoint& b, const PlanePoint& c,
                               const PlanePoint& q) {
    const int orient = orientation_sign(a, b, c);
    if (orient == 0) throw std::invalid_argument("in_circumcircle: collinear triangle");
    const int s = orient > 0 ? incircle_sign(a, b, c, q) : incircle_sign(a, c, b, q);
    if (s > 0) return CirclePosition::Inside;
    if (s < 0) return CirclePosition::Outside;
    return CirclePosition::OnCircle;
}

PointLocation point_in_triangle(const PlanePoint& a, const PlanePoint& b, const PlanePoint& c,
                                const PlanePoint& q) {
    int orient = orientation_sign(a, b, c);
    if (orient == 0) throw std::invalid_argument("point_in_triangle: degenerate triangle");
    // Normalize to CCW.
    const PlanePoint& v0 = a;
    const PlanePoint& v1 = orient > 0 ? b : c;
    const PlanePoint& v2 = orient > 0 ? c : b;

    const int s0 = orientation_sign(v0, v1, q);
    const int s1 = orientation_sign(v1, v2, q);
    const int s2 = orientation_sign(v2, v0, q);
    if (s0 < 0 || s1 < 0 || s2 < 0) return PointLocation::Outside;
    if (s0 > 0 && s1 > 0 && s2 > 0) return PointLocation::StrictInterior;
    // At least one collinear side; q is on the boundary iff it lies within the
    // segment bounds of a collinear side.
    if ((s0 == 0 && on_segment_closed(v0, v1, q)) || (s1 == 0 && on_segment_closed(v1, v2, q)) ||
        (s2 == 0 && on_segment_closed(v2, v0, q)))
        return PointLocation::OnBoundary;
    return PointLocation::Outside;
}

namespace {

// Andrew monotone chain over index permutation sorted by (x, y).
// keep_collinear controls whether points interior to hull edges stay on the
// chain.
std::vector<std::size_t> hull_chain(std::span<const PlanePoint> points, bool keep_collinear) {
    const std::size_t n = points.size();
    if (n < 3) throw std::invalid_argument("convex_hull: need at least 3 points");
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::sort(idx.begin(), idx.end(), [&](std::size_t i, std::size_t j) {
        if (points[i].x != points[j].x) return points[i].x < points[j].x;
        if (points[i].y != points[j].y) return points[i].y < points[j].y;
        return i < j;
    });

    auto turns_ok = [&](std::size_t o, std::size_t p, std::size_t q) {
        const int s = orientation_sign(points[o], points[p], points[q]);
        return keep_collinear ? s > 0 || s == 0 : s > 0;
    };

    std::vector<std::size_t> hull(2 * n);
    std::size_t k = 0;
    for (std::size_t ii = 0; ii < n; ++ii) {
        const std::size_t i = idx[ii];
        while (k >= 2 && !turns_ok(hull[k - 2], hull[k - 1], i)) --k;
        hull[k++] = i;
    }
    const std::size_t lower = k + 1;
    for (std::size_t ii = n - 1; ii-- > 0;) { // idx[n-1] already tops the stack
        const std::size_t i = idx[ii];
        while (k >= lower && !turns_ok(hull[k - 2], hull[k - 1], i)) --k;
        hull[k++] = i;
    }
    hull.resize(k - 1); // last point equals the first
    if (hull.size() < 3) throw std::invalid_argument("convex_hull: all points collinear");
    return hull;
}

} // namespace

std::vector<std::size_t> convex_hull(std::span<const PlanePoint> points) {
    return hull_chain(points, /*keep_collinear=*/false);
}

std::vector<std::size_t> boundary_chain(std::span<const PlanePoint> points) {
    auto chain = hull_chain(points, /*keep_collinear=*/true);
    // The monotone chain with collinear points kept can still drop a point
    // coincident with a strict hull vertex only if there are duplicates, which
    // StationSet forbids; no further handling here.
    return chain;
}

bool strictly_inside_convex(std::span<const PlanePoint> polygon, const PlanePoint& q) {
    const std::size_t n = polygon.size();
    for (std::size_t i = 0; i < n; ++i) {
        const PlanePoint& u = polygon[i];
        const PlanePoint& v = polygon[(i + 1) % n];
        if (orientation_sign(u, v, q) <= 0) return false;
    }
    return true;
}

Triangle::Triangle(std::uint32_t i, std::uint32_t j, std::uint32_t k) : a(i), b(j), c(k) {
    if (a > b) std::swap(a, b);
    if (b > c) std::swap(b, c);
    if (a > b) std::swap(a, b);
    if (a == b || b == c) throw std::invalid_argument("Triangle: repeated vertex");
}

std::uint32_t Triangle::third(std::uint32_t u, std::uint32_t v) const {
    if (a != u && a != v) return a;
    if (b != u && b != v) return b;
    return c;
}

} // namespace seatri
