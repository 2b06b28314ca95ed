#include "wrem/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "wrem/errors.hpp"

namespace wrem {

Rect intersect(const Rect& a, const Rect& b) {
    return {std::max(a.x0, b.x0), std::max(a.y0, b.y0), std::min(a.x1, b.x1), std::min(a.y1, b.y1)};
}

double overlap_area(const Rect& a, const Rect& b) {
    Rect r = intersect(a, b);
    if (r.empty()) return 0.0;
    return r.area();
}

bool interiors_meet(const Rect& a, const Rect& b) { return !intersect(a, b).empty(); }

double euclid_dist(const Rect& a, const Rect& b) {
    double dx = std::max({0.0, a.x0 - b.x1, b.x0 - a.x1});
    double dy = std::max({0.0, a.y0 - b.y1, b.y0 - a.y1});
    return std::hypot(dx, dy);
}

bool SquareAnnulus::contains_closed(const Rect& r, double tol) const {
    if (!outer_rect().contains(r, tol)) return false;
    if (inner <= 0.0) return true;
    Rect in{center[0] - inner + tol, center[1] - inner + tol, center[0] + inner - tol,
            center[1] + inner - tol};
    return !interiors_meet(r, in);
}

double SquareAnnulus::clipped_area(const Rect& r) const {
    double a = overlap_area(r, outer_rect());
    if (inner > 0.0) {
        Rect in{center[0] - inner, center[1] - inner, center[0] + inner, center[1] + inner};
        a -= overlap_area(r, in);
    }
    return std::max(a, 0.0);
}

Ring make_ring(const Cube& q, double alpha) {
    if (!(q.side > 0.0) || !std::isfinite(q.side)) throw ValidationError("cube side must be positive");
    if (!(alpha > 0.0 && alpha < 1.0)) throw ValidationError("ring alpha must lie in (0,1)");
    return {q, alpha};
}

Ring double_ring(const Ring& r) {
    if (!(r.alpha < 0.5))
        throw ValidationError("double_ring needs alpha < 1/2; use the half-step extension instead");
    return {r.cube, 2.0 * r.alpha};
}

SquareAnnulus inner_shell(const Ring& r) {
    if (!(r.alpha < 0.5)) throw ValidationError("inner_shell needs alpha < 1/2");
    double h = r.cube.half();
    return {r.cube.center, (1.0 - 2.0 * r.alpha) * h, (1.0 - r.alpha) * h};
}

std::vector<Cube> subdivide_ring(const Ring& r, const SubdivideOptions& opt) {
    // side alpha*l/(2k), k rows; tiling needs 2k/alpha integral
    std::size_t k = 0;
    double per_side = 0.0;
    for (std::size_t kk = 1;; ++kk) {
        double q = 2.0 * static_cast<double>(kk) / r.alpha;
        double rq = std::round(q);
        double rows = static_cast<double>(kk);
        double count = rq * rq - (rq - 2 * rows) * (rq - 2 * rows);
        if (count > static_cast<double>(opt.max_cubes))
            throw ResourceError("subdivide_ring: alpha=" + std::to_string(r.alpha) +
                                " needs more than " + std::to_string(opt.max_cubes) + " cubes");
        if (std::abs(q - rq) <= opt.snap_tol * std::max(1.0, q)) {
            k = kk;
            per_side = rq;
            break;
        }
    }
    const std::size_t n = static_cast<std::size_t>(per_side);
    const double s = r.cube.side / per_side;
    const double x0 = r.cube.center[0] - r.cube.half();
    const double y0 = r.cube.center[1] - r.cube.half();
    std::vector<Cube> out;
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i) {
            bool in_ring = i < k || j < k || i >= n - k || j >= n - k;
            if (!in_ring) continue;
            out.push_back({{x0 + (static_cast<double>(i) + 0.5) * s, y0 + (static_cast<double>(j) + 0.5) * s}, s});
        }
    return out;
}

} // namespace wrem
