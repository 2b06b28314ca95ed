#include "wrem/weights.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <random>
#include <sstream>

#include "wrem/errors.hpp"

namespace wrem {

namespace {

double dist_to_segment(Point x, const Segment& s) {
    double vx = s.b[0] - s.a[0], vy = s.b[1] - s.a[1];
    double wx = x[0] - s.a[0], wy = x[1] - s.a[1];
    double L2 = vx * vx + vy * vy;
    double t = L2 > 0.0 ? std::clamp((wx * vx + wy * vy) / L2, 0.0, 1.0) : 0.0;
    return std::hypot(wx - t * vx, wy - t * vy);
}

json point_json(Point p) { return json::array({p[0], p[1]}); }

Point json_point(const json& j) {
    if (!j.is_array() || j.size() != 2) throw ValidationError("point must be [x, y]");
    return {j[0].get<double>(), j[1].get<double>()};
}

} // namespace

Weight constant_weight(double c) {
    if (!(c > 0.0) || !std::isfinite(c)) throw ValidationError("constant weight needs c > 0");
    Weight w;
    w.name = "constant";
    w.params = {{"name", "constant"}, {"c", c}};
    w.density = [c](Point) { return c; };
    w.exact_measure = [c](const Rect& r) { return c * r.area(); };
    w.constant = true;
    return w;
}

Weight power_weight(double gamma, Point x0) {
    if (!(gamma > -2.0) || !std::isfinite(gamma))
        throw ValidationError("power weight |x - x0|^gamma needs gamma > -2 (local integrability in the plane)");
    Weight w;
    w.name = "power";
    w.params = {{"name", "power"}, {"gamma", gamma}, {"center", point_json(x0)}};
    w.density = [gamma, x0](Point x) { return std::pow(std::hypot(x[0] - x0[0], x[1] - x0[1]), gamma); };
    w.singular_points = {x0};
    if (gamma == 0.0) {
        w.exact_measure = [](const Rect& r) { return r.area(); };
        w.constant = true;
    }
    return w;
}

Weight distance_power_weight(double beta, std::vector<Point> points, std::vector<Segment> segments) {
    if (points.empty() && segments.empty()) throw ValidationError("distance weight needs a nonempty set F");
    if (!std::isfinite(beta)) throw ValidationError("distance weight beta must be finite");
    if (!segments.empty() && !(beta > -1.0))
        throw ValidationError("dist(x, segment)^beta needs beta > -1 to be locally integrable");
    if (!(beta > -2.0)) throw ValidationError("dist(x, point)^beta needs beta > -2 to be locally integrable");
    Weight w;
    w.name = "distance_power";
    json pts = json::array(), segs = json::array();
    for (auto& p : points) pts.push_back(point_json(p));
    for (auto& s : segments) segs.push_back(json::array({point_json(s.a), point_json(s.b)}));
    w.params = {{"name", "distance_power"}, {"beta", beta}, {"points", pts}, {"segments", segs}};
    w.density = [beta, points, segments](Point x) {
        double d = std::numeric_limits<double>::infinity();
        for (auto& p : points) d = std::min(d, std::hypot(x[0] - p[0], x[1] - p[1]));
        for (auto& s : segments) d = std::min(d, dist_to_segment(x, s));
        return std::pow(d, beta);
    };
    w.singular_points = points;
    w.singular_segments = segments;
    return w;
}

Weight product_weight(const std::vector<Weight>& factors) {
    if (factors.empty()) throw ValidationError("product weight needs at least one factor");
    Weight w;
    w.name = "product";
    json fj = json::array();
    for (auto& f : factors) fj.push_back(f.params);
    w.params = {{"name", "product"}, {"factors", fj}};
    std::vector<std::function<double(Point)>> fs;
    bool all_const = true;
    double c = 1.0;
    for (auto& f : factors) {
        fs.push_back(f.density);
        w.singular_points.insert(w.singular_points.end(), f.singular_points.begin(), f.singular_points.end());
        w.singular_segments.insert(w.singular_segments.end(), f.singular_segments.begin(), f.singular_segments.end());
        if (f.constant) c *= f.density({0.0, 0.0});
        else all_const = false;
    }
    w.density = [fs](Point x) {
        double v = 1.0;
        for (auto& f : fs) v *= f(x);
        return v;
    };
    if (all_const) {
        w.exact_measure = [c](const Rect& r) { return c * r.area(); };
        w.constant = true;
    }
    return w;
}

Weight custom_weight(std::string name, std::function<double(Point)> f, std::vector<Point> singular) {
    Weight w;
    w.name = name;
    w.params = {{"name", name}};
    w.density = std::move(f);
    w.singular_points = std::move(singular);
    return w;
}

Weight weight_from_json(const json& j) {
    if (!j.is_object() || !j.contains("name")) throw ValidationError("weight config needs a \"name\" field");
    const std::string name = j.at("name").get<std::string>();
    try {
        if (name == "constant" || name == "const") return constant_weight(j.value("c", 1.0));
        if (name == "power") {
            Point c = j.contains("center") ? json_point(j.at("center")) : Point{0.0, 0.0};
            return power_weight(j.at("gamma").get<double>(), c);
        }
        if (name == "distance_power") {
            std::vector<Point> pts;
            std::vector<Segment> segs;
            if (j.contains("points"))
                for (auto& p : j.at("points")) pts.push_back(json_point(p));
            if (j.contains("segments"))
                for (auto& s : j.at("segments")) segs.push_back({json_point(s.at(0)), json_point(s.at(1))});
            return distance_power_weight(j.at("beta").get<double>(), pts, segs);
        }
        if (name == "product") {
            std::vector<Weight> fs;
            for (auto& f : j.at("factors")) fs.push_back(weight_from_json(f));
            return product_weight(fs);
        }
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("weight config: ") + e.what());
    }
    throw ValidationError("unknown weight name: " + name);
}

json weight_to_json(const Weight& w) { return w.params; }

json to_json(const MeasureEstimate& m) {
    return {{"value", m.value}, {"error", m.error}, {"evals", m.evals}};
}

// ---------------------------------------------------------------- quadrature

namespace {

constexpr double kGx[4] = {-0.8611363115940526, -0.3399810435848563, 0.3399810435848563, 0.8611363115940526};
constexpr double kGw[4] = {0.3478548451374538, 0.6521451548625461, 0.6521451548625461, 0.3478548451374538};

double gauss4(const Weight& w, const Rect& r) {
    double hx = 0.5 * r.width(), hy = 0.5 * r.height();
    double cx = r.x0 + hx, cy = r.y0 + hy;
    double s = 0.0;
    for (int j = 0; j < 4; ++j) {
        double row = 0.0;
        for (int i = 0; i < 4; ++i) row += kGw[i] * w.density({cx + hx * kGx[i], cy + hy * kGx[j]});
        s += kGw[j] * row;
    }
    return s * hx * hy;
}

std::array<Rect, 4> quarters(const Rect& r) {
    double mx = 0.5 * (r.x0 + r.x1), my = 0.5 * (r.y0 + r.y1);
    return {Rect{r.x0, r.y0, mx, my}, Rect{mx, r.y0, r.x1, my}, Rect{r.x0, my, mx, r.y1}, Rect{mx, my, r.x1, r.y1}};
}

bool touches_singularity(const Weight& w, const Rect& r) {
    for (auto& p : w.singular_points)
        if (r.contains_closed(p)) return true;
    return false;
}

// Liang-Barsky clip of the segment against the closed rectangle.
bool segment_meets(const Segment& s, const Rect& r) {
    double t0 = 0.0, t1 = 1.0;
    const double dx = s.b[0] - s.a[0], dy = s.b[1] - s.a[1];
    const double p[4] = {-dx, dx, -dy, dy};
    const double q[4] = {s.a[0] - r.x0, r.x1 - s.a[0], s.a[1] - r.y0, r.y1 - s.a[1]};
    for (int k = 0; k < 4; ++k) {
        if (p[k] == 0.0) {
            if (q[k] < 0.0) return false;
            continue;
        }
        double t = q[k] / p[k];
        if (p[k] < 0.0) t0 = std::max(t0, t);
        else t1 = std::min(t1, t);
        if (t0 > t1) return false;
    }
    return true;
}

bool touches_segment(const Weight& w, const Rect& r) {
    for (auto& s : w.singular_segments)
        if (segment_meets(s, r)) return true;
    return false;
}

// Tanh-sinh nodes on [0,1] stored as distances from both ends, so nodes next to an
// edge never round onto it. Integrable edge singularities converge exponentially.
// Outermost nodes can still round onto a slanted singular line; their non-finite
// values are dropped, which costs less than the rounding of the distance itself.
struct TanhSinh {
    std::vector<double> lo, hi, wt;
    TanhSinh() {
        const double step = 1.0 / 8.0, half_pi = 2.0 * std::atan(1.0);
        // offset by half a step: no node at the midpoint, where a crossing segment sits
        for (int k = -40; k < 40; ++k) {
            double t = (k + 0.5) * step, u = half_pi * std::sinh(t);
            double e = std::exp(-2.0 * std::abs(u));
            double near = e / (1.0 + e);  // distance to the closer end
            lo.push_back(t < 0.0 ? near : 1.0 - near);
            hi.push_back(t < 0.0 ? 1.0 - near : near);
            double c = std::cosh(u);
            wt.push_back(0.5 * step * half_pi * std::cosh(t) / (c * c));
        }
    }
};

double tanh_sinh(const Weight& w, const Rect& r) {
    static const TanhSinh ts;
    const double hx = r.width(), hy = r.height();
    const std::size_t m = ts.wt.size();
    double s = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        double y = ts.lo[j] <= 0.5 ? r.y0 + hy * ts.lo[j] : r.y1 - hy * ts.hi[j];
        double row = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            double x = ts.lo[i] <= 0.5 ? r.x0 + hx * ts.lo[i] : r.x1 - hx * ts.hi[i];
            double f = w.density({x, y});
            if (std::isfinite(f)) row += ts.wt[i] * f;
        }
        s += ts.wt[j] * row;
    }
    return s * hx * hy;
}

// Duffy collapse of triangle (v, a, b) onto the unit square: x = v + s((1-t)(a-v) + t(b-v)).
// Any singularity on the triangle's boundary lands on an edge of the square.
double tanh_sinh_triangle(const Weight& w, Point v, Point a, Point b) {
    static const TanhSinh ts;
    const double ax = a[0] - v[0], ay = a[1] - v[1], bx = b[0] - v[0], by = b[1] - v[1];
    const double det = std::abs(ax * by - ay * bx);
    const std::size_t m = ts.wt.size();
    double sum = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        double s = ts.lo[i];
        double row = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            double t = ts.lo[j], t1 = ts.hi[j];
            double dx = t1 * ax + t * bx, dy = t1 * ay + t * by;
            double f = w.density({v[0] + s * dx, v[1] + s * dy});
            if (std::isfinite(f)) row += ts.wt[j] * f;
        }
        sum += ts.wt[i] * s * row;
    }
    return sum * det;
}

// Splits r along the line through seg and integrates both convex pieces by fans of
// collapsed triangles. Returns false when the line misses the interior of r.
bool split_along_segment(const Weight& w, const Rect& r, const Segment& seg, double& out) {
    const double nx = -(seg.b[1] - seg.a[1]), ny = seg.b[0] - seg.a[0];
    auto side = [&](Point p) { return nx * (p[0] - seg.a[0]) + ny * (p[1] - seg.a[1]); };
    const Point corners[4] = {{r.x0, r.y0}, {r.x1, r.y0}, {r.x1, r.y1}, {r.x0, r.y1}};
    double f[4];
    bool pos = false, neg = false;
    for (int k = 0; k < 4; ++k) {
        f[k] = side(corners[k]);
        pos = pos || f[k] > 0.0;
        neg = neg || f[k] < 0.0;
    }
    if (!(pos && neg)) return false;
    std::vector<Point> piece[2];
    for (int k = 0; k < 4; ++k) {
        int n = (k + 1) % 4;
        if (f[k] >= 0.0) piece[0].push_back(corners[k]);
        if (f[k] <= 0.0) piece[1].push_back(corners[k]);
        if ((f[k] > 0.0 && f[n] < 0.0) || (f[k] < 0.0 && f[n] > 0.0)) {
            double t = f[k] / (f[k] - f[n]);
            Point x{corners[k][0] + t * (corners[n][0] - corners[k][0]), corners[k][1] + t * (corners[n][1] - corners[k][1])};
            piece[0].push_back(x);
            piece[1].push_back(x);
        }
    }
    out = 0.0;
    const double floor = 1e-14 * r.area();
    for (auto& poly : piece)
        for (std::size_t k = 1; k + 1 < poly.size(); ++k) {
            Point a = poly[0], b = poly[k], c = poly[k + 1];
            double det = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
            if (std::abs(det) > floor) out += tanh_sinh_triangle(w, a, b, c);
        }
    return true;
}

bool strictly_inside(const Rect& r, Point p) { return r.contains(p); }

double near_rule(const Weight& w, const Rect& r, std::size_t& evals) {
    const Segment* hit = nullptr;
    int count = 0;
    for (auto& s : w.singular_segments)
        if (segment_meets(s, r)) {
            hit = &s;
            ++count;
        }
    if (count == 1 && !strictly_inside(r, hit->a) && !strictly_inside(r, hit->b) && !touches_singularity(w, r)) {
        double v = 0.0;
        if (split_along_segment(w, r, *hit, v)) {
            evals += 4 * 80 * 80;
            return v;
        }
    }
    evals += 80 * 80;
    return tanh_sinh(w, r);
}

// near: the parent touches a singular segment, so all four quarters take the
// edge-singular rule and its error estimate is not polluted by its neighbours
double cell_rule(const Weight& w, const Rect& r, std::size_t& evals, bool near = false) {
    if (near || (!w.singular_segments.empty() && touches_segment(w, r))) return near_rule(w, r, evals);
    evals += 16;
    return gauss4(w, r);
}

struct QCell {
    Rect r;
    double value;
    double err;
    std::array<double, 4> child;
};

struct ByErr {
    bool operator()(const QCell& a, const QCell& b) const { return a.err < b.err; }
};

} // namespace

MeasureEstimate measure_rect(const Weight& w, const Rect& r, const QuadOptions& opt) {
    if (!(opt.tol > 0.0)) throw ValidationError("quadrature tolerance must be positive");
    if (r.empty()) throw ValidationError("degenerate box");
    if (w.exact_measure) return {w.exact_measure(r), 0.0, 0};

    std::size_t evals = 0;
    auto make = [&](const Rect& rc, double self) {
        QCell c{rc, 0.0, 0.0, {}};
        auto q = quarters(rc);
        const bool near = !w.singular_segments.empty() && touches_segment(w, rc);
        for (int k = 0; k < 4; ++k) c.child[k] = cell_rule(w, q[k], evals, near);
        c.value = c.child[0] + c.child[1] + c.child[2] + c.child[3];
        c.err = std::abs(c.value - self);
        if (touches_singularity(w, rc)) c.err = std::max(c.err, std::abs(c.value));
        return c;
    };

    double root_q = cell_rule(w, r, evals);
    std::priority_queue<QCell, std::vector<QCell>, ByErr> heap;
    std::vector<QCell> frozen;
    QCell root = make(r, root_q);
    double total = root.value, total_err = root.err;
    heap.push(root);
    const double min_width = r.width() * 1e-15;

    while (!heap.empty()) {
        if (total_err <= std::max(opt.tol * std::abs(total), opt.abs_floor)) break;
        if (evals > opt.max_evals) break;
        QCell c = heap.top();
        heap.pop();
        if (c.r.width() < min_width || c.r.height() < min_width) {
            frozen.push_back(c);
            continue;
        }
        total -= c.value;
        total_err -= c.err;
        auto q = quarters(c.r);
        for (int k = 0; k < 4; ++k) {
            QCell ch = make(q[k], c.child[k]);
            total += ch.value;
            total_err += ch.err;
            heap.push(ch);
        }
    }

    // deterministic final sum over leaves
    double value = 0.0, err = 0.0;
    std::vector<QCell> leaves = std::move(frozen);
    while (!heap.empty()) {
        leaves.push_back(heap.top());
        heap.pop();
    }
    for (auto& c : leaves) {
        value += c.value;
        err += c.err;
    }
    if (!std::isfinite(value)) throw ConvergenceError("quadrature produced a non-finite value", value, err);
    if (err > std::max(opt.tol * std::abs(value), opt.abs_floor)) {
        std::ostringstream os;
        os << "quadrature did not reach tol " << opt.tol << " within " << opt.max_evals
           << " evaluations (best " << value << ", error " << err << ")";
        throw ConvergenceError(os.str(), value, value != 0.0 ? err / std::abs(value) : err);
    }
    return {value, err, evals};
}

MeasureEstimate measure_box(const Weight& w, const Cube& q, double tol) {
    if (!(q.side > 0.0)) throw ValidationError("degenerate box");
    QuadOptions o;
    o.tol = tol;
    return measure_rect(w, Rect::from_cube(q), o);
}

MeasureEstimate measure_ring(const Weight& w, const Ring& r, double tol) {
    MeasureEstimate outer = measure_box(w, r.cube, tol);
    MeasureEstimate inner = measure_box(w, r.inner_cube(), tol);
    return {std::max(0.0, outer.value - inner.value), outer.error + inner.error, outer.evals + inner.evals};
}

// ---------------------------------------------------------------- exponents

namespace {

struct Sampler {
    std::mt19937_64 rng;
    const Cube& domain;
    double lmin;
    explicit Sampler(std::uint64_t seed, const Cube& d, double lmin_) : rng(seed), domain(d), lmin(lmin_) {}

    double uniform(double a, double b) { return a + (b - a) * std::uniform_real_distribution<double>(0.0, 1.0)(rng); }
    double log_uniform(double a, double b) { return std::exp(uniform(std::log(a), std::log(b))); }

    Cube free_cube() {
        double s = log_uniform(lmin, domain.side);
        double slack = 0.5 * (domain.side - s);
        return {{domain.center[0] + uniform(-slack, slack), domain.center[1] + uniform(-slack, slack)}, s};
    }
    Cube anchored_cube(Point a) {
        double room = 2.0 * (domain.half() - domain.sup_dist_from_center(a));
        if (!(room > 0.0)) throw ValidationError("anchor lies outside the sampling domain");
        double s = log_uniform(std::min(lmin, room), room);
        return {a, s};
    }
    Cube inside(const Cube& outer, double side) {
        double slack = 0.5 * (outer.side - side);
        return {{outer.center[0] + uniform(-slack, slack), outer.center[1] + uniform(-slack, slack)}, side};
    }
};

double mass(const Weight& w, const Cube& q, double tol) {
    double m = measure_box(w, q, tol).value;
    if (!(m > 0.0)) {
        std::ostringstream os;
        os << "degenerate weight: zero mass on cube center=(" << q.center[0] << ", " << q.center[1]
           << ") side=" << q.side;
        throw ValidationError(os.str());
    }
    return m;
}

struct Fit {
    double slope = 0.0, intercept = 0.0, residual = 0.0;
    std::size_t points = 0;
};

Fit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
    Fit f;
    f.points = x.size();
    if (x.size() < 2) return f;
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= x.size();
    my /= y.size();
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    f.slope = sxx > 0 ? sxy / sxx : 0.0;
    f.intercept = my - f.slope * mx;
    double r = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double e = y[i] - (f.intercept + f.slope * x[i]);
        r += e * e;
    }
    f.residual = std::sqrt(r / x.size());
    return f;
}

// binned upper (sign=+1) or lower (sign=-1) envelope of (x, y), x in [lo, hi]
void envelope(const std::vector<double>& x, const std::vector<double>& y, double lo, double hi, int bins, int sign,
              std::vector<double>& ex, std::vector<double>& ey) {
    std::vector<int> best(bins, -1);
    for (std::size_t i = 0; i < x.size(); ++i) {
        int b = static_cast<int>((x[i] - lo) / (hi - lo) * bins);
        b = std::clamp(b, 0, bins - 1);
        if (best[b] < 0 || sign * y[i] > sign * y[best[b]]) best[b] = static_cast<int>(i);
    }
    for (int b = 0; b < bins; ++b)
        if (best[b] >= 0) {
            ex.push_back(x[best[b]]);
            ey.push_back(y[best[b]]);
        }
}

} // namespace

WeightExponents lebesgue_exponents() {
    WeightExponents e;
    e.doubling_constant = 4.0;
    e.delta = e.delta_prime = 2.0;
    e.delta_constant = e.delta_prime_constant = 1.0;
    e.sigma = 1.0;
    e.sigma_constant = 2.0;
    e.provenance = "analytic";
    return e;
}

WeightExponents estimate_doubling(const Weight& w, const Cube& domain, std::size_t samples, std::uint64_t seed,
                                  const ExponentOptions& opt) {
    if (samples < 1) throw ValidationError("estimate_doubling needs samples >= 1");
    if (!(opt.t_min > 0.0 && opt.t_min < 1.0)) throw ValidationError("t_min must lie in (0,1)");
    WeightExponents out;
    Sampler S(seed, domain, opt.ell_min_fraction * domain.side);
    const std::size_t n_anchor =
        opt.anchor ? std::max<std::size_t>(1, static_cast<std::size_t>(opt.anchor_fraction * samples)) : 0;

    double cd = 0.0;
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < samples; ++i) {
        bool anchored = i < n_anchor;
        Cube q = anchored ? S.anchored_cube(*opt.anchor) : S.free_cube();
        double m1 = mass(w, q, opt.tol);
        double m2 = mass(w, q.scaled(2.0), opt.tol);
        cd = std::max(cd, m2 / m1);

        // nested pair B(y, r) inside B(x, rho)
        Cube outer = anchored ? S.anchored_cube(*opt.anchor) : S.free_cube();
        double t = S.log_uniform(opt.t_min, 1.0);
        Cube inner = anchored ? Cube{outer.center, t * outer.side} : S.inside(outer, t * outer.side);
        double mo = mass(w, outer, opt.tol), mi = mass(w, inner, opt.tol);
        lx.push_back(std::log(t));
        ly.push_back(std::log(mi / mo));
        if (anchored) ++out.anchored_samples;
    }
    out.samples = samples;
    out.doubling_constant = cd;

    std::vector<double> ux, uy, dx, dy;
    envelope(lx, ly, std::log(opt.t_min), 0.0, opt.bins, +1, ux, uy);
    envelope(lx, ly, std::log(opt.t_min), 0.0, opt.bins, -1, dx, dy);
    Fit up = least_squares(ux, uy), lo = least_squares(dx, dy);
    if (up.points < 2 || lo.points < 2) out.flags.push_back("too few envelope bins for homogeneity fits");
    out.delta = up.slope;
    out.delta_constant = std::exp(up.intercept);
    out.delta_residual = up.residual;
    out.delta_prime = lo.slope;
    out.delta_prime_constant = std::exp(lo.intercept);
    out.delta_prime_residual = lo.residual;
    if (out.anchored_samples > 0) out.flags.push_back("anchored samples centered at the weight singularity");
    if (out.delta > 2.0) {
        out.flags.push_back("delta clamped to n=2 (raw " + std::to_string(out.delta) + ")");
        out.delta = 2.0;
    }
    if (!(out.delta > 0.0)) {
        out.flags.push_back("delta raw fit nonpositive (" + std::to_string(out.delta) + "), clamped to 1e-6");
        out.delta = 1e-6;
    }
    if (out.delta_prime < 2.0) {
        out.flags.push_back("delta_prime clamped to n=2 (raw " + std::to_string(out.delta_prime) + ")");
        out.delta_prime = 2.0;
    }
    return out;
}

WeightExponents estimate_annular_decay(const Weight& w, const Cube& domain, const std::vector<double>& alphas,
                                       std::size_t samples, std::uint64_t seed, const ExponentOptions& opt,
                                       std::optional<double> delta) {
    if (samples < 1) throw ValidationError("estimate_annular_decay needs samples >= 1");
    if (alphas.size() < 2) throw ValidationError("annular decay fit needs at least two alphas");
    for (double a : alphas)
        if (!(a > 0.0 && a < 1.0)) throw ValidationError("alphas must lie in (0,1)");
    std::vector<double> al = alphas;
    std::sort(al.begin(), al.end());

    WeightExponents out;
    Sampler S(seed ^ 0x9e3779b97f4a7c15ULL, domain, opt.ell_min_fraction * domain.side);
    const std::size_t n_anchor =
        opt.anchor ? std::max<std::size_t>(1, static_cast<std::size_t>(opt.anchor_fraction * samples)) : 0;
    std::vector<std::vector<double>> ratio(samples, std::vector<double>(al.size()));
    for (std::size_t i = 0; i < samples; ++i) {
        bool anchored = i < n_anchor;
        Cube q = anchored ? S.anchored_cube(*opt.anchor) : S.free_cube();
        if (anchored) ++out.anchored_samples;
        double mq = mass(w, q, opt.tol);
        for (std::size_t k = 0; k < al.size(); ++k) {
            double mi = measure_box(w, q.scaled(1.0 - al[k]), opt.tol).value;
            ratio[i][k] = std::max(0.0, mq - mi) / mq;
            if (k > 0 && ratio[i][k] < ratio[i][k - 1]) out.monotone_in_alpha = false;
        }
    }
    out.samples = samples;

    std::vector<double> x, y;
    for (std::size_t k = 0; k < al.size(); ++k) {
        double mx = 0.0;
        for (std::size_t i = 0; i < samples; ++i) mx = std::max(mx, ratio[i][k]);
        if (mx <= 0.0) throw ValidationError("annular ratio vanished on all samples");
        x.push_back(std::log(al[k]));
        y.push_back(std::log(mx));
    }
    Fit f = least_squares(x, y);
    double sigma = f.slope;
    out.sigma_residual = f.residual;
    if (sigma > 1.0) {
        out.flags.push_back("sigma clamped to 1 (raw " + std::to_string(sigma) + ")");
        sigma = 1.0;
    }
    if (!(sigma > 0.0)) {
        out.flags.push_back("sigma raw fit nonpositive (" + std::to_string(sigma) + "), clamped to 1e-6");
        sigma = 1e-6;
    }
    if (delta && sigma < *delta + 1.0 - 2.0) {
        out.flags.push_back("sigma raised to delta + 1 - n (raw " + std::to_string(sigma) + ")");
        sigma = *delta - 1.0;
    }
    out.sigma = sigma;
    double c = 0.0;
    for (std::size_t i = 0; i < samples; ++i)
        for (std::size_t k = 0; k < al.size(); ++k) c = std::max(c, ratio[i][k] / std::pow(al[k], sigma));
    out.sigma_constant = c;
    if (out.anchored_samples > 0) out.flags.push_back("anchored samples centered at the weight singularity");
    if (!out.monotone_in_alpha) out.flags.push_back("annular ratio not monotone in alpha on some sample");
    return out;
}

json to_json(const WeightExponents& e) {
    return {{"doubling_constant", e.doubling_constant},
            {"delta", e.delta},
            {"delta_constant", e.delta_constant},
            {"delta_residual", e.delta_residual},
            {"delta_prime", e.delta_prime},
            {"delta_prime_constant", e.delta_prime_constant},
            {"delta_prime_residual", e.delta_prime_residual},
            {"sigma", e.sigma},
            {"sigma_constant", e.sigma_constant},
            {"sigma_residual", e.sigma_residual},
            {"monotone_in_alpha", e.monotone_in_alpha},
            {"samples", e.samples},
            {"anchored_samples", e.anchored_samples},
            {"flags", e.flags},
            {"provenance", e.provenance}};
}

const char* to_string(SeriesVerdict v) {
    switch (v) {
    case SeriesVerdict::converges: return "converges";
    case SeriesVerdict::diverges: return "diverges";
    default: return "inconclusive";
    }
}

IntegrabilityReport power_integrability(int n, double p, double gamma, int shells) {
    if (n < 1) throw ValidationError("dimension must be positive");
    if (!(p >= 1.0)) throw ValidationError("p must be >= 1");
    if (!(gamma > -n)) throw ValidationError("gamma must exceed -n");
    IntegrabilityReport r;
    r.finite = gamma > n * (p - 1.0);
    r.exponent = -n * p + gamma;
    if (n != 2) return r;  // quadrature cross-check is planar only
    if (shells < 3) throw ValidationError("need at least 3 shells");

    const double e = r.exponent;
    Weight f = custom_weight("radial_power", [e](Point x) { return std::pow(std::hypot(x[0], x[1]), e); }, {{0.0, 0.0}});
    QuadOptions o;
    o.tol = 1e-10;
    double sum = 0.0;
    for (int j = 0; j < shells; ++j) {
        double out = std::ldexp(1.0, -j), in = 0.5 * out;
        double m = measure_rect(f, {-out, in, out, out}, o).value + measure_rect(f, {-out, -out, out, -in}, o).value +
                   measure_rect(f, {-out, -in, -in, in}, o).value + measure_rect(f, {in, -in, out, in}, o).value;
        r.shells.push_back(m);
        sum += m;
        r.partial_sums.push_back(sum);
    }
    r.shell_ratio = r.shells[shells - 1] / r.shells[shells - 2];
    if (r.shell_ratio >= 1.0) r.quadrature = SeriesVerdict::diverges;
    else if (r.shell_ratio <= 0.95) r.quadrature = SeriesVerdict::converges;
    else r.quadrature = SeriesVerdict::inconclusive;
    return r;
}

json to_json(const IntegrabilityReport& r) {
    return {{"finite", r.finite},         {"exponent", r.exponent},       {"quadrature", to_string(r.quadrature)},
            {"shell_ratio", r.shell_ratio}, {"shells", r.shells},         {"partial_sums", r.partial_sums}};
}

} // namespace wrem
