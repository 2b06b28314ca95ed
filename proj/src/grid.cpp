#include "wrem/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "wrem/errors.hpp"
#include "wrem/kernels.hpp"

namespace wrem {

GridFunction::GridFunction(Cube box, std::size_t n, std::vector<double> values)
    : box_(box), n_(n), v_(std::move(values)) {
    if (n_ < 2) throw ValidationError("grid resolution must be >= 2");
    if (!(box_.side > 0.0)) throw ValidationError("grid box must have positive side");
    if (v_.size() != n_ * n_) throw ValidationError("grid values must have N*N entries");
    for (double x : v_)
        if (!std::isfinite(x)) throw ValidationError("grid values must be finite");
}

GridFunction GridFunction::sample(Cube box, std::size_t n, const std::function<double(Point)>& f) {
    if (n < 2) throw ValidationError("grid resolution must be >= 2");
    std::vector<double> v(n * n);
    const double h = box.side / static_cast<double>(n);
    const double x0 = box.center[0] - box.half(), y0 = box.center[1] - box.half();
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i)
            v[j * n + i] = f({x0 + (static_cast<double>(i) + 0.5) * h, y0 + (static_cast<double>(j) + 0.5) * h});
    return GridFunction(box, n, std::move(v));
}

GridFunction GridFunction::zeros(Cube box, std::size_t n) { return GridFunction(box, n, std::vector<double>(n * n, 0.0)); }

Point GridFunction::cell_center(std::size_t i, std::size_t j) const {
    return {x0() + (static_cast<double>(i) + 0.5) * h(), y0() + (static_cast<double>(j) + 0.5) * h()};
}

Rect GridFunction::cell_rect(std::size_t i, std::size_t j) const {
    double hh = h();
    double a = x0() + static_cast<double>(i) * hh, b = y0() + static_cast<double>(j) * hh;
    return {a, b, a + hh, b + hh};
}

Mask cell_mask(const Cube& box, std::size_t n, const std::function<bool(Point)>& inside) {
    Mask m(n * n, 0);
    const double h = box.side / static_cast<double>(n);
    const double x0 = box.center[0] - box.half(), y0 = box.center[1] - box.half();
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i)
            m[j * n + i] = inside({x0 + (static_cast<double>(i) + 0.5) * h, y0 + (static_cast<double>(j) + 0.5) * h});
    return m;
}

Mask full_mask(std::size_t n) { return Mask(n * n, 1); }

std::vector<double> cell_masses(const Cube& box, std::size_t n, const Weight& w, double tol) {
    std::vector<double> m(n * n);
    const double h = box.side / static_cast<double>(n);
    const double x0 = box.center[0] - box.half(), y0 = box.center[1] - box.half();
    QuadOptions o;
    o.tol = tol;
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i) {
            double a = x0 + static_cast<double>(i) * h, b = y0 + static_cast<double>(j) * h;
            m[j * n + i] = measure_rect(w, {a, b, a + h, b + h}, o).value;
        }
    return m;
}

// ---------------------------------------------------------------- gradients

Gradient gradient(const GridFunction& u) {
    const std::size_t n = u.n();
    const double h = u.h(), inv2h = 0.5 / h;
    const double* v = u.values().data();
    Gradient g;
    g.gx.assign(n * n, 0.0);
    g.gy.assign(n * n, 0.0);
    g.mag.assign(n * n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        const double* row = v + j * n;
        double* gx = g.gx.data() + j * n;
        if (n >= 3) {
            kernels::scaled_diff(row, row + 2, gx + 1, n - 2, inv2h);
            gx[0] = (-3.0 * row[0] + 4.0 * row[1] - row[2]) * inv2h;
            gx[n - 1] = (3.0 * row[n - 1] - 4.0 * row[n - 2] + row[n - 3]) * inv2h;
        } else {
            gx[0] = gx[1] = (row[1] - row[0]) / h;
        }
    }
    if (n >= 3) {
        for (std::size_t j = 1; j + 1 < n; ++j)
            kernels::scaled_diff(v + (j - 1) * n, v + (j + 1) * n, g.gy.data() + j * n, n, inv2h);
        for (std::size_t i = 0; i < n; ++i) {
            g.gy[i] = (-3.0 * v[i] + 4.0 * v[n + i] - v[2 * n + i]) * inv2h;
            g.gy[(n - 1) * n + i] =
                (3.0 * v[(n - 1) * n + i] - 4.0 * v[(n - 2) * n + i] + v[(n - 3) * n + i]) * inv2h;
        }
    } else {
        for (std::size_t i = 0; i < 2; ++i) g.gy[i] = g.gy[2 + i] = (v[2 + i] - v[i]) / h;
    }
    kernels::magnitude(g.gx.data(), g.gy.data(), g.mag.data(), n * n);
    return g;
}

namespace {

// derivative along one axis at position k of a line of length n, using only in-mask samples
double masked_diff(const double* v, const std::uint8_t* m, std::ptrdiff_t stride, std::ptrdiff_t k, std::ptrdiff_t n,
                   double h) {
    auto in = [&](std::ptrdiff_t q) { return q >= 0 && q < n && m[q * stride]; };
    auto val = [&](std::ptrdiff_t q) { return v[q * stride]; };
    bool l = in(k - 1), r = in(k + 1);
    if (l && r) return (val(k + 1) - val(k - 1)) / (2.0 * h);
    if (r) {
        if (in(k + 2)) return (-3.0 * val(k) + 4.0 * val(k + 1) - val(k + 2)) / (2.0 * h);
        return (val(k + 1) - val(k)) / h;
    }
    if (l) {
        if (in(k - 2)) return (3.0 * val(k) - 4.0 * val(k - 1) + val(k - 2)) / (2.0 * h);
        return (val(k) - val(k - 1)) / h;
    }
    return 0.0;
}

} // namespace

Gradient gradient(const GridFunction& u, const Mask& domain) {
    const std::size_t n = u.n();
    if (domain.size() != n * n) throw ValidationError("mask size does not match grid");
    const double h = u.h();
    const double* v = u.values().data();
    Gradient g;
    g.gx.assign(n * n, 0.0);
    g.gy.assign(n * n, 0.0);
    g.mag.assign(n * n, 0.0);
    const auto sn = static_cast<std::ptrdiff_t>(n);
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t id = j * n + i;
            if (!domain[id]) continue;
            g.gx[id] = masked_diff(v + j * n, domain.data() + j * n, 1, static_cast<std::ptrdiff_t>(i), sn, h);
            g.gy[id] = masked_diff(v + i, domain.data() + i, sn, static_cast<std::ptrdiff_t>(j), sn, h);
        }
    kernels::magnitude(g.gx.data(), g.gy.data(), g.mag.data(), n * n);
    return g;
}

// ---------------------------------------------------------------- norms

double weighted_lp(const std::vector<double>& v, const std::vector<double>& masses, double p, const Mask* mask) {
    if (!(p >= 1.0)) throw ValidationError("p must be >= 1");
    if (v.size() != masses.size()) throw ValidationError("values and masses differ in size");
    double s;
    if (mask) {
        if (mask->size() != v.size()) throw ValidationError("mask size does not match grid");
        std::vector<double> mm(masses.size());
        for (std::size_t i = 0; i < mm.size(); ++i) mm[i] = (*mask)[i] ? masses[i] : 0.0;
        s = kernels::weighted_abs_pow_sum(v.data(), mm.data(), v.size(), p);
    } else {
        s = kernels::weighted_abs_pow_sum(v.data(), masses.data(), v.size(), p);
    }
    return std::pow(s, 1.0 / p);
}

double weighted_lp(const GridFunction& u, const Weight& w, double p) {
    return weighted_lp(u.values(), cell_masses(u.box(), u.n(), w), p);
}

double discrete_l2(const GridFunction& u) {
    std::vector<double> m(u.values().size(), u.h() * u.h());
    return std::sqrt(kernels::weighted_abs_pow_sum(u.values().data(), m.data(), m.size(), 2.0));
}

NormReport norms(const GridFunction& u, const Weight& w, double p) {
    auto m = cell_masses(u.box(), u.n(), w);
    Gradient g = gradient(u);
    return {weighted_lp(u.values(), m, p), weighted_lp(g.mag, m, p), p};
}

// ---------------------------------------------------------------- averages

namespace {

struct CellRange {
    std::size_t i0, i1, j0, j1;  // half-open
};

// cells whose centers lie in the closed region
CellRange snap(const GridFunction& u, const Rect& region) {
    const double h = u.h(), tol = 1e-9 * h;
    Rect box = Rect::from_cube(u.box());
    if (!box.contains(region, 1e-12 * u.box().side)) throw ValidationError("region lies outside the grid box");
    auto lo = [&](double a, double origin) {
        double t = std::ceil((a - origin - tol) / h - 0.5);
        return static_cast<std::size_t>(std::max(0.0, t));
    };
    auto hi = [&](double b, double origin) {
        double t = std::floor((b - origin + tol) / h - 0.5) + 1.0;
        return static_cast<std::size_t>(std::clamp(t, 0.0, static_cast<double>(u.n())));
    };
    CellRange c{lo(region.x0, u.x0()), hi(region.x1, u.x0()), lo(region.y0, u.y0()), hi(region.y1, u.y0())};
    if (c.i0 >= c.i1 || c.j0 >= c.j1) throw ValidationError("region contains no grid cell centers");
    return c;
}

Rect range_rect(const GridFunction& u, const CellRange& c) {
    const double h = u.h();
    return {u.x0() + static_cast<double>(c.i0) * h, u.y0() + static_cast<double>(c.j0) * h,
            u.x0() + static_cast<double>(c.i1) * h, u.y0() + static_cast<double>(c.j1) * h};
}

// restrict masses to the cell range, zero elsewhere
std::vector<double> range_masses(const GridFunction& u, const std::vector<double>& masses, const CellRange& c) {
    std::vector<double> m(masses.size(), 0.0);
    for (std::size_t j = c.j0; j < c.j1; ++j)
        for (std::size_t i = c.i0; i < c.i1; ++i) m[u.index(i, j)] = masses[u.index(i, j)];
    return m;
}

} // namespace

AverageResult average(const GridFunction& u, const std::vector<double>& masses, const Rect& region) {
    CellRange c = snap(u, region);
    auto m = range_masses(u, masses, c);
    double mass = 0.0;
    for (double x : m) mass += x;
    if (!(mass > 0.0)) throw ValidationError("region has zero weighted mass");
    double s = kernels::weighted_sum(u.values().data(), m.data(), m.size());
    return {s / mass, mass, range_rect(u, c)};
}

AverageResult average(const GridFunction& u, const Weight& w, const Cube& region) {
    return average(u, cell_masses(u.box(), u.n(), w), Rect::from_cube(region));
}

std::vector<std::pair<std::size_t, double>> overlap_weights(const GridFunction& u, const std::vector<double>& masses,
                                                          const Rect& region, const Mask* mask) {
    std::vector<std::pair<std::size_t, double>> out;
    const double h = u.h();
    const auto n = static_cast<std::ptrdiff_t>(u.n());
    auto clampi = [&](double t) { return std::clamp<std::ptrdiff_t>(static_cast<std::ptrdiff_t>(t), 0, n - 1); };
    std::ptrdiff_t i0 = clampi(std::floor((region.x0 - u.x0()) / h)), i1 = clampi(std::floor((region.x1 - u.x0()) / h));
    std::ptrdiff_t j0 = clampi(std::floor((region.y0 - u.y0()) / h)), j1 = clampi(std::floor((region.y1 - u.y0()) / h));
    double den = 0.0;
    const double inv_area = 1.0 / (h * h);
    for (std::ptrdiff_t j = j0; j <= j1; ++j)
        for (std::ptrdiff_t i = i0; i <= i1; ++i) {
            std::size_t id = u.index(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
            if (mask && !(*mask)[id]) continue;
            double f = overlap_area(u.cell_rect(static_cast<std::size_t>(i), static_cast<std::size_t>(j)), region) * inv_area;
            if (f <= 0.0) continue;
            double wgt = f * masses[id];
            if (wgt <= 0.0) continue;
            out.emplace_back(id, wgt);
            den += wgt;
        }
    if (den > 0.0) {
        for (auto& e : out) e.second /= den;
        return out;
    }
    out.clear();
    // nearest admissible cell to the region center
    Point c = region.center();
    std::ptrdiff_t ci = clampi(std::floor((c[0] - u.x0()) / h)), cj = clampi(std::floor((c[1] - u.y0()) / h));
    for (std::ptrdiff_t rad = 0; rad < n; ++rad) {
        bool found = false;
        std::size_t best = 0;
        double bd = 0.0;
        for (std::ptrdiff_t j = cj - rad; j <= cj + rad; ++j)
            for (std::ptrdiff_t i = ci - rad; i <= ci + rad; ++i) {
                if (i < 0 || j < 0 || i >= n || j >= n) continue;
                if (std::max(std::abs(i - ci), std::abs(j - cj)) != rad) continue;
                std::size_t id = u.index(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
                if (mask && !(*mask)[id]) continue;
                Point p = u.cell_center(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
                double d = std::hypot(p[0] - c[0], p[1] - c[1]);
                if (!found || d < bd) {
                    best = id;
                    bd = d;
                    found = true;
                }
            }
        if (found) {
            out.emplace_back(best, 1.0);
            return out;
        }
    }
    throw ValidationError("overlap_average: no admissible cell near region");
}

double overlap_average(const GridFunction& u, const std::vector<double>& masses, const Rect& region, const Mask* mask) {
    auto wts = overlap_weights(u, masses, region, mask);
    // anchored form: exact for constants
    const double u0 = u.values()[wts.front().first];
    double s = 0.0;
    for (auto& [id, c] : wts) s += c * (u.values()[id] - u0);
    return u0 + s;
}

// ---------------------------------------------------------------- Poincare

PoincareResult poincare_ratio(const GridFunction& u, const Weight& w, const Cube& q, double p) {
    if (!(p >= 1.0)) throw ValidationError("p must be >= 1");
    auto masses = cell_masses(u.box(), u.n(), w);
    CellRange c = snap(u, Rect::from_cube(q));
    auto m = range_masses(u, masses, c);
    double mass = 0.0;
    for (double x : m) mass += x;
    if (!(mass > 0.0)) throw ValidationError("region has zero weighted mass");
    double uq = kernels::weighted_sum(u.values().data(), m.data(), m.size()) / mass;
    std::vector<double> dev(u.values().size());
    for (std::size_t i = 0; i < dev.size(); ++i) dev[i] = u.values()[i] - uq;
    Gradient g = gradient(u);
    PoincareResult r;
    r.snapped = range_rect(u, c);
    r.lhs = kernels::weighted_abs_pow_sum(dev.data(), m.data(), m.size(), 1.0) / mass;
    r.grad_mean = std::pow(kernels::weighted_abs_pow_sum(g.mag.data(), m.data(), m.size(), p) / mass, 1.0 / p);
    r.diam = r.snapped.diam();
    double scale = 0.0;
    for (double x : u.values()) scale = std::max(scale, std::abs(x));
    if (!(r.grad_mean > 1e-14 * std::max(1.0, scale) / r.diam)) {
        r.constant_function = true;
        return r;
    }
    r.ratio = r.lhs / (r.diam * r.grad_mean);
    return r;
}

AvgDifference avg_difference_check(const GridFunction& u, const Weight& w, const Cube& q1, const Cube& q0, double p,
                                   double kappa) {
    if (!(p >= 1.0)) throw ValidationError("p must be >= 1");
    const double tol = 1e-12 * q0.side;
    Rect r1 = Rect::from_cube(q1), r0 = Rect::from_cube(q0), rk = Rect::from_cube(q1.scaled(kappa));
    if (!r0.contains(r1, tol) || !rk.contains(r0, tol))
        throw ValidationError("avg_difference_check needs Q1 inside Q0 inside kappa*Q1");
    auto masses = cell_masses(u.box(), u.n(), w);
    AverageResult a1 = average(u, masses, r1), a0 = average(u, masses, r0);
    CellRange c = snap(u, r0);
    auto m = range_masses(u, masses, c);
    Gradient g = gradient(u);
    double gm = std::pow(kernels::weighted_abs_pow_sum(g.mag.data(), m.data(), m.size(), p) / a0.mass, 1.0 / p);
    return {std::abs(a1.value - a0.value), a0.snapped.diam() * gm};
}

// ---------------------------------------------------------------- convolution

double hat(double t) {
    t = std::abs(t);
    return t < 1.0 ? 1.0 - 3.0 * t * t + 2.0 * t * t * t : 0.0;
}

double hat_derivative(double t) {
    double a = std::abs(t);
    if (a >= 1.0) return 0.0;
    double d = -6.0 * a + 6.0 * a * a;
    return t < 0.0 ? -d : d;
}

ConvolutionResult discrete_convolution(const GridFunction& u, const Weight& w, std::size_t r,
                                       const ConvolutionOptions& opt) {
    if (r < 1) throw ValidationError("subdivision count r must be >= 1");
    if (!(opt.eps > 0.0)) throw ValidationError("eps must be positive");
    const Cube q{u.box().center, u.box().side / (1.0 + opt.eps)};
    const double s = q.side / static_cast<double>(r);
    const double reach = 0.75 * s;  // half side of (3/2)Q_k
    if (q.half() - 0.5 * s + reach > u.box().half() * (1.0 + 1e-12))
        throw ValidationError("support (3/2)Q_k leaves the domain of u; increase eps to at least 1/(2r)");

    const std::size_t on = opt.out_n ? opt.out_n
                                     : static_cast<std::size_t>(std::llround(static_cast<double>(u.n()) / (1.0 + opt.eps)));
    if (on < 2) throw ValidationError("output resolution must be >= 2");

    auto masses = cell_masses(u.box(), u.n(), w);
    const double qx0 = q.center[0] - q.half(), qy0 = q.center[1] - q.half();
    std::vector<double> avg(r * r);
    for (std::size_t l = 0; l < r; ++l)
        for (std::size_t k = 0; k < r; ++k) {
            Rect sub{qx0 + static_cast<double>(k) * s, qy0 + static_cast<double>(l) * s,
                     qx0 + static_cast<double>(k + 1) * s, qy0 + static_cast<double>(l + 1) * s};
            avg[l * r + k] = overlap_average(u, masses, sub);
        }

    // separable 1D factors along each axis
    const double ho = q.side / static_cast<double>(on);
    struct Axis {
        std::vector<std::size_t> first;
        std::vector<std::array<double, 4>> val, der;
        std::vector<int> count;
        std::vector<double> sum, dsum;
    };
    auto build = [&](double origin) {
        Axis a;
        a.first.resize(on);
        a.val.resize(on);
        a.der.resize(on);
        a.count.resize(on);
        a.sum.resize(on);
        a.dsum.resize(on);
        for (std::size_t i = 0; i < on; ++i) {
            double x = origin + (static_cast<double>(i) + 0.5) * ho;
            double pos = (x - origin) / s;  // in subcube units
            auto k0 = static_cast<std::ptrdiff_t>(std::floor(pos - 0.5 - 0.75));
            k0 = std::max<std::ptrdiff_t>(k0, 0);
            a.first[i] = static_cast<std::size_t>(k0);
            int c = 0;
            double sm = 0.0, ds = 0.0;
            for (std::ptrdiff_t k = k0; k < static_cast<std::ptrdiff_t>(r) && c < 4; ++k) {
                double ck = origin + (static_cast<double>(k) + 0.5) * s;
                double t = (x - ck) / reach;
                a.val[i][c] = hat(t);
                a.der[i][c] = hat_derivative(t) / reach;
                sm += a.val[i][c];
                ds += a.der[i][c];
                ++c;
            }
            a.count[i] = c;
            a.sum[i] = sm;
            a.dsum[i] = ds;
        }
        return a;
    };
    Axis ax = build(qx0), ay = build(qy0);

    ConvolutionResult res{GridFunction::zeros(q, on), 0.0, 0.0, avg};
    auto& out = res.ur.mutable_values();
    for (std::size_t j = 0; j < on; ++j)
        for (std::size_t i = 0; i < on; ++i) {
            double sx = ax.sum[i], sy = ay.sum[j];
            double acc = 0.0, part = 0.0;
            for (int b = 0; b < ay.count[j]; ++b)
                for (int a = 0; a < ax.count[i]; ++a) {
                    double fx = ax.val[i][a] / sx, fy = ay.val[j][b] / sy;
                    double phi = fx * fy;
                    acc += avg[(ay.first[j] + b) * r + ax.first[i] + a] * phi;
                    part += phi;
                    double dfx = (ax.der[i][a] * sx - ax.val[i][a] * ax.dsum[i]) / (sx * sx);
                    double dfy = (ay.der[j][b] * sy - ay.val[j][b] * ay.dsum[j]) / (sy * sy);
                    res.max_grad_phi = std::max(res.max_grad_phi, std::hypot(dfx * fy, fx * dfy) * s);
                }
            out[j * on + i] = acc;
            res.partition_defect = std::max(res.partition_defect, std::abs(part - 1.0));
        }
    return res;
}

// ---------------------------------------------------------------- CSV

void write_csv(const GridFunction& u, std::ostream& os) {
    char buf[64];
    os << "N," << u.n() << "\n";
    os << "box";
    for (double x : {u.box().center[0], u.box().center[1], u.box().side}) {
        std::snprintf(buf, sizeof buf, ",%.17g", x);
        os << buf;
    }
    os << "\n";
    for (std::size_t j = 0; j < u.n(); ++j) {
        for (std::size_t i = 0; i < u.n(); ++i) {
            std::snprintf(buf, sizeof buf, "%s%.17g", i ? "," : "", u.at(i, j));
            os << buf;
        }
        os << "\n";
    }
}

GridFunction read_csv(std::istream& is) {
    std::string line;
    auto fields = [](const std::string& l) {
        std::vector<std::string> f;
        std::stringstream ss(l);
        std::string x;
        while (std::getline(ss, x, ',')) f.push_back(x);
        return f;
    };
    if (!std::getline(is, line)) throw ValidationError("grid csv: missing N line");
    auto f = fields(line);
    if (f.size() != 2 || f[0] != "N") throw ValidationError("grid csv: first line must be N,<N>");
    std::size_t n = std::stoul(f[1]);
    if (!std::getline(is, line)) throw ValidationError("grid csv: missing box line");
    f = fields(line);
    if (f.size() != 4 || f[0] != "box") throw ValidationError("grid csv: second line must be box,cx,cy,side");
    Cube box{{std::stod(f[1]), std::stod(f[2])}, std::stod(f[3])};
    std::vector<double> v;
    v.reserve(n * n);
    for (std::size_t j = 0; j < n; ++j) {
        if (!std::getline(is, line)) throw ValidationError("grid csv: too few rows");
        f = fields(line);
        if (f.size() != n) throw ValidationError("grid csv: row has wrong length");
        for (auto& x : f) v.push_back(std::stod(x));
    }
    return GridFunction(box, n, std::move(v));
}

} // namespace wrem
