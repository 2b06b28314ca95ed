#include "wrem/extension.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "wrem/errors.hpp"

namespace wrem {

int iteration_count(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw ValidationError("alpha must lie in (0,1)");
    int m = 0;
    while (std::ldexp(alpha, m) < 0.5) ++m;
    return m;
}

// ---------------------------------------------------------------- one step

ReflectionExtension::ReflectionExtension(const Ring& ring, std::size_t n, const Weight& w, const ExtensionOptions& opt)
    : ReflectionExtension(ring, n,
                          std::make_shared<const std::vector<double>>(cell_masses(ring.cube, n, w, opt.mass_tol)),
                          opt) {}

ReflectionExtension::ReflectionExtension(const Ring& ring, std::size_t n,
                                         std::shared_ptr<const std::vector<double>> masses,
                                         const ExtensionOptions& opt)
    : n_(n), masses_(std::move(masses)) {
    if (n_ < 2) throw ValidationError("grid resolution must be >= 2");
    if (!masses_ || masses_->size() != n_ * n_) throw ValidationError("cell masses do not match the grid");
    if (!(ring.alpha > 0.0 && ring.alpha < 1.0)) throw ValidationError("ring alpha must lie in (0,1)");
    dec_ = ring.alpha < 0.5 ? decompose(ring, opt.whitney) : decompose_interior(ring, opt.whitney);
    reflect(dec_);
    double lanes = static_cast<double>(n_) * ring.alpha * 0.5;
    if (std::abs(lanes - std::round(lanes)) > 1e-9 * std::max(1.0, lanes))
        dec_.flags.push_back("grid not aligned with the ring boundary (N*alpha/2 not integral)");
    bumps_ = std::make_unique<BumpFamily>(dec_);
    build();
}

void ReflectionExtension::build() {
    const Cube& q = dec_.ring.cube;
    const SquareAnnulus src = dec_.source(), tgt = dec_.target();
    source_ = cell_mask(q, n_, [&](Point p) { return src.contains(p); });
    target_ = cell_mask(q, n_, [&](Point p) { return tgt.contains(p) || (dec_.half_mode && p == q.center); });
    domain_.assign(n_ * n_, 0);
    for (std::size_t i = 0; i < domain_.size(); ++i) domain_[i] = source_[i] || target_[i];

    GridFunction geom = GridFunction::zeros(q, n_);
    avg_ptr_.assign(1, 0);
    for (const auto& c : dec_.cubes) {
        auto wts = overlap_weights(geom, *masses_, c.reflected, &source_);
        for (auto& [id, coef] : wts) {
            avg_cell_.push_back(static_cast<std::uint32_t>(id));
            avg_coef_.push_back(coef);
        }
        avg_ptr_.push_back(avg_cell_.size());
    }

    std::vector<BumpTerm> terms;
    phi_ptr_.assign(1, 0);
    for (std::size_t j = 0; j < n_; ++j)
        for (std::size_t i = 0; i < n_; ++i) {
            std::size_t id = j * n_ + i;
            if (!target_[id]) continue;
            bumps_->evaluate(geom.cell_center(i, j), terms, false);
            if (terms.empty())
                throw ValidationError("extension: a target cell is not covered by any Whitney bump");
            tcell_.push_back(static_cast<std::uint32_t>(id));
            for (auto& t : terms) {
                phi_cube_.push_back(t.j);
                phi_val_.push_back(t.phi);
            }
            phi_ptr_.push_back(phi_cube_.size());
        }
}

std::vector<double> ReflectionExtension::cube_averages(const GridFunction& u) const {
    const auto& v = u.values();
    std::vector<double> a(dec_.cubes.size());
    for (std::size_t j = 0; j < a.size(); ++j) {
        std::size_t b = avg_ptr_[j], e = avg_ptr_[j + 1];
        double u0 = v[avg_cell_[b]], s = 0.0;
        for (std::size_t k = b; k < e; ++k) s += avg_coef_[k] * (v[avg_cell_[k]] - u0);
        a[j] = u0 + s;
    }
    return a;
}

GridFunction ReflectionExtension::apply(const GridFunction& u) const {
    const Cube& q = dec_.ring.cube;
    if (u.n() != n_ || std::abs(u.box().side - q.side) > 1e-12 * q.side ||
        std::abs(u.box().center[0] - q.center[0]) > 1e-12 * q.side ||
        std::abs(u.box().center[1] - q.center[1]) > 1e-12 * q.side)
        throw ValidationError("extension: input grid must cover the ring's cube at the operator's resolution");
    std::vector<double> a = cube_averages(u);
    std::vector<double> out = u.values();
    for (std::size_t t = 0; t < tcell_.size(); ++t) {
        std::size_t b = phi_ptr_[t], e = phi_ptr_[t + 1];
        double a0 = a[phi_cube_[b]], s = 0.0;
        for (std::size_t k = b; k < e; ++k) s += phi_val_[k] * (a[phi_cube_[k]] - a0);
        out[tcell_[t]] = a0 + s;
    }
    return GridFunction(q, n_, std::move(out));
}

Point ReflectionExtension::analytic_gradient(const std::vector<double>& averages, Point x) const {
    std::vector<BumpTerm> terms;
    bumps_->evaluate(x, terms, true);
    Point g{0.0, 0.0};
    for (auto& t : terms) {
        g[0] += averages[t.j] * t.gx;
        g[1] += averages[t.j] * t.gy;
    }
    return g;
}

GridFunction extend_once(const GridFunction& u, const Ring& ring, const Weight& w, const ExtensionOptions& opt) {
    if (!(ring.alpha < 0.5)) throw ValidationError("extend_once needs alpha < 1/2");
    return ReflectionExtension(ring, u.n(), w, opt).apply(u);
}

GridFunction extend_half(const GridFunction& u, const Ring& ring, const Weight& w, const ExtensionOptions& opt) {
    if (!(ring.alpha >= 0.5)) throw ValidationError("extend_half needs alpha >= 1/2");
    return ReflectionExtension(ring, u.n(), w, opt).apply(u);
}

// ---------------------------------------------------------------- ratios

namespace {

double grad_norm(const GridFunction& u, const Mask& m, const std::vector<double>& masses, double p) {
    Gradient g = gradient(u, m);
    return weighted_lp(g.mag, masses, p, &m);
}

} // namespace

StepRatio step_ratio(const ReflectionExtension& op, const GridFunction& u, const GridFunction& eu, double p) {
    StepRatio r;
    r.alpha = op.ring().alpha;
    r.half = op.half_step();
    const auto& m = op.masses();
    double nu = weighted_lp(u.values(), m, p, &op.source_mask());
    double ne = weighted_lp(eu.values(), m, p, &op.domain_mask());
    double gu = grad_norm(u, op.source_mask(), m, p);
    double ge = grad_norm(eu, op.domain_mask(), m, p);
    r.lp_ratio = nu > 0.0 ? ne / nu : std::numeric_limits<double>::quiet_NaN();
    double scale = nu / op.ring().cube.side;
    r.grad_ratio = gu > 1e-10 * scale ? ge / gu : std::numeric_limits<double>::quiet_NaN();
    return r;
}

namespace {

double step_max(const StepRatio& r) {
    double v = r.lp_ratio;
    if (std::isfinite(r.grad_ratio)) v = std::max(v, r.grad_ratio);
    return v;
}

nlohmann::ordered_json num(double x) {
    if (std::isfinite(x)) return x;
    return nullptr;
}

} // namespace

nlohmann::ordered_json to_json(const ExtensionConstants& c) {
    return {{"C1", c.C1},
            {"C0", c.C0},
            {"c1", c.c1},
            {"m", c.m},
            {"kappa", c.kappa},
            {"predicted_bound", num(c.predicted_bound)},
            {"measured_lp_ratio", num(c.measured_lp_ratio)},
            {"measured_grad_ratio", num(c.measured_grad_ratio)},
            {"raw_C1", c.raw_C1},
            {"provenance", c.provenance},
            {"flags", c.flags}};
}

FullExtension extend_full(const GridFunction& u, const Cube& q, double alpha, const Weight& w, double p,
                          const ExtensionOptions& opt) {
    if (!(p >= 1.0)) throw ValidationError("p must be >= 1");
    const int m = iteration_count(alpha);
    const std::size_t n = u.n();
    auto masses = std::make_shared<const std::vector<double>>(cell_masses(q, n, w, opt.mass_tol));
    FullExtension out{u, {}, {}, {}};
    GridFunction cur = u;
    double raw_c1 = 0.0;
    Mask first_source;
    for (int k = 0; k <= m; ++k) {
        Ring r{q, std::ldexp(alpha, k)};
        ReflectionExtension op(r, n, masses, opt);
        if (k == 0) first_source = op.source_mask();
        GridFunction next = op.apply(cur);
        StepRatio sr = step_ratio(op, cur, next, p);
        out.steps.push_back(sr);
        if (k < m) raw_c1 = std::max(raw_c1, step_max(sr));
        else out.constants.C0 = step_max(sr);
        for (auto& f : op.decomposition().flags) out.constants.flags.push_back("alpha=" + std::to_string(r.alpha) + ": " + f);
        cur = std::move(next);
    }
    out.result = cur;
    out.source = first_source;

    auto& c = out.constants;
    c.m = m;
    c.kappa = opt.whitney.kappa;
    c.raw_C1 = raw_c1;
    c.C1 = std::max(2.0, raw_c1);
    if (raw_c1 < 2.0 && m > 0) c.flags.push_back("C1 clamped up to 2");
    c.c1 = std::log2(c.C1);
    c.predicted_bound = c.C0 * std::pow(c.C1, m);
    Mask all = full_mask(n);
    double nu = weighted_lp(u.values(), *masses, p, &first_source);
    c.measured_lp_ratio = weighted_lp(cur.values(), *masses, p, &all) / nu;
    double gu = grad_norm(u, first_source, *masses, p);
    c.measured_grad_ratio = gu > 1e-10 * nu / q.side ? grad_norm(cur, all, *masses, p) / gu
                                                     : std::numeric_limits<double>::quiet_NaN();
    c.provenance = "measured on one function (extend_full)";
    return out;
}

// ---------------------------------------------------------------- constants

std::vector<TestFunction> default_suite(std::uint64_t seed) {
    const Point r0{0.05, 0.03};
    std::vector<TestFunction> s;
    s.push_back({"constant", [](Point) { return 1.0; }});
    s.push_back({"x1", [](Point r) { return r[0]; }});
    s.push_back({"x2", [](Point r) { return r[1]; }});
    s.push_back({"dist_pow_0.5", [r0](Point r) { return std::sqrt(std::hypot(r[0] - r0[0], r[1] - r0[1])); }});
    s.push_back({"dist_pow_1", [r0](Point r) { return std::hypot(r[0] - r0[0], r[1] - r0[1]); }});
    s.push_back({"product", [](Point r) { return r[0] * r[1]; }});
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> amp(-1.0, 1.0), ph(0.0, 2.0 * M_PI);
    std::uniform_int_distribution<int> fr(-3, 3);
    struct Term {
        double a, fx, fy, phase;
    };
    std::vector<Term> terms;
    for (int k = 0; k < 4; ++k) {
        Term t{amp(rng), static_cast<double>(fr(rng)), static_cast<double>(fr(rng)), ph(rng)};
        if (t.fx == 0.0 && t.fy == 0.0) t.fx = 1.0;
        terms.push_back(t);
    }
    s.push_back({"trig", [terms](Point r) {
                     double v = 0.0;
                     for (auto& t : terms) v += t.a * std::sin(2.0 * M_PI * (t.fx * r[0] + t.fy * r[1]) + t.phase);
                     return v;
                 }});
    return s;
}

nlohmann::ordered_json to_json(const MeasuredConstants& m) {
    auto rows = nlohmann::ordered_json::array();
    for (auto& r : m.rows)
        rows.push_back({{"function", r.function},
                        {"alpha", r.alpha},
                        {"ell", r.ell},
                        {"step", r.half ? "half" : "double"},
                        {"lp_ratio", num(r.lp_ratio)},
                        {"grad_ratio", num(r.grad_ratio)}});
    auto steps = nlohmann::ordered_json::array();
    for (auto& r : m.step_max)
        steps.push_back({{"alpha", r.alpha}, {"ell", r.ell}, {"step", r.half ? "half" : "double"},
                         {"max_ratio", num(r.lp_ratio)}});
    return {{"constants", to_json(m.constants)}, {"step_max", steps}, {"rows", rows}};
}

MeasuredConstants measure_constants(const Weight& w, double p, const std::vector<TestFunction>& suite,
                                    const std::vector<double>& alphas, const std::vector<double>& scales,
                                    const MeasureOptions& opt) {
    if (suite.empty()) throw ValidationError("measure_constants needs a nonempty test suite");
    if ((alphas.empty() && opt.half_alphas.empty()) || scales.empty())
        throw ValidationError("measure_constants needs alphas and scales");
    if (!(p >= 1.0)) throw ValidationError("p must be >= 1");
    for (double a : alphas)
        if (!(a > 0.0 && a < 0.5)) throw ValidationError("one-step alphas must lie in (0, 1/2)");
    for (double a : opt.half_alphas)
        if (!(a >= 0.5 && a < 1.0)) throw ValidationError("half-step alphas must lie in [1/2, 1)");
    for (double l : scales)
        if (!(l > 0.0)) throw ValidationError("scales must be positive");

    MeasuredConstants out;
    double raw_c1 = 0.0, c0 = 0.0;
    for (double ell : scales) {
        Cube q{{0.0, 0.0}, ell};
        auto masses = std::make_shared<const std::vector<double>>(cell_masses(q, opt.n, w, opt.ext.mass_tol));
        std::vector<GridFunction> us;
        for (auto& f : suite)
            us.push_back(GridFunction::sample(q, opt.n, [&](Point x) { return f.f({x[0] / ell, x[1] / ell}); }));
        auto run = [&](double alpha, bool half) {
            ReflectionExtension op(Ring{q, alpha}, opt.n, masses, opt.ext);
            for (auto& fl : op.decomposition().flags) out.constants.flags.push_back("alpha=" + std::to_string(alpha) + ": " + fl);
            double mx = 0.0, mg = std::numeric_limits<double>::quiet_NaN();
            for (std::size_t k = 0; k < suite.size(); ++k) {
                StepRatio r = step_ratio(op, us[k], op.apply(us[k]), p);
                out.rows.push_back({suite[k].name, alpha, ell, half, r.lp_ratio, r.grad_ratio});
                mx = std::max(mx, step_max(r));
                if (std::isfinite(r.grad_ratio)) mg = std::isfinite(mg) ? std::max(mg, r.grad_ratio) : r.grad_ratio;
            }
            // lp_ratio of a max row is the larger of both ratios over the suite
            out.step_max.push_back({"max", alpha, ell, half, mx, mg});
            return mx;
        };
        for (double a : alphas) raw_c1 = std::max(raw_c1, run(a, false));
        for (double a : opt.half_alphas) c0 = std::max(c0, run(a, true));
    }
    auto& c = out.constants;
    c.raw_C1 = raw_c1;
    c.C1 = std::max(2.0, raw_c1);
    if (alphas.empty()) c.flags.push_back("no one-step alphas measured: C1 set to 2");
    else if (raw_c1 < 2.0) c.flags.push_back("C1 clamped up to 2 (raw " + std::to_string(raw_c1) + ")");
    c.c1 = std::log2(c.C1);
    c.C0 = c0;
    c.kappa = opt.ext.whitney.kappa;
    c.m = alphas.empty() ? 0 : iteration_count(*std::min_element(alphas.begin(), alphas.end()));
    c.predicted_bound = c.C0 * std::pow(c.C1, c.m);
    c.measured_lp_ratio = std::numeric_limits<double>::quiet_NaN();
    c.measured_grad_ratio = std::numeric_limits<double>::quiet_NaN();
    c.provenance = "measured: max one-step ratio over " + std::to_string(suite.size()) + " test functions";
    return out;
}

} // namespace wrem
