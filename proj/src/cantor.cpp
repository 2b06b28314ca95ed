#include "wrem/cantor.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "wrem/errors.hpp"

namespace wrem {

CantorConfig CantorConfig::from_tau(double eta, double tau, int levels) {
    CantorConfig c{eta, tau, levels};
    c.validate();
    return c;
}

CantorConfig CantorConfig::from_upsilon(double eta, double upsilon, int levels) {
    if (!(upsilon > 1.0)) throw ValidationError("upsilon must be > 1");
    return from_tau(eta, std::exp2(-upsilon), levels);
}

CantorConfig CantorConfig::from_both(double eta, double tau, double upsilon, int levels) {
    if (!(upsilon > 1.0)) throw ValidationError("upsilon must be > 1");
    if (std::abs(tau - std::exp2(-upsilon)) > 1e-12 * tau)
        throw ValidationError("tau and upsilon disagree: tau must equal 2^-upsilon");
    return from_tau(eta, tau, levels);
}

double CantorConfig::upsilon() const { return -std::log2(tau); }

double CantorConfig::removed_total() const { return eta * tau / (1.0 - 2.0 * tau); }

void CantorConfig::validate() const {
    if (!(eta > 0.0 && eta < 1.0)) throw ValidationError("eta must lie in (0,1)");
    if (!(tau > 0.0 && tau < 0.5)) throw ValidationError("tau must lie in (0,1/2)");
    if (levels < 0) throw ValidationError("levels must be >= 0");
    if (!(removed_total() < 1.0))
        throw ValidationError("eta*tau/(1-2tau) must be < 1 (got " + std::to_string(removed_total()) + ")");
}

std::vector<CantorLevel> build_levels(const CantorConfig& cfg, int max_levels) {
    cfg.validate();
    if (cfg.levels > max_levels)
        throw ResourceError("build_levels: " + std::to_string(cfg.levels) + " levels exceeds the enumeration cap " +
                            std::to_string(max_levels));
    std::vector<CantorLevel> out(1);
    out[0].survivors.push_back({0.0, 1.0});
    double tk = 1.0;
    for (int k = 1; k <= cfg.levels; ++k) {
        tk *= cfg.tau;
        const double g = cfg.eta * tk;
        CantorLevel lv;
        lv.k = k;
        lv.survivors.reserve(2 * out.back().survivors.size());
        for (const auto& I : out.back().survivors) {
            double m = I.mid();
            lv.survivors.push_back({I.lo, m - 0.5 * g});
            lv.survivors.push_back({m + 0.5 * g, I.hi});
            lv.removed.push_back({m - 0.5 * g, m + 0.5 * g});
        }
        out.push_back(std::move(lv));
    }
    return out;
}

Interval simulate_branch(const CantorConfig& cfg, int k, std::uint64_t branch) {
    cfg.validate();
    if (k < 0) throw ValidationError("level must be >= 0");
    Interval I{0.0, 1.0};
    double tk = 1.0;
    for (int i = 1; i <= k; ++i) {
        tk *= cfg.tau;
        double g = cfg.eta * tk, m = I.mid();
        bool right = i <= 64 && ((branch >> (i - 1)) & 1u);
        I = right ? Interval{m + 0.5 * g, I.hi} : Interval{I.lo, m - 0.5 * g};
    }
    return I;
}

double level_length(const CantorConfig& cfg, int k) {
    cfg.validate();
    if (k < 0) throw ValidationError("level must be >= 0");
    double c = cfg.removed_total();
    return std::ldexp(1.0 - c * (1.0 - std::pow(2.0 * cfg.tau, k)), -k);
}

// ---------------------------------------------------------------- covers

namespace {

void check_cover_options(const CoverOptions& opt) {
    if (!(opt.ring_fraction > 0.0 && opt.ring_fraction < 0.5))
        throw ValidationError("ring_fraction must lie in (0,1/2), otherwise neighbouring cubes touch");
    if (!(opt.safety > 0.0 && opt.safety <= 1.0)) throw ValidationError("safety must lie in (0,1]");
}

double cube_side(const CantorConfig& cfg, int k, double rf) {
    return level_length(cfg, k) + 2.0 * rf * cfg.eta * std::pow(cfg.tau, k);
}

CoverLevel make_cover(const CantorConfig& cfg, int k, std::vector<Interval> intervals, double multiplicity,
                      const CoverOptions& opt) {
    CoverLevel c;
    c.k = k;
    c.multiplicity = multiplicity;
    const double tk = std::pow(cfg.tau, k);
    c.side = cube_side(cfg, k, opt.ring_fraction);
    c.thickness = opt.ring_fraction * cfg.eta * tk * opt.safety;
    c.alpha_k = 2.0 * c.thickness / c.side;
    c.ell_Q = c.side;
    c.intervals = std::move(intervals);
    c.cubes.reserve(c.intervals.size());
    for (const auto& I : c.intervals) c.cubes.push_back(Cube{{I.mid(), 0.0}, c.side});
    c.gap = k == 0 ? std::numeric_limits<double>::infinity() : cfg.eta * tk * (1.0 - 2.0 * opt.ring_fraction);
    for (std::size_t i = 1; i < c.cubes.size(); ++i)
        c.gap = std::min(c.gap, (c.cubes[i].center[0] - c.cubes[i - 1].center[0]) - c.side);
    if (opt.ring_fraction > 1.0 / 3.0 + 1e-15)
        c.flags.push_back("ring_fraction above 1/3: cube margins exceed the guaranteed E-free gap share");
    if (opt.safety >= 1.0 - cfg.tau) c.flags.push_back("safety >= 1 - tau: cover nesting not guaranteed");
    if (multiplicity > 1.0) c.flags.push_back("representative cube: stands for " + std::to_string(multiplicity) + " congruent copies");
    if (!cubes_disjoint(c)) throw ValidationError("cantor cover: cubes overlap");
    if (opt.weight) {
        c.mu_R.reserve(c.cubes.size());
        c.mu_Q.reserve(c.cubes.size());
        for (const auto& q : c.cubes) {
            c.mu_Q.push_back(measure_box(*opt.weight, q, opt.tol).value);
            c.mu_R.push_back(measure_ring(*opt.weight, Ring{q, c.alpha_k}, opt.tol).value);
        }
    }
    return c;
}

} // namespace

double cover_alpha(const CantorConfig& cfg, int k, const CoverOptions& opt) {
    check_cover_options(opt);
    double side = cube_side(cfg, k, opt.ring_fraction);
    return 2.0 * opt.ring_fraction * cfg.eta * std::pow(cfg.tau, k) * opt.safety / side;
}

CoverLevel covers(const CantorConfig& cfg, int k, const CoverOptions& opt) {
    return cover_levels(cfg, k, k, opt).front();
}

std::vector<CoverLevel> cover_levels(const CantorConfig& cfg, int k_min, int k_max, const CoverOptions& opt) {
    cfg.validate();
    check_cover_options(opt);
    if (k_min < 0 || k_max < k_min) throw ValidationError("need 0 <= k_min <= k_max");
    std::vector<CoverLevel> out;
    if (opt.enumerate) {
        CantorConfig c = cfg;
        c.levels = k_max;
        auto lv = build_levels(c);
        for (int k = k_min; k <= k_max; ++k) out.push_back(make_cover(cfg, k, lv[k].survivors, 1.0, opt));
    } else {
        for (int k = k_min; k <= k_max; ++k)
            out.push_back(make_cover(cfg, k, {simulate_branch(cfg, k, 0)}, std::ldexp(1.0, k), opt));
    }
    return out;
}

bool cubes_disjoint(const CoverLevel& c) {
    const auto& q = c.cubes;
    bool one_row = std::all_of(q.begin(), q.end(), [&](const Cube& x) {
        return x.center[1] == q.front().center[1] && x.side == q.front().side;
    });
    if (one_row) {
        std::vector<double> xs;
        for (auto& x : q) xs.push_back(x.center[0]);
        std::sort(xs.begin(), xs.end());
        for (std::size_t i = 1; i < xs.size(); ++i)
            if (!(xs[i] - xs[i - 1] > q.front().side)) return false;
        return true;
    }
    for (std::size_t i = 0; i < q.size(); ++i)
        for (std::size_t j = i + 1; j < q.size(); ++j)
            if (interiors_meet(Rect::from_cube(q[i]), Rect::from_cube(q[j]))) return false;
    return true;
}

namespace {

// index of the cube whose closed x-range holds x, cubes sorted by center
std::size_t find_cube(const std::vector<Cube>& q, double x) {
    auto it = std::lower_bound(q.begin(), q.end(), x,
                               [](const Cube& c, double v) { return c.center[0] + c.half() < v; });
    if (it == q.end()) return q.size();
    if (x < it->center[0] - it->half()) return q.size();
    return static_cast<std::size_t>(it - q.begin());
}

} // namespace

bool cover_nested(const CoverLevel& parent, const CoverLevel& child) {
    for (const auto& q : child.cubes) {
        std::size_t i = find_cube(parent.cubes, q.center[0]);
        if (i == parent.cubes.size()) return false;
        Rect inner = Rect::from_cube(parent.cubes[i].scaled(1.0 - parent.alpha_k));
        Rect r = Rect::from_cube(q);
        if (!(r.x0 > inner.x0 && r.x1 < inner.x1 && r.y0 > inner.y0 && r.y1 < inner.y1)) return false;
    }
    return true;
}

bool rings_avoid_set(const CoverLevel& c, const std::vector<Interval>& deeper) {
    for (const auto& I : deeper) {
        std::size_t i = find_cube(c.cubes, I.mid());
        if (i == c.cubes.size()) return false;
        const Cube& q = c.cubes[i];
        double ih = q.half() - c.thickness;
        if (!(I.lo > q.center[0] - ih && I.hi < q.center[0] + ih && std::abs(q.center[1]) < ih)) return false;
    }
    return true;
}

// ---------------------------------------------------------------- products

void ProductConfig::validate() const {
    base.validate();
    if (!(omega >= 0.0)) throw ValidationError("omega must be >= 0");
    if (!(cover_constant >= 1.0)) throw ValidationError("cover_constant must be >= 1");
    for (std::size_t k = 0; k < f_counts.size(); ++k) {
        if (f_counts[k] == 0) throw ValidationError("F counts must be positive");
        if (k > 0 && f_counts[k] > 2 * f_counts[k - 1]) throw ValidationError("F counts can at most double per level");
    }
}

std::vector<ProductLevel> product_covers(const ProductConfig& pcfg, int k_max, std::size_t max_cubes) {
    pcfg.validate();
    const CantorConfig& cfg = pcfg.base;
    if (k_max < 0) throw ValidationError("k_max must be >= 0");
    const bool user = !pcfg.f_counts.empty();
    if (user && pcfg.f_counts.size() < static_cast<std::size_t>(k_max) + 1)
        throw ValidationError("f_counts must cover levels 0..k_max");
    const double lambda = std::exp2(pcfg.omega);
    CantorConfig c = cfg;
    c.levels = k_max;
    auto elv = build_levels(c);
    CoverOptions copt;

    std::vector<ProductLevel> out;
    std::vector<Interval> fk{{0.0, 1.0}};
    std::size_t nk = 1;
    double tk = 1.0;
    for (int k = 0; k <= k_max; ++k) {
        if (k > 0) {
            tk *= cfg.tau;
            double g = cfg.eta * tk;
            std::size_t target = user ? pcfg.f_counts[k]
                                      : static_cast<std::size_t>(std::floor(pcfg.cover_constant * std::pow(lambda, k) + 1e-9));
            nk = std::min<std::size_t>(2 * nk, std::max<std::size_t>(target, 1));
            std::vector<Interval> next;
            for (const auto& I : fk) {
                double m = I.mid();
                next.push_back({I.lo, m - 0.5 * g});
                next.push_back({m + 0.5 * g, I.hi});
            }
            next.resize(nk);
            fk = std::move(next);
        } else if (user) {
            nk = pcfg.f_counts[0];
            if (nk != 1) throw ValidationError("F starts from a single interval at level 0");
        }
        ProductLevel p;
        p.k = k;
        p.e_count = elv[k].survivors.size();
        p.f_count = fk.size();
        p.count = p.e_count * p.f_count;
        p.bound = pcfg.cover_constant * std::pow(2.0 * lambda, k);
        p.side = cube_side(cfg, k, copt.ring_fraction);
        p.gap = k == 0 ? std::numeric_limits<double>::infinity()
                       : cfg.eta * tk * (1.0 - 2.0 * copt.ring_fraction);
        p.alpha_k = cover_alpha(cfg, k, copt);
        p.f_intervals = fk;
        p.hypothesis_assumed = user;
        if (p.count <= max_cubes)
            for (const auto& F : fk)
                for (const auto& E : elv[k].survivors) p.cubes.push_back(Cube{{E.mid(), F.mid()}, p.side});
        out.push_back(std::move(p));
    }
    return out;
}

// ---------------------------------------------------------------- export

nlohmann::ordered_json to_json(const CantorConfig& c) {
    return {{"eta", c.eta}, {"tau", c.tau}, {"upsilon", c.upsilon()}, {"levels", c.levels},
            {"removed_total", c.removed_total()}};
}

nlohmann::ordered_json to_json(const CoverLevel& c, bool with_cubes) {
    nlohmann::ordered_json j = {{"k", c.k},
                                {"count", c.count()},
                                {"multiplicity", c.multiplicity},
                                {"side", c.side},
                                {"ell_Q", c.ell_Q},
                                {"thickness", c.thickness},
                                {"alpha_k", c.alpha_k},
                                {"alpha_convention", "ring width = alpha_k * side / 2"},
                                {"gap", std::isfinite(c.gap) ? nlohmann::ordered_json(c.gap) : nlohmann::ordered_json(nullptr)}};
    if (with_cubes) {
        auto iv = nlohmann::ordered_json::array(), cu = nlohmann::ordered_json::array();
        for (auto& I : c.intervals) iv.push_back({I.lo, I.hi});
        for (auto& q : c.cubes) cu.push_back({{"center", {q.center[0], q.center[1]}}, {"side", q.side}});
        j["intervals"] = iv;
        j["cubes"] = cu;
    }
    if (!c.mu_R.empty()) {
        j["mu_R"] = c.mu_R;
        j["mu_Q"] = c.mu_Q;
    }
    j["flags"] = c.flags;
    return j;
}

nlohmann::ordered_json to_json(const ProductLevel& p, bool with_cubes) {
    nlohmann::ordered_json j = {{"k", p.k},
                                {"e_count", p.e_count},
                                {"f_count", p.f_count},
                                {"count", p.count},
                                {"bound", p.bound},
                                {"side", p.side},
                                {"gap", std::isfinite(p.gap) ? nlohmann::ordered_json(p.gap) : nlohmann::ordered_json(nullptr)},
                                {"alpha_k", p.alpha_k},
                                {"hypothesis_assumed", p.hypothesis_assumed}};
    if (with_cubes) {
        auto cu = nlohmann::ordered_json::array();
        for (auto& q : p.cubes) cu.push_back({{"center", {q.center[0], q.center[1]}}, {"side", q.side}});
        j["cubes"] = cu;
    }
    return j;
}

std::string cover_csv(const std::vector<CoverLevel>& levels) {
    std::ostringstream os;
    os << "k,index,x_center,y_center,side,alpha_k,mu_R,mu_Q\n";
    char buf[256];
    for (const auto& c : levels)
        for (std::size_t i = 0; i < c.cubes.size(); ++i) {
            double mr = i < c.mu_R.size() ? c.mu_R[i] : std::nan("");
            double mq = i < c.mu_Q.size() ? c.mu_Q[i] : std::nan("");
            std::snprintf(buf, sizeof buf, "%d,%zu,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", c.k, i, c.cubes[i].center[0],
                          c.cubes[i].center[1], c.side, c.alpha_k, mr, mq);
            os << buf;
        }
    return os.str();
}

} // namespace wrem
