#include "wrem/porosity.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "wrem/errors.hpp"

namespace wrem {

void PorosityQuery::validate() const {
    if (!(p >= 1.0)) throw ValidationError("p must be >= 1");
    if (!(s > p)) throw ValidationError("s must be > p");
    if (!(c1 >= 1.0)) throw ValidationError("c1 must be >= 1");
    if (!(sigma > 0.0 && sigma <= 1.0)) throw ValidationError("sigma must lie in (0,1]");
    if (!(delta > 0.0 && delta <= n)) throw ValidationError("delta must lie in (0,n]");
    if (!(delta + 1.0 - n <= sigma + 1e-12)) throw ValidationError("need delta + 1 - n <= sigma");
}

nlohmann::ordered_json to_json(const PorosityQuery& q) {
    return {{"s", q.s},
            {"p", q.p},
            {"c1", q.c1},
            {"delta", q.delta},
            {"sigma", q.sigma},
            {"n", q.n},
            {"c1_provenance", q.c1_provenance},
            {"exponent_provenance", q.exponent_provenance}};
}

const char* to_string(Criterion c) {
    switch (c) {
    case Criterion::exact_mu_R: return "exact-mu(R)";
    case Criterion::sufficient_mu_Q: return "sufficient-mu(Q)";
    case Criterion::sufficient_ell_Q: return "sufficient-ell(Q)";
    case Criterion::closed_form: return "closed-form";
    }
    return "?";
}

namespace {

// log of the annular quantity for cube j of level c
template <class LogMass>
Terms terms_impl(const std::vector<CoverLevel>& levels, const PorosityQuery& q, LogMass log_mass) {
    q.validate();
    const double a_exp = -q.s * q.c1 / (q.s - 1.0);
    const double m_exp = (q.s - q.p) / ((q.s - 1.0) * q.p);
    Terms t;
    for (const auto& lv : levels) {
        if (lv.cubes.empty()) throw ValidationError("cover level without cubes");
        if (!(lv.alpha_k > 0.0)) throw ValidationError("cover level needs alpha_k > 0");
        const double la = std::log(lv.alpha_k);
        std::vector<double> x(lv.cubes.size());
        for (std::size_t j = 0; j < x.size(); ++j) x[j] = a_exp * la + m_exp * log_mass(lv, j);
        double mx = *std::max_element(x.begin(), x.end());
        double acc = 0.0;
        for (double v : x) acc += std::exp(v - mx);
        double log_inner = mx + std::log(acc) + std::log(lv.multiplicity);
        double lt = (1.0 - q.s) * log_inner;
        t.k.push_back(lv.k);
        t.log_t.push_back(lt);
        t.t.push_back(std::exp(lt));
    }
    return t;
}

double positive_log(double v, const char* what) {
    if (!(v > 0.0)) throw ValidationError(std::string(what) + " must be positive");
    return std::log(v);
}

} // namespace

Terms criterion_terms(const std::vector<CoverLevel>& levels, const PorosityQuery& q) {
    for (const auto& lv : levels)
        if (lv.mu_R.size() != lv.cubes.size())
            throw ValidationError("criterion_terms: cover level lacks mu(R); measure rings with measure_ring "
                                  "(set CoverOptions::weight)");
    return terms_impl(levels, q, [](const CoverLevel& lv, std::size_t j) { return positive_log(lv.mu_R[j], "mu(R)"); });
}

Terms sufficient_measureQ(const std::vector<CoverLevel>& levels, const PorosityQuery& q) {
    for (const auto& lv : levels)
        if (lv.mu_Q.size() != lv.cubes.size())
            throw ValidationError("sufficient_measureQ: cover level lacks mu(Q); measure cubes with measure_box "
                                  "(set CoverOptions::weight)");
    return terms_impl(levels, q, [&](const CoverLevel& lv, std::size_t j) {
        return q.sigma * std::log(lv.alpha_k) + positive_log(lv.mu_Q[j], "mu(Q)");
    });
}

Terms sufficient_lengthQ(const std::vector<CoverLevel>& levels, const PorosityQuery& q) {
    return terms_impl(levels, q, [&](const CoverLevel& lv, std::size_t) {
        return q.sigma * std::log(lv.alpha_k) + q.delta * positive_log(lv.ell_Q, "l(Q)");
    });
}

DivergenceResult divergence_test(const Terms& terms, std::size_t horizon, double tol) {
    if (horizon < 8) throw ValidationError("divergence_test needs a horizon of at least 8 terms");
    if (!(tol > 0.0 && tol < 1.0)) throw ValidationError("tol must lie in (0,1)");
    DivergenceResult r;
    std::size_t K = std::min(horizon, terms.log_t.size());
    if (K < 2) return r;
    std::size_t ratios = K - 1;
    std::size_t tail = ratios / 2;
    r.tail = tail;
    std::size_t first = K - 1 - tail;  // index of the first term of the tail
    double sum = 0.0;
    for (std::size_t i = first; i + 1 < K; ++i) sum += terms.log_t[i + 1] - terms.log_t[i];
    r.ratio = tail > 0 ? std::exp(sum / static_cast<double>(tail)) : std::numeric_limits<double>::quiet_NaN();
    if (tail < 4) return r;
    if (r.ratio >= 1.0 + tol) r.verdict = SeriesVerdict::diverges;
    else if (r.ratio <= 1.0 - tol) r.verdict = SeriesVerdict::converges;
    else if (terms.log_t[K - 1] >= terms.log_t[first]) r.verdict = SeriesVerdict::diverges;
    return r;
}

DivergenceResult divergence_test_values(const std::vector<double>& t, std::size_t horizon, double tol) {
    Terms terms;
    for (std::size_t i = 0; i < t.size(); ++i) {
        terms.k.push_back(static_cast<int>(i));
        terms.log_t.push_back(positive_log(t[i], "t_k"));
        terms.t.push_back(t[i]);
    }
    return divergence_test(terms, horizon, tol);
}

ClosedForm cantor_closed_form(double upsilon, double s, double p, double c1, double delta, double sigma) {
    double lhs = (1.0 - s) + (1.0 - upsilon) * (s * c1 + (delta - sigma) * (s - p) / p) + upsilon * delta * (s - p) / p;
    return {lhs >= 0.0, lhs};
}

ClosedForm product_closed_form(double upsilon, double omega, double s, double p, double c1, double delta,
                               double sigma) {
    double lhs = (1.0 + omega) * (1.0 - s) + (1.0 - upsilon) * (s * c1 + (delta - sigma) * (s - p) / p) +
                 upsilon * delta * (s - p) / p;
    return {lhs >= 0.0, lhs};
}

FeasibleRegion feasible_region(double p, double c1, double delta, double sigma, double omega,
                               const FeasibleGrid& grid) {
    if (!(p >= 1.0)) throw ValidationError("p must be >= 1");
    if (!(omega >= 0.0)) throw ValidationError("omega must be >= 0");
    if (!(grid.upsilon_max > 1.0)) throw ValidationError("upsilon_max must be > 1");
    if (!(grid.s_max_factor > 1.0)) throw ValidationError("s_max_factor must be > 1");
    if (grid.n_upsilon < 1 || grid.n_s < 1) throw ValidationError("grid needs at least one point per axis");
    FeasibleRegion r;
    r.predicted_nonempty = delta / p > 1.0 + omega;
    double s_max = grid.s_max_factor * p, u_max = grid.upsilon_max;
    for (;;) {
        r.upsilon.clear();
        r.s.clear();
        for (std::size_t i = 0; i < grid.n_upsilon; ++i)
            r.upsilon.push_back(1.0 + (u_max - 1.0) * static_cast<double>(i + 1) / static_cast<double>(grid.n_upsilon));
        for (std::size_t j = 0; j < grid.n_s; ++j)
            r.s.push_back(p + (s_max - p) * static_cast<double>(j + 1) / static_cast<double>(grid.n_s));
        r.mask.assign(grid.n_upsilon * grid.n_s, 0);
        r.nonempty = false;
        for (std::size_t j = 0; j < grid.n_s; ++j)
            for (std::size_t i = 0; i < grid.n_upsilon; ++i) {
                bool ok = product_closed_form(r.upsilon[i], omega, r.s[j], p, c1, delta, sigma).satisfied;
                r.mask[j * grid.n_upsilon + i] = ok;
                r.nonempty = r.nonempty || ok;
            }
        r.s_max = s_max;
        r.upsilon_min = r.upsilon.front();
        if (r.nonempty || !r.predicted_nonempty) break;
        if (s_max * 4.0 > grid.s_cap_factor * p) {
            r.flags.push_back("inconsistency: region empty at the s cap although delta/p > 1 + omega");
            break;
        }
        s_max *= 4.0;
        u_max = 1.0 + 0.5 * (u_max - 1.0);
        ++r.extensions;
    }
    if (r.extensions > 0) r.flags.push_back("grid auto-extended " + std::to_string(r.extensions) + " times");
    if (!r.nonempty && !r.predicted_nonempty) r.flags.push_back("empty on the sampled grid (not a proof of emptiness)");
    return r;
}

namespace {

nlohmann::ordered_json finite_or_null(double v) {
    if (std::isfinite(v)) return v;
    return nullptr;
}

} // namespace

nlohmann::ordered_json to_json(const PorosityReport& r) {
    nlohmann::ordered_json j;
    j["query"] = to_json(r.query);
    j["criterion_used"] = to_string(r.criterion);
    auto tk = nlohmann::ordered_json::array(), lt = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < r.terms.t.size(); ++i) {
        tk.push_back(finite_or_null(r.terms.t[i]));
        lt.push_back(finite_or_null(r.terms.log_t[i]));
    }
    j["k"] = r.terms.k;
    j["t_k"] = tk;
    j["log_t_k"] = lt;
    j["ratio"] = finite_or_null(r.result.ratio);
    j["verdict"] = to_string(r.result.verdict);
    if (r.closed_form) j["closed_form"] = {{"lhs", r.closed_form->lhs}, {"satisfied", r.closed_form->satisfied}};
    j["provenance"] = r.provenance;
    return j;
}

nlohmann::ordered_json to_json(const FeasibleRegion& r) {
    return {{"upsilon", r.upsilon},      {"s", r.s},
            {"mask", r.mask},            {"nonempty", r.nonempty},
            {"predicted_nonempty", r.predicted_nonempty},
            {"s_max", r.s_max},          {"upsilon_min", r.upsilon_min},
            {"extensions", r.extensions}, {"flags", r.flags}};
}

} // namespace wrem
