#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "wrem/cantor.hpp"
#include "wrem/errors.hpp"
#include "wrem/extension.hpp"
#include "wrem/grid.hpp"
#include "wrem/porosity.hpp"
#include "wrem/report.hpp"
#include "wrem/weights.hpp"
#include "wrem/whitney.hpp"

using namespace wrem;
using ojson = nlohmann::ordered_json;

namespace {

struct WeightArgs {
    std::string name = "const";
    double gamma = 0.0;
    double beta = 0.0;
    std::vector<double> center{0.0, 0.0};
    std::string json_spec;

    void add(CLI::App* app) {
        app->add_option("--weight", name, "const | power | distance")->capture_default_str();
        app->add_option("--gamma", gamma, "exponent of |x - center|^gamma (power weight)");
        app->add_option("--beta", beta, "exponent of dist(x, center)^beta (distance weight)");
        app->add_option("--center", center, "singular point of the weight")->expected(2)->capture_default_str();
        app->add_option("--weight-json", json_spec, "weight as JSON text or @file");
    }

    Weight build() const {
        if (!json_spec.empty()) {
            ojson j = json_spec[0] == '@' ? read_json_file(json_spec.substr(1)) : parse_json(json_spec);
            return weight_from_json(j);
        }
        if (center.size() != 2) throw ValidationError("--center needs two values");
        Point c{center[0], center[1]};
        if (name == "const" || name == "constant") return constant_weight();
        if (name == "power") return power_weight(gamma, c);
        if (name == "distance") return distance_power_weight(beta, {c});
        throw ValidationError("unknown weight: " + name);
    }

    bool singular() const { return name == "power" || name == "distance" || !json_spec.empty(); }
};

void emit(const ojson& j, const std::string& out) {
    std::string text = dump_json(j);
    if (out.empty() || out == "-") std::cout << text;
    else write_text_file(out, text);
}

ojson num(double v) {
    if (std::isfinite(v)) return v;
    return nullptr;
}

std::string alpha_tag(double a) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", a);
    return buf;
}

// ---------------------------------------------------------------- weight-profile

struct WeightProfileArgs {
    WeightArgs weight;
    double domain_side = 2.0;
    std::size_t samples = 200;
    std::uint64_t seed = 20240601;
    std::vector<double> alphas{0.05, 0.1, 0.2, 0.3, 0.4, 0.5};
    double tol = 1e-8;
    std::string out;
};

int cmd_weight_profile(const WeightProfileArgs& a) {
    if (!(a.domain_side > 0.0)) throw ValidationError("--domain-side must be positive");
    if (a.samples < 8) throw ValidationError("--samples must be >= 8");
    Weight w = a.weight.build();
    Cube domain{{0.0, 0.0}, a.domain_side};
    ExponentOptions opt;
    opt.tol = a.tol;
    if (a.weight.singular()) {
        if (!w.singular_points.empty()) opt.anchor = w.singular_points.front();
        else if (a.weight.center.size() == 2) opt.anchor = Point{a.weight.center[0], a.weight.center[1]};
    }
    WeightExponents e = estimate_doubling(w, domain, a.samples, a.seed, opt);
    WeightExponents s = estimate_annular_decay(w, domain, a.alphas, a.samples, a.seed, opt, e.delta);
    e.sigma = s.sigma;
    e.sigma_constant = s.sigma_constant;
    e.sigma_residual = s.sigma_residual;
    e.monotone_in_alpha = s.monotone_in_alpha;
    for (auto& f : s.flags) e.flags.push_back(f);
    if (opt.anchor)
        e.flags.push_back("samples anchored at the weight singularity (" + std::to_string(e.anchored_samples) +
                          " of " + std::to_string(e.samples) + ")");

    ojson cfg = {{"weight", weight_to_json(w)},
                 {"domain_side", a.domain_side},
                 {"samples", a.samples},
                 {"seed", a.seed},
                 {"alphas", a.alphas},
                 {"tol", a.tol}};
    ojson j = report_header("weight-profile", cfg);
    j["exponents"] = to_json(e);
    if (w.constant) j["analytic"] = to_json(lebesgue_exponents());
    emit(j, a.out);
    return 0;
}

// ---------------------------------------------------------------- extend-verify

struct ExtendArgs {
    WeightArgs weight;
    double p = 2.0;
    std::vector<double> alphas{0.4, 0.2, 0.1};
    std::vector<double> scales{1.0, 0.5};
    std::vector<double> half_alphas{0.5, 0.8};
    std::size_t n = 400;
    std::uint64_t seed = 7;
    double kappa = 9.0 / 8.0;
    std::string export_grids;
    std::string export_whitney;
    std::string out;
};

int cmd_extend_verify(const ExtendArgs& a) {
    Weight w = a.weight.build();
    if (a.alphas.empty()) throw ValidationError("--alpha needs at least one value");
    for (double al : a.alphas)
        if (!(al > 0.0 && al < 1.0)) throw ValidationError("alpha must lie in (0,1)");
    std::vector<double> one_step;
    for (double al : a.alphas)
        if (al < 0.5) one_step.push_back(al);
    MeasureOptions mo;
    mo.n = a.n;
    mo.half_alphas = a.half_alphas;
    mo.ext.whitney.kappa = a.kappa;
    auto suite = default_suite(a.seed);
    MeasuredConstants mc = measure_constants(w, a.p, suite, one_step, a.scales, mo);

    ojson full = ojson::array();
    Cube q{{0.0, 0.0}, 1.0};
    if (!a.export_grids.empty()) std::filesystem::create_directories(a.export_grids);
    for (double al : a.alphas) {
        for (const auto& f : suite) {
            GridFunction u = GridFunction::sample(q, a.n, [&](Point x) { return f.f(x); });
            FullExtension fe = extend_full(u, q, al, w, a.p, mo.ext);
            double prod = 1.0;
            for (auto& s : fe.steps) prod *= s.lp_ratio;
            full.push_back({{"function", f.name},
                            {"alpha", al},
                            {"m", fe.constants.m},
                            {"measured_lp_ratio", num(fe.constants.measured_lp_ratio)},
                            {"measured_grad_ratio", num(fe.constants.measured_grad_ratio)},
                            {"product_of_step_lp_ratios", num(prod)},
                            {"suite_bound", num(mc.constants.C0 * std::pow(mc.constants.C1, fe.constants.m))}});
            if (!a.export_grids.empty()) {
                std::ostringstream os;
                write_csv(fe.result, os);
                write_text_file(a.export_grids + "/" + f.name + "_alpha" + alpha_tag(al) + ".csv", os.str());
            }
        }
        if (!a.export_whitney.empty() && al < 0.5 && al == a.alphas.front()) {
            WhitneyOptions wo;
            wo.kappa = a.kappa;
            auto dec = decompose(Ring{q, al}, wo);
            reflect(dec);
            connectors(dec);
            ojson wj = report_header("extend-verify/whitney", {{"alpha", al}, {"kappa", a.kappa}});
            wj["decomposition"] = to_json(dec);
            wj["stats"] = to_json(compute_stats(dec));
            emit(wj, a.export_whitney);
        }
    }

    ojson cfg = {{"weight", weight_to_json(w)},
                 {"p", a.p},
                 {"alphas", a.alphas},
                 {"scales", a.scales},
                 {"half_alphas", a.half_alphas},
                 {"n", a.n},
                 {"seed", a.seed},
                 {"kappa", a.kappa}};
    ojson j = report_header("extend-verify", cfg);
    j["measured"] = to_json(mc);
    j["full_extension"] = full;
    emit(j, a.out);
    return 0;
}

// ---------------------------------------------------------------- porosity

struct PorosityArgs {
    WeightArgs weight;
    double eta = 0.5;
    std::optional<double> tau, upsilon;
    double s = 3.0, p = 1.0;
    std::optional<double> c1, delta, sigma;
    double omega = 0.0;
    int k_min = 1, levels = 14;
    std::string criterion = "exact";
    double tol = 0.02;
    double ring_fraction = 1.0 / 3.0, safety = 0.5;
    bool region = false;
    std::size_t n = 400;
    std::uint64_t seed = 7;
    std::string csv, region_csv, out;
};

double upsilon_of(const std::optional<double>& tau, const std::optional<double>& ups) {
    if (tau && ups) {
        if (std::abs(*tau - std::exp2(-*ups)) > 1e-12 * *tau)
            throw ValidationError("tau and upsilon disagree: tau must equal 2^-upsilon");
        return *ups;
    }
    if (ups) return *ups;
    if (tau) {
        if (!(*tau > 0.0 && *tau < 0.5)) throw ValidationError("tau must lie in (0,1/2)");
        return -std::log2(*tau);
    }
    throw ValidationError("give --tau or --upsilon");
}

int cmd_porosity(const PorosityArgs& a) {
    const bool closed = a.criterion == "closed-form";
    if (!(closed || a.criterion == "exact" || a.criterion == "measureQ" || a.criterion == "lengthQ"))
        throw ValidationError("--criterion must be exact, measureQ, lengthQ or closed-form");
    Weight w = a.weight.build();
    const double ups = upsilon_of(a.tau, a.upsilon);
    if (!(ups > 1.0)) throw ValidationError("upsilon must be > 1");

    PorosityQuery q;
    q.s = a.s;
    q.p = a.p;
    // shape checks first, so bad exponents fail before any measurement
    {
        PorosityQuery probe = q;
        probe.c1 = 1.0;
        probe.validate();
    }
    if (a.delta && a.sigma) {
        q.delta = *a.delta;
        q.sigma = *a.sigma;
        q.exponent_provenance = "user";
    } else if (w.constant) {
        q.delta = a.delta.value_or(2.0);
        q.sigma = a.sigma.value_or(1.0);
        q.exponent_provenance = "analytic (Lebesgue)";
    } else {
        if (closed) throw ValidationError("closed-form mode needs --delta and --sigma for non-constant weights");
        Cube domain{{0.0, 0.0}, 2.0};
        ExponentOptions eo;
        if (!w.singular_points.empty()) eo.anchor = w.singular_points.front();
        WeightExponents e = estimate_doubling(w, domain, 200, a.seed, eo);
        WeightExponents s = estimate_annular_decay(w, domain, {0.05, 0.1, 0.2, 0.3, 0.4, 0.5}, 200, a.seed, eo, e.delta);
        q.delta = a.delta.value_or(e.delta);
        q.sigma = a.sigma.value_or(s.sigma);
        q.exponent_provenance = "estimated (weight-profile defaults)";
    }
    if (a.c1) {
        q.c1 = *a.c1;
        q.c1_provenance = "user";
    } else {
        if (closed && !w.constant) throw ValidationError("closed-form mode needs --c1 for non-constant weights");
        MeasureOptions mo;
        mo.n = a.n;
        MeasuredConstants mc = measure_constants(w, a.p, default_suite(a.seed), {0.4, 0.2, 0.1}, {1.0}, mo);
        q.c1 = mc.constants.c1;
        q.c1_provenance = "measured: log2 of the max one-step ratio, default suite, n=" + std::to_string(a.n);
    }
    q.validate();

    PorosityReport rep;
    rep.query = q;
    ClosedForm cf = a.omega > 0.0 ? product_closed_form(ups, a.omega, q.s, q.p, q.c1, q.delta, q.sigma)
                                  : cantor_closed_form(ups, q.s, q.p, q.c1, q.delta, q.sigma);
    rep.closed_form = cf;
    ojson cfg = {{"weight", weight_to_json(w)},
                 {"eta", a.eta},
                 {"upsilon", ups},
                 {"tau", std::exp2(-ups)},
                 {"omega", a.omega},
                 {"criterion", a.criterion},
                 {"k_min", a.k_min},
                 {"levels", a.levels},
                 {"tol", a.tol},
                 {"ring_fraction", a.ring_fraction},
                 {"safety", a.safety}};
    if (closed) {
        rep.criterion = Criterion::closed_form;
        rep.result.verdict = cf.satisfied ? SeriesVerdict::diverges : SeriesVerdict::converges;
        rep.result.ratio = std::exp2(cf.lhs);
        rep.provenance = "closed form; ratio = 2^lhs is the exact term ratio of the geometric series";
    } else {
        if (a.omega > 0.0) throw ValidationError("product sets are only supported in closed-form mode");
        CantorConfig cfg_c = CantorConfig::from_upsilon(a.eta, ups, a.levels);
        CoverOptions co;
        co.ring_fraction = a.ring_fraction;
        co.safety = a.safety;
        if (a.criterion != "lengthQ") co.weight = w;
        auto levels = cover_levels(cfg_c, a.k_min, a.levels, co);
        if (a.criterion == "exact") {
            rep.criterion = Criterion::exact_mu_R;
            rep.terms = criterion_terms(levels, q);
        } else if (a.criterion == "measureQ") {
            rep.criterion = Criterion::sufficient_mu_Q;
            rep.terms = sufficient_measureQ(levels, q);
        } else {
            rep.criterion = Criterion::sufficient_ell_Q;
            rep.terms = sufficient_lengthQ(levels, q);
        }
        rep.result = divergence_test(rep.terms, rep.terms.log_t.size(), a.tol);
        rep.provenance = "generated covers k=" + std::to_string(a.k_min) + ".." + std::to_string(a.levels) +
                         "; ratio test on the tail";
    }
    ojson j = report_header("porosity", cfg);
    j["report"] = to_json(rep);
    if (!a.csv.empty()) {
        std::ostringstream os;
        os << "k,t_k,log_t_k\n";
        char buf[128];
        for (std::size_t i = 0; i < rep.terms.k.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g\n", rep.terms.k[i], rep.terms.t[i], rep.terms.log_t[i]);
            os << buf;
        }
        write_text_file(a.csv, os.str());
    }
    if (a.region || !a.region_csv.empty()) {
        FeasibleRegion fr = feasible_region(q.p, q.c1, q.delta, q.sigma, a.omega);
        j["feasible_region"] = to_json(fr);
        if (!a.region_csv.empty()) {
            std::ostringstream os;
            os << "upsilon,s,satisfied\n";
            char buf[128];
            for (std::size_t js = 0; js < fr.s.size(); ++js)
                for (std::size_t iu = 0; iu < fr.upsilon.size(); ++iu) {
                    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%d\n", fr.upsilon[iu], fr.s[js],
                                  fr.mask[js * fr.upsilon.size() + iu]);
                    os << buf;
                }
            write_text_file(a.region_csv, os.str());
        }
    }
    emit(j, a.out);
    return 0;
}

// ---------------------------------------------------------------- cantor-gen

struct CantorArgs {
    WeightArgs weight;
    double eta = 0.5;
    std::optional<double> tau, upsilon;
    int levels = 6;
    double ring_fraction = 1.0 / 3.0, safety = 0.5;
    bool measures = false;
    std::optional<double> omega;
    double cover_constant = 1.0;
    std::size_t max_cubes = 4096;
    std::string csv, out;
};

int cmd_cantor_gen(const CantorArgs& a) {
    const double ups = upsilon_of(a.tau, a.upsilon);
    CantorConfig cfg = CantorConfig::from_upsilon(a.eta, ups, a.levels);
    CoverOptions co;
    co.ring_fraction = a.ring_fraction;
    co.safety = a.safety;
    if (a.measures) co.weight = a.weight.build();
    auto levels = cover_levels(cfg, 0, a.levels, co);
    CantorConfig deep = cfg;
    deep.levels = std::min(a.levels + 4, 22);
    auto survivors = build_levels(deep).back().survivors;

    ojson lv = ojson::array();
    for (std::size_t i = 0; i < levels.size(); ++i) {
        const auto& c = levels[i];
        ojson e = to_json(c, c.cubes.size() <= a.max_cubes);
        e["level_length"] = level_length(cfg, c.k);
        e["checks"] = {{"disjoint", cubes_disjoint(c)},
                       {"nested_in_parent", i == 0 ? true : cover_nested(levels[i - 1], c)},
                       {"rings_avoid_E", rings_avoid_set(c, survivors)}};
        if (!c.mu_Q.empty()) {
            double total = 0.0;
            for (double m : c.mu_Q) total += m;
            e["mu_union"] = total;
        }
        lv.push_back(e);
    }
    ojson cfgj = {{"cantor", to_json(cfg)}, {"ring_fraction", a.ring_fraction}, {"safety", a.safety},
                  {"measures", a.measures}};
    if (a.measures) cfgj["weight"] = weight_to_json(*co.weight);
    ojson j = report_header("cantor-gen", cfgj);
    j["levels"] = lv;
    if (a.omega) {
        ProductConfig pc{cfg, *a.omega, a.cover_constant, {}};
        ojson pl = ojson::array();
        for (auto& p : product_covers(pc, a.levels, a.max_cubes)) pl.push_back(to_json(p, p.cubes.size() <= a.max_cubes));
        j["product"] = {{"omega", *a.omega}, {"lambda", std::exp2(*a.omega)}, {"cover_constant", a.cover_constant},
                        {"levels", pl}};
    }
    if (!a.csv.empty()) write_text_file(a.csv, cover_csv(levels));
    emit(j, a.out);
    return 0;
}

// ---------------------------------------------------------------- sweep

struct SweepArgs {
    double p = 1.0, c1 = 1.0, delta = 2.0, sigma = 1.0, omega = 0.0;
    FeasibleGrid grid;
    std::string csv, out;
};

int cmd_sweep(const SweepArgs& a) {
    FeasibleRegion fr = feasible_region(a.p, a.c1, a.delta, a.sigma, a.omega, a.grid);
    ojson cfg = {{"p", a.p},
                 {"c1", a.c1},
                 {"delta", a.delta},
                 {"sigma", a.sigma},
                 {"omega", a.omega},
                 {"upsilon_max", a.grid.upsilon_max},
                 {"s_max_factor", a.grid.s_max_factor},
                 {"n_upsilon", a.grid.n_upsilon},
                 {"n_s", a.grid.n_s}};
    ojson j = report_header("sweep", cfg);
    j["region"] = to_json(fr);
    if (!a.csv.empty()) {
        std::ostringstream os;
        os << "upsilon,s,lhs,satisfied\n";
        char buf[160];
        for (std::size_t js = 0; js < fr.s.size(); ++js)
            for (std::size_t iu = 0; iu < fr.upsilon.size(); ++iu) {
                ClosedForm cf = product_closed_form(fr.upsilon[iu], a.omega, fr.s[js], a.p, a.c1, a.delta, a.sigma);
                std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%d\n", fr.upsilon[iu], fr.s[js], cf.lhs, cf.satisfied ? 1 : 0);
                os << buf;
            }
        write_text_file(a.csv, os.str());
    }
    emit(j, a.out);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Weighted removability toolkit"};
    app.set_config("--config", "", "INI/TOML file with option defaults (command-line flags win)");
    app.require_subcommand(1);

    WeightProfileArgs wp;
    auto* c_wp = app.add_subcommand("weight-profile", "doubling constant and homogeneity / annular-decay exponents");
    wp.weight.add(c_wp);
    c_wp->add_option("--domain-side", wp.domain_side)->capture_default_str();
    c_wp->add_option("--samples", wp.samples)->capture_default_str();
    c_wp->add_option("--seed", wp.seed)->capture_default_str();
    c_wp->add_option("--alphas", wp.alphas)->capture_default_str();
    c_wp->add_option("--tol", wp.tol)->capture_default_str();
    c_wp->add_option("--out", wp.out, "output file (default stdout)");

    ExtendArgs ex;
    auto* c_ex = app.add_subcommand("extend-verify", "measure extension operator constants");
    ex.weight.add(c_ex);
    c_ex->add_option("--p", ex.p)->capture_default_str();
    c_ex->add_option("--alpha", ex.alphas, "ring thicknesses (values >= 1/2 only run the half step)")->capture_default_str();
    c_ex->add_option("--scales", ex.scales)->capture_default_str();
    c_ex->add_option("--half-alphas", ex.half_alphas)->capture_default_str();
    c_ex->add_option("--n", ex.n, "grid cells per side")->capture_default_str();
    c_ex->add_option("--seed", ex.seed)->capture_default_str();
    c_ex->add_option("--kappa", ex.kappa)->capture_default_str();
    c_ex->add_option("--export-grids", ex.export_grids, "directory for CSV grids of the extended test functions");
    c_ex->add_option("--export-whitney", ex.export_whitney, "JSON file for the first alpha's decomposition");
    c_ex->add_option("--out", ex.out);

    PorosityArgs po;
    auto* c_po = app.add_subcommand("porosity", "evaluate the (s,p)-porosity criteria for a Cantor set");
    po.weight.add(c_po);
    c_po->add_option("--eta", po.eta)->capture_default_str();
    c_po->add_option("--tau", po.tau);
    c_po->add_option("--upsilon", po.upsilon);
    c_po->add_option("--s", po.s)->capture_default_str();
    c_po->add_option("--p", po.p)->capture_default_str();
    c_po->add_option("--c1", po.c1, "default: measured from the extension operator");
    c_po->add_option("--delta", po.delta);
    c_po->add_option("--sigma", po.sigma);
    c_po->add_option("--omega", po.omega, "product exponent (closed-form mode)")->capture_default_str();
    c_po->add_option("--k-min", po.k_min)->capture_default_str();
    c_po->add_option("--levels", po.levels)->capture_default_str();
    c_po->add_option("--criterion", po.criterion, "exact | measureQ | lengthQ | closed-form")->capture_default_str();
    c_po->add_option("--tol", po.tol)->capture_default_str();
    c_po->add_option("--ring-fraction", po.ring_fraction)->capture_default_str();
    c_po->add_option("--safety", po.safety)->capture_default_str();
    c_po->add_flag("--region", po.region, "also compute the feasible (upsilon, s) region");
    c_po->add_option("--n", po.n, "grid size when c1 is measured")->capture_default_str();
    c_po->add_option("--seed", po.seed)->capture_default_str();
    c_po->add_option("--csv", po.csv, "t_k plot data");
    c_po->add_option("--region-csv", po.region_csv, "feasible-region mask plot data");
    c_po->add_option("--out", po.out);

    CantorArgs ca;
    auto* c_ca = app.add_subcommand("cantor-gen", "generate Cantor covers");
    ca.weight.add(c_ca);
    c_ca->add_option("--eta", ca.eta)->capture_default_str();
    c_ca->add_option("--tau", ca.tau);
    c_ca->add_option("--upsilon", ca.upsilon);
    c_ca->add_option("--levels", ca.levels)->capture_default_str();
    c_ca->add_option("--ring-fraction", ca.ring_fraction)->capture_default_str();
    c_ca->add_option("--safety", ca.safety)->capture_default_str();
    c_ca->add_flag("--measures", ca.measures, "measure mu(R), mu(Q) per cube");
    c_ca->add_option("--omega", ca.omega, "also count product covers E x F");
    c_ca->add_option("--cover-constant", ca.cover_constant)->capture_default_str();
    c_ca->add_option("--max-cubes", ca.max_cubes, "omit cube lists above this size")->capture_default_str();
    c_ca->add_option("--csv", ca.csv);
    c_ca->add_option("--out", ca.out);

    SweepArgs sw;
    auto* c_sw = app.add_subcommand("sweep", "feasible (upsilon, s) region of the closed-form criteria");
    c_sw->add_option("--p", sw.p)->capture_default_str();
    c_sw->add_option("--c1", sw.c1)->capture_default_str();
    c_sw->add_option("--delta", sw.delta)->capture_default_str();
    c_sw->add_option("--sigma", sw.sigma)->capture_default_str();
    c_sw->add_option("--omega", sw.omega)->capture_default_str();
    c_sw->add_option("--upsilon-max", sw.grid.upsilon_max)->capture_default_str();
    c_sw->add_option("--s-max-factor", sw.grid.s_max_factor)->capture_default_str();
    c_sw->add_option("--n-upsilon", sw.grid.n_upsilon)->capture_default_str();
    c_sw->add_option("--n-s", sw.grid.n_s)->capture_default_str();
    c_sw->add_option("--csv", sw.csv);
    c_sw->add_option("--out", sw.out);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (c_wp->parsed()) return cmd_weight_profile(wp);
        if (c_ex->parsed()) return cmd_extend_verify(ex);
        if (c_po->parsed()) return cmd_porosity(po);
        if (c_ca->parsed()) return cmd_cantor_gen(ca);
        if (c_sw->parsed()) return cmd_sweep(sw);
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ResourceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ConvergenceError& e) {
        std::cerr << "error: " << e.what() << " (best estimate " << e.best_estimate << ", achieved tolerance "
                  << e.achieved_tolerance << ")\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
