#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "json.hpp"
#include "wrem/grid.hpp"
#include "wrem/weights.hpp"
#include "wrem/whitney.hpp"

namespace wrem {

// smallest m >= 0 with 2^m alpha >= 1/2
int iteration_count(double alpha);

struct ExtensionOptions {
    WhitneyOptions whitney{};
    double mass_tol = 1e-6;
};

// One reflection step on a fixed grid over Q: a doubling step for alpha < 1/2
// (fills R'), or the half step for alpha >= 1/2 (fills Q \ closure(R)).
class ReflectionExtension {
public:
    ReflectionExtension(const Ring& ring, std::size_t n, const Weight& w, const ExtensionOptions& opt = {});
    ReflectionExtension(const Ring& ring, std::size_t n, std::shared_ptr<const std::vector<double>> masses,
                        const ExtensionOptions& opt = {});

    GridFunction apply(const GridFunction& u) const;
    // u_{D_j*} for every cube
    std::vector<double> cube_averages(const GridFunction& u) const;
    // analytic gradient of sum_j u_{D_j*} phi_j at x
    Point analytic_gradient(const std::vector<double>& averages, Point x) const;

    bool half_step() const { return dec_.half_mode; }
    const Ring& ring() const { return dec_.ring; }
    const WhitneyDecomposition& decomposition() const { return dec_; }
    const BumpFamily& bumps() const { return *bumps_; }
    const Mask& source_mask() const { return source_; }  // cells of R
    const Mask& domain_mask() const { return domain_; }  // cells of 2R, or all of Q
    const Mask& target_mask() const { return target_; }  // cells of R' (or Q \ R)
    const std::vector<double>& masses() const { return *masses_; }
    std::size_t n() const { return n_; }

private:
    void build();

    std::size_t n_;
    std::shared_ptr<const std::vector<double>> masses_;
    WhitneyDecomposition dec_;
    std::unique_ptr<BumpFamily> bumps_;
    Mask source_, domain_, target_;
    // averaging map: rows per cube
    std::vector<std::size_t> avg_ptr_;
    std::vector<std::uint32_t> avg_cell_;
    std::vector<double> avg_coef_;
    // bump map: rows per target cell
    std::vector<std::uint32_t> tcell_;
    std::vector<std::size_t> phi_ptr_;
    std::vector<std::uint32_t> phi_cube_;
    std::vector<double> phi_val_;
};

GridFunction extend_once(const GridFunction& u, const Ring& ring, const Weight& w, const ExtensionOptions& opt = {});
GridFunction extend_half(const GridFunction& u, const Ring& ring, const Weight& w, const ExtensionOptions& opt = {});

struct StepRatio {
    double alpha = 0.0;
    bool half = false;
    double lp_ratio = 0.0;
    double grad_ratio = 0.0;  // NaN when the input gradient vanishes
};

struct ExtensionConstants {
    double C1 = 2.0;
    double C0 = 1.0;
    double c1 = 1.0;
    int m = 0;
    double kappa = 9.0 / 8.0;
    double predicted_bound = 0.0;  // C0 * C1^m
    double measured_lp_ratio = 0.0;
    double measured_grad_ratio = 0.0;
    double raw_C1 = 0.0;  // before the clamp at 2
    std::string provenance = "measured";
    std::vector<std::string> flags;
};
nlohmann::ordered_json to_json(const ExtensionConstants& c);

struct FullExtension {
    GridFunction result;
    Mask source;  // cells of the original ring
    std::vector<StepRatio> steps;
    ExtensionConstants constants;
};

FullExtension extend_full(const GridFunction& u, const Cube& q, double alpha, const Weight& w, double p = 2.0,
                          const ExtensionOptions& opt = {});

struct TestFunction {
    std::string name;
    // r = (x - center) / side: coordinates relative to Q
    std::function<double(Point r)> f;
};
std::vector<TestFunction> default_suite(std::uint64_t seed = 7);

struct SweepRow {
    std::string function;
    double alpha = 0.0;
    double ell = 0.0;
    bool half = false;
    double lp_ratio = 0.0;
    double grad_ratio = 0.0;
};

struct MeasureOptions {
    std::size_t n = 400;  // grid cells per side of Q
    std::vector<double> half_alphas{0.5, 0.8};
    ExtensionOptions ext{};
};

struct MeasuredConstants {
    ExtensionConstants constants;
    std::vector<SweepRow> rows;
    // per (alpha, ell): max one-step ratio over the suite
    std::vector<SweepRow> step_max;
};
nlohmann::ordered_json to_json(const MeasuredConstants& m);

MeasuredConstants measure_constants(const Weight& w, double p, const std::vector<TestFunction>& suite,
                                    const std::vector<double>& alphas, const std::vector<double>& scales,
                                    const MeasureOptions& opt = {});

// ratios of one step applied to u: (||Eu||_domain / ||u||_R, ||grad Eu||_domain / ||grad u||_R)
StepRatio step_ratio(const ReflectionExtension& op, const GridFunction& u, const GridFunction& eu, double p);

} // namespace wrem
