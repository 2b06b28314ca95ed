#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "wrem/geometry.hpp"

namespace wrem {

using json = nlohmann::ordered_json;

struct Segment {
    Point a{}, b{};
};

struct Weight {
    std::string name;
    json params;
    std::function<double(Point)> density;
    std::vector<Point> singular_points;
    std::vector<Segment> singular_segments;
    // set when the measure of a rectangle is known in closed form
    std::function<double(const Rect&)> exact_measure;
    bool constant = false;

    double operator()(Point x) const { return density(x); }
};

Weight constant_weight(double c = 1.0);
Weight power_weight(double gamma, Point x0 = {0.0, 0.0});
Weight distance_power_weight(double beta, std::vector<Point> points, std::vector<Segment> segments = {});
Weight product_weight(const std::vector<Weight>& factors);
Weight custom_weight(std::string name, std::function<double(Point)> f, std::vector<Point> singular = {});

Weight weight_from_json(const json& j);
json weight_to_json(const Weight& w);

struct MeasureEstimate {
    double value = 0.0;
    double error = 0.0;
    std::size_t evals = 0;
};
json to_json(const MeasureEstimate& m);

struct QuadOptions {
    double tol = 1e-8;          // relative
    double abs_floor = 1e-300;  // absolute floor for the stopping test
    std::size_t max_evals = 20'000'000;
};

MeasureEstimate measure_rect(const Weight& w, const Rect& r, const QuadOptions& opt = {});
MeasureEstimate measure_box(const Weight& w, const Cube& q, double tol = 1e-8);
MeasureEstimate measure_ring(const Weight& w, const Ring& r, double tol = 1e-8);

struct ExponentOptions {
    double ell_min_fraction = 1.0 / 64.0;  // smallest sampled side relative to the domain
    double t_min = 1.0 / 32.0;             // smallest r/rho for nested pairs
    std::optional<Point> anchor;           // extra samples centered here (weight singularities)
    double anchor_fraction = 0.25;
    int bins = 8;
    double tol = 1e-8;
};

struct WeightExponents {
    double doubling_constant = 0.0;
    double delta = 0.0;
    double delta_prime = 0.0;
    double delta_constant = 0.0;        // C in ratio <= C t^delta
    double delta_prime_constant = 0.0;  // C' in ratio >= C' t^delta'
    double delta_residual = 0.0;
    double delta_prime_residual = 0.0;
    double sigma = 0.0;
    double sigma_constant = 0.0;
    double sigma_residual = 0.0;
    bool monotone_in_alpha = true;
    std::size_t samples = 0;
    std::size_t anchored_samples = 0;
    std::vector<std::string> flags;
    std::string provenance = "estimated";
};
json to_json(const WeightExponents& e);

// Analytic exponents for the Lebesgue weight.
WeightExponents lebesgue_exponents();

WeightExponents estimate_doubling(const Weight& w, const Cube& domain, std::size_t samples,
                                  std::uint64_t seed = 20240601, const ExponentOptions& opt = {});

// Fills the sigma fields. delta, if given, enforces sigma >= delta + 1 - n.
WeightExponents estimate_annular_decay(const Weight& w, const Cube& domain, const std::vector<double>& alphas,
                                       std::size_t samples, std::uint64_t seed = 20240601,
                                       const ExponentOptions& opt = {},
                                       std::optional<double> delta = std::nullopt);

enum class SeriesVerdict { converges, diverges, inconclusive };
const char* to_string(SeriesVerdict v);

struct IntegrabilityReport {
    bool finite = false;  // analytic: gamma > n(p-1)
    double exponent = 0.0;  // -np + gamma
    SeriesVerdict quadrature = SeriesVerdict::inconclusive;
    std::vector<double> shells;        // mass of dyadic sup-norm shells 2^-(j+1) < |x| <= 2^-j
    std::vector<double> partial_sums;
    double shell_ratio = 0.0;          // last measured shell ratio
};
json to_json(const IntegrabilityReport& r);

IntegrabilityReport power_integrability(int n, double p, double gamma, int shells = 20);

} // namespace wrem
