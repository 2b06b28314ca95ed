#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "wrem/cantor.hpp"
#include "wrem/weights.hpp"

namespace wrem {

struct PorosityQuery {
    double s = 2.0;
    double p = 1.0;
    double c1 = 1.0;
    double delta = 2.0;
    double sigma = 1.0;
    int n = 2;
    std::string c1_provenance = "user";
    std::string exponent_provenance = "analytic (Lebesgue)";
    void validate() const;
};
nlohmann::ordered_json to_json(const PorosityQuery& q);

enum class Criterion { exact_mu_R, sufficient_mu_Q, sufficient_ell_Q, closed_form };
const char* to_string(Criterion c);

struct Terms {
    std::vector<int> k;
    std::vector<double> log_t;  // natural log of t_k
    std::vector<double> t;      // exp(log_t), may underflow to 0 or overflow to inf
};

// t_k = (sum_Q alpha_Q^{-s c1/(s-1)} mu(R)^{(s-p)/((s-1)p)})^{1-s}, evaluated in the log domain.
Terms criterion_terms(const std::vector<CoverLevel>& levels, const PorosityQuery& q);
// mu(R) replaced by alpha^sigma mu(Q)
Terms sufficient_measureQ(const std::vector<CoverLevel>& levels, const PorosityQuery& q);
// mu(R) replaced by alpha^sigma l(Q)^delta
Terms sufficient_lengthQ(const std::vector<CoverLevel>& levels, const PorosityQuery& q);

struct DivergenceResult {
    SeriesVerdict verdict = SeriesVerdict::inconclusive;
    double ratio = 0.0;  // geometric mean of t_{k+1}/t_k over the tail
    std::size_t tail = 0;
};

// Uses the first `horizon` terms (horizon >= 8); the tail is the last half of their ratios.
DivergenceResult divergence_test(const Terms& terms, std::size_t horizon, double tol = 0.02);
DivergenceResult divergence_test_values(const std::vector<double>& t, std::size_t horizon, double tol = 0.02);

struct ClosedForm {
    bool satisfied = false;
    double lhs = 0.0;
};

ClosedForm cantor_closed_form(double upsilon, double s, double p, double c1, double delta, double sigma);
ClosedForm product_closed_form(double upsilon, double omega, double s, double p, double c1, double delta,
                               double sigma);

struct FeasibleGrid {
    double upsilon_max = 4.0;
    double s_max_factor = 10.0;  // s_max = factor * p
    std::size_t n_upsilon = 60;
    std::size_t n_s = 60;
    double s_cap_factor = 1e6;   // auto-extension stops at s = cap * p
};

struct FeasibleRegion {
    std::vector<double> upsilon, s;
    std::vector<std::uint8_t> mask;  // row-major, mask[i_s * n_upsilon + i_upsilon]
    bool nonempty = false;
    bool predicted_nonempty = false;  // delta/p > 1 + omega
    double s_max = 0.0;
    double upsilon_min = 0.0;
    int extensions = 0;
    std::vector<std::string> flags;
};

FeasibleRegion feasible_region(double p, double c1, double delta, double sigma, double omega = 0.0,
                               const FeasibleGrid& grid = {});

struct PorosityReport {
    PorosityQuery query;
    Criterion criterion = Criterion::exact_mu_R;
    Terms terms;
    DivergenceResult result;
    std::optional<ClosedForm> closed_form;
    std::string provenance;
};
nlohmann::ordered_json to_json(const PorosityReport& r);
nlohmann::ordered_json to_json(const FeasibleRegion& r);

} // namespace wrem
