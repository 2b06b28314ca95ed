#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "wrem/geometry.hpp"
#include "wrem/weights.hpp"

namespace wrem {

// Middle-interval Cantor set E in [0,1] on the x-axis: at step k an open interval of
// length eta*tau^k is removed from the middle of every surviving interval.
struct CantorConfig {
    double eta = 0.5;
    double tau = 0.25;
    int levels = 10;

    static CantorConfig from_tau(double eta, double tau, int levels);
    static CantorConfig from_upsilon(double eta, double upsilon, int levels);
    // Both given: tau must equal 2^-upsilon.
    static CantorConfig from_both(double eta, double tau, double upsilon, int levels);

    double upsilon() const;
    // eta*tau/(1-2tau), total removed length
    double removed_total() const;
    void validate() const;
};

struct Interval {
    double lo = 0.0, hi = 0.0;
    double length() const { return hi - lo; }
    double mid() const { return 0.5 * (lo + hi); }
};

struct CantorLevel {
    int k = 0;
    std::vector<Interval> survivors;
    std::vector<Interval> removed;  // intervals removed at this step
};

// Full enumeration for k = 0..levels. 2^levels intervals at the last level.
std::vector<CantorLevel> build_levels(const CantorConfig& cfg, int max_levels = 22);

// Endpoints of one surviving level-k interval obtained by repeated middle removal,
// following the binary digits of `branch` (bit i set = right child at step i+1).
Interval simulate_branch(const CantorConfig& cfg, int k, std::uint64_t branch = 0);

double level_length(const CantorConfig& cfg, int k);

struct CoverOptions {
    double ring_fraction = 1.0 / 3.0;
    double safety = 0.5;
    std::optional<Weight> weight;  // when set, mu_R and mu_Q are measured per cube
    double tol = 1e-10;
    // false: one representative cube standing for `multiplicity` congruent copies
    bool enumerate = true;
};

// Level-k cover of E by congruent squares centered on the x-axis.
// Ring convention: the ring of a cube of side l with relative thickness alpha has
// width alpha*l/2, so alpha_k = 2*thickness/side.
struct CoverLevel {
    int k = 0;
    std::vector<Interval> intervals;
    std::vector<Cube> cubes;
    double multiplicity = 1.0;
    double side = 0.0;
    double thickness = 0.0;
    double alpha_k = 0.0;
    double gap = 0.0;  // smallest distance between distinct cubes
    std::vector<double> mu_R, mu_Q;
    double ell_Q = 0.0;
    std::size_t count() const { return static_cast<std::size_t>(multiplicity) * cubes.size(); }
    std::vector<std::string> flags;
};

double cover_alpha(const CantorConfig& cfg, int k, const CoverOptions& opt = {});
CoverLevel covers(const CantorConfig& cfg, int k, const CoverOptions& opt = {});
std::vector<CoverLevel> cover_levels(const CantorConfig& cfg, int k_min, int k_max, const CoverOptions& opt = {});

// Pairwise disjointness of the cubes of a level (sorted sweep).
bool cubes_disjoint(const CoverLevel& c);
// Every cube of `child` lies inside (1 - alpha_k) times some cube of `parent`.
bool cover_nested(const CoverLevel& parent, const CoverLevel& child);
// Every level-K survivor lies inside the inner cube of the level-k cube that holds it.
bool rings_avoid_set(const CoverLevel& c, const std::vector<Interval>& deeper_survivors);

struct ProductConfig {
    CantorConfig base;
    double omega = 0.0;
    double cover_constant = 1.0;
    // user-supplied per-level F counts; the covering hypothesis is then assumed, not built
    std::vector<std::size_t> f_counts;
    void validate() const;
};

struct ProductLevel {
    int k = 0;
    std::size_t e_count = 0;
    std::size_t f_count = 0;
    std::size_t count = 0;
    double bound = 0.0;  // C (2 lambda)^k
    double side = 0.0;
    double gap = 0.0;
    double alpha_k = 0.0;
    std::vector<Interval> f_intervals;
    std::vector<Cube> cubes;
    bool hypothesis_assumed = false;
};

// Synthetic F: the same interval geometry on the y-axis, keeping at level k the first
// N_k = min(2 N_{k-1}, floor(C lambda^k)) children of the kept level-(k-1) intervals.
std::vector<ProductLevel> product_covers(const ProductConfig& pcfg, int k_max, std::size_t max_cubes = 1u << 20);

nlohmann::ordered_json to_json(const CantorConfig& c);
nlohmann::ordered_json to_json(const CoverLevel& c, bool with_cubes = true);
nlohmann::ordered_json to_json(const ProductLevel& p, bool with_cubes = true);
std::string cover_csv(const std::vector<CoverLevel>& levels);

} // namespace wrem
