#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "json.hpp"
#include "wrem/geometry.hpp"

namespace wrem {

// Hash grid over rectangles of many sizes: one uniform level per power-of-two size class.
class RectIndex {
public:
    void insert(std::uint32_t id, const Rect& r);
    // ids whose rectangles meet the open query rectangle
    void query(const Rect& q, std::vector<std::uint32_t>& out) const;
    // ids whose closed rectangles contain p
    void query(Point p, std::vector<std::uint32_t>& out) const;
    std::size_t size() const { return rects_.size(); }

private:
    struct Level {
        double cell = 1.0;
        std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> bins;
        std::vector<std::uint32_t> members;
    };
    static std::uint64_t key(std::int64_t i, std::int64_t j);
    Level& level_for(double side);

    std::vector<Rect> rects_;  // indexed by insertion order
    std::vector<std::uint32_t> ids_;
    std::unordered_map<int, Level> levels_;
    mutable std::vector<std::uint32_t> stamp_;
    mutable std::uint32_t epoch_ = 0;
};

enum class Zone : std::uint8_t { face, corner };

struct WhitneyCube {
    Rect cube;
    double side = 0.0;
    int layer = 0;
    bool final_layer = false;
    Zone zone = Zone::face;
    Rect reflected;
    bool has_reflection = false;
    bool shrunk = false;
};

struct Connector {
    std::uint32_t j = 0, j0 = 0;
    Rect t;
    bool contained = true;
    bool shifted = false;
    bool clipped = false;  // t extends outside R; the connector is t intersected with R
};

struct WhitneyOptions {
    double kappa = 9.0 / 8.0;
    int i_cap = 6;
    double connector_dilation = 1.1;
    std::size_t max_cubes = 4'000'000;
    double snap_tol = 1e-9;
};

class WhitneyDecomposition {
public:
    Ring ring;
    bool half_mode = false;  // covers all of Q \ closure(R) instead of R'
    WhitneyOptions options;

    Point center{};
    double a = 0.0;       // interface half-width, (1 - alpha) l / 2
    double depth = 0.0;   // thickness of the covered band (>= nominal when snapped)
    double source_outer = 0.0;
    double s0 = 0.0;      // layer-0 side
    int n0 = 0;           // 2a / s0
    int layers = 0;       // regular layers, the final interface layer not included
    bool snapped = false; // 4a / W was not an integer
    double overhang = 0.0;
    double strip_area = 0.0;

    std::vector<WhitneyCube> cubes;
    std::vector<std::vector<std::uint32_t>> neighbors;  // j0 -> { j : kappa D_j meets D_j0 }, includes j0
    std::vector<Connector> connectors;
    std::vector<std::string> flags;
    RectIndex cube_index;    // D_j
    RectIndex kappa_index;   // kappa D_j

    SquareAnnulus target() const;   // R' (or the punctured inner square in half mode)
    SquareAnnulus source() const;   // R
    double interface_distance(const Rect& r) const;  // sup-distance from r to the interface square
};

WhitneyDecomposition decompose(const Ring& ring, const WhitneyOptions& opt = {});
WhitneyDecomposition decompose_interior(const Ring& ring, const WhitneyOptions& opt = {});
void reflect(WhitneyDecomposition& dec);
void connectors(WhitneyDecomposition& dec);

struct WhitneyStats {
    std::size_t cubes = 0;
    int layers = 0;
    double final_side = 0.0;
    double target_area = 0.0;
    double strip_area = 0.0;
    double coverage_defect = 0.0;
    double max_pair_overlap = 0.0;
    double a2_ratio = 0.0;
    double a3_constant = 0.0;
    int a4_overlap = 0;
    double b1_size_min = 0.0, b1_size_max = 0.0;
    double b1_dist_min = 0.0, b1_dist_max = 0.0;
    double b2_star_ratio = 0.0;
    double b2_t_ratio = 0.0;
    int b3_overlap = 0;
    std::size_t shrunk = 0;
    std::size_t connector_failures = 0;
    std::size_t connector_shifted = 0;
    std::size_t connector_clipped = 0;
    std::size_t reflected_outside = 0;
    std::size_t cubes_outside = 0;
};

WhitneyStats compute_stats(const WhitneyDecomposition& dec, std::size_t samples_per_side = 512);

struct BumpTerm {
    std::uint32_t j;
    double phi;
    double gx, gy;
};

class BumpFamily {
public:
    explicit BumpFamily(const WhitneyDecomposition& dec);
    // all j with phi_j(x) > 0; returns the partition sum before normalization
    double evaluate(Point x, std::vector<BumpTerm>& out, bool with_gradient = true) const;
    double kappa() const { return kappa_; }

    // 1D C^1 profile: 1 on [-1/kappa, 1/kappa], smoothstep down to 0 at |t| = 1
    static double profile(double t, double kappa);
    static double profile_derivative(double t, double kappa);

    std::vector<double> gradient_bound;  // filled by record_gradient_bounds: max |grad phi_j|
    double record_gradient_bounds(std::size_t per_side = 12);  // returns max_j g_j * diam D_j

private:
    const WhitneyDecomposition* dec_;
    double kappa_;
};

// the partition defect max |sum phi - 1| over n x n cell centers of Q that lie in the target
double partition_defect(const BumpFamily& b, const WhitneyDecomposition& dec, std::size_t n);

nlohmann::ordered_json to_json(const WhitneyDecomposition& dec);
nlohmann::ordered_json to_json(const WhitneyStats& s);

} // namespace wrem
