#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <utility>
#include <vector>

#include "wrem/geometry.hpp"
#include "wrem/weights.hpp"

namespace wrem {

// Cell-center samples on an N x N grid over a square box, row-major (row = y index).
class GridFunction {
public:
    GridFunction(Cube box, std::size_t n, std::vector<double> values);
    static GridFunction sample(Cube box, std::size_t n, const std::function<double(Point)>& f);
    static GridFunction zeros(Cube box, std::size_t n);

    const Cube& box() const { return box_; }
    std::size_t n() const { return n_; }
    double h() const { return box_.side / static_cast<double>(n_); }
    const std::vector<double>& values() const { return v_; }
    std::vector<double>& mutable_values() { return v_; }

    std::size_t index(std::size_t i, std::size_t j) const { return j * n_ + i; }
    double at(std::size_t i, std::size_t j) const { return v_[index(i, j)]; }
    Point cell_center(std::size_t i, std::size_t j) const;
    Rect cell_rect(std::size_t i, std::size_t j) const;
    double x0() const { return box_.center[0] - box_.half(); }
    double y0() const { return box_.center[1] - box_.half(); }

private:
    Cube box_;
    std::size_t n_;
    std::vector<double> v_;
};

using Mask = std::vector<std::uint8_t>;

Mask cell_mask(const Cube& box, std::size_t n, const std::function<bool(Point)>& inside);
Mask full_mask(std::size_t n);

// per-cell weight mass from measure_rect at a coarse tolerance
std::vector<double> cell_masses(const Cube& box, std::size_t n, const Weight& w, double tol = 1e-6);

struct Gradient {
    std::vector<double> gx, gy, mag;
};

// central differences inside, second-order one-sided at the boundary layer
Gradient gradient(const GridFunction& u);
// same, but differences never reach outside the mask
Gradient gradient(const GridFunction& u, const Mask& domain);

double weighted_lp(const std::vector<double>& v, const std::vector<double>& masses, double p,
                   const Mask* mask = nullptr);
double weighted_lp(const GridFunction& u, const Weight& w, double p);
double discrete_l2(const GridFunction& u);

struct NormReport {
    double lp_u = 0.0;
    double lp_grad = 0.0;
    double p = 1.0;
};
NormReport norms(const GridFunction& u, const Weight& w, double p);

struct AverageResult {
    double value = 0.0;
    double mass = 0.0;
    Rect snapped;
};
AverageResult average(const GridFunction& u, const Weight& w, const Cube& region);
AverageResult average(const GridFunction& u, const std::vector<double>& masses, const Rect& region);

// Average over a rectangle using fractional cell overlaps, restricted to mask cells.
// Falls back to the nearest mask cell when the rectangle sits inside non-mask cells.
std::vector<std::pair<std::size_t, double>> overlap_weights(const GridFunction& u, const std::vector<double>& masses,
                                                          const Rect& region, const Mask* mask = nullptr);
double overlap_average(const GridFunction& u, const std::vector<double>& masses, const Rect& region,
                       const Mask* mask = nullptr);

struct PoincareResult {
    bool constant_function = false;
    double ratio = 0.0;
    double lhs = 0.0;       // mean |u - u_Q|
    double grad_mean = 0.0; // (mean |grad u|^p)^(1/p)
    double diam = 0.0;
    Rect snapped;
};
PoincareResult poincare_ratio(const GridFunction& u, const Weight& w, const Cube& q, double p);

struct AvgDifference {
    double lhs = 0.0;        // |u_Q1 - u_Q0|
    double rhs_factor = 0.0; // diam(Q0) (mean_Q0 |grad u|^p)^(1/p)
};
AvgDifference avg_difference_check(const GridFunction& u, const Weight& w, const Cube& q1, const Cube& q0, double p,
                                   double kappa);

struct ConvolutionOptions {
    double eps = 0.5;          // u lives on (1 + eps) Q
    std::size_t out_n = 0;     // output resolution over Q; 0 = input cells covering Q
};
struct ConvolutionResult {
    GridFunction ur;
    double partition_defect = 0.0;   // max |sum phi_k - 1| over output points
    double max_grad_phi = 0.0;       // max |grad phi_k| * side(Q_k)
    std::vector<double> averages;    // u_{Q_k}, row-major r x r
};
// Q is the cube centered in u.box with side u.box.side / (1 + eps).
ConvolutionResult discrete_convolution(const GridFunction& u, const Weight& w, std::size_t r,
                                       const ConvolutionOptions& opt = {});

// C^1 piecewise-cubic hat on [-1, 1]
double hat(double t);
double hat_derivative(double t);

void write_csv(const GridFunction& u, std::ostream& os);
GridFunction read_csv(std::istream& is);

} // namespace wrem
