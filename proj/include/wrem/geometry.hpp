#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <vector>

namespace wrem {

using Point = std::array<double, 2>;

template <std::size_t N>
struct BasicCube {
    std::array<double, N> center{};
    double side = 1.0;

    double half() const { return 0.5 * side; }
    double diam() const { return side * std::sqrt(static_cast<double>(N)); }
    double volume() const { return std::pow(side, static_cast<double>(N)); }

    BasicCube scaled(double lambda) const { return {center, lambda * side}; }

    // open cube, strict inequalities
    bool contains(const std::array<double, N>& x) const {
        for (std::size_t i = 0; i < N; ++i)
            if (!(std::abs(x[i] - center[i]) < half())) return false;
        return true;
    }
    bool contains_closed(const std::array<double, N>& x) const {
        for (std::size_t i = 0; i < N; ++i)
            if (std::abs(x[i] - center[i]) > half()) return false;
        return true;
    }
    double sup_dist_from_center(const std::array<double, N>& x) const {
        double m = 0.0;
        for (std::size_t i = 0; i < N; ++i) m = std::max(m, std::abs(x[i] - center[i]));
        return m;
    }
};

using Cube = BasicCube<2>;

// Axis-aligned rectangle [x0,x1] x [y0,y1].
struct Rect {
    double x0 = 0, y0 = 0, x1 = 0, y1 = 0;

    static Rect from_cube(const Cube& q) {
        double h = q.half();
        return {q.center[0] - h, q.center[1] - h, q.center[0] + h, q.center[1] + h};
    }
    static Rect square(Point c, double side) { return from_cube(Cube{c, side}); }

    double width() const { return x1 - x0; }
    double height() const { return y1 - y0; }
    double area() const { return width() * height(); }
    double diam() const { return std::hypot(width(), height()); }
    Point center() const { return {0.5 * (x0 + x1), 0.5 * (y0 + y1)}; }
    bool empty() const { return !(x1 > x0 && y1 > y0); }

    bool contains(Point p) const { return p[0] > x0 && p[0] < x1 && p[1] > y0 && p[1] < y1; }
    bool contains_closed(Point p) const {
        return p[0] >= x0 && p[0] <= x1 && p[1] >= y0 && p[1] <= y1;
    }
    bool contains(const Rect& r, double tol = 0.0) const {
        return r.x0 >= x0 - tol && r.x1 <= x1 + tol && r.y0 >= y0 - tol && r.y1 <= y1 + tol;
    }
    Rect dilated(double factor) const {
        Point c = center();
        double hw = 0.5 * factor * width(), hh = 0.5 * factor * height();
        return {c[0] - hw, c[1] - hh, c[0] + hw, c[1] + hh};
    }
};

Rect intersect(const Rect& a, const Rect& b);
double overlap_area(const Rect& a, const Rect& b);
bool interiors_meet(const Rect& a, const Rect& b);
double euclid_dist(const Rect& a, const Rect& b);

// { x : inner < max_i |x_i - c_i| < outer }, inner may be 0 (then the punctured open square).
struct SquareAnnulus {
    Point center{};
    double inner = 0.0;
    double outer = 0.0;

    bool contains(Point p) const {
        double m = std::max(std::abs(p[0] - center[0]), std::abs(p[1] - center[1]));
        return m > inner && m < outer;
    }
    bool contains_closed(Point p) const {
        double m = std::max(std::abs(p[0] - center[0]), std::abs(p[1] - center[1]));
        return m >= inner && m <= outer;
    }
    bool contains_closed(const Rect& r, double tol = 0.0) const;
    double area() const { return 4.0 * (outer * outer - inner * inner); }
    // area of r inside the annulus
    double clipped_area(const Rect& r) const;
    Rect outer_rect() const {
        return {center[0] - outer, center[1] - outer, center[0] + outer, center[1] + outer};
    }
};

struct Ring {
    Cube cube{};
    double alpha = 0.5;

    double inner_half() const { return (1.0 - alpha) * cube.half(); }
    double width() const { return alpha * cube.half(); }
    double length() const { return alpha * cube.side; }  // l(R)
    SquareAnnulus region() const { return {cube.center, inner_half(), cube.half()}; }
    Cube inner_cube() const { return cube.scaled(1.0 - alpha); }
};

Ring make_ring(const Cube& q, double alpha);
Ring double_ring(const Ring& r);
SquareAnnulus inner_shell(const Ring& r);

struct SubdivideOptions {
    std::size_t max_cubes = 1u << 20;
    double snap_tol = 1e-9;
};
std::vector<Cube> subdivide_ring(const Ring& r, const SubdivideOptions& opt = {});

} // namespace wrem
