#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <set>

#include "wrem/errors.hpp"
#include "wrem/geometry.hpp"

using namespace wrem;

TEST_CASE("cube membership is open, closed variant includes the boundary") {
    Cube q{{0.0, 0.0}, 2.0};
    CHECK(q.contains(Point{0.999, -0.999}));
    CHECK_FALSE(q.contains(Point{1.0, 0.0}));
    CHECK(q.contains_closed(Point{1.0, 0.0}));
    CHECK(q.diam() == doctest::Approx(2.0 * std::sqrt(2.0)));
    CHECK(q.scaled(0.5).side == 1.0);
}

TEST_CASE("ring geometry") {
    Ring r = make_ring(Cube{{0.5, 0.5}, 1.0}, 0.2);
    CHECK(r.inner_half() == doctest::Approx(0.4));
    CHECK(r.width() == doctest::Approx(0.1));
    CHECK(r.length() == doctest::Approx(0.2));
    SquareAnnulus a = r.region();
    CHECK(a.contains(Point{0.95, 0.5}));
    CHECK_FALSE(a.contains(Point{0.5, 0.5}));
    CHECK_FALSE(a.contains(Point{0.9, 0.5}));  // inner boundary is excluded
    // |R| = l^2 (1 - (1-alpha)^2) = alpha (2 - alpha) l^2
    CHECK(a.area() == doctest::Approx(0.2 * 1.8));

    Ring d = double_ring(r);
    CHECK(d.alpha == doctest::Approx(0.4));
    SquareAnnulus s = inner_shell(r);
    CHECK(s.inner == doctest::Approx(0.3));
    CHECK(s.outer == doctest::Approx(0.4));
}

TEST_CASE("ring validation") {
    Cube q{{0.0, 0.0}, 1.0};
    CHECK_THROWS_AS(make_ring(q, 0.0), ValidationError);
    CHECK_THROWS_AS(make_ring(q, 1.0), ValidationError);
    CHECK_THROWS_AS(make_ring(Cube{{0.0, 0.0}, -1.0}, 0.3), ValidationError);
    CHECK_THROWS_AS(double_ring(make_ring(q, 0.5)), ValidationError);
    CHECK_THROWS_AS(inner_shell(make_ring(q, 0.6)), ValidationError);
}

TEST_CASE("rectangle helpers") {
    Rect a{0, 0, 2, 1}, b{1, 0.5, 3, 3}, c{2, 0, 3, 1};
    CHECK(overlap_area(a, b) == doctest::Approx(0.5));
    CHECK(interiors_meet(a, b));
    CHECK_FALSE(interiors_meet(a, c));  // shared edge only
    CHECK(euclid_dist(a, c) == 0.0);
    CHECK(euclid_dist(Rect{0, 0, 1, 1}, Rect{2, 2, 3, 3}) == doctest::Approx(std::sqrt(2.0)));
    CHECK(a.dilated(2.0).width() == doctest::Approx(4.0));
    CHECK(a.contains(Rect{0.5, 0.2, 1.5, 0.8}));
}

TEST_CASE("annulus clipped area") {
    SquareAnnulus a{{0.0, 0.0}, 0.5, 1.0};
    CHECK(a.clipped_area(a.outer_rect()) == doctest::Approx(a.area()));
    CHECK(a.clipped_area(Rect{-0.25, -0.25, 0.25, 0.25}) == doctest::Approx(0.0));
    CHECK(a.clipped_area(Rect{0.0, -0.25, 1.0, 0.25}) == doctest::Approx(0.25));
    CHECK(a.contains_closed(Rect{0.5, 0.0, 1.0, 0.5}));
    CHECK_FALSE(a.contains_closed(Rect{0.4, 0.0, 1.0, 0.5}));
}

TEST_CASE("subdivide_ring tiles R exactly with disjoint cubes") {
    for (double alpha : {0.5, 0.25, 0.2, 0.1}) {
        Ring r = make_ring(Cube{{0.0, 0.0}, 1.0}, alpha);
        auto cubes = subdivide_ring(r);
        double area = 0.0;
        std::set<std::pair<long, long>> seen;
        for (const auto& c : cubes) {
            area += c.volume();
            CHECK(r.region().contains_closed(Rect::from_cube(c), 1e-12));
            seen.insert({std::lround(c.center[0] * 1e9), std::lround(c.center[1] * 1e9)});
        }
        CHECK(seen.size() == cubes.size());
        CHECK(area == doctest::Approx(r.region().area()).epsilon(1e-12));
    }
}

TEST_CASE("subdivide_ring respects the size cap") {
    SubdivideOptions o;
    o.max_cubes = 100;
    CHECK_THROWS_AS(subdivide_ring(make_ring(Cube{{0.0, 0.0}, 1.0}, 0.01), o), ResourceError);
}
