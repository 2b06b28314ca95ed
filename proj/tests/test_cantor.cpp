#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <sstream>

#include "wrem/cantor.hpp"
#include "wrem/errors.hpp"

using namespace wrem;

namespace {

const CantorConfig kPairs[] = {{0.5, 0.25, 0}, {0.3, 0.4, 0}, {0.9, 0.1, 0}};

} // namespace

TEST_CASE("level length closed form against interval removal") {
    for (const auto& c : kPairs) {
        CAPTURE(c.tau);
        for (int k = 0; k <= 30; ++k) {
            double want = level_length(c, k);
            for (std::uint64_t b : {std::uint64_t{0}, std::uint64_t{0x2a5b3c1d}, ~std::uint64_t{0}})
                CHECK(std::abs(simulate_branch(c, k, b).length() - want) <= 1e-12);
            if (k < 30)
                CHECK(std::abs(level_length(c, k + 1) - 0.5 * (want - c.eta * std::pow(c.tau, k + 1))) <= 1e-12);
        }
    }
    CantorConfig c{0.5, 0.25, 0};
    CHECK(level_length(c, 1) == doctest::Approx(0.4375).epsilon(1e-15));
    CHECK(level_length(c, 2) == doctest::Approx(0.203125).epsilon(1e-15));
    CHECK(std::ldexp(level_length(c, 60), 60) == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(c.removed_total() == 0.25);
}

TEST_CASE("full enumeration") {
    auto lv = build_levels(CantorConfig::from_tau(0.5, 0.25, 10));
    REQUIRE(lv.size() == 11);
    for (int k = 0; k <= 10; ++k) {
        CHECK(lv[k].survivors.size() == (std::size_t{1} << k));
        for (auto& I : lv[k].survivors) CHECK(std::abs(I.length() - level_length(CantorConfig{0.5, 0.25, 0}, k)) <= 1e-12);
    }
    double removed = 0.0;
    for (auto& l : lv)
        for (auto& I : l.removed) removed += I.length();
    CHECK(removed == doctest::Approx(0.25 * (1.0 - std::pow(0.5, 10))).epsilon(1e-12));
    CHECK_THROWS_AS(build_levels(CantorConfig{0.5, 0.25, 23}), ResourceError);
}

TEST_CASE("alpha_k / (2 tau)^k settles") {
    CantorConfig c{0.5, 0.25, 0};
    auto scaled = [&](int k) { return cover_alpha(c, k) / std::pow(2.0 * c.tau, k); };
    for (int k = 20; k < 30; ++k) CHECK(std::abs(scaled(k) - scaled(k + 1)) / scaled(k) < 1e-6);
    CHECK(std::abs(scaled(20) - scaled(30)) / scaled(20) < 1e-6);
    // the relative change decays like (2 tau)^k
    CantorConfig slow{0.3, 0.4, 0};
    auto rel = [&](int k) {
        double a = cover_alpha(slow, k) / std::pow(0.8, k), b = cover_alpha(slow, k + 1) / std::pow(0.8, k + 1);
        return std::abs(a - b) / a;
    };
    CHECK(rel(21) / rel(20) == doctest::Approx(0.8).epsilon(1e-2));
    CHECK(rel(20) > 1e-3);
}

TEST_CASE("covers: disjoint, nested, rings avoid E") {
    CantorConfig c = CantorConfig::from_tau(0.5, 0.25, 0);
    auto lv = cover_levels(c, 0, 8);
    auto deep = build_levels(CantorConfig{0.5, 0.25, 14});
    for (std::size_t i = 0; i < lv.size(); ++i) {
        const auto& q = lv[i];
        CAPTURE(q.k);
        CHECK(q.cubes.size() == (std::size_t{1} << q.k));
        CHECK(cubes_disjoint(q));
        CHECK(q.gap > 0.0);
        CHECK(q.side == doctest::Approx(level_length(c, q.k) + 2.0 / 3.0 * 0.5 * std::pow(0.25, q.k)));
        CHECK(q.alpha_k == doctest::Approx(2.0 * q.thickness / q.side));
        CHECK(rings_avoid_set(q, deep.back().survivors));
        if (i + 1 < lv.size()) CHECK(cover_nested(q, lv[i + 1]));
        for (auto& cube : q.cubes) CHECK(cube.center[1] == 0.0);
    }
    // Lebesgue mass of the union goes to zero
    double prev = 1e300;
    for (auto& q : lv) {
        double area = static_cast<double>(q.count()) * q.side * q.side;
        CHECK(area < prev);
        prev = area;
    }
    CHECK(prev < 0.01);

    // full safety lets the children poke through the inner cube
    CoverOptions loose;
    loose.safety = 1.0;
    CHECK_FALSE(cover_nested(covers(c, 3, loose), covers(c, 4, loose)));
    CHECK_FALSE(covers(c, 3, loose).flags.empty());
}

TEST_CASE("representative covers match the enumerated ones") {
    CantorConfig c{0.9, 0.1, 0};
    CoverOptions rep;
    rep.enumerate = false;
    rep.weight = constant_weight();
    CoverOptions full;
    full.weight = constant_weight();
    for (int k : {0, 3, 6}) {
        CoverLevel a = covers(c, k, rep), b = covers(c, k, full);
        CHECK(a.count() == b.count());
        CHECK(a.alpha_k == b.alpha_k);
        CHECK(a.mu_R.front() == doctest::Approx(b.mu_R.back()).epsilon(1e-12));
        CHECK(a.mu_R.front() == doctest::Approx(a.alpha_k * (2.0 - a.alpha_k) * a.side * a.side).epsilon(1e-10));
        CHECK(a.mu_Q.front() == doctest::Approx(a.side * a.side).epsilon(1e-12));
    }
}

TEST_CASE("validation") {
    CHECK_THROWS_AS(CantorConfig::from_tau(0.5, 0.6, 3), ValidationError);
    CHECK_THROWS_AS(CantorConfig::from_tau(0.9, 0.4, 3), ValidationError);  // 0.9*0.4/0.2 = 1.8
    CHECK_THROWS_AS(CantorConfig::from_upsilon(0.5, 1.1, 3), ValidationError);
    CHECK_THROWS_AS(CantorConfig::from_upsilon(0.5, 0.9, 3), ValidationError);
    CHECK(CantorConfig::from_upsilon(0.5, 2.0, 3).tau == 0.25);
    CHECK(CantorConfig::from_both(0.5, 0.25, 2.0, 3).upsilon() == 2.0);
    CHECK_THROWS_AS(CantorConfig::from_both(0.5, 0.25, 2.5, 3), ValidationError);
    CoverOptions o;
    o.ring_fraction = 0.5;
    CHECK_THROWS_AS(covers(CantorConfig{0.5, 0.25, 0}, 2, o), ValidationError);
}

TEST_CASE("product covers") {
    ProductConfig p;
    p.base = CantorConfig{0.5, 0.25, 0};
    p.omega = 0.5;
    auto lv = product_covers(p, 6);
    for (auto& l : lv) {
        CHECK(static_cast<double>(l.count) <= l.bound + 1e-9);
        CHECK(l.count == l.e_count * l.f_count);
        CHECK(l.e_count == (std::size_t{1} << l.k));
        CHECK(l.cubes.size() == l.count);
        CHECK(l.side == doctest::Approx(level_length(p.base, l.k) + 2.0 / 3.0 * 0.5 * std::pow(0.25, l.k)));
        if (l.k > 0) CHECK(l.gap >= 0.5 * std::pow(0.25, l.k) / 3.0 - 1e-15);
        CHECK_FALSE(l.hypothesis_assumed);
    }
    CHECK(lv[2].count <= 8);
    p.omega = 0.0;
    for (auto& l : product_covers(p, 6)) CHECK(l.count == l.e_count);

    p.f_counts = {1, 2, 3, 6};
    auto user = product_covers(p, 3);
    CHECK(user[3].f_count == 6);
    CHECK(user[3].hypothesis_assumed);
    p.f_counts = {1, 3};
    CHECK_THROWS_AS(product_covers(p, 1), ValidationError);
}

TEST_CASE("export") {
    CoverOptions o;
    o.weight = constant_weight();
    auto lv = cover_levels(CantorConfig{0.5, 0.25, 0}, 1, 2, o);
    auto j = to_json(lv[1]);
    CHECK(j["count"] == 4);
    CHECK(j["cubes"].size() == 4);
    CHECK(j["mu_R"].size() == 4);
    std::string csv = cover_csv(lv);
    std::istringstream is(csv);
    std::string line;
    std::size_t rows = 0;
    while (std::getline(is, line)) ++rows;
    CHECK(rows == 1 + 2 + 4);
}
