#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "wrem/errors.hpp"
#include "wrem/porosity.hpp"

using namespace wrem;

namespace {

CoverLevel single(double alpha, double mu_r, double mu_q, double ell) {
    CoverLevel c;
    c.cubes.push_back(Cube{{0.0, 0.0}, ell});
    c.alpha_k = alpha;
    c.mu_R = {mu_r};
    c.mu_Q = {mu_q};
    c.ell_Q = ell;
    return c;
}

PorosityQuery query(double s, double p, double c1 = 1.0) {
    PorosityQuery q;
    q.s = s;
    q.p = p;
    q.c1 = c1;
    return q;
}

std::vector<CoverLevel> cantor_levels(double eta, double upsilon, int k_max = 14) {
    CoverOptions o;
    o.weight = constant_weight();
    return cover_levels(CantorConfig::from_upsilon(eta, upsilon, 0), 1, k_max, o);
}

} // namespace

TEST_CASE("criterion terms by hand") {
    // s = 2, p = 1: the mu(R) exponent (s-p)/((s-1)p) is 1, inner = 4 * 1/4
    Terms t = criterion_terms({single(0.5, 0.25, 1.0, 1.0)}, query(2.0, 1.0));
    CHECK(t.t[0] == doctest::Approx(1.0).epsilon(1e-14));
    // s = 3, p = 1.5: exponents 3/2 and 1/2, inner = 2^(3/2) / 2, t = inner^-2
    Terms u = criterion_terms({single(0.5, 0.25, 1.0, 1.0)}, query(3.0, 1.5));
    CHECK(u.t[0] == doctest::Approx(0.5).epsilon(1e-14));
    // mu(R) replaced by alpha^sigma mu(Q) = 1/2
    Terms m = sufficient_measureQ({single(0.5, 0.25, 1.0, 1.0)}, query(2.0, 1.0));
    CHECK(m.t[0] == doctest::Approx(0.5).epsilon(1e-14));
    Terms l = sufficient_lengthQ({single(0.5, 0.25, 1.0, 1.0)}, query(2.0, 1.0));
    CHECK(l.t[0] == doctest::Approx(0.5).epsilon(1e-14));
    PorosityQuery q = query(2.0, 1.0);
    q.delta = 1.0;
    CHECK(sufficient_lengthQ({single(0.5, 0.25, 1.0, 4.0)}, q).t[0] == doctest::Approx(0.125).epsilon(1e-14));
}

TEST_CASE("log-domain evaluation agrees with direct evaluation") {
    CoverLevel c;
    c.alpha_k = 0.3;
    for (int j = 0; j < 5; ++j) {
        c.cubes.push_back(Cube{{3.0 * j, 0.0}, 1.0});
        c.mu_R.push_back(0.1 + 0.05 * j);
        c.mu_Q.push_back(1.0);
    }
    PorosityQuery q = query(2.5, 1.2, 1.7);
    double inner = 0.0;
    for (double mr : c.mu_R)
        inner += std::pow(c.alpha_k, -q.s * q.c1 / (q.s - 1.0)) * std::pow(mr, (q.s - q.p) / ((q.s - 1.0) * q.p));
    double direct = std::pow(inner, 1.0 - q.s);
    CHECK(std::abs(criterion_terms({c}, q).t[0] - direct) / direct < 1e-10);

    // representative cubes weigh like their copies
    CoverLevel r = c;
    r.cubes.resize(1);
    r.mu_R.resize(1);
    r.multiplicity = 5.0;
    CoverLevel e = r;
    e.multiplicity = 1.0;
    for (int j = 1; j < 5; ++j) {
        e.cubes.push_back(c.cubes[j]);
        e.mu_R.push_back(r.mu_R[0]);
    }
    CHECK(criterion_terms({r}, q).log_t[0] == doctest::Approx(criterion_terms({e}, q).log_t[0]).epsilon(1e-13));

    // deep levels underflow in t but not in log t
    CoverLevel tiny = single(1e-200, 1e-300, 1e-250, 1e-125);
    Terms t = criterion_terms({tiny}, query(8.0, 1.0, 3.0));
    CHECK(std::isfinite(t.log_t[0]));
    CHECK(t.t[0] == 0.0);
}

TEST_CASE("divergence test on textbook series") {
    std::vector<double> ones(12, 1.0), halves, grow;
    for (int k = 0; k < 12; ++k) {
        halves.push_back(std::pow(0.5, k));
        grow.push_back(std::pow(1.05, k));
    }
    CHECK(divergence_test_values(ones, 12).verdict == SeriesVerdict::diverges);
    CHECK(divergence_test_values(halves, 12).verdict == SeriesVerdict::converges);
    CHECK(divergence_test_values(halves, 12).ratio == doctest::Approx(0.5));
    CHECK(divergence_test_values(grow, 12).verdict == SeriesVerdict::diverges);
    std::vector<double> slow;
    for (int k = 0; k < 12; ++k) slow.push_back(std::pow(0.99, k));
    DivergenceResult r = divergence_test_values(slow, 12);
    CHECK(r.verdict == SeriesVerdict::inconclusive);
    CHECK(r.ratio == doctest::Approx(0.99));
    CHECK(divergence_test_values(std::vector<double>(6, 1.0), 8).verdict == SeriesVerdict::inconclusive);
    CHECK_THROWS_AS(divergence_test_values(ones, 7), ValidationError);
    CHECK_THROWS_AS(divergence_test_values({1.0, 0.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0}, 8), ValidationError);
}

TEST_CASE("closed forms") {
    CHECK(cantor_closed_form(1.1, 3, 1, 1, 2, 1).lhs == doctest::Approx(1.9));
    CHECK(cantor_closed_form(1.1, 3, 1, 1, 2, 1).satisfied);
    CHECK(cantor_closed_form(3, 1.2, 1, 1, 2, 1).lhs == doctest::Approx(-1.8));
    CHECK_FALSE(cantor_closed_form(3, 1.2, 1, 1, 2, 1).satisfied);
    CHECK(product_closed_form(1.1, 0.2, 3, 1, 1, 2, 1).lhs == doctest::Approx(1.5));
    CHECK(product_closed_form(1.1, 2.0, 3, 1, 1, 2, 1).lhs == doctest::Approx(-2.1));
    // boundary counts as satisfied: -1 - (2 + 1) + 4 = 0
    ClosedForm b = cantor_closed_form(2.0, 2.0, 1.0, 1.0, 2.0, 1.0);
    CHECK(b.lhs == 0.0);
    CHECK(b.satisfied);
}

TEST_CASE("omega = 0 reduces the product form to the Cantor form") {
    for (int i = 0; i < 10; ++i)
        for (int j = 0; j < 10; ++j) {
            double ups = 1.05 + 0.3 * i, s = 1.1 + 0.7 * j;
            for (double p : {1.0, 1.5})
                for (double c1 : {1.0, 2.59}) {
                    if (!(s > p)) continue;
                    ClosedForm a = cantor_closed_form(ups, s, p, c1, 2.0, 1.0);
                    ClosedForm b = product_closed_form(ups, 0.0, s, p, c1, 2.0, 1.0);
                    CHECK(a.lhs == b.lhs);
                    CHECK(a.satisfied == b.satisfied);
                }
        }
}

TEST_CASE("closed form predicts the verdict on generated covers") {
    struct Tuple {
        double eta, upsilon, s, p, c1;
    };
    for (Tuple t : {Tuple{0.1, 1.1, 3, 1, 1}, Tuple{0.25, 1.2, 6, 1, 2.59}, Tuple{0.25, 1.3, 10, 1, 2.59},
                    Tuple{0.25, 1.4, 20, 1, 2.59}, Tuple{0.5, 2.0, 3, 1, 1}}) {
        CAPTURE(t.upsilon);
        CAPTURE(t.s);
        REQUIRE(cantor_closed_form(t.upsilon, t.s, t.p, t.c1, 2, 1).satisfied);
        Terms terms = criterion_terms(cantor_levels(t.eta, t.upsilon), query(t.s, t.p, t.c1));
        CHECK(divergence_test(terms, 14).verdict == SeriesVerdict::diverges);
    }
    for (double c1 : {1.0, 2.59}) {
        ClosedForm cf = cantor_closed_form(3.0, 1.2, 1.0, c1, 2, 1);
        REQUIRE(cf.lhs < -1.0);
        DivergenceResult r = divergence_test(criterion_terms(cantor_levels(0.5, 3.0), query(1.2, 1.0, c1)), 14);
        CHECK(r.verdict == SeriesVerdict::converges);
        // tau small: the geometric ratio is already 2^lhs
        CHECK(r.ratio == doctest::Approx(std::exp2(cf.lhs)).epsilon(1e-3));
    }
}

TEST_CASE("sufficient conditions bound the exact terms") {
    auto lv = cantor_levels(0.5, 2.0, 12);
    for (PorosityQuery q : {query(3.0, 1.0), query(2.0, 1.5, 1.3), query(6.0, 2.0, 2.0)}) {
        Terms exact = criterion_terms(lv, q), mq = sufficient_measureQ(lv, q), lq = sufficient_lengthQ(lv, q);
        // mu(R) <= 2 alpha mu(Q) for Lebesgue measure, so t_suff <= 2^{(s-p)/p} t_exact
        const double c = std::pow(2.0, (q.s - q.p) / q.p);
        for (std::size_t i = 0; i < exact.t.size(); ++i) {
            CHECK(mq.log_t[i] <= exact.log_t[i] + std::log(c) + 1e-12);
            CHECK(lq.log_t[i] == doctest::Approx(mq.log_t[i]).epsilon(1e-9));
        }
        if (divergence_test(mq, 12).verdict == SeriesVerdict::diverges)
            CHECK(divergence_test(exact, 12).verdict == SeriesVerdict::diverges);
    }
    CoverLevel bare = single(0.5, 0.25, 1.0, 1.0);
    bare.mu_R.clear();
    CHECK_THROWS_AS(criterion_terms({bare}, query(2.0, 1.0)), ValidationError);
}

TEST_CASE("closed form is monotone in s on sampled tuples") {
    for (double ups : {1.1, 1.5, 2.0, 3.0})
        for (double c1 : {1.0, 2.0}) {
            bool seen = false;
            for (double s = 1.05; s < 60.0; s *= 1.1) {
                bool sat = cantor_closed_form(ups, s, 1.0, c1, 2.0, 1.0).satisfied;
                if (seen) CHECK(sat);
                seen = seen || sat;
            }
        }
}

TEST_CASE("feasible regions") {
    FeasibleRegion a = feasible_region(1.0, 1.0, 2.0, 1.0);
    CHECK(a.predicted_nonempty);
    CHECK(a.nonempty);
    CHECK(a.mask.size() == a.upsilon.size() * a.s.size());
    FeasibleRegion b = feasible_region(2.5, 1.0, 2.0, 1.0);
    CHECK_FALSE(b.predicted_nonempty);
    CHECK_FALSE(b.nonempty);
    CHECK_FALSE(b.flags.empty());
    FeasibleRegion c = feasible_region(1.0, 1.0, 2.0, 1.0, 0.5);
    CHECK(c.predicted_nonempty);
    CHECK(c.nonempty);
    // large c1 needs upsilon close to 1 and large s: the grid extends itself
    FeasibleRegion d = feasible_region(1.0, 40.0, 2.0, 1.0, 0.5);
    CHECK(d.nonempty);
    CHECK(d.extensions > 0);
    CHECK_THROWS_AS(feasible_region(0.5, 1.0, 2.0, 1.0), ValidationError);
    auto j = to_json(a);
    CHECK(j["nonempty"] == true);
}

TEST_CASE("query validation and report export") {
    CHECK_THROWS_AS(query(1.0, 1.0).validate(), ValidationError);
    CHECK_THROWS_AS(query(2.0, 0.5).validate(), ValidationError);
    CHECK_THROWS_AS(query(2.0, 1.0, 0.5).validate(), ValidationError);
    PorosityQuery q = query(2.0, 1.0);
    q.sigma = 0.5;
    q.delta = 2.0;  // delta + 1 - n = 1 > sigma
    CHECK_THROWS_AS(q.validate(), ValidationError);
    PorosityReport r;
    r.query = query(3.0, 1.0);
    r.terms = criterion_terms(cantor_levels(0.5, 2.0, 9), r.query);
    r.result = divergence_test(r.terms, 9);
    r.provenance = "unit test";
    auto j = to_json(r);
    CHECK(j["verdict"] == "diverges");
    CHECK(j["t_k"].size() == 9);
    CHECK(nlohmann::ordered_json::parse(j.dump()) == j);
}
