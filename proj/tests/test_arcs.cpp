#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>

#include "circle/arcs.hpp"
#include "test_util.hpp"

using namespace circle;

TEST_CASE("classification hand cases") {
    auto v = arc_classify({0.2501}, 5, 100, 2);
    CHECK(v.major);
    CHECK(v.q == 4);
    REQUIRE(v.a.size() == 1);
    CHECK(v.a[0] == 1);

    auto m = arc_classify({0.2505}, 5, 100, 2);
    CHECK_FALSE(m.major);
    CHECK(m.q == 0);
    CHECK(m.a.empty());
    CHECK(m.Q == 5);
    CHECK(m.P == 100);
    CHECK(m.d == 2);

    auto z = arc_classify({0.0}, 3, 100, 2);
    CHECK(z.major);
    CHECK(z.q == 1);
    CHECK(z.a == std::vector<long long>{1});

    // wrap-around: a point just below 1 sits in the q = 1 box mod 1
    auto w = arc_classify({0.999999}, 5, 100, 2);
    CHECK(w.major);
    CHECK(w.q == 1);
    CHECK(w.a == std::vector<long long>{1});
}

TEST_CASE("smallest witness is reported") {
    auto v = arc_classify({0.5}, 5, 100, 2);
    CHECK(v.q == 2);
    CHECK(v.a == std::vector<long long>{1});

    // 0.75 sits in the q=4 box; q=2 puts its nearest numerator too far
    auto v4 = arc_classify({0.75}, 5, 100, 2);
    CHECK(v4.q == 4);
    CHECK(v4.a == std::vector<long long>{3});
}

TEST_CASE("gcd condition on vector witnesses") {
    auto v = arc_classify({0.5, 0.25}, 5, 100, 2);
    CHECK(v.major);
    CHECK(v.q == 4);
    CHECK(v.a == (std::vector<long long>{2, 1}));
}

TEST_CASE("witness uniqueness in the disjoint regime") {
    auto rng = seeded_rng(4001);
    const long long P = 100;
    const int d = 2;
    const long long Q = 2;  // Q <= P^{d/2}/4 = 25
    std::uniform_real_distribution<double> uu(-1.0, 1.0);
    for (int iter = 0; iter < 500; ++iter) {
        std::uniform_int_distribution<long long> uq(1, Q);
        long long q = uq(rng);
        std::uniform_int_distribution<long long> ua(1, q);
        long long a = ua(rng);
        if (std::gcd(a, q) != 1) continue;
        double delta = uu(rng) * static_cast<double>(Q) /
                       (static_cast<double>(q) * 1e4);
        double alpha = frac1(static_cast<double>(a) / q + delta);
        auto all = arc_witnesses({alpha}, Q, P, d);
        REQUIRE(all.size() == 1);
        CHECK(all[0].first == q);
    }
}

TEST_CASE("minor verdicts outside the validity level are refused") {
    // P=100, d=2, R=1: cap is P^{Rd/(R+1)}/4 = 25.  The golden-ratio point
    // stays far from every a/q with q <= 40, so it is genuinely minor.
    const double golden = 0.6180339887498949;
    CHECK_FALSE(arc_classify({golden}, 25, 100, 2).major);
    CHECK_THROWS_AS(arc_classify({golden}, 40, 100, 2), input_error);
    // a major point still classifies fine at the same level
    CHECK(arc_classify({0.25}, 40, 100, 2).major);
}

TEST_CASE("measure hand cases") {
    CHECK(arcs_measure(1, 10, 2, 1) == doctest::Approx(2.0 / 100.0));
    CHECK(arcs_measure(2, 100, 2, 1) == doctest::Approx(6e-4));
    CHECK(arcs_measure(1, 10, 2, 2) == doctest::Approx(4.0 / 1e4));
    CHECK_THROWS_AS(arcs_measure(30, 100, 2, 1), input_error);
}

TEST_CASE("measure matches the empirical hit rate") {
    const long long Q = 2, P = 10;
    const int d = 2;
    double mu = arcs_measure(Q, P, d, 1);
    CHECK(mu == doctest::Approx(0.06));
    auto rng = seeded_rng(4002);
    std::uniform_real_distribution<double> ua(0.0, 1.0);
    const int N = 100000;
    int hits = 0;
    for (int i = 0; i < N; ++i)
        if (arc_classify({ua(rng)}, Q, P, d).major) ++hits;
    double rate = static_cast<double>(hits) / N;
    double sigma = std::sqrt(mu * (1.0 - mu) / N);
    CHECK(std::abs(rate - mu) <= 3.0 * sigma);
}

TEST_CASE("minor-arc sampler yields verified minor points deterministically") {
    auto pts = sample_minor_points(4, 100, 2, 50, 99);
    CHECK(pts.size() == 50);
    for (double x : pts) {
        CHECK(0.0 <= x);
        CHECK(x < 1.0);
        CHECK_FALSE(arc_classify({x}, 4, 100, 2).major);
    }
    auto again = sample_minor_points(4, 100, 2, 50, 99);
    CHECK(pts == again);
    auto other = sample_minor_points(4, 100, 2, 50, 100);
    CHECK(pts != other);
}
