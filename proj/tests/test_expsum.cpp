#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "circle/expsum.hpp"
#include "test_util.hpp"

using namespace circle;

namespace {

FormSystem xsq_system() {
    return FormSystem::make(1, 1, 2, {{{{2}, 1}}});
}

}  // namespace

TEST_CASE("four-term hand evaluation of the weighted sum") {
    auto F = xsq_system();
    auto W = sieve_von_mangoldt(1, 4);
    cplx s = exp_sum(F, {0.5}, 4, BoxSpec::unit(1), W, ExpSumRoute::kDirect);
    CHECK(s.real() == doctest::Approx(2 * std::log(2.0) - std::log(3.0)).epsilon(1e-12));
    CHECK(std::abs(s.imag()) < 1e-12);
}

TEST_CASE("zero frequency gives the positive weight mass") {
    auto W = sieve_von_mangoldt(1, 50);
    auto rng = seeded_rng(3001);
    for (int iter = 0; iter < 20; ++iter) {
        auto F = testutil::random_system(rng);
        cplx s = exp_sum(F, std::vector<double>(F.R, 0.0), 50,
                         BoxSpec::unit(F.n), W, ExpSumRoute::kDirect);
        CHECK(std::abs(s.imag()) < 1e-12);
        CHECK(s.real() > 0.0);
        // product over axes of psi(50)
        double psi = 0;
        for (long long x = 1; x <= 50; ++x) psi += W.lambda(x);
        CHECK(s.real() == doctest::Approx(std::pow(psi, F.n)).epsilon(1e-11));
    }
}

TEST_CASE("conjugate symmetry") {
    auto W = sieve_von_mangoldt(1, 40);
    auto rng = seeded_rng(3002);
    std::uniform_real_distribution<double> ua(-2.0, 2.0);
    for (int iter = 0; iter < 20; ++iter) {
        auto F = testutil::random_system(rng, 3, 2, 3);
        std::vector<double> alpha(F.R), neg(F.R);
        for (int i = 0; i < F.R; ++i) {
            alpha[i] = ua(rng);
            neg[i] = -alpha[i];
        }
        cplx s = exp_sum(F, alpha, 40, BoxSpec::unit(F.n), W, ExpSumRoute::kDirect);
        cplx sn = exp_sum(F, neg, 40, BoxSpec::unit(F.n), W, ExpSumRoute::kDirect);
        CHECK(std::abs(sn - std::conj(s)) < 1e-10 * (1.0 + std::abs(s)));
    }
}

TEST_CASE("triangle bound by the zero-frequency value") {
    auto W = sieve_von_mangoldt(1, 30);
    auto rng = seeded_rng(3003);
    std::uniform_real_distribution<double> ua(0.0, 1.0);
    for (int iter = 0; iter < 30; ++iter) {
        auto F = testutil::random_system(rng, 3, 2, 3);
        std::vector<double> alpha(F.R);
        for (auto& a : alpha) a = ua(rng);
        double s0 = exp_sum(F, std::vector<double>(F.R, 0.0), 30,
                            BoxSpec::unit(F.n), W, ExpSumRoute::kDirect)
                        .real();
        cplx s = exp_sum(F, alpha, 30, BoxSpec::unit(F.n), W, ExpSumRoute::kDirect);
        CHECK(std::abs(s) <= s0 + 1e-9);
    }
}

TEST_CASE("factorized route matches the direct route on diagonal systems") {
    auto W = sieve_von_mangoldt(1, 30);
    auto rng = seeded_rng(3004);
    std::uniform_real_distribution<double> ua(0.0, 1.0);
    std::uniform_int_distribution<long long> up(5, 30);
    for (int iter = 0; iter < 50; ++iter) {
        auto F = testutil::random_diagonal(rng, 4, 2, 3);
        long long P = up(rng);
        std::vector<double> alpha(F.R);
        for (auto& a : alpha) a = ua(rng);
        cplx dir = exp_sum(F, alpha, P, BoxSpec::unit(F.n), W, ExpSumRoute::kDirect);
        cplx fac = exp_sum(F, alpha, P, BoxSpec::unit(F.n), W,
                           ExpSumRoute::kFactorized);
        CHECK(std::abs(dir - fac) <= 1e-10 * std::max(std::abs(dir), 1e-3));
    }
}

TEST_CASE("factorized route rejects non-diagonal systems; budgets refuse") {
    auto F = FormSystem::make(2, 1, 2, {{{{1, 1}, 1}}});
    auto W = sieve_von_mangoldt(1, 40);
    CHECK_THROWS_AS(exp_sum(F, {0.3}, 10, BoxSpec::unit(2), W,
                            ExpSumRoute::kFactorized),
                    input_error);
    try {
        exp_sum(F, {0.3}, 40, BoxSpec::unit(2), W, ExpSumRoute::kDirect, 100);
        FAIL("expected refusal");
    } catch (const budget_error& e) {
        CHECK(e.required == 1600);
    }
}

TEST_CASE("box convention trims the grid") {
    auto F = xsq_system();
    auto W = sieve_von_mangoldt(1, 10);
    BoxSpec box;
    box.sides = {{0.3, 0.7}};
    // x in (3, 7]: Lambda at 4, 5, 7
    cplx s = exp_sum(F, {0.0}, 10, box, W, ExpSumRoute::kDirect);
    CHECK(s.real() ==
          doctest::Approx(std::log(2.0) + std::log(5.0) + std::log(7.0)));
}

TEST_CASE("Vaughan decomposition equals the direct prime sum") {
    auto W = sieve_von_mangoldt(1, 500);

    SUBCASE("zero phase") {
        auto split = prime_expsum_vaughan({0.0}, 100, 0.2, 1.0, 3, W);
        cplx direct = lambda_exp_sum({0.0}, 21, 100, W);
        CHECK(std::abs(split.total - direct) < 1e-10);
        CHECK(std::abs(split.total.imag()) < 1e-12);
    }

    SUBCASE("quadratic phase at an irrational point") {
        double a = std::sqrt(2.0) - 1.0;
        auto split = prime_expsum_vaughan({0.0, 0.0, a}, 200, 0.1, 0.9, 2, W);
        cplx direct = lambda_exp_sum({0.0, 0.0, a}, 21, 180, W);
        CHECK(std::abs(split.total - direct) <=
              1e-8 * std::max(std::abs(direct), 1.0));
    }

    SUBCASE("integer coefficients give a real sum") {
        auto split = prime_expsum_vaughan({0.0, 1.0}, 150, 0.3, 1.0, 3, W);
        cplx direct = lambda_exp_sum({0.0, 0.0}, 46, 150, W);
        CHECK(std::abs(split.total.imag()) < 1e-12);
        CHECK(split.total.real() == doctest::Approx(direct.real()).epsilon(1e-10));
    }

    SUBCASE("range precondition") {
        CHECK_THROWS_AS(prime_expsum_vaughan({0.5}, 20, 0.4, 1.0, 3, W),
                        input_error);
        CHECK_THROWS_AS(prime_expsum_vaughan({0.5}, 100, 0.9, 0.4, 3, W),
                        input_error);
    }
}

TEST_CASE("Vaughan decomposition on random instances") {
    auto W = sieve_von_mangoldt(1, 500);
    auto rng = seeded_rng(3005);
    std::uniform_real_distribution<double> ua(0.0, 1.0), ub(0.2, 0.4);
    std::uniform_int_distribution<long long> up(50, 500);
    std::uniform_int_distribution<int> ud(1, 3), uw(0, 1);
    for (int iter = 0; iter < 100; ++iter) {
        long long P = up(rng);
        int W_level = uw(rng) ? 2 : 3;
        double b1 = ub(rng);
        double b2 = b1 + (1.0 - b1) * std::max(0.2, ua(rng));
        std::vector<double> f(ud(rng) + 1, 0.0);
        f.back() = ua(rng);
        if (f.size() > 2) f[1] = ua(rng) - 0.5;
        auto split = prime_expsum_vaughan(f, P, b1, b2, W_level, W);
        auto [lo, hi] = scaled_range(b1, b2, P);
        cplx direct = lambda_exp_sum(f, lo, hi, W);
        CHECK(std::abs(split.total - direct) <=
              1e-8 * std::max(std::abs(direct), 1.0));
        CHECK(std::abs((split.psi1 + split.psi1p + split.psi2) - split.total) <
              1e-14);
    }
}

TEST_CASE("product sums") {
    auto W = sieve_von_mangoldt(1, 100);

    SUBCASE("m = 1 coincides with the univariate prime-power sum") {
        cplx u = upsilon_m(0.3, {2}, {{{1}, 0.1}}, 100, BoxSpec::unit(1), W);
        cplx direct = lambda_exp_sum({0.0, 0.1, 0.3}, 1, 100, W);
        CHECK(std::abs(u - direct) < 1e-9 * std::max(std::abs(direct), 1.0));
    }

    SUBCASE("zero frequency factorizes") {
        cplx u = upsilon_m(0.0, {1, 1}, {}, 10, BoxSpec::unit(2), W);
        double psi = 0;
        for (long long x = 1; x <= 10; ++x) psi += W.lambda(x);
        CHECK(u.real() == doctest::Approx(psi * psi).epsilon(1e-12));
        CHECK(std::abs(u.imag()) < 1e-12);
    }

    SUBCASE("16-term enumeration at alpha = 1/2") {
        cplx u = upsilon_m(0.5, {1, 1}, {}, 4, BoxSpec::unit(2), W);
        double expect = 0;
        for (long long x1 = 1; x1 <= 4; ++x1)
            for (long long x2 = 1; x2 <= 4; ++x2) {
                double sgn = (x1 * x2) % 2 == 0 ? 1.0 : -1.0;
                expect += W.lambda(x1) * W.lambda(x2) * sgn;
            }
        CHECK(u.real() == doctest::Approx(expect).epsilon(1e-12));
        CHECK(std::abs(u.imag()) < 1e-12);
    }

    SUBCASE("companion polynomial must avoid the main monomial") {
        CHECK_THROWS_AS(upsilon_m(0.5, {1, 1}, {{{1, 1}, 0.2}}, 4,
                                  BoxSpec::unit(2), W),
                        input_error);
    }

    SUBCASE("budget refusal") {
        CHECK_THROWS_AS(upsilon_m(0.5, {1, 1, 1}, {}, 100, BoxSpec::unit(3), W,
                                  1000),
                        budget_error);
    }
}

TEST_CASE("difference operator") {
    Poly xsq = Poly::monomial(1, {2}, 1);

    auto d1 = difference_operator(xsq, 0, 1);
    Poly expect1 = Poly::monomial(2, {1, 1}, 2) + Poly::monomial(2, {0, 2}, 1);
    CHECK(d1.poly == expect1);

    auto d2 = difference_operator(xsq, 0, 2);
    CHECK(d2.poly == Poly::monomial(3, {0, 1, 1}, 2));

    auto d3 = difference_operator(xsq, 0, 3);
    CHECK(d3.poly.is_zero());

    // top-depth differencing of a univariate degree-d polynomial
    auto rng = seeded_rng(3006);
    std::uniform_int_distribution<int> uc(-5, 5);
    for (int d = 1; d <= 4; ++d) {
        Poly f(1);
        for (int k = 0; k < d; ++k)
            f += Poly::monomial(1, {k}, uc(rng));
        int lead = 0;
        while (lead == 0) lead = uc(rng);
        f += Poly::monomial(1, {d}, lead);
        auto dd = difference_operator(f, 0, d);
        Int fact = 1;
        for (int k = 2; k <= d; ++k) fact *= k;
        std::vector<int> exps(1 + d, 1);
        exps[0] = 0;
        CHECK(dd.poly == Poly::monomial(1 + d, exps, Rat(fact * lead)));
    }

    // multivariate: the spectator variable rides along
    Poly f2 = Poly::monomial(2, {2, 1}, 1);
    auto dm = difference_operator(f2, 0, 1);
    Poly expectm =
        Poly::monomial(3, {1, 1, 1}, 2) + Poly::monomial(3, {0, 1, 2}, 1);
    CHECK(dm.poly == expectm);
}

TEST_CASE("tuple counting N(X, 1/Y)") {
    auto F = xsq_system();
    auto T = symmetrize_coefficients(F);
    CHECK(count_N(T, {0.5}, 2, 10.0) == 5);
    CHECK(count_N(T, {0.0}, 2, 10.0) == 5);
    CHECK(count_N(T, {0.25}, 1, 3.0) == 1);

    auto E1 = testutil::e1_system();
    auto TE = symmetrize_coefficients(E1);
    CHECK(count_N(TE, {0.0}, 1, 5.0) == 27);  // (2X+1)^{(d-1)n}
    CHECK_THROWS_AS(count_N(TE, {0.3}, 50, 5.0, 100000), budget_error);
}

TEST_CASE("Gamma sums") {
    auto F = xsq_system();
    auto T = symmetrize_coefficients(F);
    // alpha = 1/4: Phi = x/2; evens contribute P, odds min(P, 2)
    CHECK(gamma_f(T, {0.25}, 3) == doctest::Approx(3 * 3 + 4 * 2.0));
    CHECK(gamma_f(T, {0.0}, 3) == doctest::Approx(7 * 3.0));
    CHECK(gamma_f(T, {0.5}, 3) == doctest::Approx(7 * 3.0));

    auto E1 = testutil::e1_system();
    auto TE = symmetrize_coefficients(E1);
    CHECK_THROWS_AS(gamma_f(TE, {0.3}, 40, 100000), budget_error);
    double g = gamma_f(TE, {1.0 / 3.0}, 2);
    CHECK(g > 0.0);
    CHECK(g <= std::pow(5.0, 3) * std::pow(2.0, 3) + 1e-9);
}
