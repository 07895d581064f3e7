#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>

#include "circle/arith.hpp"
#include "test_util.hpp"

using namespace circle;

TEST_CASE("von Mangoldt values at small arguments") {
    auto T = sieve_von_mangoldt(1, 200);
    CHECK(T.lambda(1) == 0.0);
    CHECK(T.lambda(6) == 0.0);
    CHECK(T.lambda(7) == doctest::Approx(std::log(7.0)).epsilon(1e-15));
    CHECK(T.lambda(8) == doctest::Approx(std::log(2.0)).epsilon(1e-15));
    CHECK(T.lambda(121) == doctest::Approx(std::log(11.0)).epsilon(1e-15));
    CHECK(T.is_prime(127));
    CHECK_FALSE(T.is_prime(128));
    CHECK(T.is_prime_power(128));
    CHECK(T.prime_log(127) == doctest::Approx(std::log(127.0)));
    CHECK(T.prime_log(128) == 0.0);
    CHECK(T.covers(1, 200));
    CHECK_FALSE(T.covers(1, 201));
}

TEST_CASE("Chebyshev identity sum_{d|n} Lambda(d) = log n up to 1e5") {
    const long long N = 100000;
    auto T = sieve_von_mangoldt(1, N);
    // Accumulate Lambda over multiples; one pass per prime power.
    std::vector<double> acc(N + 1, 0.0);
    for (long long x = 2; x <= N; ++x) {
        if (!T.is_prime_power(x)) continue;
        double lam = T.lambda(x);
        for (long long m = x; m <= N; m += x) acc[m] += lam;
    }
    double worst = 0.0;
    for (long long n = 1; n <= N; ++n)
        worst = std::max(worst, std::abs(acc[n] - std::log(static_cast<double>(n))));
    CHECK(worst < 1e-9);
}

TEST_CASE("segmented sieve agrees with direct factorization on a high window") {
    auto T = sieve_von_mangoldt(999000, 1000100, 1 << 10);
    for (long long x = 999000; x <= 1000100; ++x) {
        long long q = 0;
        int e = 0;
        long long m = x;
        for (long long f = 2; f * f <= m; ++f) {
            if (m % f == 0) {
                q = f;
                while (m % f == 0) {
                    m /= f;
                    ++e;
                }
                break;
            }
        }
        if (q == 0) {
            q = x;
            e = 1;
        } else if (m != 1) {
            q = 0;  // two distinct prime factors
        }
        if (q != 0) {
            CHECK(T.is_prime_power(x));
            CHECK(T.p[x - T.lo] == q);
            CHECK(static_cast<int>(T.k[x - T.lo]) == e);
        } else {
            CHECK_FALSE(T.is_prime_power(x));
        }
    }
    CHECK_THROWS_AS(sieve_von_mangoldt(1, 1LL << 50, 1 << 20, 1000), budget_error);
}

TEST_CASE("phi, mu, tau values and multiplicativity") {
    auto v1 = arithmetic_functions(1);
    CHECK(v1.phi == 1);
    CHECK(v1.mu == 1);
    CHECK(v1.tau == 1);
    auto v12 = arithmetic_functions(12);
    CHECK(v12.phi == 4);
    CHECK(v12.mu == 0);
    CHECK(v12.tau == 6);
    auto v30 = arithmetic_functions(30);
    CHECK(v30.phi == 8);
    CHECK(v30.mu == -1);
    CHECK(v30.tau == 8);

    auto rng = seeded_rng(2001);
    std::uniform_int_distribution<long long> u(1, 5000);
    int done = 0;
    while (done < 200) {
        long long a = u(rng), b = u(rng);
        if (std::gcd(a, b) != 1) continue;
        auto va = arithmetic_functions(a), vb = arithmetic_functions(b);
        auto vab = arithmetic_functions(a * b);
        CHECK(vab.phi == va.phi * vb.phi);
        CHECK(vab.mu == va.mu * vb.mu);
        CHECK(vab.tau == va.tau * vb.tau);
        ++done;
    }
}

TEST_CASE("Jordan totient equals its gcd definition") {
    for (long long q = 1; q <= 24; ++q) {
        CHECK(jordan_totient(q, 1) == arithmetic_functions(q).phi);
        for (int R = 1; R <= 2; ++R) {
            long long direct = 0;
            std::vector<long long> a(R, 1);
            while (true) {
                long long g = q;
                for (long long ai : a) g = std::gcd(g, ai);
                if (g == 1) ++direct;
                int pos = 0;
                while (pos < R && a[pos] == q) a[pos++] = 1;
                if (pos == R) break;
                ++a[pos];
            }
            CHECK(jordan_totient(q, R) == direct);
        }
    }
    CHECK(jordan_totient(6, 2) == 24);
    CHECK(jordan_totient(1, 5) == 1);
}

TEST_CASE("Dirichlet approximation hand cases") {
    auto r = dirichlet_approx(1.0 / 3.0, 10);
    CHECK(r.a == 1);
    CHECK(r.q == 3);
    CHECK(r.err < 1e-15);

    auto rpi = dirichlet_approx(3.14159265358979323846, 100);
    CHECK(rpi.a == 22);
    CHECK(rpi.q == 7);

    auto r0 = dirichlet_approx(0.0, 50);
    CHECK(r0.a == 0);
    CHECK(r0.q == 1);

    auto rint = dirichlet_approx(5.0, 50);
    CHECK(rint.a == 5);
    CHECK(rint.q == 1);
}

TEST_CASE("Dirichlet approximation contract on random inputs") {
    auto rng = seeded_rng(2002);
    std::uniform_real_distribution<double> ua(0.0, 1.0);
    std::uniform_int_distribution<long long> un(1, 100000);
    for (int iter = 0; iter < 10000; ++iter) {
        double alpha = ua(rng);
        long long N = un(rng);
        auto r = dirichlet_approx(alpha, N);
        CHECK(r.q >= 1);
        CHECK(r.q <= N);
        CHECK(std::gcd(std::llabs(r.a), r.q) == 1);
        double resid = std::abs(r.q * alpha - r.a);
        CHECK(resid <= 1.0 / static_cast<double>(N) + 1e-12);
        CHECK(r.err == doctest::Approx(std::abs(alpha - static_cast<double>(r.a) / r.q))
                           .epsilon(1e-12));
    }
}

TEST_CASE("Vaughan weight tables at W = 3") {
    auto V = vaughan_weights(3);
    REQUIRE(V.xi.size() == 10);
    CHECK(V.xi[0] == 0.0);
    CHECK(V.xi[1] == 0.0);
    CHECK(V.xi[2] == doctest::Approx(std::log(2.0)));
    CHECK(V.xi[3] == doctest::Approx(std::log(3.0)));
    CHECK(V.xi[4] == doctest::Approx(-std::log(2.0)));
    CHECK(V.xi[5] == 0.0);
    CHECK(V.xi[6] == doctest::Approx(-std::log(6.0)));
    CHECK(V.xi[9] == doctest::Approx(-std::log(3.0)));
    CHECK(V.eta(1) == 1.0);
    CHECK(V.eta(2) == 0.0);
    CHECK(V.eta(6) == -1.0);
    CHECK(V.eta(5) == 1.0);
    CHECK(V.mu_small[2] == -1);
}

TEST_CASE("three-term identity residual vanishes beyond W^2") {
    CHECK(std::abs(vaughan_identity_check(101, 3)) < 1e-12);
    CHECK(std::abs(vaughan_identity_check(100, 3)) < 1e-12);
    CHECK(std::abs(vaughan_identity_check(128, 3)) < 1e-12);
    CHECK_THROWS_AS(vaughan_identity_check(9, 3), input_error);

    for (int W : {2, 3, 5, 10}) {
        double worst = 0.0;
        for (long long n = static_cast<long long>(W) * W + 1; n <= 5000; ++n)
            worst = std::max(worst, std::abs(vaughan_identity_check(n, W)));
        CHECK(worst < 1e-12);
    }
}
