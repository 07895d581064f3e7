#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>

#include "circle/local.hpp"
#include "test_util.hpp"

using namespace circle;

TEST_CASE("unit Gauss sums, hand cases") {
    auto E1 = testutil::e1_system();
    CHECK(gauss_sum_star(1, {1}, E1) == cplx(1.0, 0.0));
    cplx s3 = gauss_sum_star(3, {1}, E1);
    CHECK(s3.real() == doctest::Approx(8.0).epsilon(1e-12));
    CHECK(std::abs(s3.imag()) < 1e-12);
    cplx s2 = gauss_sum_star(2, {1}, E1);
    CHECK(s2.real() == doctest::Approx(1.0).epsilon(1e-12));

    CHECK_THROWS_AS(gauss_sum_star(3, {4}, E1), input_error);
    CHECK_THROWS_AS(gauss_sum_star(3, {1, 1}, E1), input_error);
}

TEST_CASE("diagonal factorization equals the unit-grid enumeration") {
    auto E1 = testutil::e1_system();
    auto rng = seeded_rng(5001);
    // strip the diagonal flag by rebuilding through a non-diagonal twin:
    // evaluating the same forms through the generic route must agree.
    for (long long q : {2, 3, 4, 5, 6, 9, 12}) {
        std::uniform_int_distribution<long long> ua(1, q);
        for (int iter = 0; iter < 5; ++iter) {
            std::vector<long long> a{ua(rng)};
            cplx fast = gauss_sum_star(q, a, E1);
            // generic route: enumerate units directly here
            cplx slow = 0;
            for (long long x = 1; x < q; ++x) {
                if (std::gcd(x, q) != 1) continue;
                for (long long y = 1; y < q; ++y) {
                    if (std::gcd(y, q) != 1) continue;
                    for (long long z = 1; z < q; ++z) {
                        if (std::gcd(z, q) != 1) continue;
                        long long v =
                            ((x * x + y * y - 2 * z * z) % q * a[0] % q + q) % q;
                        slow += unit_phase(static_cast<long double>(v) / q);
                    }
                }
            }
            CHECK(std::abs(fast - slow) < 1e-9 * (1.0 + std::abs(slow)));
        }
    }
}

TEST_CASE("conjugate symmetry of the Gauss sums") {
    auto E1 = testutil::e1_system();
    for (long long q : {3, 4, 5, 7, 9}) {
        for (long long a = 1; a <= q; ++a) {
            std::vector<long long> av{a};
            std::vector<long long> neg{(q - a) == 0 ? q : q - a};
            cplx s = gauss_sum_star(q, av, E1);
            cplx sn = gauss_sum_star(q, neg, E1);
            CHECK(std::abs(sn - std::conj(s)) < 1e-10 * (1.0 + std::abs(s)));
        }
    }
}

TEST_CASE("A* values") {
    auto E1 = testutil::e1_system();
    CHECK(A_star(1, E1) == cplx(1.0, 0.0));
    CHECK(A_star(2, E1).real() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(A_star(3, E1).real() == doctest::Approx(16.0).epsilon(1e-12));
    CHECK(A_star(4, E1).real() == doctest::Approx(16.0).epsilon(1e-12));
    CHECK(A_star(9, E1).real() == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(A_star(6, E1).real() == doctest::Approx(16.0).epsilon(1e-10));
    for (long long q : {2, 3, 4, 5, 6, 9, 12, 25, 30})
        CHECK(std::abs(A_star(q, E1).imag()) < 1e-9);
}

TEST_CASE("multiplicativity of A* over coprime levels") {
    auto E1 = testutil::e1_system();
    auto rng = seeded_rng(5002);
    auto Fd = testutil::random_diagonal(rng, 4, 2, 3);
    for (const auto& F : {E1, Fd}) {
        for (long long q1 = 2; q1 <= 12; ++q1)
            for (long long q2 = q1 + 1; q2 <= 12; ++q2) {
                if (std::gcd(q1, q2) != 1) continue;
                cplx lhs = A_star(q1 * q2, F);
                cplx rhs = A_star(q1, F) * A_star(q2, F);
                CHECK(std::abs(lhs - rhs) <= 1e-8 * (1.0 + std::abs(rhs)));
            }
    }
}

TEST_CASE("truncated series") {
    auto E1 = testutil::e1_system();
    auto t1 = singular_series_truncated(E1, 1);
    CHECK(t1.value == doctest::Approx(1.0));
    REQUIRE(t1.terms.size() == 1);

    auto t3 = singular_series_truncated(E1, 3);
    CHECK(t3.value == doctest::Approx(4.0).epsilon(1e-10));
    CHECK(t3.terms[1].second == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(t3.terms[2].second == doctest::Approx(2.0).epsilon(1e-10));

    auto t4 = singular_series_truncated(E1, 4);
    CHECK(t4.value == doctest::Approx(6.0).epsilon(1e-10));  // + 16/phi(4)^3

    // all-or-nothing refusal
    auto F = FormSystem::make(3, 1, 2, {{{{1, 1, 0}, 1}, {{0, 0, 2}, 1}}});
    CHECK_THROWS_AS(singular_series_truncated(F, 40, 20000), budget_error);
}

TEST_CASE("unit solution counts") {
    auto E1 = testutil::e1_system();
    CHECK(unit_solution_count(3, 1, E1) == 8);
    CHECK(unit_solution_count(2, 1, E1) == 1);
    CHECK(unit_solution_count(5, 0, E1) == 1);

    // diagonal fast path against the generic grid path
    auto F2 = FormSystem::make(2, 1, 2, {{{{2, 0}, 1}, {{0, 2}, 1}}});
    auto Fx = FormSystem::make(2, 1, 2, {{{{2, 0}, 1}, {{0, 2}, 1}, {{1, 1}, 2}}});
    for (long long p : {2, 3, 5}) {
        for (int k = 1; k <= 2; ++k) {
            // (x+y)^2 vs x^2+y^2+2xy count identically
            Int a = unit_solution_count(p, k, F2);
            Int direct = 0;
            long long M = 1;
            for (int r = 0; r < k; ++r) M *= p;
            for (long long x = 1; x < M; ++x) {
                if (x % p == 0) continue;
                for (long long y = 1; y < M; ++y) {
                    if (y % p == 0) continue;
                    if ((x * x + y * y) % M == 0) ++direct;
                }
            }
            CHECK(a == direct);
            CHECK(unit_solution_count(p, k, Fx) >= 0);
        }
    }
}

TEST_CASE("orthogonality identity ties characters to densities") {
    auto E1 = testutil::e1_system();
    for (long long p : {2, 3, 5, 7})
        for (int k = 0; k <= 3; ++k) {
            auto rep = orthogonality_check(p, k, E1);
            CHECK(std::abs(rep.partial_sum - rep.normalized) <=
                  1e-9 * std::max(1.0, std::abs(rep.normalized)));
        }
    auto r31 = orthogonality_check(3, 1, E1);
    CHECK(r31.partial_sum == doctest::Approx(3.0).epsilon(1e-10));
    CHECK(r31.unit_count == 8);
    auto r21 = orthogonality_check(2, 1, E1);
    CHECK(r21.partial_sum == doctest::Approx(2.0).epsilon(1e-10));

    auto rng = seeded_rng(5003);
    auto F = testutil::random_system(rng, 4, 1, 3);
    for (long long p : {2, 3, 5})
        for (int k = 1; k <= 2; ++k) orthogonality_check(p, k, F);
}

TEST_CASE("Gauss sum size report") {
    auto E1 = testutil::e1_system();
    auto rows = gauss_size_report(E1, 27);
    CHECK(!rows.empty());
    for (const auto& r : rows) {
        CHECK(r.q >= 2);
        CHECK(r.max_abs >= 0.0);
    }
}

TEST_CASE("p-adic certificates for the reference conic") {
    auto E1 = testutil::e1_system();
    for (long long p : {2, 3, 5, 7, 11}) {
        auto res = padic_certificate(p, E1, 5);
        REQUIRE(res.status == CertStatus::kFound);
        CHECK(res.cert.k >= 5);
        CHECK(res.cert.jac_rank_mod_p == 1);
        CHECK(verify_certificate(res.cert, E1));
        if (p == 2) {
            CHECK(res.cert.gamma == 1);
            CHECK(res.cert.point[0] % 2 == 1);
        } else {
            CHECK(res.cert.gamma == 0);
        }
    }
    // p = 5 base point from the mod-5 scan: first lexicographic unit zero
    auto r5 = padic_certificate(5, E1, 1);
    REQUIRE(r5.status == CertStatus::kFound);
    std::vector<long long> pt;
    for (const auto& x : r5.cert.point) pt.push_back(static_cast<long long>(x));
    CHECK((pt[0] * pt[0] + pt[1] * pt[1] - 2 * pt[2] * pt[2]) % 5 == 0);
}

namespace {

// x^2 + y^2 - 7z^2: locally soluble at p = 5 but with no rational point, so
// lifting does real work instead of parking on an exact integer zero.
FormSystem no_rational_point_system() {
    return FormSystem::make(3, 1, 2,
                            {{{{2, 0, 0}, 1}, {{0, 2, 0}, 1}, {{0, 0, 2}, -7}}});
}

// x^2 + 3y^2 + 4z^2: positive definite, yet 2-adically soluble in units;
// the dyadic lift never terminates on an exact zero.
FormSystem definite_dyadic_system() {
    return FormSystem::make(3, 1, 2,
                            {{{{2, 0, 0}, 1}, {{0, 2, 0}, 3}, {{0, 0, 2}, 4}}});
}

}  // namespace

TEST_CASE("lift coherence for an odd prime") {
    auto E1 = testutil::e1_system();
    auto F5 = no_rational_point_system();
    for (int k = 1; k <= 6; ++k) {
        for (const auto& F : {E1, F5}) {
            auto a = padic_certificate(5, F, k);
            auto b = padic_certificate(5, F, k + 1);
            REQUIRE(a.status == CertStatus::kFound);
            REQUIRE(b.status == CertStatus::kFound);
            CHECK(a.cert.gamma == 0);
            Int M = 1;
            for (int r = 0; r < a.cert.k; ++r) M *= 5;
            for (int j = 0; j < 3; ++j)
                CHECK(b.cert.point[j] % M == a.cert.point[j]);
        }
    }
    // the lifted point is not congruent to any fixed integer zero
    auto deep = padic_certificate(5, F5, 8);
    REQUIRE(deep.status == CertStatus::kFound);
    CHECK(verify_certificate(deep.cert, F5));
}

TEST_CASE("dyadic lifts cohere below the correction scale") {
    // gamma = 1 at p = 2: step j corrects at scale 2^{j-1}, so consecutive
    // certificates agree mod 2^{k-1} rather than mod 2^k.
    auto F = definite_dyadic_system();
    for (int k = 3; k <= 7; ++k) {
        auto a = padic_certificate(2, F, k);
        auto b = padic_certificate(2, F, k + 1);
        REQUIRE(a.status == CertStatus::kFound);
        REQUIRE(b.status == CertStatus::kFound);
        CHECK(a.cert.gamma == 1);
        Int M = 1;
        for (int r = 0; r < a.cert.k - a.cert.gamma; ++r) M *= 2;
        for (int j = 0; j < 3; ++j)
            CHECK(b.cert.point[j] % M == a.cert.point[j] % M);
    }
}

TEST_CASE("local solubility pattern of a Hasse-violating candidate") {
    auto F5 = no_rational_point_system();
    CHECK(padic_certificate(5, F5, 3).status == CertStatus::kFound);
    for (long long p : {2, 3, 7}) {
        auto r = padic_certificate(p, F5, 3);
        CHECK(r.status == CertStatus::kNotFound);
        CHECK(r.searched_level == 1);
    }
}

TEST_CASE("proven absence and inconclusive searches are distinguished") {
    // x^2 + y^2 has no unit zeros mod 4, so absence is proven at level 2
    auto Fsum = FormSystem::make(2, 1, 2, {{{{2, 0}, 1}, {{0, 2}, 1}}});
    auto r2 = padic_certificate(2, Fsum, 3);
    CHECK(r2.status == CertStatus::kNotFound);
    CHECK(r2.searched_level == 2);

    // four squares: units are 1 mod 8, so the sum is 4 mod 8
    auto F4 = FormSystem::make(
        4, 1, 2, {{{{2, 0, 0, 0}, 1}, {{0, 2, 0, 0}, 1}, {{0, 0, 2, 0}, 1},
                   {{0, 0, 0, 2}, 1}}});
    auto r4 = padic_certificate(2, F4, 3);
    CHECK(r4.status == CertStatus::kNotFound);
    CHECK(r4.searched_level == 3);

    // (x - y)^2 vanishes on the diagonal but every unit zero is singular
    auto Fdeg =
        FormSystem::make(2, 1, 2, {{{{2, 0}, 1}, {{1, 1}, -2}, {{0, 2}, 1}}});
    auto rdeg = padic_certificate(3, Fdeg, 2, 4);
    CHECK(rdeg.status == CertStatus::kInconclusive);
    CHECK(rdeg.searched_level == 4);
}

TEST_CASE("tampered certificates fail verification") {
    auto E1 = testutil::e1_system();
    auto res = padic_certificate(5, E1, 4);
    REQUIRE(res.status == CertStatus::kFound);
    auto good = res.cert;
    CHECK(verify_certificate(good, E1));

    auto bad = good;
    bad.point[0] += 1;
    CHECK_FALSE(verify_certificate(bad, E1));

    bad = good;
    bad.point[0] = 5;  // not a unit
    CHECK_FALSE(verify_certificate(bad, E1));

    bad = good;
    bad.jac_rank_mod_p = 0;
    CHECK_FALSE(verify_certificate(bad, E1));

    // claiming more precision than a genuinely lifted point has must fail
    auto F5 = no_rational_point_system();
    auto lifted = padic_certificate(5, F5, 4);
    REQUIRE(lifted.status == CertStatus::kFound);
    auto overclaim = lifted.cert;
    overclaim.k += 1;
    CHECK_FALSE(verify_certificate(overclaim, F5));
}

TEST_CASE("certificate serialization round trip") {
    auto E1 = testutil::e1_system();
    auto res = padic_certificate(7, E1, 3);
    REQUIRE(res.status == CertStatus::kFound);
    auto doc = serialize_certificate(res.cert);
    auto back = parse_certificate(doc);
    CHECK(back.p == res.cert.p);
    CHECK(back.k == res.cert.k);
    CHECK(back.gamma == res.cert.gamma);
    CHECK(back.point == res.cert.point);
    CHECK(verify_certificate(back, E1));

    nlohmann::json broken = doc;
    broken.erase("point");
    CHECK_THROWS_AS(parse_certificate(broken), input_error);
}

TEST_CASE("budget refusals carry the required size") {
    // non-diagonal, so the unit grid (101^2 points) is the only route
    auto F = FormSystem::make(2, 1, 2, {{{{2, 0}, 1}, {{1, 1}, 1}}});
    CHECK_THROWS_AS(gauss_sum_star(101, {1}, F, 1000), budget_error);
    CHECK_THROWS_AS(unit_solution_count(101, 1, F, 1000), budget_error);
    CHECK_THROWS_AS(padic_certificate(101, F, 2, 3, 1000), budget_error);
    try {
        gauss_sum_star(101, {1}, F, 1000);
        FAIL("expected refusal");
    } catch (const budget_error& e) {
        CHECK(e.required == 101 * 101);
    }
}

TEST_CASE("eight-variable unit counts overflow 64-bit counters safely") {
    auto F8 = testutil::f8_system();
    // odd unit squares are 1 mod 8, so the form vanishes on every unit
    // vector at p = 2 up to k = 3; likewise unit squares are 1 mod 3
    CHECK(unit_solution_count(2, 1, F8) == Int(1));
    CHECK(unit_solution_count(2, 2, F8) == Int(256));
    CHECK(unit_solution_count(2, 3, F8) == Int(65536));
    CHECK(orthogonality_check(2, 3, F8).normalized ==
          doctest::Approx(8.0).epsilon(1e-12));
    CHECK(orthogonality_check(3, 1, F8).normalized ==
          doctest::Approx(3.0).epsilon(1e-12));
    // phi(343)^8 ~ 5.6e19 exceeds 64 bits; the count switches to big
    // integers and the identity still closes against the character side
    auto rep = orthogonality_check(7, 3, F8);
    CHECK(rep.unit_count > Int(0));
    CHECK(std::abs(rep.partial_sum - rep.normalized) < 1e-9);
}
