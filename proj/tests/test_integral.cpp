#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "circle/integral.hpp"

using namespace circle;

namespace {

// x1^2 + x2^2 - 2*x3^2
FormSystem cone_system() {
    return FormSystem::make(
        3, 1, 2, {{{{2, 0, 0}, 1}, {{0, 2, 0}, 1}, {{0, 0, 2}, -2}}});
}

// x^2 (one variable), the Fresnel case
FormSystem square_system() {
    return FormSystem::make(1, 1, 2, {{{{2}, 1}}});
}

// x1^2 - x2^2, delta-density (1/2)ln 9 on (0.1,0.9)^2
FormSystem hyperbola_system() {
    return FormSystem::make(2, 1, 2, {{{{2, 0}, 1}, {{0, 2}, -1}}});
}

// x1*x2 - x3*x4, delta-density exactly 2 on the unit box
FormSystem bilinear_system() {
    return FormSystem::make(
        4, 1, 2, {{{{1, 1, 0, 0}, 1}, {{0, 0, 1, 1}, -1}}});
}

// 7 variables with a cross term, forcing the quasi-random path
FormSystem wide_system() {
    std::vector<Monomial> f;
    f.push_back({{1, 1, 0, 0, 0, 0, 0}, 1});
    for (int j = 2; j < 7; ++j) {
        std::vector<int> e(7, 0);
        e[j] = 2;
        f.push_back({e, j % 2 ? 1 : -1});
    }
    return FormSystem::make(7, 1, 2, {f});
}

BoxSpec box_of(std::vector<std::pair<double, double>> sides) {
    BoxSpec b;
    b.sides = std::move(sides);
    return b;
}

}  // namespace

TEST_CASE("upsilon at beta = 0 is the box volume") {
    auto F = cone_system();
    CHECK(upsilon_beta(F, BoxSpec::unit(3), {0.0}) == cplx{1.0, 0.0});
    auto b = box_of({{0.2, 0.6}, {0.1, 0.9}, {0.5, 1.0}});
    cplx v = upsilon_beta(F, b, {0.0});
    CHECK(v.real() == doctest::Approx(b.volume()).epsilon(1e-15));
    CHECK(v.imag() == 0.0);

    // quasi-random path (7 variables, non-diagonal)
    auto W = wide_system();
    cplx vw = upsilon_beta(W, BoxSpec::unit(7), {0.0});
    CHECK(vw.real() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("Fresnel reference value") {
    // integral_0^1 e(x^2) dx, high-precision reference quadrature
    const cplx ref{0.244126703037670377, 0.171707839181849121};
    cplx v = upsilon_beta(square_system(), BoxSpec::unit(1), {1.0});
    CHECK(std::abs(v - ref) <= 1e-10);
}

TEST_CASE("conjugate symmetry is exact on all three paths") {
    QuadratureSpec q;
    auto flip = [](std::vector<double> b) {
        for (double& t : b) t = -t;
        return b;
    };
    auto check_pair = [&](const FormSystem& F, const BoxSpec& box,
                          const std::vector<double>& beta) {
        cplx a = upsilon_beta(F, box, beta, q);
        cplx b = upsilon_beta(F, box, flip(beta), q);
        CHECK(a.real() == b.real());
        CHECK(a.imag() == -b.imag());
    };
    check_pair(cone_system(), BoxSpec::unit(3), {0.7});          // diagonal
    check_pair(bilinear_system(), BoxSpec::unit(4), {1.3});      // tensor
    check_pair(wide_system(), BoxSpec::unit(7), {0.9});          // qmc
}

TEST_CASE("upsilon magnitude bounded by the volume") {
    auto F = cone_system();
    auto rng = seeded_rng(501);
    std::uniform_real_distribution<double> U(-20.0, 20.0);
    for (int t = 0; t < 50; ++t) {
        cplx v = upsilon_beta(F, BoxSpec::unit(3), {U(rng)});
        CHECK(std::abs(v) <= 1.0 + 1e-9);
    }
}

TEST_CASE("factorized path matches a straightforward reference rule") {
    // product of three 1-D Simpson integrals computed right here
    auto simpson1d = [](double c, double beta, int N) {
        double h = 1.0 / N;
        cplx s = 0.0;
        for (int k = 0; k <= N; ++k) {
            double x = k * h;
            double wgt = (k == 0 || k == N) ? 1.0 : (k % 2 ? 4.0 : 2.0);
            double ang = 2.0 * M_PI * beta * c * x * x;
            s += wgt * cplx{std::cos(ang), std::sin(ang)};
        }
        return s * (h / 3.0);
    };
    double beta = 0.7;
    cplx ref = simpson1d(1, beta, 4000) * simpson1d(1, beta, 4000) *
               simpson1d(-2, beta, 4000);
    cplx v = upsilon_beta(cone_system(), BoxSpec::unit(3), {beta});
    CHECK(std::abs(v - ref) <= 1e-9);
}

TEST_CASE("tensor path matches a 2-D reference rule") {
    // F = x*y on the unit square at beta = 0.8
    auto F = FormSystem::make(2, 1, 2, {{{{1, 1}, 1}}});
    int N = 600;
    double h = 1.0 / N;
    cplx ref = 0.0;
    for (int i = 0; i <= N; ++i)
        for (int j = 0; j <= N; ++j) {
            double wi = (i == 0 || i == N) ? 1.0 : (i % 2 ? 4.0 : 2.0);
            double wj = (j == 0 || j == N) ? 1.0 : (j % 2 ? 4.0 : 2.0);
            double ang = 2.0 * M_PI * 0.8 * (i * h) * (j * h);
            ref += wi * wj * cplx{std::cos(ang), std::sin(ang)};
        }
    ref *= h * h / 9.0;
    cplx v = upsilon_beta(F, BoxSpec::unit(2), {0.8});
    CHECK(std::abs(v - ref) <= 1e-7);
}

TEST_CASE("singular integral refinement trace and tail") {
    auto r = singular_integral(cone_system(), BoxSpec::unit(3), 16.0);
    REQUIRE(r.trace.size() == 4);
    CHECK(r.trace[0].Q == doctest::Approx(2.0));
    CHECK(r.trace[3].Q == doctest::Approx(16.0));
    for (auto& step : r.trace) {
        CHECK(step.beta_points > 0);
        CHECK(step.x_evals > 0);
    }
    CHECK(r.converged);
    // the cone density on the unit box, by exact slice integration:
    // integral_0^1 dz of (pi/4 - acos-correction) = 0.6232252401402305
    CHECK(std::abs(r.value - 0.6232252401402305) <= 0.05);
    CHECK(std::abs(r.value + r.tail_fit - 0.6232252401402305) <= 0.02);
    CHECK(std::abs(r.tail_fit) <= 0.1 * r.value);
}

TEST_CASE("unconverged ladders are flagged but still report a value") {
    QuadratureSpec q;
    q.tolerance = 1e-13;
    auto r = singular_integral(cone_system(), BoxSpec::unit(3), 4.0, q);
    CHECK_FALSE(r.converged);
    CHECK(std::isfinite(r.value));
    CHECK(r.trace.size() == 4);
}

TEST_CASE("integer rescaling of the form rescales the integral") {
    // For G = 2F the substitution beta -> beta/2 gives an exact identity
    // between the truncated integrals at caps 8 and 16.  Fine beta panels
    // push both quadratures to roundoff level so the identity is sharp.
    auto F = cone_system();
    auto G = FormSystem::make(
        3, 1, 2, {{{{2, 0, 0}, 2}, {{0, 2, 0}, 2}, {{0, 0, 2}, -4}}});
    QuadratureSpec q;
    q.beta_panel_nodes = 24;
    q.beta_panel_width = 0.5;
    q.panel_cycles = 2.0;
    double a = singular_integral(G, BoxSpec::unit(3), 8.0, q).value;
    double b = singular_integral(F, BoxSpec::unit(3), 16.0, q).value;
    CHECK(std::abs(a - 0.5 * b) <= 1e-8 * std::max(1.0, std::abs(b)));
}

TEST_CASE("full-domain beta integration is real in the limit") {
    // Integrate upsilon over the whole square [-Q,Q]^1 without using the
    // half-domain fold; the imaginary part must be at quadrature-noise level
    // and the real part must match the folded implementation.
    auto F = hyperbola_system();
    auto b = box_of({{0.1, 0.9}, {0.1, 0.9}});
    double Q = 4.0;
    int panels = 8, g = 12;
    const GLRule& gl = gauss_legendre(g);
    cplx full = 0.0;
    double w = 2.0 * Q / panels;
    for (int k = 0; k < panels; ++k)
        for (int i = 0; i < g; ++i) {
            double beta = -Q + w * k + 0.5 * w * (gl.x[i] + 1.0);
            full += 0.5 * w * gl.w[i] * upsilon_beta(F, b, {beta});
        }
    QuadratureSpec q;
    q.refine_levels = 2;
    double folded = singular_integral(F, b, Q, q).value;
    CHECK(std::abs(full.imag()) <= 1e-6 * std::abs(full));
    CHECK(std::abs(full.real() - folded) <= 1e-6 * std::abs(folded));
}

TEST_CASE("budget refusal on the beta grid") {
    QuadratureSpec q;
    q.budget = 1000;
    CHECK_THROWS_AS(
        singular_integral(bilinear_system(), BoxSpec::unit(4), 8.0, q),
        budget_error);
    try {
        singular_integral(bilinear_system(), BoxSpec::unit(4), 8.0, q);
    } catch (const budget_error& e) {
        CHECK(e.required > 1000);
    }
}

TEST_CASE("volume oracle: no real zero means zero hits") {
    // On this box x1^2 + x2^2 - 2*x3^2 >= 0.64 + 0.64 - 0.02 > eps/2
    auto b = box_of({{0.8, 0.9}, {0.8, 0.9}, {0.05, 0.1}});
    auto v = volume_density(cone_system(), b, 0.05, 20000, 9001);
    CHECK(v.hits == 0);
    CHECK(v.estimate == 0.0);
    CHECK(v.std_err > 0.0);
}

TEST_CASE("volume oracle: halving epsilon is stable") {
    auto b = box_of({{0.05, 0.95}, {0.05, 0.95}, {0.05, 0.95}});
    auto F = cone_system();
    auto a1 = volume_density(F, b, 0.02, 400000, 11);
    auto a2 = volume_density(F, b, 0.01, 400000, 11);
    double gap = std::abs(a1.estimate - a2.estimate);
    double sigma = std::hypot(a1.std_err, a2.std_err);
    CHECK(gap <= 3.0 * sigma + 0.01 * a1.estimate);
}

TEST_CASE("volume oracle against the logarithmic closed form") {
    // For x1*x2 - x3*x4 the slab volume reduces to a 1-D slice integral of
    // -log(u) against the area function t(1 - log t): at eps = 0.005 the
    // scaled slab is exactly 1.9620873487459846, and the eps -> 0 limit of
    // the density is exactly 2.
    auto v = volume_density(bilinear_system(), BoxSpec::unit(4), 0.005,
                            800000, 77);
    CHECK(std::abs(v.estimate - 1.9620873487459846) <=
          std::max(0.02 * 2.0, 3.0 * v.std_err));
    CHECK(std::abs(v.estimate - 2.0) <= 0.1);
    CHECK(v.std_err < 0.05);
}

TEST_CASE("cross-oracle: truncated integral vs volume slab") {
    struct Case {
        FormSystem F;
        BoxSpec box;
        double Q;
    };
    std::vector<Case> cases;
    cases.push_back({cone_system(), BoxSpec::unit(3), 64.0});
    cases.push_back(
        {hyperbola_system(), box_of({{0.1, 0.9}, {0.1, 0.9}}), 64.0});
    cases.push_back({FormSystem::make(4, 1, 2,
                                      {{{{2, 0, 0, 0}, 1},
                                        {{0, 2, 0, 0}, 1},
                                        {{0, 0, 2, 0}, 1},
                                        {{0, 0, 0, 2}, -3}}}),
                     BoxSpec::unit(4), 32.0});
    for (auto& c : cases) {
        auto si = singular_integral(c.F, c.box, c.Q);
        auto vd = volume_density(c.F, c.box, 0.01, 400000, 2026);
        double est = si.value + si.tail_fit;
        double tol = std::max(0.05 * std::abs(vd.estimate), 3.0 * vd.std_err);
        CHECK(std::abs(est - vd.estimate) <= tol);
    }
}

TEST_CASE("hyperbola density matches (1/2) log 9") {
    // The integrand here is |A(beta)|^2 >= 0 with a slow ~1/Q tail, so the
    // truncation radius must be generous.
    auto b = box_of({{0.1, 0.9}, {0.1, 0.9}});
    auto si = singular_integral(hyperbola_system(), b, 128.0);
    CHECK(std::abs(si.value - 0.5 * std::log(9.0)) <= 0.025);
}

TEST_CASE("real zero search on the cone") {
    auto sol = real_cube_solution(cone_system(), 0.0, 1.0, 40, 321);
    REQUIRE(sol.found);
    CHECK(sol.residual <= 1e-10);
    CHECK(sol.min_singular > 1e-8);
    REQUIRE(sol.point.size() == 3);
    for (double t : sol.point) {
        CHECK(t > 0.0);
        CHECK(t < 1.0);
    }
    double f = sol.point[0] * sol.point[0] + sol.point[1] * sol.point[1] -
               2.0 * sol.point[2] * sol.point[2];
    CHECK(std::abs(f) <= 1e-10);

    // the solver's zero has the same quality as the analytic one
    // (0.3, 0.5, sqrt(0.17))
    double z = std::sqrt(0.17);
    double ref = 0.09 + 0.25 - 2.0 * z * z;
    CHECK(std::abs(ref) <= 1e-10);
}

TEST_CASE("real zero search reports absence honestly") {
    auto F = FormSystem::make(2, 1, 2, {{{{2, 0}, 1}, {{0, 2}, 1}}});
    auto sol = real_cube_solution(F, 0.0, 1.0, 15, 8);
    CHECK_FALSE(sol.found);
    CHECK(sol.attempts_used == 15);
}

TEST_CASE("seeded runs are reproducible") {
    auto F = cone_system();
    auto v1 = volume_density(F, BoxSpec::unit(3), 0.02, 50000, 42);
    auto v2 = volume_density(F, BoxSpec::unit(3), 0.02, 50000, 42);
    CHECK(v1.estimate == v2.estimate);
    CHECK(v1.hits == v2.hits);
    auto v3 = volume_density(F, BoxSpec::unit(3), 0.02, 50000, 43);
    CHECK(v3.hits != v1.hits);

    auto s1 = real_cube_solution(F, 0.0, 1.0, 5, 77);
    auto s2 = real_cube_solution(F, 0.0, 1.0, 5, 77);
    REQUIRE(s1.found);
    REQUIRE(s2.found);
    CHECK(s1.point == s2.point);
}

TEST_CASE("input validation") {
    auto F = cone_system();
    CHECK_THROWS_AS(upsilon_beta(F, BoxSpec::unit(2), {1.0}), input_error);
    CHECK_THROWS_AS(upsilon_beta(F, BoxSpec::unit(3), {1.0, 2.0}),
                    input_error);
    CHECK_THROWS_AS(singular_integral(F, BoxSpec::unit(3), -1.0),
                    input_error);
    CHECK_THROWS_AS(volume_density(F, BoxSpec::unit(3), 0.0, 20000, 1),
                    input_error);
    CHECK_THROWS_AS(volume_density(F, BoxSpec::unit(3), 0.1, 100, 1),
                    input_error);
    CHECK_THROWS_AS(real_cube_solution(F, 1.0, 0.0, 3, 1), input_error);
}
