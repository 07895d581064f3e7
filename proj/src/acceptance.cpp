#include "circle/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <map>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>

#include "circle/arcs.hpp"
#include "circle/arith.hpp"
#include "circle/counting.hpp"
#include "circle/expsum.hpp"
#include "circle/forms.hpp"
#include "circle/integral.hpp"
#include "circle/local.hpp"
#include "circle/records.hpp"

namespace circle {
namespace {

// x1^2 + x2^2 - 2*x3^2, the reference system of the whole suite
FormSystem e1() {
    return FormSystem::make(
        3, 1, 2, {{{{2, 0, 0}, 1}, {{0, 2, 0}, 1}, {{0, 0, 2}, -2}}});
}

// x1^2 + ... + x4^2 - x5^2 - ... - x8^2
FormSystem f8() {
    std::vector<Monomial> f;
    for (int j = 0; j < 8; ++j) {
        std::vector<int> e(8, 0);
        e[j] = 2;
        f.push_back({e, j < 4 ? 1 : -1});
    }
    return FormSystem::make(8, 1, 2, {f});
}

FormSystem random_diagonal(std::mt19937_64& g, int nmax, int dmax) {
    std::uniform_int_distribution<int> un(1, nmax), ud(2, dmax), uc(-3, 3);
    int n = un(g), d = ud(g);
    std::vector<Monomial> f;
    for (int j = 0; j < n; ++j) {
        int c = uc(g);
        if (c == 0 && f.empty() && j == n - 1) c = 1;
        if (c == 0) continue;
        std::vector<int> e(n, 0);
        e[j] = d;
        f.push_back({e, c});
    }
    if (f.empty()) {
        std::vector<int> e(n, 0);
        e[0] = d;
        f.push_back({e, 1});
    }
    return FormSystem::make(n, 1, d, {f});
}

FormSystem random_system(std::mt19937_64& g) {
    std::uniform_int_distribution<int> un(1, 4), uR(1, 2), ud(2, 4);
    int n = un(g), R = uR(g), d = ud(g);
    std::uniform_int_distribution<int> uc(-9, 9), uslot(0, n - 1), uk(1, 4);
    std::vector<std::vector<Monomial>> forms(R);
    for (int i = 0; i < R; ++i) {
        std::map<std::vector<int>, long long> acc;
        int want = uk(g);
        for (int k = 0; k < want; ++k) {
            std::vector<int> e(n, 0);
            for (int t = 0; t < d; ++t) e[uslot(g)] += 1;
            int c = 0;
            while (c == 0) c = uc(g);
            acc[e] += c;
        }
        for (const auto& [e, c] : acc)
            if (c != 0) forms[i].push_back({e, c});
        if (forms[i].empty()) {
            std::vector<int> e(n, 0);
            e[0] = d;
            forms[i].push_back({e, 1});
        }
    }
    return FormSystem::make(n, R, d, std::move(forms));
}

std::string fmt(const char* pattern, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, pattern);
    vsnprintf(buf, sizeof buf, pattern, ap);
    va_end(ap);
    return buf;
}

struct Gate {
    std::ostream& out;
    std::vector<CriterionOutcome> results;

    void run(int id, const std::string& name,
             const std::function<std::pair<bool, std::string>()>& body) {
        auto t0 = std::chrono::steady_clock::now();
        CriterionOutcome r;
        r.id = id;
        r.name = name;
        try {
            auto [pass, detail] = body();
            r.pass = pass;
            r.detail = detail;
        } catch (const std::exception& e) {
            r.pass = false;
            r.detail = std::string("exception: ") + e.what();
        }
        r.seconds = std::chrono::duration<double>(
                        std::chrono::steady_clock::now() - t0)
                        .count();
        out << fmt("[C%02d] %s %7.2fs  %-34s %s", r.id,
                   r.pass ? "PASS" : "FAIL", r.seconds, r.name.c_str(),
                   r.detail.c_str())
            << std::endl;
        results.push_back(std::move(r));
    }
};

// ---- criterion bodies ---------------------------------------------------

std::pair<bool, std::string> c1_multiplicativity() {
    const double tol = 1e-8;
    auto g = seeded_rng(4101);
    std::vector<FormSystem> systems = {e1(), random_diagonal(g, 3, 3)};
    double worst = 0.0;
    int pairs = 0;
    for (const auto& F : systems)
        for (long long q1 = 2; q1 <= 12; ++q1)
            for (long long q2 = q1 + 1; q2 <= 12; ++q2) {
                if (std::gcd(q1, q2) != 1) continue;
                cplx a1 = A_star(q1, F), a2 = A_star(q2, F);
                cplx a12 = A_star(q1 * q2, F);
                double gap =
                    std::abs(a12 - a1 * a2) / (1.0 + std::abs(a1 * a2));
                worst = std::max(worst, gap);
                ++pairs;
            }
    return {worst <= tol,
            fmt("worst %.2e over %d coprime pairs (tol %.0e)", worst, pairs,
                tol)};
}

std::pair<bool, std::string> c2_orthogonality() {
    const double tol = 1e-9;
    auto F = e1();
    double worst = 0.0;
    double hand31 = 0.0, hand21 = 0.0;
    for (long long p : {2, 3, 5, 7})
        for (int k = 1; k <= 3; ++k) {
            auto rep = orthogonality_check(p, k, F);
            worst = std::max(worst,
                             std::abs(rep.partial_sum - rep.normalized));
            if (p == 3 && k == 1) hand31 = rep.normalized;
            if (p == 2 && k == 1) hand21 = rep.normalized;
        }
    bool hands = std::abs(hand31 - 3.0) < 1e-12 &&
                 std::abs(hand21 - 2.0) < 1e-12;
    return {worst <= tol && hands,
            fmt("worst identity gap %.2e (tol %.0e); hand values %g and %g",
                worst, tol, hand31, hand21)};
}

std::pair<bool, std::string> c3_exact_circle() {
    const double tol_rel = 1e-6, tol_abs = 1e-9;
    auto F = e1();
    auto box = BoxSpec::unit(3);
    double worst = 0.0;
    for (long long P : {10, 20, 30}) {
        auto a = count_weighted(F, P, box);
        auto b = count_via_dft(F, P, box);
        double gap = std::abs(a.N_weighted - b.N_weighted) /
                     std::max({1.0, a.N_weighted, b.N_weighted});
        worst = std::max(worst, gap);
    }
    auto g = seeded_rng(4103);
    std::uniform_int_distribution<long long> up(5, 20);
    for (int trial = 0; trial < 20; ++trial) {
        auto S = random_diagonal(g, 4, 3);
        long long P = up(g);
        auto bx = BoxSpec::unit(S.n);
        auto a = count_weighted(S, P, bx);
        auto b = count_via_dft(S, P, bx);
        double gap = std::abs(a.N_weighted - b.N_weighted) /
                     std::max({1.0, a.N_weighted, b.N_weighted});
        worst = std::max(worst, gap);
    }
    const double l2 = std::log(2.0), l3 = std::log(3.0);
    const double l5 = std::log(5.0), l7 = std::log(7.0);
    double closed = 3 * l2 * l2 * l2 + 2 * l3 * l3 * l3 + l5 * l5 * l5 +
                    l7 * l7 * l7;
    double abs_gap =
        std::abs(count_weighted(F, 10, box).N_weighted - closed);
    return {worst <= tol_rel && abs_gap <= tol_abs,
            fmt("worst rel %.2e (tol %.0e); closed-form gap %.2e (tol %.0e)",
                worst, tol_rel, abs_gap, tol_abs)};
}

std::pair<bool, std::string> c4_vaughan() {
    const double tol_id = 1e-12, tol_sum = 1e-8;
    double worst_id = 0.0;
    for (int W : {2, 3, 5, 10})
        for (long long n = 1LL * W * W + 1; n <= 10000; ++n)
            worst_id =
                std::max(worst_id, std::abs(vaughan_identity_check(n, W)));
    auto table = sieve_von_mangoldt(1, 500);
    auto g = seeded_rng(4104);
    std::uniform_real_distribution<double> ua(0.0, 1.0), ub(0.25, 0.4);
    std::uniform_int_distribution<long long> up(50, 500);
    std::uniform_int_distribution<int> ud(1, 3), uw(0, 1);
    double worst_sum = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
        long long P = up(g);
        int level = uw(g) ? 2 : 3;
        double b1 = ub(g);
        double b2 = b1 + (1.0 - b1) * std::max(0.2, ua(g));
        std::vector<double> f(ud(g) + 1, 0.0);
        f.back() = ua(g);
        if (f.size() > 2) f[1] = ua(g) - 0.5;
        auto split = prime_expsum_vaughan(f, P, b1, b2, level, table);
        auto [lo, hi] = scaled_range(b1, b2, P);
        cplx direct = lambda_exp_sum(f, lo, hi, table);
        double gap = std::abs(split.total - direct) /
                     std::max(std::abs(direct), 1.0);
        worst_sum = std::max(worst_sum, gap);
    }
    return {worst_id < tol_id && worst_sum <= tol_sum,
            fmt("identity worst %.2e (tol %.0e); split worst %.2e (tol %.0e)",
                worst_id, tol_id, worst_sum, tol_sum)};
}

std::pair<bool, std::string> c5_minor_decay() {
    const long long P = 10000;
    auto table = sieve_von_mangoldt(1, P);
    double sum_lambda = lambda_exp_sum({0.0}, 1, P, table).real();
    auto box = BoxSpec::unit(1);
    std::vector<double> ratio;
    for (long long Q : {4, 16, 64}) {
        auto pts = sample_minor_points(Q, P, 2, 200, 4105);
        double worst = 0.0;
        for (double alpha : pts) {
            cplx u = upsilon_m(alpha, {2}, {}, P, box, table);
            worst = std::max(worst, std::abs(u));
        }
        ratio.push_back(worst / sum_lambda);
    }
    bool mono = ratio[0] >= ratio[1] && ratio[1] >= ratio[2];
    return {mono, fmt("max|Y|/sumLambda: Q=4 %.4f, Q=16 %.4f, Q=64 %.4f "
                      "(non-increasing required)",
                      ratio[0], ratio[1], ratio[2])};
}

std::pair<bool, std::string> c6_certificates() {
    const double tol = 1e-10;
    auto F = e1();
    int lifted = 0, verified = 0, primes = 0;
    for (long long p = 2; p <= 50; ++p) {
        if (!sieve_von_mangoldt(p, p).is_prime(p)) continue;
        ++primes;
        auto res = padic_certificate(p, F, 4);
        if (res.status != CertStatus::kFound) continue;
        ++lifted;
        if (res.cert.k == 4 && verify_certificate(res.cert, F)) ++verified;
    }
    auto sol = real_cube_solution(F, 0.0, 1.0, 15, 4106);
    double recheck = 0.0;
    if (sol.found) {
        std::vector<double> fx(F.R, 0.0);
        for (int i = 0; i < F.R; ++i)
            for (const auto& m : F.forms[i]) {
                double t = static_cast<double>(m.c);
                for (int j = 0; j < F.n; ++j)
                    for (int e = 0; e < m.exps[j]; ++e) t *= sol.point[j];
                fx[i] += t;
            }
        for (double v : fx) recheck = std::max(recheck, std::abs(v));
    }
    bool ok = primes == 15 && lifted == 15 && verified == 15 && sol.found &&
              sol.residual <= tol && recheck <= tol;
    return {ok, fmt("p-adic %d/%d lifted+verified at k=4; real residual "
                    "%.1e (tol %.0e)",
                    verified, primes, sol.found ? recheck : -1.0, tol)};
}

std::pair<bool, std::string> c7_thresholds() {
    auto t = birch_thresholds(2, 1, 1024);
    bool pinned = t.kappa1 == 133 && t.kappa2 == 141 && t.kappa3 == 428 &&
                  t.bound == 1024;
    bool order = true;
    for (int d = 2; d <= 5; ++d)
        for (int R = 1; R <= 4; ++R) {
            auto u = birch_thresholds(d, R, 1);
            order = order && u.bound >= u.kappa3;
        }
    return {pinned && order,
            fmt("(d,R)=(2,1) -> (%lld,%lld,%lld,%lld); bound >= kappa3 on "
                "[2,5]x[1,4]: %s",
                t.kappa1, t.kappa2, t.kappa3, t.bound, order ? "yes" : "no")};
}

std::pair<bool, std::string> c8_cross_oracle() {
    struct Probe {
        FormSystem F;
        BoxSpec box;
        double Q;
    };
    FormSystem g4 = FormSystem::make(4, 1, 2,
                                     {{{{2, 0, 0, 0}, 1},
                                       {{0, 2, 0, 0}, 1},
                                       {{0, 0, 2, 0}, 1},
                                       {{0, 0, 0, 2}, -3}}});
    FormSystem hyp =
        FormSystem::make(2, 1, 2, {{{{2, 0}, 1}, {{0, 2}, -1}}});
    BoxSpec hyp_box;
    hyp_box.sides = {{0.1, 0.9}, {0.1, 0.9}};
    std::vector<Probe> probes = {{e1(), BoxSpec::unit(3), 64.0},
                                 {hyp, hyp_box, 64.0},
                                 {g4, BoxSpec::unit(4), 32.0}};
    double worst_rel = 0.0, worst_v0 = 0.0;
    bool ok = true;
    for (const auto& pr : probes) {
        auto si = singular_integral(pr.F, pr.box, pr.Q);
        double est = si.value + si.tail_fit;
        auto vd = volume_density(pr.F, pr.box, 0.01, 400000, 2026);
        double tol =
            std::max(0.05 * std::abs(vd.estimate), 3.0 * vd.std_err);
        double gap = std::abs(est - vd.estimate);
        ok = ok && gap <= tol;
        worst_rel = std::max(
            worst_rel, gap / std::max(std::abs(vd.estimate), 1e-12));
        cplx v0 =
            upsilon_beta(pr.F, pr.box, std::vector<double>(pr.F.R, 0.0));
        worst_v0 = std::max(worst_v0, std::abs(v0 - cplx{pr.box.volume(), 0.0}));
    }
    ok = ok && worst_v0 <= 1e-12;
    return {ok, fmt("worst oracle gap %.1f%% (tol max(5%%,3sigma)); "
                    "worst |v(0)-vol| %.1e (tol 1e-12)",
                    100.0 * worst_rel, worst_v0)};
}

std::pair<bool, std::string> c9_heuristic_main_term() {
    AsymptoticConfig cfg;
    cfg.P = {60, 100, 200};  // 200 is diagnostic; the criterion pins 60, 100
    cfg.q_max = 200;
    cfg.vol_epsilon = 0.01;
    cfg.vol_samples = 400000;
    cfg.seed = 2026;
    cfg.budget = 4000000000LL;  // the P=200 grid runs ~1e9 kernel steps
    auto F = f8();
    auto rep = asymptotic_report(F, BoxSpec::unit(8), cfg);
    bool ok = rep.verdict == AsymptoticVerdict::kHeuristic &&
              rep.ratios.size() == 3;
    for (int i = 0; i < 2 && ok; ++i)
        ok = rep.ratios[i] >= 0.5 && rep.ratios[i] <= 2.0;
    std::string label =
        rep.verdict == AsymptoticVerdict::kHeuristic ? "HEURISTIC" : "OTHER";
    // The log-p weight reaches only theta(P) of the mass P per coordinate,
    // an 8th-power deficit of 0.20 at P=60 and 0.24 at P=100 that no exact
    // pipeline can avoid; the same run is shown entering the band by P=200.
    return {ok,
            fmt("ratios P=60 %.3f, P=100 %.3f (band [0.5,2], %s); "
                "(theta/P)^8 deficit 0.20/0.24; diagnostic P=200 %.3f",
                rep.ratios.size() > 0 ? rep.ratios[0] : -1.0,
                rep.ratios.size() > 1 ? rep.ratios[1] : -1.0, label.c_str(),
                rep.ratios.size() > 2 ? rep.ratios[2] : -1.0)};
}

std::pair<bool, std::string> c10_invariant_suites() {
    const int cases = 1000;
    int fails = 0;
    std::string first_bad;
    auto note = [&](const char* suite, int iter, bool ok) {
        if (!ok) {
            ++fails;
            if (first_bad.empty()) first_bad = fmt("%s[%d]", suite, iter);
        }
    };

    {  // homogeneity: F(t*x) = t^d F(x), exact
        auto g = seeded_rng(4110);
        std::uniform_int_distribution<long long> ux(-6, 6), ut(-5, 5);
        for (int iter = 0; iter < cases; ++iter) {
            auto F = random_system(g);
            std::vector<long long> x(F.n), tx(F.n);
            long long t = ut(g);
            for (int j = 0; j < F.n; ++j) {
                x[j] = ux(g);
                tx[j] = t * x[j];
            }
            auto v = evaluate_system(F, x);
            auto vt = evaluate_system(F, tx);
            Int td = 1;
            for (int i = 0; i < F.d; ++i) td *= t;
            bool ok = true;
            for (int i = 0; i < F.R; ++i) ok = ok && vt[i] == td * v[i];
            note("homogeneity", iter, ok);
        }
    }
    {  // Euler identity: sum_j x_j dF/dx_j = d F, exact over Q
        auto g = seeded_rng(4111);
        std::uniform_int_distribution<int> unum(-9, 9), uden(1, 7);
        for (int iter = 0; iter < cases; ++iter) {
            auto F = random_system(g);
            std::vector<Rat> x(F.n);
            for (auto& v : x) v = Rat(unum(g), uden(g));
            auto J = jacobian_matrix(F, x);
            bool ok = true;
            for (int i = 0; i < F.R; ++i) {
                Rat lhs = 0;
                for (int j = 0; j < F.n; ++j) lhs += x[j] * J.J[i][j];
                ok = ok && lhs == Rat(F.d) * F.form_poly(i).eval(x);
            }
            note("euler", iter, ok);
        }
    }
    {  // Psi at equal arguments is (d-1)! times the gradient
        auto g = seeded_rng(4112);
        std::uniform_int_distribution<long long> ux(-5, 5);
        for (int iter = 0; iter < cases; ++iter) {
            auto F = random_system(g);
            auto T = symmetrize_coefficients(F);
            std::vector<long long> x(F.n);
            for (auto& v : x) v = ux(g);
            std::vector<Rat> xr(x.begin(), x.end());
            auto J = jacobian_matrix(F, xr);
            Int fact = 1;
            for (int i = 2; i <= F.d - 1; ++i) fact *= i;
            std::vector<std::vector<long long>> diag(F.d - 1, x);
            bool ok = true;
            for (int j = 0; j < F.n; ++j) {
                auto psi = psi_multilinear(T, j, diag);
                for (int i = 0; i < F.R; ++i)
                    ok = ok && Rat(psi[i]) == Rat(fact) * J.J[i][j];
            }
            note("psi-diagonal", iter, ok);
        }
    }
    {  // top-depth differencing leaves d! * lead * h1...hd
        auto g = seeded_rng(4113);
        std::uniform_int_distribution<int> uc(-5, 5), udeg(1, 4);
        for (int iter = 0; iter < cases; ++iter) {
            int d = udeg(g);
            Poly f(1);
            for (int k = 0; k < d; ++k) f += Poly::monomial(1, {k}, uc(g));
            int lead = 0;
            while (lead == 0) lead = uc(g);
            f += Poly::monomial(1, {d}, lead);
            auto dd = difference_operator(f, 0, d);
            Int fact = 1;
            for (int k = 2; k <= d; ++k) fact *= k;
            std::vector<int> exps(1 + d, 1);
            exps[0] = 0;
            note("difference", iter,
                 dd.poly == Poly::monomial(1 + d, exps, Rat(fact * lead)));
        }
    }
    {  // Dirichlet approximation contract
        auto g = seeded_rng(4114);
        std::uniform_real_distribution<double> ua(0.0, 1.0);
        std::uniform_int_distribution<long long> un(1, 100000);
        for (int iter = 0; iter < cases; ++iter) {
            double alpha = ua(g);
            long long N = un(g);
            auto r = dirichlet_approx(alpha, N);
            bool ok = r.q >= 1 && r.q <= N &&
                      std::gcd(std::llabs(r.a), r.q) == 1 &&
                      std::abs(r.q * alpha - r.a) <=
                          1.0 / static_cast<double>(N) + 1e-12;
            note("dirichlet", iter, ok);
        }
    }
    {  // deterministic re-run: identical records byte for byte
        auto g = seeded_rng(4115);
        std::uniform_real_distribution<double> ua(0.0, 1.0);
        std::uniform_int_distribution<long long> uq(1, 60), up(10, 40);
        auto F = e1();
        auto table = sieve_von_mangoldt(1, 40);
        for (int iter = 0; iter < cases; ++iter) {
            double alpha = ua(g);
            long long q = uq(g), P = up(g);
            auto make = [&] {
                cplx a = A_star(q, F);
                cplx s = lambda_exp_sum({0.0, 0.0, alpha}, 1, P, table);
                nlohmann::json cfg = {{"alpha", alpha}, {"q", q}, {"P", P}};
                return make_record("probe", cfg,
                                   {{"a_re", a.real()},
                                    {"a_im", a.imag()},
                                    {"s_re", s.real()},
                                    {"s_im", s.imag()}})
                    .dump();
            };
            note("byte-identity", iter, make() == make());
        }
    }
    return {fails == 0,
            fmt("6 suites x %d cases, %d failures%s%s", cases, fails,
                fails ? ", first at " : "", first_bad.c_str())};
}

}  // namespace

std::vector<CriterionOutcome> run_acceptance(std::ostream& out) {
    Gate gate{out, {}};
    gate.run(1, "gauss-sum multiplicativity", c1_multiplicativity);
    gate.run(2, "local orthogonality identity", c2_orthogonality);
    gate.run(3, "exact circle identity", c3_exact_circle);
    gate.run(4, "Vaughan identity", c4_vaughan);
    gate.run(5, "minor-arc decay probe", c5_minor_decay);
    gate.run(6, "local and real certificates", c6_certificates);
    gate.run(7, "threshold arithmetic", c7_thresholds);
    gate.run(8, "archimedean cross-oracle", c8_cross_oracle);
    gate.run(9, "heuristic main term", c9_heuristic_main_term);
    gate.run(10, "core invariant suites", c10_invariant_suites);
    int passed = 0;
    for (const auto& r : gate.results) passed += r.pass;
    out << fmt("acceptance: %d/%d criteria passed", passed,
               static_cast<int>(gate.results.size()))
        << std::endl;
    return gate.results;
}

}  // namespace circle
