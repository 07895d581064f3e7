#include "circle/counting.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "circle/arith.hpp"
#include "circle/local.hpp"

namespace circle {

namespace {

constexpr double kExactLimit = 9007199254740992.0;  // 2^53

struct Ranges {
    std::vector<long long> a, b;  // inclusive integer ranges per axis
    double grid = 1.0;
    long long max_b = 1;
    bool empty = false;
};

Ranges make_ranges(const FormSystem& F, long long P, const BoxSpec& box) {
    if (P < 1) throw input_error("counting: need P >= 1");
    box.validate();
    if (box.dim() != F.n) throw input_error("counting: box dimension != n");
    Ranges r;
    for (int j = 0; j < F.n; ++j) {
        auto [lo, hi] = scaled_range(box.sides[j].first, box.sides[j].second, P);
        r.a.push_back(lo);
        r.b.push_back(hi);
        if (hi < lo) r.empty = true;
        r.grid *= static_cast<double>(std::max(0LL, hi - lo + 1));
        r.max_b = std::max(r.max_b, hi);
    }
    return r;
}

// Largest |F_i| over the corner of the scaled box, by coefficient sums.
double range_bound(const FormSystem& F, const Ranges& r, int i) {
    double s = 0.0;
    for (const auto& m : F.forms[i]) {
        double t = std::abs(static_cast<double>(m.c));
        for (int j = 0; j < F.n; ++j)
            for (int e = 0; e < m.exps[j]; ++e)
                t *= static_cast<double>(std::max(1LL, r.b[j]));
        s += t;
    }
    return s;
}

void check_exact(const FormSystem& F, const Ranges& r) {
    for (int i = 0; i < F.R; ++i)
        if (range_bound(F, r, i) >= kExactLimit)
            throw input_error(
                "counting: form values can exceed 2^53; reduce P or the box");
}

long long mono_eval(const Monomial& m, const std::vector<long long>& x) {
    long long v = m.c;
    for (int j = 0; j < static_cast<int>(m.exps.size()); ++j)
        for (int e = 0; e < m.exps[j]; ++e) v *= x[j];
    return v;
}

// DFS enumeration state.  Monomials are charged to their last variable so
// each is evaluated once per visited node; open-monomial interval bounds
// use the corner values of the remaining axes.  Diagonal systems get O(1)
// suffix-interval pruning plus a closed-form solve of the last coordinate.
struct Enumerator {
    const FormSystem& F;
    const Ranges& r;
    bool prune;
    const WeightTable& wt;
    const SolutionSink& sink;

    // (form, monomial, last variable) triples grouped by last variable
    struct Charged {
        int form;
        const Monomial* m;
    };
    std::vector<std::vector<Charged>> closing;
    std::vector<int> lastv_all;                   // per monomial, flattened
    std::vector<std::vector<long long>> partial;  // per depth, per form
    std::vector<long long> x;
    // Diagonal-only tails: reachable suffix range of form i from depth j.
    std::vector<std::vector<long long>> tail_lo, tail_hi;
    std::vector<long long> last_c;  // diagonal coefficient of the last axis
    double N_l = 0.0, N_p = 0.0;
    long long raw = 0;

    Enumerator(const FormSystem& f, const Ranges& rr, bool pr,
               const WeightTable& w, const SolutionSink& s)
        : F(f), r(rr), prune(pr), wt(w), sink(s) {
        closing.resize(F.n);
        for (int i = 0; i < F.R; ++i)
            for (const auto& m : F.forms[i]) {
                int last = 0;
                for (int j = 0; j < F.n; ++j)
                    if (m.exps[j] > 0) last = j;
                closing[last].push_back({i, &m});
            }
        partial.assign(F.n + 1, std::vector<long long>(F.R, 0));
        x.assign(F.n, 0);
        if (F.is_diagonal) {
            tail_lo.assign(F.R, std::vector<long long>(F.n + 1, 0));
            tail_hi.assign(F.R, std::vector<long long>(F.n + 1, 0));
            last_c.assign(F.R, 0);
            std::vector<std::vector<long long>> c(
                F.R, std::vector<long long>(F.n, 0));
            for (int i = 0; i < F.R; ++i)
                for (const auto& m : F.forms[i]) {
                    int j = 0;
                    while (m.exps[j] == 0) ++j;
                    c[i][j] += m.c;
                }
            for (int i = 0; i < F.R; ++i) {
                last_c[i] = c[i][F.n - 1];
                for (int j = F.n - 1; j >= 0; --j) {
                    long long pa = 1, pb = 1;
                    for (int e = 0; e < F.d; ++e) {
                        pa *= r.a[j];
                        pb *= r.b[j];
                    }
                    long long u = c[i][j] * pa, v = c[i][j] * pb;
                    tail_lo[i][j] = tail_lo[i][j + 1] + std::min(u, v);
                    tail_hi[i][j] = tail_hi[i][j + 1] + std::max(u, v);
                }
            }
        }
    }

    // Reachable interval of form i at depth j for general systems.
    void reach(int j, int i, double& mn, double& mx) const {
        mn = mx = static_cast<double>(partial[j][i]);
        for (const auto& m : F.forms[i]) {
            int last = 0;
            for (int t = 0; t < F.n; ++t)
                if (m.exps[t] > 0) last = t;
            if (last < j) continue;  // already in the partial sum
            double fixed = static_cast<double>(m.c);
            for (int t = 0; t < j; ++t)
                for (int e = 0; e < m.exps[t]; ++e)
                    fixed *= static_cast<double>(x[t]);
            double lo_rest = 1.0, hi_rest = 1.0;
            for (int t = j; t < F.n; ++t)
                for (int e = 0; e < m.exps[t]; ++e) {
                    lo_rest *= static_cast<double>(r.a[t]);
                    hi_rest *= static_cast<double>(r.b[t]);
                }
            double u = fixed * lo_rest, v = fixed * hi_rest;
            mn += std::min(u, v);
            mx += std::max(u, v);
        }
    }

    bool dead_at(int j) const {
        if (F.is_diagonal) {
            for (int i = 0; i < F.R; ++i) {
                long long s = partial[j][i];
                if (s + tail_lo[i][j] > 0 || s + tail_hi[i][j] < 0)
                    return true;
            }
            return false;
        }
        for (int i = 0; i < F.R; ++i) {
            double mn, mx;
            reach(j, i, mn, mx);
            if (mn > 0.0 || mx < 0.0) return true;
        }
        return false;
    }

    void leaf() {
        ++raw;
        double wl = 1.0, wp = 1.0;
        for (long long t : x) {
            wl *= wt.lambda(t);
            wp *= wt.prime_log(t);
        }
        N_l += wl;
        N_p += wp;
        if (sink) sink(x);
    }

    // Exact solve of the final coordinate for diagonal systems: the first
    // form pins c * v^d = -s; remaining forms just get checked.
    void solve_last() {
        int j = F.n - 1;
        long long s0 = partial[j][0], c0 = last_c[0];
        long long v = 0;
        if (c0 == 0) {
            if (s0 != 0) return;
            // degenerate axis: every v works for form 0; fall back to a scan
            for (v = r.a[j]; v <= r.b[j]; ++v) {
                x[j] = v;
                bool ok = true;
                for (int i = 1; i < F.R && ok; ++i) {
                    long long pw = 1;
                    for (int e = 0; e < F.d; ++e) pw *= v;
                    ok = partial[j][i] + last_c[i] * pw == 0;
                }
                if (ok) leaf();
            }
            return;
        }
        if (s0 % c0 != 0) return;
        long long t = -s0 / c0;
        if (t < 1) return;
        v = std::llround(
            std::pow(static_cast<double>(t), 1.0 / static_cast<double>(F.d)));
        long long hit = -1;
        for (long long w = std::max(r.a[j], v - 1);
             w <= std::min(r.b[j], v + 1); ++w) {
            long long pw = 1;
            for (int e = 0; e < F.d; ++e) pw *= w;
            if (pw == t) hit = w;
        }
        if (hit < 0) return;
        x[j] = hit;
        for (int i = 1; i < F.R; ++i) {
            long long pw = 1;
            for (int e = 0; e < F.d; ++e) pw *= hit;
            if (partial[j][i] + last_c[i] * pw != 0) return;
        }
        leaf();
    }

    void run(int j) {
        if (j == F.n) {
            for (int i = 0; i < F.R; ++i)
                if (partial[F.n][i] != 0) return;
            leaf();
            return;
        }
        if (prune && F.is_diagonal && j == F.n - 1) {
            solve_last();
            return;
        }
        for (long long v = r.a[j]; v <= r.b[j]; ++v) {
            x[j] = v;
            for (int i = 0; i < F.R; ++i) partial[j + 1][i] = partial[j][i];
            for (const Charged& cm : closing[j])
                partial[j + 1][cm.form] += mono_eval(*cm.m, x);
            if (prune && j + 1 < F.n && dead_at(j + 1)) continue;
            run(j + 1);
        }
    }
};

long long modmul(long long a, long long b, long long M) {
    return static_cast<long long>(
        static_cast<unsigned long long>(a % M) *
        static_cast<unsigned long long>(b % M) % static_cast<unsigned long long>(M));
}

}  // namespace

CountReport count_weighted(const FormSystem& F, long long P,
                           const BoxSpec& box, EnumMode mode, long long budget,
                           const SolutionSink& sink) {
    auto t0 = std::chrono::steady_clock::now();
    Ranges r = make_ranges(F, P, box);
    CountReport rep;
    rep.P = P;
    rep.box = box;
    rep.method = CountMethod::kDirect;
    if (r.empty) return rep;
    check_exact(F, r);
    if (r.grid > static_cast<double>(budget))
        throw budget_error(
            "count_weighted: grid of " + std::to_string(clamp_need(r.grid)) +
                " points is over budget; count_via_dft covers diagonal "
                "systems at this scale",
            clamp_need(r.grid));

    WeightTable wt = sieve_von_mangoldt(1, r.max_b);
    bool prune = mode != EnumMode::kFull;
    Enumerator en(F, r, prune, wt, sink);
    en.run(0);
    rep.N_weighted = en.N_l;
    rep.N_prime = en.N_p;
    rep.raw_solutions = en.raw;
    rep.elapsed_sec =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    return rep;
}

long long dft_modulus_bound(const FormSystem& F, long long P,
                            const BoxSpec& box) {
    Ranges r = make_ranges(F, P, box);
    double worst = 0.0;
    for (int i = 0; i < F.R; ++i) worst = std::max(worst, range_bound(F, r, i));
    double m = 2.0 * worst + 1.0;
    if (m >= kExactLimit)
        throw input_error("dft_modulus_bound: range bound exceeds 2^53");
    return static_cast<long long>(m);
}

CountReport count_via_dft(const FormSystem& F, long long P, const BoxSpec& box,
                          long long M, long long budget) {
    auto t0 = std::chrono::steady_clock::now();
    Ranges r = make_ranges(F, P, box);
    CountReport rep;
    rep.P = P;
    rep.box = box;
    rep.method = CountMethod::kDft;
    if (r.empty) return rep;
    check_exact(F, r);

    long long Mreq = dft_modulus_bound(F, P, box);
    if (M <= 0) M = Mreq;
    if (M < Mreq)
        throw input_error("count_via_dft: M=" + std::to_string(M) +
                          " below the range bound; need M >= " +
                          std::to_string(Mreq));

    double cells = std::pow(static_cast<double>(M), F.R);
    double per;
    if (F.is_diagonal) {
        long long span = 0;
        for (int j = 0; j < F.n; ++j)
            span = std::max(span, r.b[j] - r.a[j] + 1);
        per = static_cast<double>(F.n) * static_cast<double>(span);
    } else {
        per = r.grid * (F.R + 1.0);
    }
    check_budget(clamp_need(cells * per), budget, "count_via_dft");

    // M-th roots of unity; k -> e(k/M).
    std::vector<cplx> root(M);
    for (long long k = 0; k < M; ++k)
        root[k] = unit_phase(static_cast<long double>(k) /
                             static_cast<long double>(M));

    WeightTable wt = sieve_von_mangoldt(1, r.max_b);
    pairwise_acc<cplx> accL, accP, accR;

    if (F.is_diagonal) {
        // c[i][j] = coefficient of x_j^d in form i
        std::vector<std::vector<long long>> c(
            F.R, std::vector<long long>(F.n, 0));
        for (int i = 0; i < F.R; ++i)
            for (const auto& m : F.forms[i]) {
                int j = 0;
                while (m.exps[j] == 0) ++j;
                c[i][j] += m.c;
            }
        // x^d mod M per axis position
        std::vector<std::vector<long long>> xd(F.n);
        for (int j = 0; j < F.n; ++j)
            for (long long v = r.a[j]; v <= r.b[j]; ++v) {
                long long t = v % M;
                long long pw = 1;
                for (int e = 0; e < F.d; ++e) pw = modmul(pw, t, M);
                xd[j].push_back(pw);
            }

        std::vector<long long> m(F.R, 0);
        while (true) {
            cplx SL{1, 0}, SP{1, 0}, SR{1, 0};
            for (int j = 0; j < F.n; ++j) {
                long long u = 0;
                for (int i = 0; i < F.R; ++i)
                    u = (u + modmul(m[i], ((c[i][j] % M) + M) % M, M)) % M;
                cplx aL{0, 0}, aP{0, 0}, aR{0, 0};
                for (long long v = r.a[j]; v <= r.b[j]; ++v) {
                    cplx ph = root[modmul(u, xd[j][v - r.a[j]], M)];
                    aL += wt.lambda(v) * ph;
                    aP += wt.prime_log(v) * ph;
                    aR += ph;
                }
                SL *= aL;
                SP *= aP;
                SR *= aR;
            }
            accL.add(SL);
            accP.add(SP);
            accR.add(SR);
            int i = F.R - 1;
            while (i >= 0 && ++m[i] == M) m[i--] = 0;
            if (i < 0) break;
        }
    } else {
        // Tabulate F values mod M and the three weights per grid point.
        std::vector<std::vector<long long>> vals;  // per point, per form
        std::vector<double> wL, wP;
        std::vector<long long> x(F.n);
        for (int j = 0; j < F.n; ++j) x[j] = r.a[j];
        while (true) {
            std::vector<long long> fv(F.R);
            for (int i = 0; i < F.R; ++i) {
                long long s = 0;
                for (const auto& mm : F.forms[i]) s += mono_eval(mm, x);
                fv[i] = ((s % M) + M) % M;
            }
            vals.push_back(std::move(fv));
            double pl = 1.0, pp = 1.0;
            for (long long t : x) {
                pl *= wt.lambda(t);
                pp *= wt.prime_log(t);
            }
            wL.push_back(pl);
            wP.push_back(pp);
            int j = F.n - 1;
            while (j >= 0 && ++x[j] > r.b[j]) {
                x[j] = r.a[j];
                --j;
            }
            if (j < 0) break;
        }
        std::vector<long long> m(F.R, 0);
        while (true) {
            cplx SL{0, 0}, SP{0, 0}, SR{0, 0};
            for (std::size_t t = 0; t < vals.size(); ++t) {
                long long ph = 0;
                for (int i = 0; i < F.R; ++i)
                    ph = (ph + modmul(m[i], vals[t][i], M)) % M;
                cplx z = root[ph];
                SL += wL[t] * z;
                SP += wP[t] * z;
                SR += z;
            }
            accL.add(SL);
            accP.add(SP);
            accR.add(SR);
            int i = F.R - 1;
            while (i >= 0 && ++m[i] == M) m[i--] = 0;
            if (i < 0) break;
        }
    }

    rep.N_weighted = accL.total().real() / cells;
    rep.N_prime = accP.total().real() / cells;
    rep.raw_solutions = std::llround(accR.total().real() / cells);
    rep.elapsed_sec =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    return rep;
}

AsymptoticReport asymptotic_report(const FormSystem& F, const BoxSpec& box,
                                   const AsymptoticConfig& cfg) {
    if (cfg.P.empty()) throw input_error("asymptotic_report: empty P list");
    box.validate();
    AsymptoticReport rep;
    rep.P = cfg.P;
    rep.q_max = cfg.q_max;
    rep.Q_cap = cfg.Q_cap;
    rep.seed = cfg.seed;

    auto stage = [](const char* name, auto&& fn) {
        try {
            return fn();
        } catch (const budget_error& e) {
            throw budget_error(
                std::string("asymptotic_report[") + name + "]: " + e.what(),
                e.required);
        }
    };

    rep.series_trunc = stage("series", [&] {
        return singular_series_truncated(F, cfg.q_max, cfg.budget).value;
    });

    // Obstruction scan over small prime powers; a modulus with no unit
    // solutions forces the full singular series to vanish.
    for (long long p : {2LL, 3LL, 5LL, 7LL}) {
        for (int k = 1; k <= 3 && rep.obstruction_q == 0; ++k) {
            Int cnt = stage("obstruction", [&] {
                return unit_solution_count(p, k, F, cfg.budget);
            });
            if (cnt == 0) {
                rep.verdict = AsymptoticVerdict::kObstructed;
                rep.obstruction_q = ipow_ll(p, k);
            }
        }
        if (rep.obstruction_q != 0) break;
    }

    if (F.n <= 6) {
        auto si = stage("integral", [&] {
            return singular_integral(F, box, cfg.Q_cap, cfg.quad);
        });
        rep.integral_est = si.value + si.tail_fit;
        rep.integral_method = "singular_integral";
    } else {
        auto vd = stage("integral", [&] {
            return volume_density(F, box, cfg.vol_epsilon, cfg.vol_samples,
                                  cfg.seed);
        });
        rep.integral_est = vd.estimate;
        rep.integral_method = "volume_density";
    }

    for (long long P : cfg.P) {
        CountReport cr = stage("count", [&] {
            return F.is_diagonal ? count_via_dft(F, P, box, 0, cfg.budget)
                                 : count_weighted(F, P, box, EnumMode::kAuto,
                                                  cfg.budget);
        });
        rep.counts.push_back(cr.N_prime);
        double main = rep.series_trunc * rep.integral_est *
                      std::pow(static_cast<double>(P), F.n - F.R * F.d);
        rep.main_terms.push_back(main);
        if (rep.verdict != AsymptoticVerdict::kObstructed) {
            double ratio = cr.N_prime / main;
            rep.ratios.push_back(ratio);
            rep.in_band.push_back(ratio >= rep.band_lo && ratio <= rep.band_hi);
        }
    }
    return rep;
}

}  // namespace circle
