#include "circle/integral.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>

namespace circle {

namespace {

// e(t) without mod-1 reduction.  These phases stay moderate, and skipping
// the reduction makes e(-t) = conj(e(t)) hold bit-exactly, which the
// conjugate-symmetry contract of upsilon_beta relies on.
cplx phase_direct(double t) {
    double ang = 6.283185307179586476925286766559 * t;
    return {std::cos(ang), std::sin(ang)};
}

double eval_form(const std::vector<Monomial>& f, const std::vector<double>& x) {
    double v = 0.0;
    for (const auto& m : f) {
        double t = static_cast<double>(m.c);
        for (int j = 0; j < static_cast<int>(m.exps.size()); ++j)
            for (int e = 0; e < m.exps[j]; ++e) t *= x[j];
        v += t;
    }
    return v;
}

double phase_at(const FormSystem& F, const std::vector<double>& beta,
                const std::vector<double>& x) {
    double t = 0.0;
    for (int i = 0; i < F.R; ++i) t += beta[i] * eval_form(F.forms[i], x);
    return t;
}

// Composite Gauss-Legendre rule on (lo, hi) sized for the given number of
// phase cycles across the interval.
struct AxisRule {
    std::vector<double> x, w;
};

long long plan_panels(double cycles, const QuadratureSpec& q) {
    long long p = std::max(1LL, static_cast<long long>(
                                    std::ceil(cycles / q.panel_cycles)));
    long long cap = std::max(1LL, q.max_axis_nodes / q.panel_nodes);
    return std::min(p, cap);
}

AxisRule build_axis(double lo, double hi, double cycles,
                    const QuadratureSpec& q) {
    long long panels = plan_panels(cycles, q);
    const GLRule& gl = gauss_legendre(q.panel_nodes);
    double w = (hi - lo) / static_cast<double>(panels);
    AxisRule r;
    r.x.reserve(panels * q.panel_nodes);
    r.w.reserve(panels * q.panel_nodes);
    for (long long k = 0; k < panels; ++k) {
        double a = lo + w * static_cast<double>(k);
        for (int i = 0; i < q.panel_nodes; ++i) {
            r.x.push_back(a + 0.5 * w * (gl.x[i] + 1.0));
            r.w.push_back(0.5 * w * gl.w[i]);
        }
    }
    return r;
}

// Upper bound on the phase cycles along axis j: the box sits inside (0,1],
// so every monomial is bounded by its coefficient.
double axis_cycles(const FormSystem& F, const std::vector<double>& beta,
                   int j) {
    double c = 0.0;
    for (int i = 0; i < F.R; ++i) {
        double s = 0.0;
        for (const auto& m : F.forms[i])
            if (m.exps[j] > 0) s += std::abs(static_cast<double>(m.c));
        c += std::abs(beta[i]) * s;
    }
    return c;
}

// Diagonal systems: beta . F(x) = sum_j theta_j x_j^d, so the integral is a
// product of 1-D integrals.
std::vector<double> diagonal_thetas(const FormSystem& F,
                                    const std::vector<double>& beta) {
    std::vector<double> theta(F.n, 0.0);
    for (int i = 0; i < F.R; ++i)
        for (const auto& m : F.forms[i]) {
            int j = 0;
            while (m.exps[j] == 0) ++j;
            theta[j] += beta[i] * static_cast<double>(m.c);
        }
    return theta;
}

cplx upsilon_diagonal(const FormSystem& F, const BoxSpec& box,
                      const std::vector<double>& beta,
                      const QuadratureSpec& quad, long long* evals) {
    std::vector<double> theta = diagonal_thetas(F, beta);
    cplx prod{1.0, 0.0};
    for (int j = 0; j < F.n; ++j) {
        auto [lo, hi] = box.sides[j];
        double cyc = std::abs(theta[j]) *
                     (std::pow(hi, F.d) - std::pow(lo, F.d));
        AxisRule r = build_axis(lo, hi, cyc, quad);
        pairwise_acc<cplx> acc;
        for (std::size_t k = 0; k < r.x.size(); ++k) {
            double xd = 1.0;
            for (int e = 0; e < F.d; ++e) xd *= r.x[k];
            acc.add(r.w[k] * phase_direct(theta[j] * xd));
        }
        if (evals) *evals += static_cast<long long>(r.x.size());
        prod *= acc.total();
    }
    return prod;
}

cplx upsilon_tensor(const FormSystem& F, const BoxSpec& box,
                    const std::vector<double>& beta,
                    const QuadratureSpec& quad, long long* evals) {
    std::vector<AxisRule> axes;
    double grid = 1.0;
    for (int j = 0; j < F.n; ++j) {
        auto [lo, hi] = box.sides[j];
        axes.push_back(build_axis(lo, hi, axis_cycles(F, beta, j), quad));
        grid *= static_cast<double>(axes.back().x.size());
    }
    // Degrade (never refuse): shrink the widest axis until the grid fits.
    while (grid > static_cast<double>(quad.budget)) {
        std::size_t widest = 0;
        for (std::size_t j = 1; j < axes.size(); ++j)
            if (axes[j].x.size() > axes[widest].x.size()) widest = j;
        std::size_t m = axes[widest].x.size();
        if (m <= static_cast<std::size_t>(quad.panel_nodes)) break;
        grid /= static_cast<double>(m);
        auto [lo, hi] = box.sides[widest];
        double cyc = quad.panel_cycles *
                     (static_cast<double>(m) / quad.panel_nodes - 1.0);
        axes[widest] = build_axis(lo, hi, cyc, quad);
        grid *= static_cast<double>(axes[widest].x.size());
    }

    std::vector<std::size_t> idx(F.n, 0);
    std::vector<double> x(F.n);
    for (int j = 0; j < F.n; ++j) x[j] = axes[j].x[0];
    pairwise_acc<cplx> acc;
    long long count = 0;
    while (true) {
        double w = 1.0;
        for (int j = 0; j < F.n; ++j) w *= axes[j].w[idx[j]];
        acc.add(w * phase_direct(phase_at(F, beta, x)));
        ++count;
        int j = F.n - 1;
        while (j >= 0) {
            if (++idx[j] < axes[j].x.size()) {
                x[j] = axes[j].x[idx[j]];
                break;
            }
            idx[j] = 0;
            x[j] = axes[j].x[0];
            --j;
        }
        if (j < 0) break;
    }
    if (evals) *evals += count;
    return acc.total();
}

cplx upsilon_qmc(const FormSystem& F, const BoxSpec& box,
                 const std::vector<double>& beta, const QuadratureSpec& quad,
                 long long* evals) {
    long long N = std::min(quad.qmc_samples, std::max(1LL, quad.budget));
    HaltonSampler hs(F.n, quad.qmc_seed);
    std::vector<double> u(F.n), x(F.n);
    pairwise_acc<cplx> acc;
    for (long long k = 0; k < N; ++k) {
        hs.point(static_cast<std::uint64_t>(k), u);
        for (int j = 0; j < F.n; ++j) {
            auto [lo, hi] = box.sides[j];
            x[j] = lo + u[j] * (hi - lo);
        }
        acc.add(phase_direct(phase_at(F, beta, x)));
    }
    if (evals) *evals += N;
    return box.volume() * acc.total() / static_cast<double>(N);
}

cplx upsilon_core(const FormSystem& F, const BoxSpec& box,
                  const std::vector<double>& beta, const QuadratureSpec& quad,
                  long long* evals) {
    bool zero = true;
    for (double b : beta) zero = zero && b == 0.0;
    if (zero) return {box.volume(), 0.0};
    if (F.is_diagonal) return upsilon_diagonal(F, box, beta, quad, evals);
    if (F.n <= 6) return upsilon_tensor(F, box, beta, quad, evals);
    return upsilon_qmc(F, box, beta, quad, evals);
}

void check_inputs(const FormSystem& F, const BoxSpec& box,
                  const QuadratureSpec& quad) {
    quad.validate();
    box.validate();
    if (box.dim() != F.n)
        throw input_error("archimedean: box dimension != n");
}

// Planned evaluation count for one upsilon call at the given beta.
double upsilon_cost(const FormSystem& F, const std::vector<double>& beta,
                    const QuadratureSpec& quad) {
    if (F.is_diagonal) {
        std::vector<double> theta = diagonal_thetas(F, beta);
        double c = 0.0;
        for (int j = 0; j < F.n; ++j)
            c += static_cast<double>(
                plan_panels(std::abs(theta[j]), quad) * quad.panel_nodes);
        return c;
    }
    if (F.n > 6) return static_cast<double>(quad.qmc_samples);
    double g = 1.0;
    for (int j = 0; j < F.n; ++j)
        g *= static_cast<double>(plan_panels(axis_cycles(F, beta, j), quad) *
                                 quad.panel_nodes);
    return std::min(g, static_cast<double>(quad.budget));
}

// Beta-side composite rule: `half` restricts to [0, Q] (first axis, the
// conjugate-symmetry fold), otherwise [-Q, Q].
AxisRule beta_axis(double Q, bool half, const QuadratureSpec& quad) {
    long long panels = std::max(
        1LL, static_cast<long long>(std::ceil(Q / quad.beta_panel_width)));
    const GLRule& gl = gauss_legendre(quad.beta_panel_nodes);
    double lo = half ? 0.0 : -Q;
    long long total = half ? panels : 2 * panels;
    double w = Q / static_cast<double>(panels);
    AxisRule r;
    for (long long k = 0; k < total; ++k) {
        double a = lo + w * static_cast<double>(k);
        for (int i = 0; i < quad.beta_panel_nodes; ++i) {
            r.x.push_back(a + 0.5 * w * (gl.x[i] + 1.0));
            r.w.push_back(0.5 * w * gl.w[i]);
        }
    }
    return r;
}

}  // namespace

cplx upsilon_beta(const FormSystem& F, const BoxSpec& box,
                  const std::vector<double>& beta,
                  const QuadratureSpec& quad) {
    check_inputs(F, box, quad);
    if (static_cast<int>(beta.size()) != F.R)
        throw input_error("upsilon_beta: beta length != R");
    return upsilon_core(F, box, beta, quad, nullptr);
}

SingularIntegralResult singular_integral(const FormSystem& F,
                                         const BoxSpec& box, double Q_cap,
                                         const QuadratureSpec& quad) {
    check_inputs(F, box, quad);
    if (!(Q_cap > 0)) throw input_error("singular_integral: Q_cap must be > 0");

    std::vector<double> ladder(quad.refine_levels);
    for (int l = 0; l < quad.refine_levels; ++l)
        ladder[l] = Q_cap * std::ldexp(1.0, l + 1 - quad.refine_levels);

    // All-or-nothing cost check, using the worst-case corner beta per level.
    double need = 0.0;
    for (double Q : ladder) {
        std::vector<double> corner(F.R, Q);
        double per = upsilon_cost(F, corner, quad);
        double pts = static_cast<double>(beta_axis(Q, true, quad).x.size());
        if (F.R > 1)
            pts *= std::pow(
                static_cast<double>(beta_axis(Q, false, quad).x.size()),
                F.R - 1);
        need += pts * per;
    }
    if (need > static_cast<double>(quad.budget))
        throw budget_error("singular_integral: beta grid over budget",
                           clamp_need(need));

    SingularIntegralResult res;
    for (double Q : ladder) {
        std::vector<AxisRule> axes;
        axes.push_back(beta_axis(Q, true, quad));
        for (int i = 1; i < F.R; ++i) axes.push_back(beta_axis(Q, false, quad));

        std::vector<std::size_t> idx(F.R, 0);
        std::vector<double> beta(F.R);
        for (int i = 0; i < F.R; ++i) beta[i] = axes[i].x[0];
        pairwise_acc<double> acc;
        long long pts = 0, evals = 0;
        while (true) {
            double w = 1.0;
            for (int i = 0; i < F.R; ++i) w *= axes[i].w[idx[i]];
            acc.add(w * upsilon_core(F, box, beta, quad, &evals).real());
            ++pts;
            int i = F.R - 1;
            while (i >= 0) {
                if (++idx[i] < axes[i].x.size()) {
                    beta[i] = axes[i].x[idx[i]];
                    break;
                }
                idx[i] = 0;
                beta[i] = axes[i].x[0];
                --i;
            }
            if (i < 0) break;
        }
        res.trace.push_back({Q, 2.0 * acc.total(), pts, evals});
    }

    int L = quad.refine_levels;
    res.value = res.trace[L - 1].value;
    double diff = res.trace[L - 1].value - res.trace[L - 2].value;
    double denom = 1.0 / std::sqrt(res.trace[L - 2].Q) -
                   1.0 / std::sqrt(res.trace[L - 1].Q);
    res.tail_constant = diff / denom;
    res.tail_fit = res.tail_constant / std::sqrt(Q_cap);
    res.converged =
        std::abs(diff) <= quad.tolerance * std::max(std::abs(res.value), 1e-6);
    return res;
}

VolumeEstimate volume_density(const FormSystem& F, const BoxSpec& box,
                              double epsilon, long long samples,
                              std::uint64_t seed) {
    box.validate();
    if (box.dim() != F.n) throw input_error("volume_density: box dimension != n");
    if (!(epsilon > 0)) throw input_error("volume_density: epsilon must be > 0");
    if (samples < 10000)
        throw input_error("volume_density: need samples >= 10000");

    HaltonSampler hs(F.n, seed);
    std::vector<double> u(F.n), x(F.n);
    long long hits = 0;
    for (long long k = 0; k < samples; ++k) {
        hs.point(static_cast<std::uint64_t>(k), u);
        for (int j = 0; j < F.n; ++j) {
            auto [lo, hi] = box.sides[j];
            x[j] = lo + u[j] * (hi - lo);
        }
        bool in = true;
        for (int i = 0; i < F.R && in; ++i)
            in = std::abs(eval_form(F.forms[i], x)) <= 0.5 * epsilon;
        if (in) ++hits;
    }

    VolumeEstimate v;
    v.hits = hits;
    v.samples = samples;
    v.epsilon = epsilon;
    v.seed = seed;
    double scale = box.volume() / std::pow(epsilon, F.R);
    double p = static_cast<double>(hits) / static_cast<double>(samples);
    v.estimate = scale * p;
    // Binomial error, floored at the one-expected-hit level so a zero-hit
    // report still carries a usable bound.
    double se = std::max(std::sqrt(p * (1.0 - p) / static_cast<double>(samples)),
                         1.0 / static_cast<double>(samples));
    v.std_err = scale * se;
    return v;
}

CubeSolution real_cube_solution(const FormSystem& F, double lo, double hi,
                                int attempts, std::uint64_t seed) {
    if (!(lo < hi)) throw input_error("real_cube_solution: need lo < hi");
    if (attempts < 1) throw input_error("real_cube_solution: attempts >= 1");

    const double margin = 1e-9 * (hi - lo);
    auto clamp_in = [&](std::vector<double>& x) {
        for (double& t : x) t = std::clamp(t, lo + margin, hi - margin);
    };
    auto residual = [&](const std::vector<double>& x) {
        double r = 0.0;
        for (int i = 0; i < F.R; ++i)
            r = std::max(r, std::abs(eval_form(F.forms[i], x)));
        return r;
    };
    auto jacobian = [&](const std::vector<double>& x) {
        Eigen::MatrixXd J(F.R, F.n);
        for (int i = 0; i < F.R; ++i)
            for (int j = 0; j < F.n; ++j) {
                double s = 0.0;
                for (const auto& m : F.forms[i]) {
                    if (m.exps[j] == 0) continue;
                    double t = static_cast<double>(m.c) * m.exps[j];
                    for (int k = 0; k < F.n; ++k)
                        for (int e = 0; e < m.exps[k] - (k == j ? 1 : 0); ++e)
                            t *= x[k];
                    s += t;
                }
                J(i, j) = s;
            }
        return J;
    };

    CubeSolution best;
    for (int a = 0; a < attempts; ++a) {
        best.attempts_used = a + 1;
        auto rng = seeded_rng(seed, static_cast<std::uint64_t>(a));
        std::uniform_real_distribution<double> U(lo, hi);
        std::vector<double> x(F.n);
        for (double& t : x) t = U(rng);
        clamp_in(x);

        // Iterate to the descent floor rather than to a fixed residual.
        // Stopping early (say at 1e-12) would accept near-boundary points
        // whose Jacobian has not yet collapsed, producing a false positive
        // on systems whose only zero sits in a corner of the closed cube.
        for (int iter = 0; iter < 80; ++iter) {
            double r0 = residual(x);
            if (r0 == 0.0) break;
            Eigen::VectorXd f(F.R);
            for (int i = 0; i < F.R; ++i)
                f(i) = eval_form(F.forms[i], x);
            Eigen::VectorXd step =
                jacobian(x).completeOrthogonalDecomposition().solve(-f);
            double lam = 1.0;
            bool moved = false;
            for (int h = 0; h < 30 && !moved; ++h, lam *= 0.5) {
                std::vector<double> y(F.n);
                for (int j = 0; j < F.n; ++j) y[j] = x[j] + lam * step(j);
                clamp_in(y);
                if (residual(y) < r0) {
                    x = y;
                    moved = true;
                }
            }
            if (!moved) break;
        }

        double r = residual(x);
        if (r > 1e-10) continue;
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(jacobian(x));
        double smin = svd.singularValues().minCoeff();
        if (smin <= 1e-8) continue;
        best.found = true;
        best.point = x;
        best.residual = r;
        best.min_singular = smin;
        return best;
    }
    best.found = false;
    return best;
}

}  // namespace circle
