#include "circle/expsum.hpp"

#include <algorithm>
#include <cmath>

namespace circle {

namespace {

constexpr double kExactLimit = 9007199254740992.0;  // 2^53

// Per-axis support of the weight: ascending (x, Lambda(x)) with Lambda > 0.
std::vector<std::pair<long long, double>> weight_support(
    const WeightTable& weights, long long lo, long long hi) {
    std::vector<std::pair<long long, double>> s;
    for (long long x = std::max<long long>(lo, 1); x <= hi; ++x)
        if (weights.is_prime_power(x)) s.emplace_back(x, weights.lambda(x));
    return s;
}

// Integer monomial lists with an a-priori bound on |F_i| over the box.
struct FlatSystem {
    struct Mono {
        long long c;
        std::vector<int> exps;
    };
    std::vector<std::vector<Mono>> forms;

    static FlatSystem build(const FormSystem& F, long long coord_hi) {
        FlatSystem flat;
        flat.forms.resize(F.R);
        double bound = 0;
        for (int i = 0; i < F.R; ++i)
            for (const auto& m : F.forms[i]) {
                flat.forms[i].push_back({m.c, m.exps});
                bound += std::abs(static_cast<double>(m.c)) *
                         std::pow(static_cast<double>(coord_hi), F.d);
            }
        if (bound >= kExactLimit)
            throw input_error(
                "exp_sum: |F(x)| can reach " + std::to_string(bound) +
                " on this box, past the 2^53 exact-phase range");
        return flat;
    }

    long long eval(int i, const std::vector<long long>& x) const {
        long long v = 0;
        for (const auto& m : forms[i]) {
            long long t = m.c;
            for (std::size_t j = 0; j < m.exps.size(); ++j)
                for (int e = 0; e < m.exps[j]; ++e) t *= x[j];
            v += t;
        }
        return v;
    }
};

void validate_exp_sum_args(const FormSystem& F, const std::vector<double>& alpha,
                           long long P, const BoxSpec& box,
                           const WeightTable& weights) {
    if (static_cast<int>(alpha.size()) != F.R)
        throw input_error("exp_sum: alpha has " + std::to_string(alpha.size()) +
                          " entries, system has R=" + std::to_string(F.R));
    if (P < 2) throw input_error("exp_sum: need P >= 2");
    if (box.dim() != F.n)
        throw input_error("exp_sum: box dimension " + std::to_string(box.dim()) +
                          " != n=" + std::to_string(F.n));
    box.validate();
    if (!weights.covers(1, P))
        throw input_error("exp_sum: weight table does not cover [1, P]");
}

cplx exp_sum_direct(const FormSystem& F, const std::vector<double>& alpha,
                    long long P, const BoxSpec& box, const WeightTable& weights,
                    long long budget) {
    std::vector<std::vector<std::pair<long long, double>>> axis(F.n);
    double grid = 1;
    long long coord_hi = 1;
    for (int j = 0; j < F.n; ++j) {
        auto [lo, hi] = scaled_range(box.sides[j].first, box.sides[j].second, P);
        if (lo > hi) return 0.0;
        grid *= static_cast<double>(hi - lo + 1);
        coord_hi = std::max(coord_hi, hi);
        axis[j] = weight_support(weights, lo, hi);
        if (axis[j].empty()) return 0.0;
    }
    check_budget(grid >= 4e18 ? (1LL << 62) : static_cast<long long>(grid),
                 budget, "exp_sum direct grid");
    auto flat = FlatSystem::build(F, coord_hi);

    std::vector<std::size_t> idx(F.n, 0);
    std::vector<long long> x(F.n);
    std::vector<double> lam(F.n);
    for (int j = 0; j < F.n; ++j) {
        x[j] = axis[j][0].first;
        lam[j] = axis[j][0].second;
    }
    pairwise_acc<cplx> acc;
    while (true) {
        double w = 1;
        for (int j = 0; j < F.n; ++j) w *= lam[j];
        double t = 0;
        for (int i = 0; i < F.R; ++i)
            t += frac_prod(alpha[i], static_cast<double>(flat.eval(i, x)));
        acc.add(w * unit_phase(t));

        int j = F.n - 1;
        while (j >= 0 && idx[j] + 1 == axis[j].size()) {
            idx[j] = 0;
            x[j] = axis[j][0].first;
            lam[j] = axis[j][0].second;
            --j;
        }
        if (j < 0) break;
        ++idx[j];
        x[j] = axis[j][idx[j]].first;
        lam[j] = axis[j][idx[j]].second;
    }
    return acc.total();
}

cplx exp_sum_factorized(const FormSystem& F, const std::vector<double>& alpha,
                        long long P, const BoxSpec& box,
                        const WeightTable& weights) {
    if (!F.is_diagonal)
        throw input_error("exp_sum: factorized route needs a diagonal system");
    if (std::pow(static_cast<double>(P), F.d) >= kExactLimit)
        throw input_error("exp_sum: P^d past the 2^53 exact-phase range");
    cplx prod = 1.0;
    for (int j = 0; j < F.n; ++j) {
        DD theta;  // sum_i alpha_i * (coefficient of x_j^d in form i)
        for (int i = 0; i < F.R; ++i)
            for (const auto& m : F.forms[i])
                if (m.exps[j] == F.d)
                    theta = dd_add_prod(theta, alpha[i],
                                        static_cast<double>(m.c));
        auto [lo, hi] = scaled_range(box.sides[j].first, box.sides[j].second, P);
        pairwise_acc<cplx> axis_sum;
        for (auto [x, lam] : weight_support(weights, lo, hi)) {
            long long xd = 1;
            for (int e = 0; e < F.d; ++e) xd *= x;
            axis_sum.add(lam *
                         unit_phase(dd_frac_prod(theta, static_cast<double>(xd))));
        }
        prod *= axis_sum.total();
    }
    return prod;
}

}  // namespace

BoxSpec effective_box(const FormSystem& F) {
    return F.box ? *F.box : BoxSpec::unit(F.n);
}

cplx exp_sum(const FormSystem& F, const std::vector<double>& alpha, long long P,
             const BoxSpec& box, const WeightTable& weights, ExpSumRoute route,
             long long budget) {
    validate_exp_sum_args(F, alpha, P, box, weights);
    if (route == ExpSumRoute::kAuto)
        route = F.is_diagonal ? ExpSumRoute::kFactorized : ExpSumRoute::kDirect;
    if (route == ExpSumRoute::kFactorized)
        return exp_sum_factorized(F, alpha, P, box, weights);
    return exp_sum_direct(F, alpha, P, box, weights, budget);
}

cplx poly_phase(const std::vector<double>& f, long long x) {
    long double t = 0;
    for (std::size_t i = f.size(); i-- > 0;)
        t = t * static_cast<long double>(x) + static_cast<long double>(f[i]);
    return unit_phase(t);
}

cplx lambda_exp_sum(const std::vector<double>& f, long long lo, long long hi,
                    const WeightTable& weights) {
    if (!weights.covers(std::max<long long>(lo, 1), std::max(hi, lo)))
        throw input_error("lambda_exp_sum: weight table does not cover range");
    pairwise_acc<cplx> acc;
    for (long long x = std::max<long long>(lo, 1); x <= hi; ++x)
        if (weights.is_prime_power(x))
            acc.add(weights.lambda(x) * poly_phase(f, x));
    return acc.total();
}

VaughanSplit prime_expsum_vaughan(const std::vector<double>& f, long long P,
                                  double b1, double b2, int W,
                                  const WeightTable& weights) {
    if (!(0.0 < b1 && b1 < b2 && b2 <= 1.0))
        throw input_error("prime_expsum_vaughan: need 0 < b1 < b2 <= 1");
    if (W < 2) throw input_error("prime_expsum_vaughan: need W >= 2");
    if (static_cast<double>(W) * W >= b1 * static_cast<double>(P))
        throw input_error(
            "prime_expsum_vaughan: W^2 >= b1*P, identity range violated");
    auto [first, last] = scaled_range(b1, b2, P);
    if (!weights.covers(1, std::max(last, 1LL)))
        throw input_error("prime_expsum_vaughan: weight table does not cover range");
    long long prev = first - 1;  // n runs over (prev, last]
    auto V = vaughan_weights(W);

    VaughanSplit out;
    pairwise_acc<cplx> psi1, psi1p, psi2;
    for (long long x = 1; x <= W; ++x) {
        if (V.mu_small[x] == 0) continue;
        double mu = V.mu_small[x];
        for (long long y = prev / x + 1; x * y <= last; ++y)
            psi1.add(mu * std::log(static_cast<double>(y)) * poly_phase(f, x * y));
    }
    for (long long x = 1; x <= static_cast<long long>(W) * W; ++x) {
        if (V.xi[x] == 0.0) continue;
        pairwise_acc<cplx> inner;
        for (long long y = prev / x + 1; x * y <= last; ++y)
            inner.add(poly_phase(f, x * y));
        psi1p.add(-V.xi[x] * inner.total());
    }
    for (long long x = W + 1; x * (W + 1) <= last; ++x) {
        double eta = V.eta(x);
        if (eta == 0.0) continue;
        pairwise_acc<cplx> inner;
        for (long long y = std::max<long long>(W + 1, prev / x + 1);
             x * y <= last; ++y)
            if (weights.is_prime_power(y))
                inner.add(weights.lambda(y) * poly_phase(f, x * y));
        psi2.add(-eta * inner.total());
    }
    out.psi1 = psi1.total();
    out.psi1p = psi1p.total();
    out.psi2 = psi2.total();
    out.total = out.psi1 + out.psi1p + out.psi2;
    return out;
}

cplx upsilon_m(double alpha, const std::vector<int>& dexp,
               const std::vector<std::pair<std::vector<int>, double>>& g,
               long long P, const BoxSpec& box, const WeightTable& weights,
               long long budget) {
    int m = static_cast<int>(dexp.size());
    if (m < 1) throw input_error("upsilon_m: need m >= 1 exponents");
    for (int di : dexp)
        if (di < 1) throw input_error("upsilon_m: exponents must be >= 1");
    if (box.dim() != m)
        throw input_error("upsilon_m: box dimension != m");
    box.validate();
    if (P < 2) throw input_error("upsilon_m: need P >= 2");
    if (!weights.covers(1, P))
        throw input_error("upsilon_m: weight table does not cover [1, P]");
    double reach = 1;
    for (int di : dexp) reach *= std::pow(static_cast<double>(P), di);
    for (const auto& [exps, c] : g) {
        if (static_cast<int>(exps.size()) != m)
            throw input_error("upsilon_m: companion monomial arity != m");
        if (exps == dexp)
            throw input_error(
                "upsilon_m: companion polynomial carries the main monomial");
        double r = 1;
        for (int e : exps) r *= std::pow(static_cast<double>(P), e);
        reach = std::max(reach, r);
        (void)c;
    }
    if (reach >= kExactLimit)
        throw input_error("upsilon_m: monomial values past the 2^53 range");

    std::vector<std::vector<std::pair<long long, double>>> axis(m);
    double grid = 1;
    for (int j = 0; j < m; ++j) {
        auto [lo, hi] = scaled_range(box.sides[j].first, box.sides[j].second, P);
        if (lo > hi) return 0.0;
        grid *= static_cast<double>(hi - lo + 1);
        axis[j] = weight_support(weights, lo, hi);
        if (axis[j].empty()) return 0.0;
    }
    check_budget(grid >= 4e18 ? (1LL << 62) : static_cast<long long>(grid),
                 budget, "upsilon_m grid");

    auto monomial_val = [&](const std::vector<long long>& x,
                            const std::vector<int>& exps) {
        long long v = 1;
        for (int j = 0; j < m; ++j)
            for (int e = 0; e < exps[j]; ++e) v *= x[j];
        return v;
    };

    std::vector<std::size_t> idx(m, 0);
    std::vector<long long> x(m);
    for (int j = 0; j < m; ++j) x[j] = axis[j][0].first;
    pairwise_acc<cplx> acc;
    while (true) {
        double w = 1;
        for (int j = 0; j < m; ++j) w *= axis[j][idx[j]].second;
        double t = frac_prod(alpha, static_cast<double>(monomial_val(x, dexp)));
        for (const auto& [exps, c] : g)
            t += frac_prod(c, static_cast<double>(monomial_val(x, exps)));
        acc.add(w * unit_phase(t));

        int j = m - 1;
        while (j >= 0 && idx[j] + 1 == axis[j].size()) {
            idx[j] = 0;
            x[j] = axis[j][0].first;
            --j;
        }
        if (j < 0) break;
        ++idx[j];
        x[j] = axis[j][idx[j]].first;
    }
    return acc.total();
}

DifferencedPoly difference_operator(const Poly& f, int var, int depth) {
    if (depth < 1) throw input_error("difference_operator: need depth >= 1");
    if (var < 0 || var >= f.nvars())
        throw input_error("difference_operator: variable index out of range");
    int nv = f.nvars();
    Poly p = f.extended(depth);
    for (int k = 0; k < depth; ++k) p = p.shift_var(var, nv + k) - p;
    return {p, var, depth};
}

namespace {

// Shared tuple enumeration for count_N and gamma_f: calls visit() with the
// per-slot contraction distances ||Phi_j|| for every (d-1)-tuple with
// coordinates in [-X, X], in lexicographic order.
template <class Visit>
void for_each_tuple(const SymmetricTensor& T, const std::vector<double>& alpha,
                    long long X, long long budget, const char* what,
                    Visit visit) {
    if (static_cast<int>(alpha.size()) != T.R)
        throw input_error(std::string(what) + ": alpha size != R");
    if (T.d < 2) throw input_error(std::string(what) + ": need degree >= 2");
    if (X < 0) throw input_error(std::string(what) + ": need X >= 0");
    int slots = (T.d - 1) * T.n;
    double grid = std::pow(2.0 * static_cast<double>(X) + 1.0, slots);
    check_budget(grid >= 4e18 ? (1LL << 62) : static_cast<long long>(grid),
                 budget, what);
    auto K = PsiKernel::build(T);
    for (int i = 0; i < T.R; ++i)
        for (int j = 0; j < T.n; ++j) {
            double bound = 0;
            for (long long v : K.table[i][j])
                bound += std::abs(static_cast<double>(v));
            bound *= std::pow(static_cast<double>(X), T.d - 1);
            if (bound >= kExactLimit)
                throw input_error(std::string(what) +
                                  ": contractions past the 2^53 range");
        }

    std::vector<std::vector<long long>> xs(T.d - 1,
                                           std::vector<long long>(T.n, -X));
    std::vector<double> dist(T.n);
    while (true) {
        for (int j = 0; j < T.n; ++j) {
            double t = 0;
            for (int i = 0; i < T.R; ++i)
                t += frac_prod(alpha[i], static_cast<double>(K.eval(i, j, xs)));
            dist[j] = dist_to_int(t);
        }
        visit(dist);

        int k = slots - 1;
        while (k >= 0 && xs[k / T.n][k % T.n] == X) {
            xs[k / T.n][k % T.n] = -X;
            --k;
        }
        if (k < 0) break;
        ++xs[k / T.n][k % T.n];
    }
}

}  // namespace

long long count_N(const SymmetricTensor& T, const std::vector<double>& alpha,
                  long long X, double Y, long long budget) {
    if (!(Y > 0)) throw input_error("count_N: need Y > 0");
    long long count = 0;
    for_each_tuple(T, alpha, X, budget, "count_N", [&](const std::vector<double>& dist) {
        for (double dj : dist)
            if (!(dj < 1.0 / Y)) return;
        ++count;
    });
    return count;
}

double gamma_f(const SymmetricTensor& T, const std::vector<double>& alpha,
               long long P, long long budget) {
    if (P < 1) throw input_error("gamma_f: need P >= 1");
    pairwise_acc<double> acc;
    double Pd = static_cast<double>(P);
    for_each_tuple(T, alpha, P, budget, "gamma_f", [&](const std::vector<double>& dist) {
        double term = 1;
        for (double dj : dist) term *= (dj == 0.0) ? Pd : std::min(Pd, 1.0 / dj);
        acc.add(term);
    });
    return acc.total();
}

}  // namespace circle
