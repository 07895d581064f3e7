#include "circle/arith.hpp"

#include <algorithm>
#include <cmath>

namespace circle {

namespace {

// Primes up to `limit` by a plain sieve.
std::vector<long long> small_primes(long long limit) {
    std::vector<char> comp(limit + 1, 0);
    std::vector<long long> primes;
    for (long long i = 2; i <= limit; ++i) {
        if (comp[i]) continue;
        primes.push_back(i);
        for (long long j = i * i; j <= limit; j += i) comp[j] = 1;
    }
    return primes;
}

}  // namespace

WeightTable sieve_von_mangoldt(long long lo, long long hi, long long block,
                               long long budget) {
    if (lo < 1 || lo > hi) throw input_error("sieve_von_mangoldt: need 1 <= lo <= hi");
    check_budget(hi - lo + 1, budget, "sieve_von_mangoldt");
    WeightTable t;
    t.lo = lo;
    t.hi = hi;
    t.p.assign(hi - lo + 1, 0);
    t.k.assign(hi - lo + 1, 0);

    long long root = static_cast<long long>(std::sqrt(static_cast<double>(hi))) + 1;
    auto primes = small_primes(root);

    std::vector<long long> spf(std::min(block, hi - lo + 1));
    for (long long seg = lo; seg <= hi; seg += block) {
        long long end = std::min(hi, seg + block - 1);
        std::fill(spf.begin(), spf.begin() + (end - seg + 1), 0);
        for (long long q : primes) {
            long long start = std::max(q * q, ((seg + q - 1) / q) * q);
            for (long long m = start; m <= end; m += q)
                if (spf[m - seg] == 0) spf[m - seg] = q;
        }
        for (long long x = seg; x <= end; ++x) {
            if (x == 1) continue;
            long long q = spf[x - seg];
            if (q == 0) {
                // No prime factor at most sqrt(hi): x itself is prime.
                t.p[x - lo] = x;
                t.k[x - lo] = 1;
                continue;
            }
            long long y = x;
            std::uint8_t e = 0;
            while (y % q == 0) {
                y /= q;
                ++e;
            }
            if (y == 1) {
                t.p[x - lo] = q;
                t.k[x - lo] = e;
            }
        }
    }
    return t;
}

ArithValues arithmetic_functions(long long x) {
    if (x < 1) throw input_error("arithmetic_functions: need x >= 1");
    ArithValues v{1, 1, 1};
    long long rem = x;
    for (long long q = 2; q * q <= rem; ++q) {
        if (rem % q) continue;
        int e = 0;
        long long pe = 1;
        while (rem % q == 0) {
            rem /= q;
            ++e;
            pe *= q;
        }
        v.phi *= pe / q * (q - 1);
        v.mu = (e > 1) ? 0 : -v.mu;
        v.tau *= e + 1;
    }
    if (rem > 1) {
        v.phi *= rem - 1;
        v.mu = -v.mu;
        v.tau *= 2;
    }
    return v;
}

long long jordan_totient(long long q, int R) {
    // Multiplicative: J_R(p^e) = p^(eR) - p^((e-1)R).
    long long result = 1;
    long long rem = q;
    for (long long p = 2; p * p <= rem; ++p) {
        if (rem % p) continue;
        int e = 0;
        while (rem % p == 0) {
            rem /= p;
            ++e;
        }
        long long peR = 1, pe1R = 1;
        for (int i = 0; i < e * R; ++i) peR *= p;
        for (int i = 0; i < (e - 1) * R; ++i) pe1R *= p;
        result *= peR - pe1R;
    }
    if (rem > 1) {
        long long pR = 1;
        for (int i = 0; i < R; ++i) pR *= rem;
        result *= pR - 1;
    }
    return result;
}

RationalApprox dirichlet_approx(double alpha, long long N) {
    if (!std::isfinite(alpha)) throw input_error("dirichlet_approx: non-finite alpha");
    if (N < 1) throw input_error("dirichlet_approx: need N >= 1");
    // Continued-fraction convergents p_k/q_k until the denominator passes N;
    // the last one with q <= N satisfies |q*alpha - a| <= 1/N.
    double x = alpha;
    long long p0 = 1, q0 = 0;  // p_{-1}/q_{-1}
    long long p1 = static_cast<long long>(std::floor(x)), q1 = 1;
    x -= std::floor(x);
    for (int it = 0; it < 64 && x > 1e-15; ++it) {
        x = 1.0 / x;
        double aid = std::floor(x);
        if (aid > 9e17) break;
        long long ai = static_cast<long long>(aid);
        x -= aid;
        if (ai > (N - q0) / q1) break;  // next denominator would pass N
        if (std::abs(static_cast<double>(ai) * static_cast<double>(p1)) > 4e18)
            break;
        long long p2 = ai * p1 + p0, q2 = ai * q1 + q0;
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
    }
    RationalApprox r;
    r.a = p1;
    r.q = q1;
    long long g = std::gcd(std::llabs(r.a), r.q);
    if (g > 1) {
        r.a /= g;
        r.q /= g;
    }
    r.err = std::abs(alpha - static_cast<double>(r.a) / static_cast<double>(r.q));
    return r;
}

VaughanWeights vaughan_weights(int W) {
    if (W < 1) throw input_error("vaughan_weights: need W >= 1");
    VaughanWeights v;
    v.W = W;
    long long W2 = static_cast<long long>(W) * W;
    auto table = sieve_von_mangoldt(1, std::max<long long>(W, 2));
    v.mu_small.assign(W + 1, 0);
    for (int x = 1; x <= W; ++x) v.mu_small[x] = arithmetic_functions(x).mu;
    v.xi.assign(W2 + 1, 0.0);
    for (int x1 = 1; x1 <= W; ++x1) {
        if (v.mu_small[x1] == 0) continue;
        for (int x2 = 1; x2 <= W; ++x2) {
            double lam = table.lambda(x2);
            if (lam == 0.0) continue;
            v.xi[static_cast<long long>(x1) * x2] += v.mu_small[x1] * lam;
        }
    }
    return v;
}

double vaughan_identity_check(long long n, int W) {
    long long W2 = static_cast<long long>(W) * W;
    if (n <= W2)
        throw input_error("vaughan_identity_check: identity range requires n > W^2");
    auto weights = vaughan_weights(W);
    auto table = sieve_von_mangoldt(1, n);

    std::vector<long long> divs;
    for (long long x = 1; x * x <= n; ++x) {
        if (n % x) continue;
        divs.push_back(x);
        if (x != n / x) divs.push_back(n / x);
    }
    std::sort(divs.begin(), divs.end());

    double t1 = 0, t2 = 0, t3 = 0;
    for (long long div : divs) {
        long long y = n / div;
        if (div <= W && weights.mu_small[div] != 0)
            t1 += weights.mu_small[div] * std::log(static_cast<double>(y));
        if (div <= W2) t2 += weights.xi[div];
        if (div > W && y > W && table.is_prime_power(y))
            t3 += weights.eta(div) * table.lambda(y);
    }
    double lhs = table.lambda(n);
    return lhs - (t1 - t2 - t3);
}

}  // namespace circle
