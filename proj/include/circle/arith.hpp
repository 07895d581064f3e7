// Prime infrastructure: segmented von Mangoldt sieve, multiplicative
// functions, Dirichlet rational approximation, Vaughan identity weights.
#pragma once

#include <cstdint>
#include <vector>

#include "circle/common.hpp"

namespace circle {

// Lambda(x) on [lo,hi], held symbolically: for each x the prime p with
// x = p^k (and the exponent k), or p = 0 when x is not a prime power.
// log p is materialized in double precision only at use sites.
struct WeightTable {
    long long lo = 1, hi = 0;
    std::vector<long long> p;   // indexed by x - lo
    std::vector<std::uint8_t> k;

    bool covers(long long a, long long b) const { return lo <= a && b <= hi; }
    bool is_prime_power(long long x) const { return p[x - lo] != 0; }
    bool is_prime(long long x) const { return p[x - lo] != 0 && k[x - lo] == 1; }
    // Lambda(x) = log p at prime powers, else 0.
    double lambda(long long x) const {
        long long q = p[x - lo];
        return q ? std::log(static_cast<double>(q)) : 0.0;
    }
    // log p at primes, 0 elsewhere (the N* weight).
    double prime_log(long long x) const {
        return is_prime(x) ? std::log(static_cast<double>(p[x - lo])) : 0.0;
    }
};

// Exact prime-power classification on [lo,hi] by a segmented sieve.
WeightTable sieve_von_mangoldt(long long lo, long long hi,
                               long long block = 1LL << 20,
                               long long budget = default_budget);

struct ArithValues {
    long long phi = 0;
    int mu = 0;
    long long tau = 0;
};
// (phi, mu, tau) from the factorization of x.
ArithValues arithmetic_functions(long long x);

// Jordan totient J_R(q) = #{a in [1,q]^R : gcd(a_1,...,a_R,q) = 1}.
long long jordan_totient(long long q, int R);

struct RationalApprox {
    long long a = 0;
    long long q = 1;
    double err = 0.0;  // |alpha - a/q|
};
// Continued-fraction convergent with q <= N and |q*alpha - a| <= 1/N.
RationalApprox dirichlet_approx(double alpha, long long N);

// Vaughan weights at level W:
//   xi(x)  = sum over x1*x2 = x with x1 <= W and x2 <= W of mu(x1)*Lambda(x2),
//            supported on x <= W^2;
//   eta(x) = sum over x1 <= W with x1 | x of mu(x1).
struct VaughanWeights {
    int W = 0;
    std::vector<double> xi;  // index x in [0, W^2]
    std::vector<int> mu_small;  // mu on [0, W]

    double eta(long long x) const {
        double s = 0;
        for (int x1 = 1; x1 <= W; ++x1)
            if (x % x1 == 0) s += mu_small[x1];
        return s;
    }
};
VaughanWeights vaughan_weights(int W);

// Residual of the three-term identity for Lambda(n); valid for n > W^2.
double vaughan_identity_check(long long n, int W);

}  // namespace circle
