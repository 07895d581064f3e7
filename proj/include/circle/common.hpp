// Shared plumbing: error types, enumeration budgets, deterministic
// accumulation, phase helpers, seeded randomness, quadrature nodes.
#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace circle {

using cplx = std::complex<double>;

// Thrown on malformed user input (dimension mismatch, bad parameters, ...).
struct input_error : std::runtime_error {
    explicit input_error(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when an enumeration would exceed its budget.  `required` carries the
// cardinality the caller would have to allow; refusal is all-or-nothing.
struct budget_error : std::runtime_error {
    long long required;
    budget_error(const std::string& what, long long req)
        : std::runtime_error(what), required(req) {}
};

// Internal cross-checks that fail indicate a bug, not bad input.
struct consistency_error : std::runtime_error {
    explicit consistency_error(const std::string& what) : std::runtime_error(what) {}
};

constexpr long long default_budget = 1'000'000'000LL;

// Work estimates are formed in doubles; saturate before they become the
// integer `required` field of a refusal.
inline long long clamp_need(double need) {
    return need >= 4e18 ? (1LL << 62) : static_cast<long long>(need);
}

inline void check_budget(long long need, long long budget, const char* what) {
    if (need > budget)
        throw budget_error(std::string(what) + ": enumeration of " +
                               std::to_string(need) + " points exceeds budget " +
                               std::to_string(budget),
                           need);
}

// Distance to the nearest integer.
inline double dist_to_int(double t) {
    double f = t - std::floor(t);
    return f < 0.5 ? f : 1.0 - f;
}

// Fractional part in [0,1).  Long double keeps the reduction accurate for
// arguments up to ~1e12 before the final rounding to double.
inline double frac1(long double t) {
    long double f = t - std::floor(t);
    if (f >= 1.0L) f -= 1.0L;
    if (f < 0.0L) f += 1.0L;
    return static_cast<double>(f);
}

// e(t) = exp(2*pi*i*t); the argument is reduced mod 1 before scaling by 2*pi.
inline cplx unit_phase(long double t) {
    double f = frac1(t);
    double ang = 6.283185307179586476925286766559 * f;
    return {std::cos(ang), std::sin(ang)};
}

// frac(a*v) for integer-valued v with |v| < 2^53.  The product is split by
// fma so the reduction mod 1 keeps ~1e-16 absolute accuracy even when a*v is
// large; unit_phase re-reduces the (possibly slightly out-of-range) result.
inline double frac_prod(double a, double v) {
    double p = a * v;
    double e = std::fma(a, v, -p);
    double f = p - std::nearbyint(p);
    return f + e;
}

// Unevaluated double-double sum, for carrying linear combinations of phases
// at a precision the plain rounded sum cannot provide.
struct DD {
    double hi = 0.0;
    double lo = 0.0;
};

// acc + a*b with the product split by fma and the sum compensated (Knuth).
inline DD dd_add_prod(DD acc, double a, double b) {
    double p = a * b;
    double pe = std::fma(a, b, -p);
    double s = acc.hi + p;
    double z = s - acc.hi;
    double se = (acc.hi - (s - z)) + (p - z);
    return {s, acc.lo + se + pe};
}

// frac(t*v) for integer-valued v, |v| < 2^53.
inline double dd_frac_prod(DD t, double v) {
    return frac_prod(t.hi, v) + t.lo * v;
}

// Deterministic pairwise (tree) accumulation.  The reduction shape depends
// only on the number of pushes, so any partitioning that feeds values in the
// same global order reproduces identical bits.
template <class T>
class pairwise_acc {
  public:
    void add(T v) {
        std::size_t lvl = 0;
        while (lvl < filled_.size() && filled_[lvl]) {
            v += slots_[lvl];
            filled_[lvl] = false;
            ++lvl;
        }
        if (lvl == slots_.size()) {
            slots_.push_back(v);
            filled_.push_back(true);
        } else {
            slots_[lvl] = v;
            filled_[lvl] = true;
        }
    }
    T total() const {
        T s{};
        for (std::size_t i = 0; i < slots_.size(); ++i)
            if (filled_[i]) s += slots_[i];
        return s;
    }

  private:
    std::vector<T> slots_;
    std::vector<bool> filled_;
};

// splitmix64, used to derive independent streams from one user seed.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::mt19937_64 seeded_rng(std::uint64_t seed, std::uint64_t stream = 0) {
    return std::mt19937_64(mix64(seed ^ mix64(stream)));
}

// FNV-1a over a byte string; the config hash embedded in emitted records.
inline std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string hex64(std::uint64_t v);

// Gauss-Legendre rule on [-1,1]; nodes/weights computed once per order by
// Newton iteration and cached.
struct GLRule {
    std::vector<double> x, w;
};
const GLRule& gauss_legendre(int order);

// Halton sequence with a seeded Cranley-Patterson rotation, for the
// quasi-random volume oracle.  Dimension limited to the first 16 primes.
class HaltonSampler {
  public:
    HaltonSampler(int dim, std::uint64_t seed);
    // Fills `out` (size dim) with the idx-th shifted Halton point in [0,1)^dim.
    void point(std::uint64_t idx, std::vector<double>& out) const;

  private:
    int dim_;
    std::vector<int> base_;
    std::vector<double> shift_;
};

long long ipow_ll(long long b, int e);  // checked small-integer power

}  // namespace circle
