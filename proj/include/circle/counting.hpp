// Ground-truth solution counting over scaled boxes, the exact finite
// Fourier realization of the circle integral, and the heuristic main-term
// comparison harness.
#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "circle/box.hpp"
#include "circle/common.hpp"
#include "circle/forms.hpp"
#include "circle/integral.hpp"

namespace circle {

enum class CountMethod { kDirect, kDft };

// Pruned DFS cuts a subtree as soon as some form's reachable value interval
// excludes zero (sound here because scaled boxes contain only positive
// integers, making every monomial monotone in every coordinate).  kFull
// disables the cut so the two enumerations can be compared.
enum class EnumMode { kAuto, kPruned, kFull };

struct CountReport {
    long long P = 0;
    BoxSpec box;
    double N_weighted = 0.0;    // von Mangoldt weight on every coordinate
    double N_prime = 0.0;       // log p weight, prime coordinates only
    long long raw_solutions = 0;
    CountMethod method = CountMethod::kDirect;
    double elapsed_sec = 0.0;
};

using SolutionSink = std::function<void(const std::vector<long long>&)>;

// Exact counts by enumeration of the scaled box.  Solutions reach the sink
// in lexicographic order.  Refuses (all-or-nothing) when the full grid
// exceeds the budget; the message points diagonal systems at count_via_dft.
CountReport count_weighted(const FormSystem& F, long long P,
                           const BoxSpec& box, EnumMode mode = EnumMode::kAuto,
                           long long budget = default_budget,
                           const SolutionSink& sink = nullptr);

// Smallest grid modulus that makes the finite Fourier average exact: one
// more than twice the largest coefficient-sum range bound of any form.
long long dft_modulus_bound(const FormSystem& F, long long P,
                            const BoxSpec& box);

// N_F(P) as the exact average M^(-R) sum over m in [0,M)^R of S_F(m/M),
// with residue phases taken from an M-th root table so the orthogonality
// identity holds to rounding error.  M <= 0 selects the default bound.
// Diagonal systems use per-axis factorized sums at cost O(M^R * n * P).
CountReport count_via_dft(const FormSystem& F, long long P, const BoxSpec& box,
                          long long M = 0, long long budget = default_budget);

struct AsymptoticConfig {
    std::vector<long long> P;
    long long q_max = 50;       // singular series truncation
    double Q_cap = 8.0;         // beta truncation for the singular integral
    QuadratureSpec quad;
    double vol_epsilon = 0.01;  // volume-oracle settings (n > 6 path)
    long long vol_samples = 400000;
    std::uint64_t seed = 1;
    long long budget = default_budget;
};

enum class AsymptoticVerdict { kHeuristic, kObstructed };

struct AsymptoticReport {
    std::vector<long long> P;
    double series_trunc = 0.0;
    double integral_est = 0.0;
    std::string integral_method;  // "singular_integral" or "volume_density"
    std::vector<double> counts;   // N*_F per P
    std::vector<double> main_terms;
    std::vector<double> ratios;   // empty when obstructed
    AsymptoticVerdict verdict = AsymptoticVerdict::kHeuristic;
    long long obstruction_q = 0;  // witnessing modulus when obstructed
    double band_lo = 0.5, band_hi = 2.0;
    std::vector<bool> in_band;
    long long q_max = 0;
    double Q_cap = 0.0;
    std::uint64_t seed = 0;
};

// Assembles truncated series, archimedean estimate and counts into
// main-term ratios.  The verdict is kObstructed when some small prime power
// has no unit solutions (the true series vanishes; ratios are not formed).
// Otherwise the run is labeled kHeuristic: desk-scale n is always far below
// the regime where the main term is proven.  Component refusals
// propagate with the failing stage named.
AsymptoticReport asymptotic_report(const FormSystem& F, const BoxSpec& box,
                                   const AsymptoticConfig& cfg);

}  // namespace circle
