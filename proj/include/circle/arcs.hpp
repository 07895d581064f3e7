// Major/minor arc geometry on the torus: classification against the level-Q
// family of rational boxes, the exact measure of the major arcs, and a
// sampler for minor-arc probe points.
#pragma once

#include <cstdint>
#include <vector>

#include "circle/common.hpp"

namespace circle {

// Classification outcome.  A major verdict carries the witness (q, a) with
// the smallest q; numerators are torus representatives in [1, q], and the
// containment |alpha_i - a_i/q| <= Q/(q P^d) is measured mod 1.
struct ArcVerdict {
    bool major = false;
    long long q = 0;              // 0 when minor
    std::vector<long long> a;     // empty when minor
    long long Q = 0;
    long long P = 0;
    int d = 0;
};

// Every (q, a) with q <= Q whose rational box contains alpha, ordered by q.
// Only the nearest numerator per q is considered, which is exhaustive while
// Q/(q P^d) < 1/(2q), i.e. whenever 2Q < P^d.
std::vector<std::pair<long long, std::vector<long long>>> arc_witnesses(
    const std::vector<double>& alpha, long long Q, long long P, int d);

// Scans all q <= Q and returns the smallest witness, or a minor verdict.
// A minor verdict is only meaningful for Q <= P^{Rd/(R+1)}/4 and is refused
// beyond that level.
ArcVerdict arc_classify(const std::vector<double>& alpha, long long Q,
                        long long P, int d);

// Exact measure of the level-Q major arcs: sum over q <= Q of J_R(q) times
// (2Q/(q P^d))^R.  Requires Q <= P^{d/2}/4, where the boxes are pairwise
// disjoint; beyond that the sum would double-count overlaps, so it refuses.
double arcs_measure(long long Q, long long P, int d, int R);

// Minor-arc sample points for the decay probe (R = 1).  Points are drawn as
// a/q + delta with q <= Q, gcd(a, q) = 1 and |delta| between 1 and 3 times
// the box half-width Q/(q P^d), then kept only if classified minor: the
// probe targets the region just outside the major arcs, where decay is
// slowest; uniform sampling would land deep in the minor arcs almost surely.
std::vector<double> sample_minor_points(long long Q, long long P, int d,
                                        int count, std::uint64_t seed);

}  // namespace circle
