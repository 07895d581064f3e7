#include "circle/arcs.hpp"

#include <cmath>
#include <numeric>

#include "circle/arith.hpp"

namespace circle {

namespace {

void validate_arc_args(int R, long long Q, long long P, int d) {
    if (R < 1) throw input_error("arcs: need at least one coordinate");
    if (Q < 1) throw input_error("arcs: need Q >= 1");
    if (P < 2) throw input_error("arcs: need P >= 2");
    if (d < 1) throw input_error("arcs: need d >= 1");
}

}  // namespace

std::vector<std::pair<long long, std::vector<long long>>> arc_witnesses(
    const std::vector<double>& alpha, long long Q, long long P, int d) {
    int R = static_cast<int>(alpha.size());
    validate_arc_args(R, Q, P, d);
    double Pd = std::pow(static_cast<double>(P), d);
    if (2.0 * static_cast<double>(Q) >= Pd)
        throw input_error("arcs: need 2Q < P^d for nearest-numerator search");

    std::vector<double> at(R);
    for (int i = 0; i < R; ++i) at[i] = frac1(alpha[i]);

    std::vector<std::pair<long long, std::vector<long long>>> found;
    for (long long q = 1; q <= Q; ++q) {
        double half = static_cast<double>(Q) / (static_cast<double>(q) * Pd);
        std::vector<long long> a(R);
        long long g = q;
        bool inside = true;
        for (int i = 0; i < R; ++i) {
            double qa = static_cast<double>(q) * at[i];
            long long ai = std::llround(qa);
            if (std::abs(qa - static_cast<double>(ai)) >
                half * static_cast<double>(q)) {
                inside = false;
                break;
            }
            a[i] = ai == 0 ? q : ai;  // torus representative in [1, q]
            g = std::gcd(g, a[i]);
        }
        if (inside && g == 1) found.emplace_back(q, std::move(a));
    }
    return found;
}

ArcVerdict arc_classify(const std::vector<double>& alpha, long long Q,
                        long long P, int d) {
    auto found = arc_witnesses(alpha, Q, P, d);
    ArcVerdict v;
    v.Q = Q;
    v.P = P;
    v.d = d;
    if (!found.empty()) {
        v.major = true;
        v.q = found.front().first;
        v.a = found.front().second;
        return v;
    }
    int R = static_cast<int>(alpha.size());
    double level_cap =
        std::pow(static_cast<double>(P),
                 static_cast<double>(R) * d / (R + 1.0)) / 4.0;
    if (static_cast<double>(Q) > level_cap + 1e-9)
        throw input_error("arcs: minor verdict needs Q <= P^{Rd/(R+1)}/4 = " +
                          std::to_string(level_cap));
    return v;
}

double arcs_measure(long long Q, long long P, int d, int R) {
    validate_arc_args(R, Q, P, d);
    double Pd = std::pow(static_cast<double>(P), d);
    double disjoint_cap = std::pow(static_cast<double>(P), d / 2.0) / 4.0;
    if (static_cast<double>(Q) > disjoint_cap + 1e-9)
        throw input_error(
            "arcs_measure: Q > P^{d/2}/4 = " + std::to_string(disjoint_cap) +
            ", boxes may overlap and the sum would double-count");
    double total = 0;
    for (long long q = 1; q <= Q; ++q)
        total += static_cast<double>(jordan_totient(q, R)) *
                 std::pow(2.0 * static_cast<double>(Q) /
                              (static_cast<double>(q) * Pd),
                          R);
    return total;
}

std::vector<double> sample_minor_points(long long Q, long long P, int d,
                                        int count, std::uint64_t seed) {
    validate_arc_args(1, Q, P, d);
    if (count < 1) throw input_error("sample_minor_points: need count >= 1");
    double Pd = std::pow(static_cast<double>(P), d);
    auto rng = seeded_rng(seed, 0xa7c5);
    std::uniform_int_distribution<long long> uq(1, Q);
    std::uniform_real_distribution<double> uu(1.0, 3.0);
    std::vector<double> pts;
    pts.reserve(count);
    long long attempts_left = 10000LL * count;
    while (static_cast<int>(pts.size()) < count) {
        if (--attempts_left < 0)
            throw consistency_error("sample_minor_points: rejection stalled");
        long long q = uq(rng);
        std::uniform_int_distribution<long long> ua(1, q);
        long long a = ua(rng);
        if (std::gcd(a, q) != 1) continue;
        double u = uu(rng);
        double sign = (rng() & 1) ? 1.0 : -1.0;
        double x = frac1(static_cast<double>(a) / static_cast<double>(q) +
                         sign * u * static_cast<double>(Q) /
                             (static_cast<double>(q) * Pd));
        if (arc_classify({x}, Q, P, d).major) continue;
        pts.push_back(x);
    }
    return pts;
}

}  // namespace circle
