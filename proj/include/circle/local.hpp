// Arithmetic local factors: Gauss sums over unit residues, the A*(q)
// coefficients and their truncated series, unit solution counts mod p^k, the
// orthogonality cross-check tying the two together, and Hensel-lifted
// certificates of non-singular p-adic unit solutions.
#pragma once

#include <complex>
#include <cstdint>
#include <json.hpp>
#include <vector>

#include "circle/common.hpp"
#include "circle/forms.hpp"

namespace circle {

// S*(q, a) = sum over unit vectors b mod q of e(a.F(b)/q).  Phases come from
// the exact residue a.F(b) mod q and a table of q roots of unity.  Diagonal
// systems factorize into n per-variable sums; general systems enumerate the
// unit grid under the budget.
cplx gauss_sum_star(long long q, const std::vector<long long>& a,
                    const FormSystem& F, long long budget = default_budget);

// A*(q) = sum of S*(q, a) over 1 <= a_i <= q with gcd(a_1,...,a_R,q) = 1.
cplx A_star(long long q, const FormSystem& F, long long budget = default_budget);

// Truncation of sum_q A*(q)/phi(q)^n with per-q terms kept for inspection.
// All q <= q_max must fit the budget before any work starts; no partial sums.
struct SeriesTruncation {
    double value = 0.0;
    std::vector<std::pair<long long, double>> terms;  // (q, A*(q)/phi(q)^n)
};
SeriesTruncation singular_series_truncated(const FormSystem& F, long long q_max,
                                           long long budget = default_budget);

// M_p(k): unit vectors b mod p^k with F(b) = 0 mod p^k, counted exactly.
// k = 0 counts the empty condition as 1.
Int unit_solution_count(long long p, int k, const FormSystem& F,
                        long long budget = default_budget);

// Both sides of the finite orthogonality identity
//   sum_{r<=k} A*(p^r)/phi(p^r)^n  =  p^{kR} M_p(k) / phi(p^k)^n,
// each computed by its own route.  A mismatch beyond 1e-9 is a bug in one of
// the routes, so it raises consistency_error rather than returning.
struct LocalDensityReport {
    long long p = 0;
    int k = 0;
    double partial_sum = 0.0;  // character-sum side
    Int unit_count = 0;        // M_p(k)
    double normalized = 0.0;   // density side
};
LocalDensityReport orthogonality_check(long long p, int k, const FormSystem& F,
                                       long long budget = default_budget);

// Empirical size table for the Gauss sums over prime powers q <= q_cap:
// max_a |S*(q,a)|, and that maximum against the reference envelope
// q^{n-2-R}.  The ratio is reported, not asserted; only |S*| <= phi(q)^n is
// a hard bound.
struct GaussSizeRow {
    long long q = 0;
    double max_abs = 0.0;
    double envelope_ratio = 0.0;
};
std::vector<GaussSizeRow> gauss_size_report(const FormSystem& F, long long q_cap,
                                            long long budget = default_budget);

// A verified approximate zero: unit point mod p^k with F = 0 mod p^k whose
// scaled Jacobian has full rank mod p.  gamma is the uniform valuation of
// the Jacobian at the point: every entry is divisible by p^gamma and
// J/p^gamma has rank R mod p, which is the smoothness data the lift needs
// once k >= 2*gamma + 1.  For odd p away from degenerate points gamma = 0
// and jac_rank_mod_p is literally the rank of J mod p.
struct SolubilityCertificate {
    long long p = 0;
    int k = 0;
    int gamma = 0;
    std::vector<Int> point;   // residues in [1, p^k), all units
    int jac_rank_mod_p = 0;   // rank of J/p^gamma mod p; must equal R
};

enum class CertStatus {
    kFound,         // certificate attached
    kNotFound,      // proven: some level p^e carries no unit zeros at all
    kInconclusive,  // unit zeros persist but none passed the rank test
};

struct CertificateResult {
    CertStatus status = CertStatus::kInconclusive;
    SolubilityCertificate cert;  // meaningful only when kFound
    int searched_level = 0;      // highest base level e examined
};

// Searches base levels e = 1, 2, ... (up to max_base_level) for a unit zero
// mod p^e whose scaled Jacobian is full-rank, then lifts one precision step
// at a time to mod p^{target_k}.  A level with no unit zeros at all proves
// absence; running out of levels does not, hence the three-way status.
CertificateResult padic_certificate(long long p, const FormSystem& F,
                                    int target_k, int max_base_level = 6,
                                    long long budget = default_budget);

// Re-derives every certificate invariant from scratch: primality, unit
// entries, F = 0 mod p^k, uniform valuation gamma, scaled rank R.
bool verify_certificate(const SolubilityCertificate& cert, const FormSystem& F);

nlohmann::json serialize_certificate(const SolubilityCertificate& cert);
SolubilityCertificate parse_certificate(const nlohmann::json& doc);

}  // namespace circle
