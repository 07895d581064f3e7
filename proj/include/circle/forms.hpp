// Systems of equal-degree integer forms: representation, evaluation,
// differentiation, symmetric coefficients, block decomposition, singular
// locus probes, and the variable-count thresholds.
#pragma once

#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "circle/box.hpp"
#include "circle/poly.hpp"

namespace circle {

struct Monomial {
    std::vector<int> exps;  // length n, entries sum to d
    long long c = 0;        // nonzero integer coefficient
};

struct FormSystem {
    int n = 0;  // variables
    int R = 0;  // forms
    int d = 0;  // common degree, >= 2
    std::vector<std::vector<Monomial>> forms;  // R monomial lists
    bool is_diagonal = false;
    std::optional<BoxSpec> box;  // optional default box from the input file

    // Validates invariants and sets is_diagonal.
    static FormSystem make(int n, int R, int d,
                           std::vector<std::vector<Monomial>> forms,
                           std::optional<BoxSpec> box = std::nullopt);

    Poly form_poly(int i) const;  // exact copy of form i
};

// Structured-text (JSON) system I/O.  Parse errors are anchored to the
// offending position, e.g. "forms[1][0]: exponent sum 3 != d=2".
FormSystem parse_system(const nlohmann::json& doc);
FormSystem parse_system_file(const std::string& path);
nlohmann::json serialize_system(const FormSystem& F);

// ---- evaluation and differentiation -------------------------------------

// Exact values (F_1(x),...,F_R(x)).
std::vector<Int> evaluate_system(const FormSystem& F,
                                 const std::vector<long long>& x);

struct JacobianResult {
    std::vector<std::vector<Rat>> J;  // R x n, entry (i,j) = dF_i/dx_j
    int rank = 0;                     // rank over Q
};
JacobianResult jacobian_matrix(const FormSystem& F, const std::vector<Rat>& x);

// ---- symmetric coefficient tensor ---------------------------------------

// Entries are stored once per sorted index tuple; the expansion convention
// runs over all ordered tuples, so a cross monomial like x1*x2 stores 1/2.
// d! times every entry is an integer.
struct SymmetricTensor {
    int n = 0, R = 0, d = 0;
    std::vector<std::map<std::vector<int>, Rat>> entry;  // per form, sorted tuple -> value

    Rat get(int i, std::vector<int> tuple) const;  // sorts the tuple
};

SymmetricTensor symmetrize_coefficients(const FormSystem& F);
// Expansion over all ordered d-tuples; must reproduce form i exactly.
Poly tensor_expand(const SymmetricTensor& T, int i);

// Psi_j^{(i)} contracted against d-1 integer vectors; always integral.
std::vector<Int> psi_multilinear(const SymmetricTensor& T, int j,
                                 const std::vector<std::vector<long long>>& xs);

// Flattened integer tables d! * f^{(i)}_{j,t} over ordered (d-1)-tuples t,
// for enumeration kernels.  Values fit in int64 by construction check.
struct PsiKernel {
    int n = 0, R = 0, d = 0;
    // table[i][j] has n^(d-1) entries, tuple index in row-major order.
    std::vector<std::vector<std::vector<long long>>> table;

    static PsiKernel build(const SymmetricTensor& T);
    long long eval(int i, int j,
                   const std::vector<std::vector<long long>>& xs) const;
};

// ---- variable split -----------------------------------------------------

struct VariableSplit {
    int m = 0, s = 0, t = 0;  // x = (y, z, w), m+s+t = n
};

// Per form: F = f + g + h with f over y, g over (y,z) touching z,
// h touching w; h = G + H with H a form in w alone.
struct SplitForms {
    std::vector<std::vector<Monomial>> f, g, h, G, H;
};
SplitForms decompose(const FormSystem& F, const VariableSplit& split);

// ---- singular locus -----------------------------------------------------

// All R x R minors of the Jacobian matrix as polynomials; their common zero
// set is the locus where the system drops rank.
std::vector<Poly> singular_locus_minors(const FormSystem& F);

enum class FpMode { exhaustive, sampled };

struct DimEstimateReport {
    std::vector<std::pair<long long, long long>> counts;  // (p, #zeros)
    double slope = 0.0;   // log count vs log p, through the origin when alone
    int dim_estimate = 0; // rounded slope
    FpMode mode = FpMode::exhaustive;
    std::string verdict = "HEURISTIC";
};

DimEstimateReport dim_estimate_over_Fp(const std::vector<Poly>& polys, int n,
                                       const std::vector<long long>& primes,
                                       FpMode mode,
                                       long long budget = default_budget,
                                       long long samples = 100000,
                                       std::uint64_t seed = 1);

// ---- thresholds ---------------------------------------------------------

struct ThresholdReport {
    long long kappa1 = 0, kappa2 = 0, kappa3 = 0, bound = 0;
    bool satisfied = false;  // n >= bound
};
ThresholdReport birch_thresholds(int d, int R, long long n);

}  // namespace circle
