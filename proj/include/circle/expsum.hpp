// Exponential-sum kernels: the weighted sum S_F over a box, prime sums via
// the Vaughan identity, the product sums Upsilon_m, iterated differencing,
// and the tuple-counting functions Gamma and N built on the symmetric tensor.
#pragma once

#include <complex>
#include <utility>
#include <vector>

#include "circle/arith.hpp"
#include "circle/box.hpp"
#include "circle/common.hpp"
#include "circle/forms.hpp"
#include "circle/poly.hpp"

namespace circle {

enum class ExpSumRoute {
    kAuto,        // factorized when the system is diagonal, else direct
    kDirect,      // full grid enumeration with exact integer form values
    kFactorized,  // product of per-axis sums; diagonal systems only
};

// S_F(alpha) = sum over x in the scaled box of Lambda(x_1)...Lambda(x_n)
// times e(alpha . F(x)).  Terms are accumulated in lexicographic order with
// pairwise reduction; phases reduce mod 1 before the 2*pi scaling.
cplx exp_sum(const FormSystem& F, const std::vector<double>& alpha, long long P,
             const BoxSpec& box, const WeightTable& weights,
             ExpSumRoute route = ExpSumRoute::kAuto,
             long long budget = default_budget);

// The box attached to the system, or the unit box when none is attached.
BoxSpec effective_box(const FormSystem& F);

// e(f(x)) for a univariate polynomial given by ascending real coefficients.
// Every kernel in this header evaluates phases through this one routine, so
// decompositions compare against direct sums with bit-identical phase values.
cplx poly_phase(const std::vector<double>& f, long long x);

// Direct sum of Lambda(x) e(f(x)) over lo <= x <= hi.
cplx lambda_exp_sum(const std::vector<double>& f, long long lo, long long hi,
                    const WeightTable& weights);

// The three-way Vaughan decomposition of the prime sum at level W.  Signs are
// folded in, so total = psi1 + psi1p + psi2.
struct VaughanSplit {
    cplx total;
    cplx psi1;   // mu(x) log y over x <= W
    cplx psi1p;  // -xi(x) over x <= W^2
    cplx psi2;   // -eta(x) Lambda(y) over x > W, y > W
};

// Decomposes sum over b1*P < x <= b2*P of Lambda(x) e(f(x)).  Requires
// 0 < b1 < b2 <= 1, W >= 2, and W^2 < b1*P so the identity covers the range.
VaughanSplit prime_expsum_vaughan(const std::vector<double>& f, long long P,
                                  double b1, double b2, int W,
                                  const WeightTable& weights);

// Upsilon_m(alpha) = sum over the scaled m-dimensional box of
// Lambda(x_1)...Lambda(x_m) e(alpha x_1^{d_1}...x_m^{d_m} + g(x)), where g is
// a list of (exponent vector, coefficient) monomials avoiding the main one.
cplx upsilon_m(double alpha, const std::vector<int>& dexp,
               const std::vector<std::pair<std::vector<int>, double>>& g,
               long long P, const BoxSpec& box, const WeightTable& weights,
               long long budget = default_budget);

// Iterated forward difference in one variable with symbolic shifts.  The
// result lives in nv + depth variables; shift k is variable nv + k - 1.
struct DifferencedPoly {
    Poly poly;
    int var = 0;
    int depth = 0;
};
DifferencedPoly difference_operator(const Poly& f, int var, int depth);

// N(X, 1/Y; alpha): the number of (d-1)-tuples of integer points with all
// coordinates in [-X, X] whose contractions Phi_j = sum_i alpha_i Psi_j^(i)
// satisfy ||Phi_j|| < 1/Y for every j.
long long count_N(const SymmetricTensor& T, const std::vector<double>& alpha,
                  long long X, double Y, long long budget = default_budget);

// Gamma(alpha; P) = sum over (d-1)-tuples with coordinates in [-P, P] of
// prod_j min(P, ||Phi_j||^{-1}).
double gamma_f(const SymmetricTensor& T, const std::vector<double>& alpha,
               long long P, long long budget = default_budget);

}  // namespace circle
