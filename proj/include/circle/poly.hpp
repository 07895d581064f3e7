// Sparse multivariate polynomials with exact rational coefficients.
// Cold-path algebra only (symmetrization, Jacobian minors, differencing);
// enumeration kernels elsewhere use flattened integer tables.
#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <map>
#include <string>
#include <vector>

#include "circle/common.hpp"

namespace circle {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

class Poly {
  public:
    using Exps = std::vector<int>;  // one exponent per variable

    Poly() : nv_(0) {}
    explicit Poly(int nvars) : nv_(nvars) {}

    // c * x^exps
    static Poly monomial(int nvars, const Exps& exps, const Rat& c);
    static Poly constant(int nvars, const Rat& c);
    // x_var as a polynomial
    static Poly variable(int nvars, int var);

    int nvars() const { return nv_; }
    bool is_zero() const { return terms_.empty(); }
    const std::map<Exps, Rat>& terms() const { return terms_; }

    Poly& operator+=(const Poly& o);
    Poly& operator-=(const Poly& o);
    friend Poly operator+(Poly a, const Poly& b) { return a += b; }
    friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
    Poly operator*(const Poly& o) const;
    Poly operator*(const Rat& c) const;
    bool operator==(const Poly& o) const {
        return nv_ == o.nv_ && terms_ == o.terms_;
    }

    Poly derivative(int var) const;

    // Substitute x_var -> x_var + x_shift_var (both indices into this
    // polynomial's variable list); the workhorse of the difference operator.
    Poly shift_var(int var, int shift_var) const;

    // Return a copy over nvars+extra variables (exponent vectors padded).
    Poly extended(int extra) const;

    Rat eval(const std::vector<Rat>& x) const;
    double eval_double(const std::vector<double>& x) const;
    // Evaluation over F_p; requires integral coefficients.
    long long eval_mod(const std::vector<long long>& x, long long p) const;

    int total_degree() const;
    int degree_in(const std::vector<int>& vars) const;  // max joint degree
    Rat coeff(const Exps& exps) const;

    // Dense coefficient vector of a univariate polynomial (throws otherwise).
    std::vector<Rat> univariate_coeffs() const;

    std::string str(const std::vector<std::string>& names = {}) const;

  private:
    int nv_;
    std::map<Exps, Rat> terms_;
    void put(const Exps& e, const Rat& c);
};

// Rank over Q of the span of the coefficient vectors of `polys`.
int system_linear_rank(const std::vector<Poly>& polys);

}  // namespace circle
