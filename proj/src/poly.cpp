#include "circle/poly.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace circle {

void Poly::put(const Exps& e, const Rat& c) {
    if (c == 0) return;
    auto it = terms_.find(e);
    if (it == terms_.end()) {
        terms_.emplace(e, c);
    } else {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

Poly Poly::monomial(int nvars, const Exps& exps, const Rat& c) {
    if (static_cast<int>(exps.size()) != nvars)
        throw input_error("Poly::monomial: exponent vector length mismatch");
    for (int e : exps)
        if (e < 0) throw input_error("Poly::monomial: negative exponent");
    Poly p(nvars);
    p.put(exps, c);
    return p;
}

Poly Poly::constant(int nvars, const Rat& c) {
    return monomial(nvars, Exps(nvars, 0), c);
}

Poly Poly::variable(int nvars, int var) {
    Exps e(nvars, 0);
    e.at(var) = 1;
    return monomial(nvars, e, 1);
}

Poly& Poly::operator+=(const Poly& o) {
    if (nv_ != o.nv_) {
        if (is_zero() && nv_ == 0) nv_ = o.nv_;
        else if (!o.is_zero() || o.nv_ != 0)
            throw input_error("Poly: variable count mismatch in addition");
    }
    for (const auto& [e, c] : o.terms_) put(e, c);
    return *this;
}

Poly& Poly::operator-=(const Poly& o) {
    if (nv_ != o.nv_) {
        if (is_zero() && nv_ == 0) nv_ = o.nv_;
        else if (!o.is_zero() || o.nv_ != 0)
            throw input_error("Poly: variable count mismatch in subtraction");
    }
    for (const auto& [e, c] : o.terms_) put(e, -c);
    return *this;
}

Poly Poly::operator*(const Poly& o) const {
    if (nv_ != o.nv_)
        throw input_error("Poly: variable count mismatch in multiplication");
    Poly r(nv_);
    Exps e(nv_);
    for (const auto& [ea, ca] : terms_)
        for (const auto& [eb, cb] : o.terms_) {
            for (int j = 0; j < nv_; ++j) e[j] = ea[j] + eb[j];
            r.put(e, ca * cb);
        }
    return r;
}

Poly Poly::operator*(const Rat& c) const {
    Poly r(nv_);
    if (c == 0) return r;
    for (const auto& [e, v] : terms_) r.terms_.emplace(e, v * c);
    return r;
}

Poly Poly::derivative(int var) const {
    Poly r(nv_);
    for (const auto& [e, c] : terms_) {
        int k = e.at(var);
        if (k == 0) continue;
        Exps e2 = e;
        e2[var] = k - 1;
        r.put(e2, c * k);
    }
    return r;
}

Poly Poly::shift_var(int var, int shift_var) const {
    // Binomial expansion of (x_var + x_shift)^k, term by term.
    Poly r(nv_);
    for (const auto& [e, c] : terms_) {
        int k = e.at(var);
        Int binom = 1;
        for (int i = 0; i <= k; ++i) {
            Exps e2 = e;
            e2[var] = k - i;
            e2[shift_var] += i;
            r.put(e2, c * Rat(binom));
            binom = binom * (k - i) / (i + 1);
        }
    }
    return r;
}

Poly Poly::extended(int extra) const {
    Poly r(nv_ + extra);
    for (const auto& [e, c] : terms_) {
        Exps e2 = e;
        e2.resize(nv_ + extra, 0);
        r.terms_.emplace(std::move(e2), c);
    }
    return r;
}

Rat Poly::eval(const std::vector<Rat>& x) const {
    if (static_cast<int>(x.size()) != nv_)
        throw input_error("Poly::eval: point dimension mismatch");
    Rat s = 0;
    for (const auto& [e, c] : terms_) {
        Rat t = c;
        for (int j = 0; j < nv_; ++j)
            for (int i = 0; i < e[j]; ++i) t *= x[j];
        s += t;
    }
    return s;
}

double Poly::eval_double(const std::vector<double>& x) const {
    if (static_cast<int>(x.size()) != nv_)
        throw input_error("Poly::eval_double: point dimension mismatch");
    double s = 0;
    for (const auto& [e, c] : terms_) {
        double t = static_cast<double>(c);
        for (int j = 0; j < nv_; ++j)
            for (int i = 0; i < e[j]; ++i) t *= x[j];
        s += t;
    }
    return s;
}

long long Poly::eval_mod(const std::vector<long long>& x, long long p) const {
    if (static_cast<int>(x.size()) != nv_)
        throw input_error("Poly::eval_mod: point dimension mismatch");
    long long s = 0;
    for (const auto& [e, c] : terms_) {
        if (denominator(c) != 1)
            throw input_error("Poly::eval_mod: non-integral coefficient");
        Int cm = numerator(c) % p;
        long long t = static_cast<long long>(cm);
        t %= p;
        if (t < 0) t += p;
        for (int j = 0; j < nv_; ++j)
            for (int i = 0; i < e[j]; ++i) t = (t * (x[j] % p)) % p;
        s = (s + t) % p;
    }
    return (s % p + p) % p;
}

int Poly::total_degree() const {
    int d = 0;
    for (const auto& [e, c] : terms_)
        d = std::max(d, std::accumulate(e.begin(), e.end(), 0));
    return d;
}

int Poly::degree_in(const std::vector<int>& vars) const {
    int d = 0;
    for (const auto& [e, c] : terms_) {
        int s = 0;
        for (int v : vars) s += e.at(v);
        d = std::max(d, s);
    }
    return d;
}

Rat Poly::coeff(const Exps& exps) const {
    auto it = terms_.find(exps);
    return it == terms_.end() ? Rat(0) : it->second;
}

std::vector<Rat> Poly::univariate_coeffs() const {
    int var = -1;
    for (const auto& [e, c] : terms_)
        for (int j = 0; j < nv_; ++j)
            if (e[j] > 0) {
                if (var == -1) var = j;
                else if (var != j)
                    throw input_error("Poly: not univariate");
            }
    if (var == -1) var = 0;
    std::vector<Rat> out(total_degree() + 1, Rat(0));
    for (const auto& [e, c] : terms_) out[e[var]] = c;
    return out;
}

std::string Poly::str(const std::vector<std::string>& names) const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, c] : terms_) {
        if (!first) os << " + ";
        first = false;
        os << c.str();
        for (int j = 0; j < nv_; ++j) {
            if (e[j] == 0) continue;
            os << "*";
            if (static_cast<int>(names.size()) > j) os << names[j];
            else os << "x" << (j + 1);
            if (e[j] > 1) os << "^" << e[j];
        }
    }
    return os.str();
}

int system_linear_rank(const std::vector<Poly>& polys) {
    if (polys.empty()) throw input_error("system_linear_rank: empty list");
    // Collect the union of monomials, then Gaussian elimination over Q.
    std::map<Poly::Exps, int> cols;
    for (const auto& p : polys)
        for (const auto& [e, c] : p.terms())
            cols.emplace(e, 0);
    int nc = 0;
    for (auto& [e, idx] : cols) idx = nc++;
    std::vector<std::vector<Rat>> rows;
    for (const auto& p : polys) {
        std::vector<Rat> row(nc, Rat(0));
        for (const auto& [e, c] : p.terms()) row[cols[e]] = c;
        rows.push_back(std::move(row));
    }
    int rank = 0;
    for (int col = 0; col < nc && rank < static_cast<int>(rows.size()); ++col) {
        int piv = -1;
        for (int r = rank; r < static_cast<int>(rows.size()); ++r)
            if (rows[r][col] != 0) { piv = r; break; }
        if (piv < 0) continue;
        std::swap(rows[rank], rows[piv]);
        for (int r = 0; r < static_cast<int>(rows.size()); ++r) {
            if (r == rank || rows[r][col] == 0) continue;
            Rat f = rows[r][col] / rows[rank][col];
            for (int c2 = col; c2 < nc; ++c2) rows[r][c2] -= f * rows[rank][c2];
        }
        ++rank;
    }
    return rank;
}

}  // namespace circle
