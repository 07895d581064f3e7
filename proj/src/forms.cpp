#include "circle/forms.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

namespace circle {

namespace {

Int factorial(int d) {
    Int f = 1;
    for (int i = 2; i <= d; ++i) f *= i;
    return f;
}

int rank_rat(std::vector<std::vector<Rat>> rows) {
    if (rows.empty()) return 0;
    int nc = static_cast<int>(rows[0].size());
    int rank = 0;
    for (int col = 0; col < nc && rank < static_cast<int>(rows.size()); ++col) {
        int piv = -1;
        for (int r = rank; r < static_cast<int>(rows.size()); ++r)
            if (rows[r][col] != 0) { piv = r; break; }
        if (piv < 0) continue;
        std::swap(rows[rank], rows[piv]);
        for (int r = rank + 1; r < static_cast<int>(rows.size()); ++r) {
            if (rows[r][col] == 0) continue;
            Rat f = rows[r][col] / rows[rank][col];
            for (int c = col; c < nc; ++c) rows[r][c] -= f * rows[rank][c];
        }
        ++rank;
    }
    return rank;
}

}  // namespace

FormSystem FormSystem::make(int n, int R, int d,
                            std::vector<std::vector<Monomial>> forms,
                            std::optional<BoxSpec> box) {
    if (n < 1 || R < 1) throw input_error("FormSystem: need n >= 1 and R >= 1");
    if (d < 2) throw input_error("FormSystem: degree must be >= 2");
    if (static_cast<int>(forms.size()) != R)
        throw input_error("FormSystem: form count does not match R");
    bool diag = true;
    for (int i = 0; i < R; ++i) {
        std::set<std::vector<int>> seen;
        for (std::size_t k = 0; k < forms[i].size(); ++k) {
            const Monomial& m = forms[i][k];
            std::ostringstream where;
            where << "forms[" << i << "][" << k << "]";
            if (static_cast<int>(m.exps.size()) != n)
                throw input_error(where.str() + ": exponent vector length " +
                                  std::to_string(m.exps.size()) + " != n=" +
                                  std::to_string(n));
            int sum = 0, nonzero = 0;
            for (int e : m.exps) {
                if (e < 0) throw input_error(where.str() + ": negative exponent");
                sum += e;
                if (e > 0) ++nonzero;
            }
            if (sum != d)
                throw input_error(where.str() + ": exponent sum " +
                                  std::to_string(sum) + " != d=" + std::to_string(d));
            if (m.c == 0) throw input_error(where.str() + ": zero coefficient");
            if (!seen.insert(m.exps).second)
                throw input_error(where.str() + ": duplicate exponent vector");
            if (nonzero != 1) diag = false;
        }
    }
    if (box) box->validate();
    if (box && box->dim() != n)
        throw input_error("FormSystem: box dimension does not match n");
    FormSystem F;
    F.n = n;
    F.R = R;
    F.d = d;
    F.forms = std::move(forms);
    F.is_diagonal = diag;
    F.box = std::move(box);
    return F;
}

Poly FormSystem::form_poly(int i) const {
    Poly p(n);
    for (const Monomial& m : forms.at(i))
        p += Poly::monomial(n, m.exps, Rat(m.c));
    return p;
}

FormSystem parse_system(const nlohmann::json& doc) {
    try {
        int n = doc.at("n").get<int>();
        int R = doc.at("R").get<int>();
        int d = doc.at("d").get<int>();
        std::vector<std::vector<Monomial>> forms;
        for (const auto& fj : doc.at("forms")) {
            std::vector<Monomial> f;
            for (const auto& mj : fj) {
                Monomial m;
                m.exps = mj.at("exps").get<std::vector<int>>();
                m.c = mj.at("c").get<long long>();
                f.push_back(std::move(m));
            }
            forms.push_back(std::move(f));
        }
        std::optional<BoxSpec> box;
        if (doc.contains("box")) {
            BoxSpec b;
            for (const auto& side : doc.at("box"))
                b.sides.emplace_back(side.at(0).get<double>(),
                                     side.at(1).get<double>());
            box = std::move(b);
        }
        return FormSystem::make(n, R, d, std::move(forms), std::move(box));
    } catch (const nlohmann::json::exception& e) {
        throw input_error(std::string("system document: ") + e.what());
    }
}

FormSystem parse_system_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw input_error("cannot open system file: " + path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw input_error(path + ": " + e.what());
    }
    return parse_system(doc);
}

nlohmann::json serialize_system(const FormSystem& F) {
    nlohmann::json doc;
    doc["n"] = F.n;
    doc["R"] = F.R;
    doc["d"] = F.d;
    auto forms = nlohmann::json::array();
    for (const auto& f : F.forms) {
        auto fj = nlohmann::json::array();
        for (const auto& m : f)
            fj.push_back({{"exps", m.exps}, {"c", m.c}});
        forms.push_back(std::move(fj));
    }
    doc["forms"] = std::move(forms);
    if (F.box) {
        auto bj = nlohmann::json::array();
        for (auto& [lo, hi] : F.box->sides) bj.push_back({lo, hi});
        doc["box"] = std::move(bj);
    }
    return doc;
}

std::vector<Int> evaluate_system(const FormSystem& F,
                                 const std::vector<long long>& x) {
    if (static_cast<int>(x.size()) != F.n)
        throw input_error("evaluate_system: point dimension mismatch");
    std::vector<Int> out(F.R, Int(0));
    for (int i = 0; i < F.R; ++i)
        for (const Monomial& m : F.forms[i]) {
            Int t = m.c;
            for (int j = 0; j < F.n; ++j)
                for (int e = 0; e < m.exps[j]; ++e) t *= x[j];
            out[i] += t;
        }
    return out;
}

JacobianResult jacobian_matrix(const FormSystem& F, const std::vector<Rat>& x) {
    if (static_cast<int>(x.size()) != F.n)
        throw input_error("jacobian_matrix: point dimension mismatch");
    JacobianResult res;
    res.J.assign(F.R, std::vector<Rat>(F.n, Rat(0)));
    for (int i = 0; i < F.R; ++i)
        for (const Monomial& m : F.forms[i])
            for (int j = 0; j < F.n; ++j) {
                if (m.exps[j] == 0) continue;
                Rat t = Rat(m.c) * m.exps[j];
                for (int j2 = 0; j2 < F.n; ++j2) {
                    int e = m.exps[j2] - (j2 == j ? 1 : 0);
                    for (int k = 0; k < e; ++k) t *= x[j2];
                }
                res.J[i][j] += t;
            }
    res.rank = rank_rat(res.J);
    return res;
}

Rat SymmetricTensor::get(int i, std::vector<int> tuple) const {
    std::sort(tuple.begin(), tuple.end());
    auto it = entry.at(i).find(tuple);
    return it == entry.at(i).end() ? Rat(0) : it->second;
}

SymmetricTensor symmetrize_coefficients(const FormSystem& F) {
    SymmetricTensor T;
    T.n = F.n;
    T.R = F.R;
    T.d = F.d;
    T.entry.resize(F.R);
    Int dfact = factorial(F.d);
    for (int i = 0; i < F.R; ++i)
        for (const Monomial& m : F.forms[i]) {
            // Sorted index tuple of the monomial: j repeated exps[j] times.
            std::vector<int> tuple;
            Int mult = dfact;
            for (int j = 0; j < F.n; ++j) {
                for (int e = 0; e < m.exps[j]; ++e) tuple.push_back(j);
                mult /= factorial(m.exps[j]);
            }
            // Spread the coefficient over the mult ordered arrangements.
            T.entry[i][tuple] += Rat(Int(m.c), mult);
        }
    return T;
}

Poly tensor_expand(const SymmetricTensor& T, int i) {
    Poly p(T.n);
    Int dfact = factorial(T.d);
    for (const auto& [tuple, val] : T.entry.at(i)) {
        std::vector<int> exps(T.n, 0);
        Int mult = dfact;
        for (int j : tuple) exps[j] += 1;
        for (int j = 0; j < T.n; ++j) mult /= factorial(exps[j]);
        p += Poly::monomial(T.n, exps, val * Rat(mult));
    }
    return p;
}

std::vector<Int> psi_multilinear(const SymmetricTensor& T, int j,
                                 const std::vector<std::vector<long long>>& xs) {
    if (static_cast<int>(xs.size()) != T.d - 1)
        throw input_error("psi_multilinear: need d-1 vectors");
    for (const auto& v : xs)
        if (static_cast<int>(v.size()) != T.n)
            throw input_error("psi_multilinear: vector length mismatch");
    if (j < 0 || j >= T.n) throw input_error("psi_multilinear: bad index j");
    Int dfact = factorial(T.d);
    std::vector<Int> out(T.R, Int(0));
    // Sum over all ordered (d-1)-tuples; lookups sort internally.
    std::vector<int> tup(T.d - 1, 0);
    std::vector<int> full(T.d);
    for (;;) {
        full[0] = j;
        for (int k = 0; k < T.d - 1; ++k) full[k + 1] = tup[k];
        Int prod = 1;
        for (int k = 0; k < T.d - 1; ++k) prod *= xs[k][tup[k]];
        if (prod != 0) {
            for (int i = 0; i < T.R; ++i) {
                Rat f = T.get(i, full);
                if (f == 0) continue;
                Rat term = f * Rat(dfact) * Rat(prod);
                if (denominator(term) != 1)
                    throw consistency_error("psi_multilinear: non-integral value");
                out[i] += numerator(term);
            }
        }
        int k = T.d - 2;
        while (k >= 0 && ++tup[k] == T.n) tup[k--] = 0;
        if (k < 0) break;
    }
    return out;
}

PsiKernel PsiKernel::build(const SymmetricTensor& T) {
    PsiKernel K;
    K.n = T.n;
    K.R = T.R;
    K.d = T.d;
    Int dfact = factorial(T.d);
    long long tuples = 1;
    for (int k = 0; k < T.d - 1; ++k) tuples *= T.n;
    K.table.assign(T.R, std::vector<std::vector<long long>>(
                            T.n, std::vector<long long>(tuples, 0)));
    for (int i = 0; i < T.R; ++i)
        for (int j = 0; j < T.n; ++j)
            for (long long t = 0; t < tuples; ++t) {
                std::vector<int> full(T.d);
                full[0] = j;
                long long rem = t;
                for (int k = T.d - 2; k >= 0; --k) {
                    full[k + 1] = static_cast<int>(rem % T.n);
                    rem /= T.n;
                }
                Rat v = T.get(i, full) * Rat(dfact);
                if (denominator(v) != 1)
                    throw consistency_error("PsiKernel: non-integral entry");
                Int num = numerator(v);
                if (num > std::numeric_limits<long long>::max() ||
                    num < std::numeric_limits<long long>::min())
                    throw input_error("PsiKernel: entry exceeds 64-bit range");
                K.table[i][j][t] = static_cast<long long>(num);
            }
    return K;
}

long long PsiKernel::eval(int i, int j,
                          const std::vector<std::vector<long long>>& xs) const {
    const auto& row = table[i][j];
    long long tuples = static_cast<long long>(row.size());
    long long sum = 0;
    for (long long t = 0; t < tuples; ++t) {
        if (row[t] == 0) continue;
        long long prod = row[t];
        long long rem = t;
        for (int k = d - 2; k >= 0; --k) {
            prod *= xs[k][rem % n];
            rem /= n;
        }
        sum += prod;
    }
    return sum;
}

SplitForms decompose(const FormSystem& F, const VariableSplit& split) {
    if (split.m < 0 || split.s < 0 || split.t < 0 ||
        split.m + split.s + split.t != F.n)
        throw input_error("decompose: need m+s+t = n with nonnegative parts");
    SplitForms out;
    out.f.resize(F.R);
    out.g.resize(F.R);
    out.h.resize(F.R);
    out.G.resize(F.R);
    out.H.resize(F.R);
    int zlo = split.m, wlo = split.m + split.s;
    for (int i = 0; i < F.R; ++i)
        for (const Monomial& mo : F.forms[i]) {
            bool touches_w = false, touches_yz = false;
            int wdeg = 0;
            for (int j = 0; j < F.n; ++j) {
                if (mo.exps[j] == 0) continue;
                if (j >= wlo) {
                    touches_w = true;
                    wdeg += mo.exps[j];
                } else {
                    touches_yz = true;
                }
            }
            if (!touches_w) {
                bool touches_z = false;
                for (int j = zlo; j < wlo; ++j)
                    if (mo.exps[j] > 0) touches_z = true;
                (touches_z ? out.g[i] : out.f[i]).push_back(mo);
            } else {
                out.h[i].push_back(mo);
                (touches_yz ? out.G[i] : out.H[i]).push_back(mo);
                (void)wdeg;
            }
        }
    return out;
}

std::vector<Poly> singular_locus_minors(const FormSystem& F) {
    if (F.n < F.R)
        throw input_error("singular_locus_minors: need n >= R");
    // Jacobian as a matrix of polynomials.
    std::vector<std::vector<Poly>> J(F.R, std::vector<Poly>(F.n, Poly(F.n)));
    for (int i = 0; i < F.R; ++i) {
        Poly fi = F.form_poly(i);
        for (int j = 0; j < F.n; ++j) J[i][j] = fi.derivative(j);
    }
    // All R-column selections; determinant by permutation expansion
    // (R <= 4 at desk scale, so R! terms are fine).
    std::vector<Poly> minors;
    std::vector<int> cols(F.R);
    std::iota(cols.begin(), cols.end(), 0);
    auto determinant = [&](const std::vector<int>& cs) {
        std::vector<int> perm(F.R);
        std::iota(perm.begin(), perm.end(), 0);
        Poly d(F.n);
        do {
            int inv = 0;
            for (int a = 0; a < F.R; ++a)
                for (int b = a + 1; b < F.R; ++b)
                    if (perm[a] > perm[b]) ++inv;
            Poly term = Poly::constant(F.n, (inv % 2) ? Rat(-1) : Rat(1));
            for (int r = 0; r < F.R; ++r) term = term * J[r][cs[perm[r]]];
            d += term;
        } while (std::next_permutation(perm.begin(), perm.end()));
        return d;
    };
    for (;;) {
        minors.push_back(determinant(cols));
        int k = F.R - 1;
        while (k >= 0 && cols[k] == F.n - F.R + k) --k;
        if (k < 0) break;
        ++cols[k];
        for (int k2 = k + 1; k2 < F.R; ++k2) cols[k2] = cols[k2 - 1] + 1;
    }
    return minors;
}

DimEstimateReport dim_estimate_over_Fp(const std::vector<Poly>& polys, int n,
                                       const std::vector<long long>& primes,
                                       FpMode mode, long long budget,
                                       long long samples, std::uint64_t seed) {
    DimEstimateReport rep;
    rep.mode = mode;
    for (long long p : primes) {
        long long count = 0;
        if (mode == FpMode::exhaustive) {
            double need = std::pow(static_cast<double>(p), n);
            if (need > static_cast<double>(budget))
                throw budget_error("dim_estimate_over_Fp: p^n exceeds budget",
                                   static_cast<long long>(std::min(
                                       need, 9e18)));
            long long total = 1;
            for (int j = 0; j < n; ++j) total *= p;
            std::vector<long long> x(n, 0);
            for (long long idx = 0; idx < total; ++idx) {
                long long rem = idx;
                for (int j = 0; j < n; ++j) {
                    x[j] = rem % p;
                    rem /= p;
                }
                bool allzero = true;
                for (const Poly& q : polys)
                    if (q.eval_mod(x, p) != 0) {
                        allzero = false;
                        break;
                    }
                if (allzero) ++count;
            }
        } else {
            auto rng = seeded_rng(seed, static_cast<std::uint64_t>(p));
            std::uniform_int_distribution<long long> u(0, p - 1);
            long long hits = 0;
            std::vector<long long> x(n);
            for (long long s = 0; s < samples; ++s) {
                for (int j = 0; j < n; ++j) x[j] = u(rng);
                bool allzero = true;
                for (const Poly& q : polys)
                    if (q.eval_mod(x, p) != 0) {
                        allzero = false;
                        break;
                    }
                if (allzero) ++hits;
            }
            double frac = static_cast<double>(hits) / static_cast<double>(samples);
            count = static_cast<long long>(
                std::llround(frac * std::pow(static_cast<double>(p), n)));
        }
        rep.counts.emplace_back(p, count);
    }
    // Slope of log(count) against log(p); single point goes through the origin.
    std::vector<std::pair<double, double>> pts;
    for (auto& [p, c] : rep.counts)
        if (c >= 1) pts.emplace_back(std::log(static_cast<double>(p)),
                                     std::log(static_cast<double>(c)));
    if (pts.empty()) {
        rep.slope = 0.0;
        rep.dim_estimate = -1;
    } else if (pts.size() == 1) {
        rep.slope = pts[0].second / pts[0].first;
        rep.dim_estimate = static_cast<int>(std::llround(rep.slope));
    } else {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (auto& [x, y] : pts) {
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
        }
        double k = static_cast<double>(pts.size());
        rep.slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
        rep.dim_estimate = static_cast<int>(std::llround(rep.slope));
    }
    return rep;
}

ThresholdReport birch_thresholds(int d, int R, long long n) {
    if (d < 2) throw input_error("birch_thresholds: need d >= 2");
    if (R < 1) throw input_error("birch_thresholds: need R >= 1");
    long long R2 = static_cast<long long>(R) * R;
    long long common = (1LL << (d - 1)) * (d - 1) * R * (R + 1);
    ThresholdReport t;
    t.kappa1 = ((1LL << (d + 2)) * d * R2 + 1) * common + 1;
    t.kappa2 = ((1LL << (d + 2)) * d * R2 + 3) * common + 1;
    t.kappa3 = (R + 1) * t.kappa2 + t.kappa1 +
               static_cast<long long>(d) * R * (R + 1) * (R + 1) +
               2LL * R * (R + 1) + R;
    long long p4 = 1;
    for (int i = 0; i < d + 2; ++i) p4 *= 4;
    t.bound = p4 * d * d * R2 * R2 * R;
    t.satisfied = n >= t.bound;
    return t;
}

}  // namespace circle
