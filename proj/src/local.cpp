#include "circle/local.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "circle/arith.hpp"

namespace circle {

namespace {

bool is_prime_ll(long long p) {
    if (p < 2) return false;
    for (long long f = 2; f * f <= p; ++f)
        if (p % f == 0) return false;
    return true;
}

std::vector<long long> units_mod(long long q) {
    std::vector<long long> u;
    for (long long b = 1; b < q; ++b)
        if (std::gcd(b, q) == 1) u.push_back(b);
    return u;
}

std::vector<cplx> root_table(long long q) {
    std::vector<cplx> w(q);
    for (long long r = 0; r < q; ++r)
        w[r] = unit_phase(static_cast<long double>(r) / q);
    return w;
}

long long pow_mod(long long b, int e, long long q) {
    long long v = 1 % q;
    b %= q;
    if (b < 0) b += q;
    for (int i = 0; i < e; ++i) v = v * b % q;
    return v;
}

// Exact unit-solution count of a diagonal system mod M by convolving the
// per-variable histograms of the value vector (c_1j b^d, ..., c_Rj b^d)
// over (Z/M)^R.  Acc is the counter type; totals can reach phi(M)^n.
template <class Acc>
Int diagonal_unit_conv(const FormSystem& F, long long M) {
    auto units = units_mod(M);
    std::size_t ncells = 1;
    for (int i = 0; i < F.R; ++i) ncells *= static_cast<std::size_t>(M);
    auto var_hist = [&](int j) {
        std::vector<std::pair<std::size_t, unsigned long long>> h;
        std::map<std::size_t, unsigned long long> m;
        for (long long b : units) {
            std::size_t flat = 0;
            for (int i = 0; i < F.R; ++i) {
                long long c = 0;
                for (const auto& mo : F.forms[i])
                    if (mo.exps[j] == F.d) c = ((mo.c % M) + M) % M;
                flat = flat * M + c * pow_mod(b, F.d, M) % M;
            }
            ++m[flat];
        }
        h.assign(m.begin(), m.end());
        return h;
    };
    std::vector<Acc> acc(ncells, Acc(0)), next(ncells, Acc(0));
    for (auto& [v, c] : var_hist(0)) acc[v] = Acc(c);
    std::vector<long long> sv(F.R), tv(F.R);
    for (int j = 1; j < F.n; ++j) {
        auto h = var_hist(j);
        std::fill(next.begin(), next.end(), Acc(0));
        for (std::size_t t = 0; t < ncells; ++t) {
            if (acc[t] == Acc(0)) continue;
            std::size_t rem = t;
            for (int i = F.R - 1; i >= 0; --i) {
                tv[i] = static_cast<long long>(rem % M);
                rem /= M;
            }
            for (auto& [v, c] : h) {
                std::size_t vrem = v, flat = 0;
                for (int i = F.R - 1; i >= 0; --i) {
                    sv[i] = (tv[i] + static_cast<long long>(vrem % M)) % M;
                    vrem /= M;
                }
                for (int i = 0; i < F.R; ++i) flat = flat * M + sv[i];
                next[flat] += acc[t] * Acc(c);
            }
        }
        acc.swap(next);
    }
    return Int(acc[0]);
}

// Forms with coefficients pre-reduced mod q, for residue scans.
struct ModSystem {
    long long q;
    std::vector<std::vector<std::pair<long long, std::vector<int>>>> forms;

    static ModSystem build(const FormSystem& F, long long q) {
        ModSystem M;
        M.q = q;
        M.forms.resize(F.R);
        for (int i = 0; i < F.R; ++i)
            for (const auto& m : F.forms[i]) {
                long long c = m.c % q;
                if (c < 0) c += q;
                if (c != 0) M.forms[i].emplace_back(c, m.exps);
            }
        return M;
    }

    long long eval(int i, const std::vector<long long>& b) const {
        long long v = 0;
        for (const auto& [c, exps] : forms[i]) {
            long long t = c;
            for (std::size_t j = 0; j < exps.size(); ++j)
                if (exps[j]) t = t * pow_mod(b[j], exps[j], q) % q;
            v = (v + t) % q;
        }
        return v;
    }
};

Int eval_form_int(const FormSystem& F, int i, const std::vector<Int>& b) {
    Int v = 0;
    for (const auto& m : F.forms[i]) {
        Int t = m.c;
        for (int j = 0; j < F.n; ++j)
            for (int e = 0; e < m.exps[j]; ++e) t *= b[j];
        v += t;
    }
    return v;
}

Int eval_jac_entry_int(const FormSystem& F, int i, int j,
                       const std::vector<Int>& b) {
    Int v = 0;
    for (const auto& m : F.forms[i]) {
        if (m.exps[j] == 0) continue;
        Int t = Int(m.c) * m.exps[j];
        for (int l = 0; l < F.n; ++l) {
            int e = m.exps[l] - (l == j ? 1 : 0);
            for (int r = 0; r < e; ++r) t *= b[l];
        }
        v += t;
    }
    return v;
}

long long mod_ll(const Int& x, long long m) {
    Int r = x % m;
    if (r < 0) r += m;
    return static_cast<long long>(r);
}

// Valuation of x at p, capped; 0 maps to the cap.
int valuation(Int x, long long p, int cap = 1 << 20) {
    if (x == 0) return cap;
    int v = 0;
    while (x % p == 0 && v < cap) {
        x /= p;
        ++v;
    }
    return v;
}

long long inv_mod_p(long long a, long long p) {
    long long r = 1, b = a % p, e = p - 2;
    while (e) {
        if (e & 1) r = r * b % p;
        b = b * b % p;
        e >>= 1;
    }
    return r;
}

// Row echelon over F_p; returns the rank.  With rhs given, also writes the
// particular solution with free variables zero into sol.
int echelon_mod_p(std::vector<std::vector<long long>> M, long long p,
                  const std::vector<long long>* rhs,
                  std::vector<long long>* sol, const char* what) {
    int rows = static_cast<int>(M.size());
    int cols = rows ? static_cast<int>(M[0].size()) : 0;
    std::vector<long long> b(rows, 0);
    if (rhs) b = *rhs;
    std::vector<int> pivot_col;
    int r = 0;
    for (int c = 0; c < cols && r < rows; ++c) {
        int pr = -1;
        for (int i = r; i < rows; ++i)
            if (M[i][c] % p != 0) {
                pr = i;
                break;
            }
        if (pr < 0) continue;
        std::swap(M[pr], M[r]);
        std::swap(b[pr], b[r]);
        long long inv = inv_mod_p((M[r][c] % p + p) % p, p);
        for (int j = 0; j < cols; ++j) M[r][j] = (M[r][j] % p + p) % p * inv % p;
        b[r] = (b[r] % p + p) % p * inv % p;
        for (int i = 0; i < rows; ++i) {
            if (i == r) continue;
            long long f = (M[i][c] % p + p) % p;
            if (!f) continue;
            for (int j = 0; j < cols; ++j)
                M[i][j] = ((M[i][j] - f * M[r][j]) % p + p) % p;
            b[i] = ((b[i] - f * b[r]) % p + p) % p;
        }
        pivot_col.push_back(c);
        ++r;
    }
    if (rhs) {
        for (int i = r; i < rows; ++i)
            if (b[i] % p != 0)
                throw consistency_error(std::string(what) +
                                        ": inconsistent linear system mod p");
        sol->assign(cols, 0);
        for (int i = 0; i < r; ++i) (*sol)[pivot_col[i]] = b[i];
    }
    return r;
}

void validate_prime(long long p, const char* what) {
    if (!is_prime_ll(p))
        throw input_error(std::string(what) + ": " + std::to_string(p) +
                          " is not prime");
}

}  // namespace

cplx gauss_sum_star(long long q, const std::vector<long long>& a,
                    const FormSystem& F, long long budget) {
    if (q < 1) throw input_error("gauss_sum_star: need q >= 1");
    if (static_cast<int>(a.size()) != F.R)
        throw input_error("gauss_sum_star: a has wrong length");
    for (long long ai : a)
        if (ai < 1 || ai > q)
            throw input_error("gauss_sum_star: need 1 <= a_i <= q");
    if (q == 1) return 1.0;
    auto w = root_table(q);
    auto units = units_mod(q);

    if (F.is_diagonal) {
        check_budget(clamp_need(static_cast<double>(F.n) * q), budget,
                     "gauss_sum_star diagonal");
        cplx prod = 1.0;
        for (int j = 0; j < F.n; ++j) {
            long long theta = 0;
            for (int i = 0; i < F.R; ++i)
                for (const auto& m : F.forms[i])
                    if (m.exps[j] == F.d) {
                        long long c = m.c % q;
                        if (c < 0) c += q;
                        theta = (theta + a[i] % q * c) % q;
                    }
            pairwise_acc<cplx> axis;
            for (long long b : units)
                axis.add(w[theta * pow_mod(b, F.d, q) % q]);
            prod *= axis.total();
        }
        return prod;
    }

    check_budget(clamp_need(std::pow(static_cast<double>(q), F.n)), budget,
                 "gauss_sum_star unit grid");
    auto M = ModSystem::build(F, q);
    std::vector<std::size_t> idx(F.n, 0);
    std::vector<long long> b(F.n, units[0]);
    pairwise_acc<cplx> acc;
    while (true) {
        long long phase = 0;
        for (int i = 0; i < F.R; ++i)
            phase = (phase + a[i] % q * M.eval(i, b)) % q;
        acc.add(w[phase]);
        int j = F.n - 1;
        while (j >= 0 && idx[j] + 1 == units.size()) {
            idx[j] = 0;
            b[j] = units[0];
            --j;
        }
        if (j < 0) break;
        ++idx[j];
        b[j] = units[idx[j]];
    }
    return acc.total();
}

cplx A_star(long long q, const FormSystem& F, long long budget) {
    if (q < 1) throw input_error("A_star: need q >= 1");
    if (q == 1) return 1.0;
    double per = F.is_diagonal ? static_cast<double>(F.n) * q
                               : std::pow(static_cast<double>(q), F.n);
    check_budget(clamp_need(std::pow(static_cast<double>(q), F.R) * per),
                 budget, "A_star");
    std::vector<long long> a(F.R, 1);
    pairwise_acc<cplx> acc;
    while (true) {
        long long g = q;
        for (long long ai : a) g = std::gcd(g, ai);
        if (g == 1) acc.add(gauss_sum_star(q, a, F, budget));
        int i = F.R - 1;
        while (i >= 0 && a[i] == q) a[i--] = 1;
        if (i < 0) break;
        ++a[i];
    }
    return acc.total();
}

SeriesTruncation singular_series_truncated(const FormSystem& F, long long q_max,
                                           long long budget) {
    if (q_max < 1) throw input_error("singular_series_truncated: need q_max >= 1");
    for (long long q = 2; q <= q_max; ++q) {
        double per = F.is_diagonal ? static_cast<double>(F.n) * q
                                   : std::pow(static_cast<double>(q), F.n);
        double need = std::pow(static_cast<double>(q), F.R) * per;
        if (clamp_need(need) > budget)
            throw budget_error("singular_series_truncated: q=" +
                                   std::to_string(q) + " needs " +
                                   std::to_string(clamp_need(need)) +
                                   ", over budget " + std::to_string(budget) +
                                   "; refusing the whole truncation",
                               clamp_need(need));
    }
    SeriesTruncation out;
    for (long long q = 1; q <= q_max; ++q) {
        cplx A = A_star(q, F, budget);
        if (std::abs(A.imag()) > 1e-9 * (1.0 + std::abs(A)))
            throw consistency_error(
                "singular_series_truncated: A*(q) has imaginary part " +
                std::to_string(A.imag()) + " at q=" + std::to_string(q));
        double phi_n = std::pow(
            static_cast<double>(arithmetic_functions(q).phi), F.n);
        out.terms.emplace_back(q, A.real() / phi_n);
        out.value += out.terms.back().second;
    }
    return out;
}

Int unit_solution_count(long long p, int k, const FormSystem& F,
                        long long budget) {
    validate_prime(p, "unit_solution_count");
    if (k < 0) throw input_error("unit_solution_count: need k >= 0");
    if (k == 0) return 1;
    long long M = ipow_ll(p, k);
    long long phi = M / p * (p - 1);

    if (F.is_diagonal) {
        double cells = std::pow(static_cast<double>(M), F.R);
        check_budget(clamp_need(static_cast<double>(F.n) * cells *
                                static_cast<double>(M)),
                     budget, "unit_solution_count diagonal");
        // 64-bit accumulators while the worst case phi^n fits, big integers
        // beyond that; the convolution is otherwise identical.
        if (std::pow(static_cast<double>(phi), F.n) < 9e18)
            return diagonal_unit_conv<unsigned long long>(F, M);
        return diagonal_unit_conv<Int>(F, M);
    }

    check_budget(clamp_need(std::pow(static_cast<double>(M), F.n)), budget,
                 "unit_solution_count grid");
    auto Msys = ModSystem::build(F, M);
    auto units = units_mod(M);
    std::vector<std::size_t> idx(F.n, 0);
    std::vector<long long> b(F.n, units[0]);
    unsigned long long count = 0;
    while (true) {
        bool zero = true;
        for (int i = 0; i < F.R && zero; ++i) zero = Msys.eval(i, b) == 0;
        if (zero) ++count;
        int j = F.n - 1;
        while (j >= 0 && idx[j] + 1 == units.size()) {
            idx[j] = 0;
            b[j] = units[0];
            --j;
        }
        if (j < 0) break;
        ++idx[j];
        b[j] = units[idx[j]];
    }
    return Int(count);
}

LocalDensityReport orthogonality_check(long long p, int k, const FormSystem& F,
                                       long long budget) {
    validate_prime(p, "orthogonality_check");
    if (k < 0) throw input_error("orthogonality_check: need k >= 0");
    LocalDensityReport rep;
    rep.p = p;
    rep.k = k;
    rep.partial_sum = 0.0;
    for (int r = 0; r <= k; ++r) {
        long long q = ipow_ll(p, r);
        double phi_n =
            std::pow(static_cast<double>(arithmetic_functions(q).phi), F.n);
        rep.partial_sum += A_star(q, F, budget).real() / phi_n;
    }
    rep.unit_count = unit_solution_count(p, k, F, budget);
    long long M = ipow_ll(p, k);
    double phi_kn =
        std::pow(static_cast<double>(arithmetic_functions(M).phi), F.n);
    rep.normalized = std::pow(static_cast<double>(p),
                              static_cast<double>(k) * F.R) *
                     static_cast<double>(rep.unit_count) / phi_kn;
    if (std::abs(rep.partial_sum - rep.normalized) >
        1e-9 * std::max(1.0, std::abs(rep.normalized)))
        throw consistency_error(
            "orthogonality_check: character side " +
            std::to_string(rep.partial_sum) + " != density side " +
            std::to_string(rep.normalized) + " at p=" + std::to_string(p) +
            ", k=" + std::to_string(k));
    return rep;
}

std::vector<GaussSizeRow> gauss_size_report(const FormSystem& F, long long q_cap,
                                            long long budget) {
    std::vector<GaussSizeRow> rows;
    for (long long q = 2; q <= q_cap; ++q) {
        long long p = 0;
        for (long long f = 2; f * f <= q; ++f)
            if (q % f == 0) {
                p = f;
                break;
            }
        if (p == 0) p = q;
        long long m = q;
        while (m % p == 0) m /= p;
        if (m != 1) continue;  // prime powers only

        double max_abs = 0;
        std::vector<long long> a(F.R, 1);
        while (true) {
            long long g = q;
            for (long long ai : a) g = std::gcd(g, ai);
            if (g == 1) {
                double s = std::abs(gauss_sum_star(q, a, F, budget));
                double cap = std::pow(
                    static_cast<double>(arithmetic_functions(q).phi), F.n);
                if (s > cap + 1e-6)
                    throw consistency_error(
                        "gauss_size_report: |S*| exceeds phi(q)^n at q=" +
                        std::to_string(q));
                max_abs = std::max(max_abs, s);
            }
            int i = F.R - 1;
            while (i >= 0 && a[i] == q) a[i--] = 1;
            if (i < 0) break;
            ++a[i];
        }
        GaussSizeRow row;
        row.q = q;
        row.max_abs = max_abs;
        row.envelope_ratio =
            max_abs / std::pow(static_cast<double>(q), F.n - 2 - F.R);
        rows.push_back(row);
    }
    return rows;
}

namespace {

// One precision step: from F(b) = 0 mod p^j to mod p^{j+1}, correcting at
// scale p^{j-gamma}.  Valid while j >= 2*gamma + 1.
void lift_step(const FormSystem& F, long long p, int gamma, int j,
               std::vector<Int>& b) {
    Int pj = 1;
    for (int r = 0; r < j; ++r) pj *= p;
    std::vector<long long> u(F.R);
    for (int i = 0; i < F.R; ++i) {
        Int fv = eval_form_int(F, i, b);
        if (fv % pj != 0)
            throw consistency_error("padic lift: residue not divisible at level " +
                                    std::to_string(j));
        u[i] = (p - mod_ll(fv / pj, p)) % p;
    }
    std::vector<std::vector<long long>> Jp(F.R, std::vector<long long>(F.n));
    Int pg = 1;
    for (int r = 0; r < gamma; ++r) pg *= p;
    for (int i = 0; i < F.R; ++i)
        for (int jj = 0; jj < F.n; ++jj) {
            Int e = eval_jac_entry_int(F, i, jj, b);
            if (e % pg != 0)
                throw consistency_error("padic lift: Jacobian valuation dropped");
            Jp[i][jj] = mod_ll(e / pg, p);
        }
    std::vector<long long> delta;
    int rank = echelon_mod_p(Jp, p, &u, &delta, "padic lift");
    if (rank != F.R)
        throw consistency_error("padic lift: scaled Jacobian rank dropped");
    Int scale = pj / pg;          // p^{j-gamma}
    Int mod_next = pj * p;        // p^{j+1}
    for (int i = 0; i < F.n; ++i) {
        b[i] = (b[i] + scale * delta[i]) % mod_next;
        if (b[i] < 0) b[i] += mod_next;
    }
}

}  // namespace

CertificateResult padic_certificate(long long p, const FormSystem& F,
                                    int target_k, int max_base_level,
                                    long long budget) {
    validate_prime(p, "padic_certificate");
    if (target_k < 1) throw input_error("padic_certificate: need target_k >= 1");
    if (max_base_level < 1)
        throw input_error("padic_certificate: need max_base_level >= 1");

    CertificateResult res;
    for (int e = 1; e <= max_base_level; ++e) {
        res.searched_level = e;
        long long Me = ipow_ll(p, e);
        long long phi = Me / p * (p - 1);
        check_budget(clamp_need(std::pow(static_cast<double>(phi), F.n)),
                     budget, "padic_certificate base scan");
        auto Msys = ModSystem::build(F, Me);
        auto units = units_mod(Me);
        bool any_zero = false;

        std::vector<std::size_t> idx(F.n, 0);
        std::vector<long long> b(F.n, units[0]);
        while (true) {
            bool zero = true;
            for (int i = 0; i < F.R && zero; ++i) zero = Msys.eval(i, b) == 0;
            if (zero) {
                any_zero = true;
                std::vector<Int> bi(b.begin(), b.end());
                int gamma = 1 << 20;
                std::vector<std::vector<Int>> J(F.R, std::vector<Int>(F.n));
                for (int i = 0; i < F.R; ++i)
                    for (int jj = 0; jj < F.n; ++jj) {
                        J[i][jj] = eval_jac_entry_int(F, i, jj, bi);
                        gamma = std::min(gamma, valuation(J[i][jj], p));
                    }
                if (gamma < 1 << 20 && 2 * gamma + 1 <= e) {
                    std::vector<std::vector<long long>> Jp(
                        F.R, std::vector<long long>(F.n));
                    Int pg = 1;
                    for (int r = 0; r < gamma; ++r) pg *= p;
                    for (int i = 0; i < F.R; ++i)
                        for (int jj = 0; jj < F.n; ++jj)
                            Jp[i][jj] = mod_ll(J[i][jj] / pg, p);
                    if (echelon_mod_p(Jp, p, nullptr, nullptr, "") == F.R) {
                        for (int j = e; j < target_k; ++j)
                            lift_step(F, p, gamma, j, bi);
                        res.status = CertStatus::kFound;
                        res.cert.p = p;
                        res.cert.k = std::max(target_k, e);
                        res.cert.gamma = gamma;
                        res.cert.point = bi;
                        res.cert.jac_rank_mod_p = F.R;
                        if (!verify_certificate(res.cert, F))
                            throw consistency_error(
                                "padic_certificate: emitted certificate failed "
                                "re-verification");
                        return res;
                    }
                }
            }
            int j = F.n - 1;
            while (j >= 0 && idx[j] + 1 == units.size()) {
                idx[j] = 0;
                b[j] = units[0];
                --j;
            }
            if (j < 0) break;
            ++idx[j];
            b[j] = units[idx[j]];
        }
        if (!any_zero) {
            res.status = CertStatus::kNotFound;
            return res;
        }
    }
    res.status = CertStatus::kInconclusive;
    return res;
}

bool verify_certificate(const SolubilityCertificate& cert, const FormSystem& F) {
    if (!is_prime_ll(cert.p)) return false;
    if (cert.k < 1 || cert.gamma < 0) return false;
    if (cert.k < 2 * cert.gamma + 1) return false;  // lift validity window
    if (static_cast<int>(cert.point.size()) != F.n) return false;
    if (cert.jac_rank_mod_p != F.R) return false;
    Int M = 1;
    for (int r = 0; r < cert.k; ++r) M *= cert.p;
    for (const Int& x : cert.point)
        if (x < 1 || x >= M || x % cert.p == 0) return false;
    for (int i = 0; i < F.R; ++i)
        if (eval_form_int(F, i, cert.point) % M != 0) return false;
    Int pg = 1;
    for (int r = 0; r < cert.gamma; ++r) pg *= cert.p;
    std::vector<std::vector<long long>> Jp(F.R, std::vector<long long>(F.n));
    for (int i = 0; i < F.R; ++i)
        for (int j = 0; j < F.n; ++j) {
            Int e = eval_jac_entry_int(F, i, j, cert.point);
            if (e % pg != 0) return false;
            Jp[i][j] = mod_ll(e / pg, cert.p);
        }
    return echelon_mod_p(Jp, cert.p, nullptr, nullptr, "") == F.R;
}

nlohmann::json serialize_certificate(const SolubilityCertificate& cert) {
    nlohmann::json doc;
    doc["p"] = cert.p;
    doc["k"] = cert.k;
    doc["gamma"] = cert.gamma;
    doc["jac_rank"] = cert.jac_rank_mod_p;
    std::vector<std::string> pt;
    for (const Int& x : cert.point) pt.push_back(x.str());
    doc["point"] = pt;
    return doc;
}

SolubilityCertificate parse_certificate(const nlohmann::json& doc) {
    SolubilityCertificate cert;
    try {
        cert.p = doc.at("p").get<long long>();
        cert.k = doc.at("k").get<int>();
        cert.gamma = doc.at("gamma").get<int>();
        cert.jac_rank_mod_p = doc.at("jac_rank").get<int>();
        for (const auto& s : doc.at("point"))
            cert.point.emplace_back(s.get<std::string>());
    } catch (const nlohmann::json::exception& e) {
        throw input_error(std::string("certificate: ") + e.what());
    }
    return cert;
}

}  // namespace circle
