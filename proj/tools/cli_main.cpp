// Command-line surface over the library.  Each subcommand resolves a full
// config, runs one library routine, and emits structured records whose bytes
// are a function of the config alone (timing never enters a record, so
// identical invocations produce identical output).
#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <numeric>
#include <string>
#include <vector>

#include "circle/acceptance.hpp"
#include "circle/arcs.hpp"
#include "circle/arith.hpp"
#include "circle/counting.hpp"
#include "circle/expsum.hpp"
#include "circle/forms.hpp"
#include "circle/integral.hpp"
#include "circle/local.hpp"
#include "circle/records.hpp"

namespace {

using nlohmann::json;

// One exit code per error class, so scripts can tell refusals apart.
constexpr int kExitCriteria = 1;  // verify: some acceptance criterion failed
constexpr int kExitUsage = 2;     // unknown subcommand or malformed flags
constexpr int kExitConfig = 3;    // malformed config or unreadable input
constexpr int kExitBudget = 4;    // enumeration budget refusal
constexpr int kExitInternal = 5;  // internal cross-check failure

// Every error path emits one machine-readable record on stderr.
int fail(int code, const std::string& cls, const std::string& msg) {
    json rec;
    rec["schema_version"] = circle::kSchemaVersion;
    rec["kind"] = "error";
    rec["error_class"] = cls;
    rec["exit_code"] = code;
    rec["message"] = msg;
    std::cerr << rec.dump() << "\n";
    return code;
}

// Flags shared by the subcommands.
struct Common {
    std::string system_path;
    std::string out_path;  // empty writes to stdout
    std::string format = "jsonl";
    std::string box_arg;   // override "lo:hi[,lo:hi,...]", one pair per axis
    std::uint64_t seed = 1;
    int workers = 1;
    long long budget = circle::default_budget;
};

void add_common(CLI::App* sub, Common& c, bool with_system) {
    if (with_system) {
        sub->add_option("--system", c.system_path, "system file (JSON)")
            ->required();
        sub->add_option("--box", c.box_arg,
                        "box override lo:hi[,lo:hi,...]; one pair is "
                        "replicated across axes");
    }
    sub->add_option("--out", c.out_path, "output path (default stdout)");
    sub->add_option("--format", c.format, "record format, jsonl or csv")
        ->capture_default_str();
    sub->add_option("--seed", c.seed, "seed for randomized components")
        ->capture_default_str();
    sub->add_option("--workers", c.workers,
                    "worker cap; results never depend on it")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sub->add_option("--budget", c.budget, "enumeration budget")
        ->capture_default_str();
}

circle::BoxSpec parse_box_arg(const std::string& s, int n) {
    circle::BoxSpec box;
    std::size_t pos = 0;
    while (pos <= s.size()) {
        std::size_t comma = s.find(',', pos);
        std::string part = s.substr(pos, comma == std::string::npos
                                             ? std::string::npos
                                             : comma - pos);
        double lo = 0, hi = 0;
        char tail = 0;
        if (std::sscanf(part.c_str(), "%lf:%lf%c", &lo, &hi, &tail) != 2)
            throw circle::input_error("--box: expected lo:hi, got '" + part +
                                      "'");
        box.sides.emplace_back(lo, hi);
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    if (box.dim() == 1 && n > 1) box.sides.assign(n, box.sides[0]);
    if (box.dim() != n)
        throw circle::input_error("--box: got " + std::to_string(box.dim()) +
                                  " sides for " + std::to_string(n) +
                                  " variables");
    box.validate();
    return box;
}

struct Loaded {
    circle::FormSystem F;
    circle::BoxSpec box;
    std::string system_hash;
};

Loaded load_system(const Common& c) {
    Loaded L{circle::parse_system_file(c.system_path), {}, {}};
    L.box = c.box_arg.empty() ? circle::effective_box(L.F)
                              : parse_box_arg(c.box_arg, L.F.n);
    L.system_hash =
        circle::hex64(circle::fnv1a(circle::serialize_system(L.F).dump()));
    return L;
}

json base_config(const Common& c, const std::string& subcmd) {
    json cfg;
    cfg["subcommand"] = subcmd;
    cfg["format"] = c.format;
    cfg["seed"] = c.seed;
    cfg["workers"] = c.workers;
    cfg["budget"] = c.budget;
    return cfg;
}

json base_config(const Common& c, const std::string& subcmd, const Loaded& L) {
    json cfg = base_config(c, subcmd);
    cfg["system"] = c.system_path;
    cfg["system_hash"] = L.system_hash;
    auto bj = json::array();
    for (auto& [lo, hi] : L.box.sides) bj.push_back({lo, hi});
    cfg["box"] = std::move(bj);
    return cfg;
}

// Opens the record stream once per run.
struct Emitter {
    std::ofstream file;
    std::unique_ptr<circle::RecordWriter> writer;

    explicit Emitter(const Common& c) {
        std::ostream* os = &std::cout;
        if (!c.out_path.empty()) {
            file.open(c.out_path, std::ios::binary | std::ios::trunc);
            if (!file)
                throw circle::input_error("cannot open output file: " +
                                          c.out_path);
            os = &file;
        }
        writer = std::make_unique<circle::RecordWriter>(*os, c.format);
    }
    void emit(const std::string& kind, const json& cfg, json fields) {
        writer->emit(circle::make_record(kind, cfg, std::move(fields)));
    }
};

std::string verdict_name(circle::AsymptoticVerdict v) {
    return v == circle::AsymptoticVerdict::kHeuristic ? "HEURISTIC"
                                                      : "OBSTRUCTED";
}

// ---- subcommand bodies --------------------------------------------------

void run_count(const Common& c, const std::vector<long long>& Ps,
               const std::string& mode_name, const std::string& sol_path) {
    Loaded L = load_system(c);
    circle::EnumMode mode;
    if (mode_name == "auto")
        mode = circle::EnumMode::kAuto;
    else if (mode_name == "pruned")
        mode = circle::EnumMode::kPruned;
    else if (mode_name == "full")
        mode = circle::EnumMode::kFull;
    else
        throw circle::input_error("count: --mode must be auto, pruned or full");
    if (!sol_path.empty() && Ps.size() != 1)
        throw circle::input_error(
            "count: --solutions-out needs exactly one --P");

    json cfg = base_config(c, "count", L);
    cfg["P"] = Ps;
    cfg["mode"] = mode_name;
    if (!sol_path.empty()) cfg["solutions_out"] = sol_path;
    Emitter em(c);

    std::ofstream sol;
    circle::SolutionSink sink = nullptr;
    if (!sol_path.empty()) {
        sol.open(sol_path, std::ios::binary | std::ios::trunc);
        if (!sol)
            throw circle::input_error("cannot open solutions file: " +
                                      sol_path);
        sink = [&sol](const std::vector<long long>& x) {
            for (std::size_t i = 0; i < x.size(); ++i)
                sol << (i ? "," : "") << x[i];
            sol << "\n";
        };
    }
    for (long long P : Ps) {
        auto r = circle::count_weighted(L.F, P, L.box, mode, c.budget, sink);
        em.emit("count", cfg,
                {{"P", P},
                 {"method", "direct"},
                 {"N_weighted", r.N_weighted},
                 {"N_prime", r.N_prime},
                 {"raw_solutions", r.raw_solutions}});
    }
}

void run_dft_count(const Common& c, const std::vector<long long>& Ps,
                   long long M) {
    Loaded L = load_system(c);
    json cfg = base_config(c, "dft-count", L);
    cfg["P"] = Ps;
    cfg["M"] = M;
    Emitter em(c);
    for (long long P : Ps) {
        long long mod = M > 0 ? M : circle::dft_modulus_bound(L.F, P, L.box);
        auto r = circle::count_via_dft(L.F, P, L.box, M, c.budget);
        em.emit("count", cfg,
                {{"P", P},
                 {"method", "dft"},
                 {"modulus", mod},
                 {"N_weighted", r.N_weighted},
                 {"N_prime", r.N_prime},
                 {"raw_solutions", r.raw_solutions}});
    }
}

void run_expsum(const Common& c, const std::vector<double>& alpha, int sweep,
                long long Q, long long P, int W, double b1, double b2) {
    Loaded L = load_system(c);
    if (!alpha.empty() && sweep > 0)
        throw circle::input_error("expsum: give --alpha or --sweep, not both");
    if (alpha.empty() && sweep <= 0)
        throw circle::input_error("expsum: one of --alpha or --sweep is "
                                  "required");
    auto wt = circle::sieve_von_mangoldt(1, std::max<long long>(P, 2));
    json cfg = base_config(c, "expsum", L);
    cfg["P"] = P;
    Emitter em(c);

    if (W > 0) {
        if (L.F.n != 1 || L.F.R != 1)
            throw circle::input_error(
                "expsum: --vaughan-W needs a univariate single form");
        if (alpha.size() != 1)
            throw circle::input_error("expsum: --vaughan-W needs --alpha");
        cfg["alpha"] = alpha;
        cfg["W"] = W;
        cfg["b1"] = b1;
        cfg["b2"] = b2;
        std::vector<double> f(L.F.d + 1, 0.0);
        f[L.F.d] = alpha[0] * static_cast<double>(L.F.forms[0][0].c);
        auto vs = circle::prime_expsum_vaughan(f, P, b1, b2, W, wt);
        circle::cplx sum = vs.psi1 + vs.psi1p + vs.psi2;
        em.emit("vaughan", cfg,
                {{"alpha", alpha[0]},
                 {"P", P},
                 {"W", W},
                 {"b1", b1},
                 {"b2", b2},
                 {"total_re", vs.total.real()},
                 {"total_im", vs.total.imag()},
                 {"psi1_re", vs.psi1.real()},
                 {"psi1_im", vs.psi1.imag()},
                 {"psi1p_re", vs.psi1p.real()},
                 {"psi1p_im", vs.psi1p.imag()},
                 {"psi2_re", vs.psi2.real()},
                 {"psi2_im", vs.psi2.imag()},
                 {"recomposition_gap", std::abs(vs.total - sum)}});
        return;
    }
    if (!alpha.empty()) {
        if (static_cast<int>(alpha.size()) != L.F.R)
            throw circle::input_error(
                "expsum: --alpha needs one entry per form (R = " +
                std::to_string(L.F.R) + ")");
        cfg["alpha"] = alpha;
        circle::cplx s = circle::exp_sum(L.F, alpha, P, L.box, wt,
                                         circle::ExpSumRoute::kAuto, c.budget);
        em.emit("expsum", cfg,
                {{"alpha", alpha},
                 {"P", P},
                 {"re", s.real()},
                 {"im", s.imag()},
                 {"abs", std::abs(s)}});
        return;
    }
    if (L.F.R != 1)
        throw circle::input_error("expsum: --sweep handles one-form systems");
    if (Q < 1) throw circle::input_error("expsum: --sweep requires --Q >= 1");
    cfg["sweep"] = sweep;
    cfg["Q"] = Q;
    for (int j = 0; j < sweep; ++j) {
        double a = (j + 0.5) / sweep;
        circle::cplx s = circle::exp_sum(L.F, {a}, P, L.box, wt,
                                         circle::ExpSumRoute::kAuto, c.budget);
        auto v = circle::arc_classify({a}, Q, P, L.F.d);
        em.emit("expsum_sweep", cfg,
                {{"alpha", a},
                 {"Q", Q},
                 {"P", P},
                 {"arc", v.major ? "major" : "minor"},
                 {"witness_q", v.q},
                 {"re", s.real()},
                 {"im", s.imag()},
                 {"abs", std::abs(s)}});
    }
}

void run_arcs_classify(const Common& c, const std::vector<double>& alpha,
                       long long Q, long long P, int d) {
    json cfg = base_config(c, "arcs classify");
    cfg["alpha"] = alpha;
    cfg["Q"] = Q;
    cfg["P"] = P;
    cfg["d"] = d;
    Emitter em(c);
    auto v = circle::arc_classify(alpha, Q, P, d);
    em.emit("arc_classify", cfg,
            {{"alpha", alpha},
             {"Q", Q},
             {"P", P},
             {"d", d},
             {"arc", v.major ? "major" : "minor"},
             {"q", v.q},
             {"a", v.a}});
}

void run_arcs_measure(const Common& c, long long Q, long long P, int d,
                      int R) {
    json cfg = base_config(c, "arcs measure");
    cfg["Q"] = Q;
    cfg["P"] = P;
    cfg["d"] = d;
    cfg["R"] = R;
    Emitter em(c);
    double m = circle::arcs_measure(Q, P, d, R);
    em.emit("arc_measure", cfg,
            {{"Q", Q}, {"P", P}, {"d", d}, {"R", R}, {"measure", m}});
}

void run_gauss(const Common& c, long long q, const std::vector<long long>& a,
               bool a_star) {
    Loaded L = load_system(c);
    json cfg = base_config(c, "gauss", L);
    cfg["q"] = q;
    Emitter em(c);

    if (a_star) {
        cfg["a_star"] = true;
        circle::cplx v = circle::A_star(q, L.F, c.budget);
        em.emit("a_star", cfg,
                {{"q", q},
                 {"re", v.real()},
                 {"im", v.imag()},
                 {"abs", std::abs(v)}});
        return;
    }
    auto emit_one = [&](const std::vector<long long>& av) {
        circle::cplx s = circle::gauss_sum_star(q, av, L.F, c.budget);
        em.emit("gauss_sum", cfg,
                {{"q", q},
                 {"a", av},
                 {"re", s.real()},
                 {"im", s.imag()},
                 {"abs", std::abs(s)}});
    };
    if (!a.empty()) {
        if (static_cast<int>(a.size()) != L.F.R)
            throw circle::input_error(
                "gauss: --a needs one entry per form (R = " +
                std::to_string(L.F.R) + ")");
        cfg["a"] = a;
        emit_one(a);
        return;
    }
    double need = std::pow(static_cast<double>(q), L.F.R);
    circle::check_budget(circle::clamp_need(need), c.budget, "gauss");
    std::vector<long long> av(L.F.R, 1);
    while (true) {
        long long g = q;
        for (long long ai : av) g = std::gcd(g, ai);
        if (g == 1) emit_one(av);
        int j = L.F.R - 1;
        while (j >= 0 && ++av[j] > q) {
            av[j] = 1;
            --j;
        }
        if (j < 0) break;
    }
}

void run_series(const Common& c, long long q_max) {
    Loaded L = load_system(c);
    json cfg = base_config(c, "series", L);
    cfg["q_max"] = q_max;
    Emitter em(c);
    auto st = circle::singular_series_truncated(L.F, q_max, c.budget);
    double partial = 0.0;
    for (auto& [q, term] : st.terms) {
        partial += term;
        em.emit("series_term", cfg,
                {{"q_max", q_max},
                 {"q", q},
                 {"term", term},
                 {"partial", partial},
                 {"value", st.value}});
    }
}

void run_local_ortho(const Common& c, const std::vector<long long>& ps,
                     int k) {
    Loaded L = load_system(c);
    json cfg = base_config(c, "local ortho", L);
    cfg["p"] = ps;
    cfg["k"] = k;
    Emitter em(c);
    for (long long p : ps) {
        auto rep = circle::orthogonality_check(p, k, L.F, c.budget);
        em.emit("orthogonality", cfg,
                {{"p", rep.p},
                 {"k", rep.k},
                 {"partial_sum", rep.partial_sum},
                 {"unit_count", rep.unit_count.str()},
                 {"normalized", rep.normalized}});
    }
}

void run_local_cert(const Common& c, const std::vector<long long>& ps,
                    int target_k, int max_base_level) {
    Loaded L = load_system(c);
    json cfg = base_config(c, "local cert", L);
    cfg["p"] = ps;
    cfg["target_k"] = target_k;
    cfg["max_base_level"] = max_base_level;
    Emitter em(c);
    for (long long p : ps) {
        auto res =
            circle::padic_certificate(p, L.F, target_k, max_base_level,
                                      c.budget);
        std::string status =
            res.status == circle::CertStatus::kFound
                ? "found"
                : res.status == circle::CertStatus::kNotFound ? "not_found"
                                                              : "inconclusive";
        bool verified = res.status == circle::CertStatus::kFound &&
                        circle::verify_certificate(res.cert, L.F);
        json cert;
        if (res.status == circle::CertStatus::kFound) {
            cert = circle::serialize_certificate(res.cert);
        } else {
            // Placeholder with the record's shape, so CSV columns line up.
            cert = {{"p", p},
                    {"k", 0},
                    {"gamma", 0},
                    {"jac_rank", 0},
                    {"point", std::vector<std::string>(L.F.n, "0")}};
        }
        em.emit("certificate", cfg,
                {{"p", p},
                 {"status", status},
                 {"searched_level", res.searched_level},
                 {"verified", verified},
                 {"certificate", cert}});
    }
}

circle::QuadratureSpec quad_from(const Common& c, long long qmc_samples,
                                 long long max_axis_nodes, int refine_levels,
                                 double tolerance) {
    circle::QuadratureSpec quad;
    if (qmc_samples > 0) quad.qmc_samples = qmc_samples;
    if (max_axis_nodes > 0) quad.max_axis_nodes = max_axis_nodes;
    if (refine_levels > 0) quad.refine_levels = refine_levels;
    if (tolerance > 0) quad.tolerance = tolerance;
    quad.qmc_seed = c.seed;
    quad.budget = c.budget;
    quad.validate();
    return quad;
}

void run_integral_upsilon(const Common& c, const std::vector<double>& beta,
                          long long qmc_samples, long long max_axis_nodes) {
    Loaded L = load_system(c);
    if (static_cast<int>(beta.size()) != L.F.R)
        throw circle::input_error(
            "integral upsilon: --beta needs one entry per form (R = " +
            std::to_string(L.F.R) + ")");
    auto quad = quad_from(c, qmc_samples, max_axis_nodes, 0, 0);
    json cfg = base_config(c, "integral upsilon", L);
    cfg["beta"] = beta;
    cfg["qmc_samples"] = quad.qmc_samples;
    cfg["max_axis_nodes"] = quad.max_axis_nodes;
    Emitter em(c);
    circle::cplx v = circle::upsilon_beta(L.F, L.box, beta, quad);
    em.emit("upsilon", cfg,
            {{"beta", beta},
             {"re", v.real()},
             {"im", v.imag()},
             {"abs", std::abs(v)}});
}

void run_integral_singular(const Common& c, double Q_cap,
                           long long qmc_samples, long long max_axis_nodes,
                           int refine_levels, double tolerance) {
    Loaded L = load_system(c);
    auto quad =
        quad_from(c, qmc_samples, max_axis_nodes, refine_levels, tolerance);
    json cfg = base_config(c, "integral singular", L);
    cfg["Q_cap"] = Q_cap;
    cfg["qmc_samples"] = quad.qmc_samples;
    cfg["max_axis_nodes"] = quad.max_axis_nodes;
    cfg["refine_levels"] = quad.refine_levels;
    cfg["tolerance"] = quad.tolerance;
    Emitter em(c);
    auto res = circle::singular_integral(L.F, L.box, Q_cap, quad);
    em.emit("singular_integral", cfg,
            {{"Q_cap", Q_cap},
             {"value", res.value},
             {"tail_constant", res.tail_constant},
             {"tail_fit", res.tail_fit},
             {"converged", res.converged},
             {"steps", res.trace.size()}});
}

void run_integral_volume(const Common& c, double epsilon, long long samples) {
    Loaded L = load_system(c);
    json cfg = base_config(c, "integral volume", L);
    cfg["epsilon"] = epsilon;
    cfg["samples"] = samples;
    Emitter em(c);
    auto v = circle::volume_density(L.F, L.box, epsilon, samples, c.seed);
    em.emit("volume", cfg,
            {{"epsilon", v.epsilon},
             {"samples", v.samples},
             {"estimate", v.estimate},
             {"std_err", v.std_err},
             {"hits", v.hits}});
}

void run_real(const Common& c, double lo, double hi, int attempts) {
    Loaded L = load_system(c);
    json cfg = base_config(c, "real", L);
    cfg["lo"] = lo;
    cfg["hi"] = hi;
    cfg["attempts"] = attempts;
    Emitter em(c);
    auto sol = circle::real_cube_solution(L.F, lo, hi, attempts, c.seed);
    std::vector<double> point = sol.point;
    point.resize(L.F.n, 0.0);
    em.emit("real_solution", cfg,
            {{"found", sol.found},
             {"point", point},
             {"residual", sol.residual},
             {"min_singular", sol.min_singular},
             {"attempts_used", sol.attempts_used}});
}

void run_thresholds(const Common& c, int d, int R, long long n) {
    json cfg = base_config(c, "thresholds");
    cfg["d"] = d;
    cfg["R"] = R;
    cfg["n"] = n;
    Emitter em(c);
    auto rep = circle::birch_thresholds(d, R, n);
    em.emit("thresholds", cfg,
            {{"d", d},
             {"R", R},
             {"n", n},
             {"kappa1", rep.kappa1},
             {"kappa2", rep.kappa2},
             {"kappa3", rep.kappa3},
             {"bound", rep.bound},
             {"satisfied", rep.satisfied}});
}

void run_asymptotic(const Common& c, const std::vector<long long>& Ps,
                    long long q_max, double Q_cap, double vol_epsilon,
                    long long vol_samples) {
    Loaded L = load_system(c);
    circle::AsymptoticConfig acfg;
    acfg.P = Ps;
    acfg.q_max = q_max;
    acfg.Q_cap = Q_cap;
    acfg.vol_epsilon = vol_epsilon;
    acfg.vol_samples = vol_samples;
    acfg.seed = c.seed;
    acfg.budget = c.budget;
    json cfg = base_config(c, "asymptotic", L);
    cfg["P"] = Ps;
    cfg["q_max"] = q_max;
    cfg["Q_cap"] = Q_cap;
    cfg["vol_epsilon"] = vol_epsilon;
    cfg["vol_samples"] = vol_samples;
    Emitter em(c);
    auto rep = circle::asymptotic_report(L.F, L.box, acfg);
    bool obstructed = rep.verdict == circle::AsymptoticVerdict::kObstructed;
    for (std::size_t i = 0; i < rep.P.size(); ++i) {
        em.emit("asymptotic", cfg,
                {{"P", rep.P[i]},
                 {"count", rep.counts[i]},
                 {"main_term", rep.main_terms[i]},
                 {"ratio", obstructed ? 0.0 : rep.ratios[i]},
                 {"in_band", obstructed ? false : bool(rep.in_band[i])},
                 {"series_trunc", rep.series_trunc},
                 {"integral_est", rep.integral_est},
                 {"integral_method", rep.integral_method},
                 {"verdict", verdict_name(rep.verdict)},
                 {"obstruction_q", rep.obstruction_q},
                 {"band_lo", rep.band_lo},
                 {"band_hi", rep.band_hi}});
    }
}

void run_verify(const Common& c, int& rc) {
    json cfg = base_config(c, "verify");
    Emitter em(c);
    auto results = circle::run_acceptance(std::cerr);
    int failed = 0;
    for (const auto& r : results) {
        em.emit("acceptance_criterion", cfg,
                {{"id", r.id},
                 {"name", r.name},
                 {"pass", r.pass},
                 {"detail", r.detail}});
        if (!r.pass) ++failed;
    }
    rc = failed > 0 ? kExitCriteria : 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"circle method toolkit"};
    app.require_subcommand(1);
    int rc = 0;

    // count
    Common c_count;
    std::vector<long long> count_P;
    std::string count_mode = "auto", count_sol;
    auto* sc_count = app.add_subcommand("count", "direct weighted counts");
    add_common(sc_count, c_count, true);
    sc_count->add_option("--P", count_P, "box scales")->required();
    sc_count->add_option("--mode", count_mode, "auto, pruned or full")
        ->capture_default_str();
    sc_count->add_option("--solutions-out", count_sol,
                         "CSV stream of raw solutions (single --P)");
    sc_count->callback(
        [&] { run_count(c_count, count_P, count_mode, count_sol); });

    // dft-count
    Common c_dft;
    std::vector<long long> dft_P;
    long long dft_M = 0;
    auto* sc_dft =
        app.add_subcommand("dft-count", "counts via the finite Fourier average");
    add_common(sc_dft, c_dft, true);
    sc_dft->add_option("--P", dft_P, "box scales")->required();
    sc_dft->add_option("--M", dft_M, "grid modulus, 0 selects the exact bound")
        ->capture_default_str();
    sc_dft->callback([&] { run_dft_count(c_dft, dft_P, dft_M); });

    // expsum
    Common c_exp;
    std::vector<double> exp_alpha;
    int exp_sweep = 0, exp_W = 0;
    long long exp_Q = 0, exp_P = 0;
    double exp_b1 = 0.5, exp_b2 = 1.0;
    auto* sc_exp =
        app.add_subcommand("expsum", "weighted exponential sum S_F(alpha)");
    add_common(sc_exp, c_exp, true);
    sc_exp->add_option("--alpha", exp_alpha, "frequency, one entry per form");
    sc_exp->add_option("--sweep", exp_sweep,
                       "midpoint sweep of this many alpha in [0,1)");
    sc_exp->add_option("--Q", exp_Q, "arc level for sweep classification");
    sc_exp->add_option("--P", exp_P, "box scale")->required();
    sc_exp->add_option("--vaughan-W", exp_W,
                       "decompose the prime sum at this Vaughan level "
                       "(univariate forms)");
    sc_exp->add_option("--b1", exp_b1, "Vaughan range lower fraction")
        ->capture_default_str();
    sc_exp->add_option("--b2", exp_b2, "Vaughan range upper fraction")
        ->capture_default_str();
    sc_exp->callback([&] {
        run_expsum(c_exp, exp_alpha, exp_sweep, exp_Q, exp_P, exp_W, exp_b1,
                   exp_b2);
    });

    // arcs
    Common c_arc_c, c_arc_m;
    std::vector<double> arc_alpha;
    long long arc_Q = 0, arc_P = 0, arcm_Q = 0, arcm_P = 0;
    int arc_d = 2, arcm_d = 2, arcm_R = 1;
    auto* sc_arcs = app.add_subcommand("arcs", "major/minor arc geometry");
    sc_arcs->require_subcommand(1);
    auto* sc_arc_c = sc_arcs->add_subcommand("classify",
                                             "locate alpha against level Q");
    add_common(sc_arc_c, c_arc_c, false);
    sc_arc_c->add_option("--alpha", arc_alpha, "frequency vector")->required();
    sc_arc_c->add_option("--Q", arc_Q, "arc level")->required();
    sc_arc_c->add_option("--P", arc_P, "box scale")->required();
    sc_arc_c->add_option("--d", arc_d, "degree")->capture_default_str();
    sc_arc_c->callback(
        [&] { run_arcs_classify(c_arc_c, arc_alpha, arc_Q, arc_P, arc_d); });
    auto* sc_arc_m =
        sc_arcs->add_subcommand("measure", "exact measure of the major arcs");
    add_common(sc_arc_m, c_arc_m, false);
    sc_arc_m->add_option("--Q", arcm_Q, "arc level")->required();
    sc_arc_m->add_option("--P", arcm_P, "box scale")->required();
    sc_arc_m->add_option("--d", arcm_d, "degree")->capture_default_str();
    sc_arc_m->add_option("--R", arcm_R, "number of forms")
        ->capture_default_str();
    sc_arc_m->callback(
        [&] { run_arcs_measure(c_arc_m, arcm_Q, arcm_P, arcm_d, arcm_R); });

    // gauss
    Common c_gauss;
    long long gauss_q = 0;
    std::vector<long long> gauss_a;
    bool gauss_astar = false;
    auto* sc_gauss =
        app.add_subcommand("gauss", "unit Gauss sums S*(q,a) and A*(q)");
    add_common(sc_gauss, c_gauss, true);
    sc_gauss->add_option("--q", gauss_q, "modulus")->required();
    sc_gauss->add_option("--a", gauss_a,
                         "single numerator vector; default sweeps all "
                         "primitive a");
    sc_gauss->add_flag("--a-star", gauss_astar, "emit A*(q) instead");
    sc_gauss->callback(
        [&] { run_gauss(c_gauss, gauss_q, gauss_a, gauss_astar); });

    // series
    Common c_series;
    long long series_qmax = 50;
    auto* sc_series =
        app.add_subcommand("series", "truncated singular series");
    add_common(sc_series, c_series, true);
    sc_series->add_option("--q-max", series_qmax, "truncation point")
        ->capture_default_str();
    sc_series->callback([&] { run_series(c_series, series_qmax); });

    // local
    Common c_ortho, c_cert;
    std::vector<long long> ortho_p, cert_p;
    int ortho_k = 1, cert_k = 4, cert_base = 6;
    auto* sc_local = app.add_subcommand("local", "p-adic local analysis");
    sc_local->require_subcommand(1);
    auto* sc_ortho = sc_local->add_subcommand(
        "ortho", "orthogonality identity at p^k, both routes");
    add_common(sc_ortho, c_ortho, true);
    sc_ortho->add_option("--p", ortho_p, "primes")->required();
    sc_ortho->add_option("--k", ortho_k, "level")->capture_default_str();
    sc_ortho->callback([&] { run_local_ortho(c_ortho, ortho_p, ortho_k); });
    auto* sc_cert = sc_local->add_subcommand(
        "cert", "Hensel-lifted unit solubility certificates");
    add_common(sc_cert, c_cert, true);
    sc_cert->add_option("--p", cert_p, "primes")->required();
    sc_cert->add_option("--target-k", cert_k, "certified level")
        ->capture_default_str();
    sc_cert->add_option("--max-base-level", cert_base, "base search depth")
        ->capture_default_str();
    sc_cert->callback(
        [&] { run_local_cert(c_cert, cert_p, cert_k, cert_base); });

    // integral
    Common c_ups, c_sing, c_vol;
    std::vector<double> ups_beta;
    long long ups_qmc = 0, ups_axis = 0, sing_qmc = 0, sing_axis = 0;
    double sing_Qcap = 8.0, sing_tol = 0.0, vol_eps = 0.01;
    int sing_levels = 0;
    long long vol_samples = 400000;
    auto* sc_int = app.add_subcommand("integral", "archimedean densities");
    sc_int->require_subcommand(1);
    auto* sc_ups =
        sc_int->add_subcommand("upsilon", "oscillatory integral at beta");
    add_common(sc_ups, c_ups, true);
    sc_ups->add_option("--beta", ups_beta, "one entry per form")->required();
    sc_ups->add_option("--qmc-samples", ups_qmc, "Halton samples (n > 6)");
    sc_ups->add_option("--max-axis-nodes", ups_axis, "axis node cap");
    sc_ups->callback(
        [&] { run_integral_upsilon(c_ups, ups_beta, ups_qmc, ups_axis); });
    auto* sc_sing = sc_int->add_subcommand(
        "singular", "truncated singular integral on a refinement ladder");
    add_common(sc_sing, c_sing, true);
    sc_sing->add_option("--Q-cap", sing_Qcap, "beta truncation radius")
        ->capture_default_str();
    sc_sing->add_option("--qmc-samples", sing_qmc, "Halton samples (n > 6)");
    sc_sing->add_option("--max-axis-nodes", sing_axis, "axis node cap");
    sc_sing->add_option("--refine-levels", sing_levels, "ladder depth");
    sc_sing->add_option("--tolerance", sing_tol, "convergence gate");
    sc_sing->callback([&] {
        run_integral_singular(c_sing, sing_Qcap, sing_qmc, sing_axis,
                              sing_levels, sing_tol);
    });
    auto* sc_vol = sc_int->add_subcommand(
        "volume", "quasi-random volume oracle for the density");
    add_common(sc_vol, c_vol, true);
    sc_vol->add_option("--epsilon", vol_eps, "slab width")
        ->capture_default_str();
    sc_vol->add_option("--samples", vol_samples, "Halton samples")
        ->capture_default_str();
    sc_vol->callback(
        [&] { run_integral_volume(c_vol, vol_eps, vol_samples); });

    // real
    Common c_real;
    double real_lo = 0.0, real_hi = 1.0;
    int real_attempts = 15;
    auto* sc_real =
        app.add_subcommand("real", "non-singular real zero in an open cube");
    add_common(sc_real, c_real, true);
    sc_real->add_option("--lo", real_lo, "cube lower edge")
        ->capture_default_str();
    sc_real->add_option("--hi", real_hi, "cube upper edge")
        ->capture_default_str();
    sc_real->add_option("--attempts", real_attempts, "random starts")
        ->capture_default_str();
    sc_real->callback(
        [&] { run_real(c_real, real_lo, real_hi, real_attempts); });

    // thresholds
    Common c_thr;
    int thr_d = 2, thr_R = 1;
    long long thr_n = 0;
    auto* sc_thr =
        app.add_subcommand("thresholds", "variable-count thresholds");
    add_common(sc_thr, c_thr, false);
    sc_thr->add_option("--d", thr_d, "degree")->capture_default_str();
    sc_thr->add_option("--R", thr_R, "number of forms")->capture_default_str();
    sc_thr->add_option("--n", thr_n, "variables to test against the bound")
        ->capture_default_str();
    sc_thr->callback([&] { run_thresholds(c_thr, thr_d, thr_R, thr_n); });

    // asymptotic
    Common c_asym;
    std::vector<long long> asym_P;
    long long asym_qmax = 50, asym_vol_samples = 400000;
    double asym_Qcap = 8.0, asym_vol_eps = 0.01;
    auto* sc_asym = app.add_subcommand(
        "asymptotic", "main-term ratio report across box scales");
    add_common(sc_asym, c_asym, true);
    sc_asym->add_option("--P", asym_P, "box scales")->required();
    sc_asym->add_option("--q-max", asym_qmax, "series truncation")
        ->capture_default_str();
    sc_asym->add_option("--Q-cap", asym_Qcap, "integral truncation radius")
        ->capture_default_str();
    sc_asym->add_option("--vol-epsilon", asym_vol_eps,
                        "volume-oracle slab width")
        ->capture_default_str();
    sc_asym->add_option("--vol-samples", asym_vol_samples,
                        "volume-oracle samples")
        ->capture_default_str();
    sc_asym->callback([&] {
        run_asymptotic(c_asym, asym_P, asym_qmax, asym_Qcap, asym_vol_eps,
                       asym_vol_samples);
    });

    // verify
    Common c_ver;
    auto* sc_ver = app.add_subcommand(
        "verify", "run the acceptance suite; progress on stderr");
    add_common(sc_ver, c_ver, false);
    sc_ver->callback([&] { run_verify(c_ver, rc); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        return fail(kExitUsage, "usage", e.what());
    } catch (const circle::budget_error& e) {
        return fail(kExitBudget, "budget", e.what());
    } catch (const circle::input_error& e) {
        return fail(kExitConfig, "config", e.what());
    } catch (const circle::consistency_error& e) {
        return fail(kExitInternal, "consistency", e.what());
    } catch (const std::exception& e) {
        return fail(kExitInternal, "internal", e.what());
    }
    return rc;
}
