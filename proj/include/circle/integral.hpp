// Archimedean densities: the oscillatory integral upsilon(beta), its
// truncated beta-integral with a refinement trace, a quasi-random volume
// oracle for the same density, and a real solution finder on open cubes.
#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "circle/box.hpp"
#include "circle/common.hpp"
#include "circle/forms.hpp"

namespace circle {

// Controls for the oscillatory quadrature.  Axis rules are composite
// Gauss-Legendre: each axis gets enough panels that no panel sees more than
// panel_cycles phase cycles, capped at max_axis_nodes total nodes.  A rule
// with m nodes resolves a panel only while m comfortably exceeds pi times
// the cycle count, hence the wide default margin.  Systems with more than
// 6 variables (and no diagonal factorization) fall back to qmc_samples
// Halton points instead of a tensor grid.
struct QuadratureSpec {
    double panel_cycles = 3.0;
    int panel_nodes = 14;
    long long max_axis_nodes = 4096;
    long long qmc_samples = 100000;
    std::uint64_t qmc_seed = 1;
    double beta_panel_width = 1.0;  // panel width for the beta integration
    int beta_panel_nodes = 10;
    int refine_levels = 4;   // Q ladder Q_cap/2^(levels-1), ..., Q_cap
    double tolerance = 0.02; // convergence gate on the last refinement step
    long long budget = default_budget;  // total integrand evaluations

    void validate() const {
        if (!(panel_cycles > 0) || panel_nodes < 2 || max_axis_nodes < panel_nodes ||
            qmc_samples < 1 || !(beta_panel_width > 0) || beta_panel_nodes < 2 ||
            refine_levels < 2 || !(tolerance > 0))
            throw input_error("QuadratureSpec: field out of range");
    }
};

// upsilon(beta) = integral over the box of e(beta . F(x)) dx.  beta has one
// entry per form.  Diagonal systems factor into per-axis 1-D integrals;
// otherwise a tensor rule is used up to 6 variables and Halton sampling
// beyond.  beta = 0 returns the box volume exactly; upsilon(-beta) is the
// exact complex conjugate on every path.  Accuracy degrades (never throws)
// when the node budget cannot resolve the oscillation.
cplx upsilon_beta(const FormSystem& F, const BoxSpec& box,
                  const std::vector<double>& beta,
                  const QuadratureSpec& quad = {});

struct RefinementStep {
    double Q = 0.0;             // truncation radius of this level
    double value = 0.0;         // integral of upsilon over |beta|_max <= Q
    long long beta_points = 0;  // beta quadrature nodes used
    long long x_evals = 0;      // inner integrand evaluations
};

struct SingularIntegralResult {
    double value = 0.0;          // estimate at the largest truncation radius
    double tail_constant = 0.0;  // c fitted to value(Q) ~ limit - c*Q^(-1/2)
    double tail_fit = 0.0;       // c * Q_cap^(-1/2), the empirical tail bound
    bool converged = false;      // last refinement step within tolerance
    std::vector<RefinementStep> trace;
};

// Truncated singular integral over the max-norm ball |beta|_max <= Q_cap,
// computed on a doubling ladder of radii so the tail decay can be
// inspected.  Conjugate symmetry of upsilon makes the limit real; the
// integrand is taken as Re(upsilon) over the half-space beta_1 >= 0, times
// two, so the reported value is exactly real.  Throws budget_error when the
// planned evaluation count exceeds quad.budget; a ladder that fails the
// tolerance gate is flagged converged = false but still reported.
SingularIntegralResult singular_integral(const FormSystem& F,
                                         const BoxSpec& box, double Q_cap,
                                         const QuadratureSpec& quad = {});

struct VolumeEstimate {
    double estimate = 0.0;  // eps^(-R) * vol{x in box : all |F_i(x)| <= eps/2}
    double std_err = 0.0;   // binomial standard error on the same scale
    long long hits = 0;
    long long samples = 0;
    double epsilon = 0.0;
    std::uint64_t seed = 0;
};

// Quasi-random volume oracle for the archimedean density: the scaled
// measure of the eps-slab around F = 0.  Deterministic for a fixed seed.
// Zero hits report estimate 0 with a one-expected-hit error floor.
VolumeEstimate volume_density(const FormSystem& F, const BoxSpec& box,
                              double epsilon, long long samples,
                              std::uint64_t seed);

struct CubeSolution {
    bool found = false;
    std::vector<double> point;   // in the open cube when found
    double residual = 0.0;       // max_i |F_i(point)|
    double min_singular = 0.0;   // smallest singular value of the Jacobian
    int attempts_used = 0;
};

// Searches the open cube (lo, hi)^n for a non-singular real zero of the
// system by damped Gauss-Newton from seeded random starts.  Success
// requires residual <= 1e-10 and Jacobian rank R certified by a smallest
// singular value above 1e-8.  Exhausted attempts return found = false;
// absence is never claimed.
CubeSolution real_cube_solution(const FormSystem& F, double lo, double hi,
                                int attempts, std::uint64_t seed);

}  // namespace circle
