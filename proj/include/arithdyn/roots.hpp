#pragma once

// Simultaneous (Aberth-Ehrlich) root finding.  The engine only needs the
// Newton ratio p/p' at a point, so callers can supply evaluators that are
// better conditioned than Horner on rounded coefficients.

#include <cstdint>
#include <functional>
#include <vector>

#include "arithdyn/rat_core.hpp"

namespace arithdyn {

struct RootEstimate {
    Complex z;
    double residual = 0.0;  // evaluator-specific certificate, see NewtonStep
    int multiplicity = 1;   // size of the cluster this estimate belongs to
};

struct NewtonStep {
    Complex ratio;    // p(z) / p'(z)
    double residual;  // certificate used for the final acceptance test
    double noise = 0;  // rounding error of p(z) divided by |p'(z)|
};

using NewtonEvaluator = std::function<NewtonStep(Complex)>;

struct AberthOptions {
    double tol = 1e-10;             // acceptance threshold on residuals
    double step_tol = 1e-15;        // relative correction at which a root freezes
    double freeze_residual = 1e-15; // residual at which a root freezes
    int max_iter = 2000;
    std::uint64_t seed = 0;
    double cluster_radius = 1e-8;   // relative
};

/// Initial approximations from the upper convex hull of (k, log|a_k|):
/// each hull edge contributes a circle with Bini's radius.  `log_abs_coeffs`
/// may contain -inf for zero coefficients but not at either end.
std::vector<Complex> newton_polygon_guesses(const std::vector<double>& log_abs_coeffs, std::uint64_t seed);

/// Runs Aberth-Ehrlich from `init`.  Throws NumericError if some root does not
/// reach `opts.tol` within `opts.max_iter` sweeps.  Estimates within the
/// cluster radius (or with overlapping Newton inclusion discs) are merged to
/// their centroid and tagged with the cluster size.
std::vector<RootEstimate> aberth(const NewtonEvaluator& eval, std::vector<Complex> init, const AberthOptions& opts);

/// All deg(p) roots of p with multiplicity.  Residual = |p(r)| / sum |a_k| max(1,|r|)^k.
std::vector<RootEstimate> complex_roots(const PolyC& p, double tol, std::uint64_t seed = 0);

/// Groups estimates into clusters (union of near points); used by aberth().
void cluster_roots(std::vector<RootEstimate>& roots, const std::vector<double>& inclusion_radius, double rel_radius);

}  // namespace arithdyn
