#pragma once

// Preper(n, m): parameters where f_t^n(a(t)) = f_t^m(a(t)), built exactly,
// and their complex root sets.

#include <memory>
#include <ostream>

#include "arithdyn/family.hpp"

namespace arithdyn {

inline constexpr int kPreperDegreeBudget = 1 << 15;

struct PreperPoly {
    int n = 0;
    int m = 0;
    /// Primitive integer numerator of a_n(t) - a_m(t), positive leading coefficient.
    PolyZ poly;
    /// Single-mark family the polynomial was built from.
    MarkedFamily family;

    int degree() const { return poly.degree(); }
};

/// Needs q = 1 and n > m >= 0 (InputError otherwise).  ResourceError when an
/// iterate would exceed `degree_budget`; StructuralError when the difference
/// vanishes identically.
PreperPoly preper_poly(const MarkedFamily& fam, int n, int m, int degree_budget = kPreperDegreeBudget);

struct RootSet {
    std::vector<RootEstimate> points;  // roots of the squarefree part
    std::shared_ptr<const PreperPoly> source;
    double residual_tol = 0;
    int repeated = 0;  // deg poly - deg squarefree part

    std::size_t size() const { return points.size(); }
};

/// All roots of the squarefree part of p.  Polynomial families with a
/// constant mark denominator are evaluated along the orbit; others through
/// the coefficients.  NumericError on non-convergence or when the set is
/// not closed under conjugation.
RootSet root_set(const PreperPoly& p, double tol = 1e-10, std::uint64_t seed = 0);
/// Same with an externally supplied point list (no root finding).
RootSet make_root_set(std::vector<RootEstimate> points, std::shared_ptr<const PreperPoly> source, double tol);

void write_root_set_csv(std::ostream& out, const RootSet& rs);

enum class SmallVerdict { ExactPreperiodic, NumericBounded, Failed, Unchecked };

struct SmallEntry {
    Complex t;
    SmallVerdict verdict = SmallVerdict::Unchecked;
    double escape = 0;  // numeric potential, or 0 for exact checks
    std::string rational;  // set when t was recognized as a rational root
};

struct SmallnessReport {
    std::vector<SmallEntry> entries;
    std::size_t exact = 0;
    std::size_t numeric = 0;
    std::size_t failed = 0;
    std::size_t unchecked = 0;
    double fraction_certified() const;
};

/// Rational roots (exact zeros of the source polynomial with small
/// denominator) get an exact preperiodicity check of the mark.  Other roots
/// of polynomial families pass when the parametric potential is <= tol; for
/// other families the chordal distance between f^n(a) and f^m(a) must be <= tol.
SmallnessReport certify_small(const MarkedFamily& fam, const RootSet& rs, double tol = 1e-6);

}  // namespace arithdyn
