#pragma once

// Empirical root-set measures against the bifurcation measure: test-function
// pairings, logarithmic potentials and the experiment pipeline.

#include <functional>
#include <optional>
#include <ostream>
#include <string>

#include "arithdyn/bifurcation.hpp"
#include "arithdyn/preper.hpp"

namespace arithdyn {

inline constexpr double kProbeGuard = 1e-3;

/// Copy with weights scaled to total mass 1.  InputError if the mass is not positive.
GridMeasure normalized(const GridMeasure& m);

struct PairingResult {
    double gap = 0;
    double root_average = 0;
    double grid_integral = 0;
    std::size_t outside = 0;  // points outside the grid box (still averaged)
};

/// |avg_F phi - int phi dmu| for a grid measure already normalized to mass 1.
PairingResult pairing_gap(const std::vector<Complex>& points, const GridMeasure& normalized_measure,
                          const TestFunction& phi);
PairingResult pairing_gap(const RootSet& rs, const GridMeasure& normalized_measure, const TestFunction& phi);

/// (1/deg P) log|P(s)| evaluated exactly at the dyadic rounding of s.
double log_abs_poly(const PolyZ& p, Complex s);

struct ProbeGap {
    Complex probe;
    double gap = 0;
    bool flagged = false;  // probe within the guard radius of a root
};

/// |(1/D) log|P(s)| - g(s) / mass| per probe, where g/mass is the potential
/// of the normalized target measure.
std::vector<ProbeGap> potential_gap(const PolyZ& p, const std::vector<Complex>& roots,
                                    const std::vector<Complex>& probes,
                                    const std::function<double(Complex)>& g, double mass = 1.0);
/// For a root set of Preper(n, m): g is the parametric potential of the
/// source family and mass = deg P / d^n.
std::vector<ProbeGap> potential_gap(const RootSet& rs, const std::vector<Complex>& probes, double tol = 1e-12);

struct ExperimentConfig {
    MarkedFamily family = MarkedFamily::unicritical(2, {BigRat(0)});  // one mark
    int n_min = 4;
    int n_max = 12;
    int m = 0;
    std::vector<Complex> probes{Complex(1.0), Complex(2.0, 1.0)};
    GridSpec grid{};
    TestFunction phi = TestFunction::gaussian_bump(Complex(-0.1), 0.3);
    double root_tol = 1e-10;
    double grid_tol = 1e-10;
    std::uint64_t seed = 0;
};

struct ReportRow {
    int n = 0;
    std::size_t count = 0;
    int repeated = 0;
    double certified = 0;  // fraction certified by certify_small
    PairingResult pairing;
    std::vector<ProbeGap> potential;
    double runtime = 0;  // seconds; text table only
};

struct ConvergenceReport {
    std::string family;
    std::vector<Complex> probes;
    double grid_mass = 0;
    std::vector<ReportRow> rows;
    /// Set when a stage failed: "stage: message"; rows before it are kept.
    std::optional<std::string> error;
    enum class ErrorKind { None, Input, Degenerate, Numeric, Resource, Structural } error_kind = ErrorKind::None;
};

/// preper_poly -> root_set -> certify_small -> pairing and potential gaps for
/// each n in [n_min, n_max].  An empty range gives an empty report.
ConvergenceReport run_experiment(const ExperimentConfig& cfg);

void write_report_csv(std::ostream& out, const ConvergenceReport& r);
void write_report_table(std::ostream& out, const ConvergenceReport& r);

}  // namespace arithdyn
