#pragma once

// Parametric potential on a square grid, its discrete Laplacian as a measure,
// and pairings with test functions.

#include <cstdint>
#include <functional>
#include <ostream>

#include "arithdyn/family.hpp"

namespace arithdyn {

struct GridSpec {
    double x_min = -2.5, x_max = 1.5, y_min = -2.0, y_max = 2.0;
    int nx = 1024, ny = 1024;

    /// Throws InputError unless the box is nonempty, nx, ny >= 16 and the
    /// spacing is the same on both axes.
    void validate() const;
    double h() const { return (x_max - x_min) / (nx - 1); }
    Complex node(int i, int j) const { return {x_min + i * h(), y_min + j * h()}; }
    std::size_t index(int i, int j) const { return static_cast<std::size_t>(j) * nx + i; }
    std::size_t size() const { return static_cast<std::size_t>(nx) * ny; }
};

struct PotentialGrid {
    GridSpec spec;
    std::vector<double> g;
    std::vector<std::uint8_t> mask;  // 1 = flagged sample
};

/// g(t) at every node; `marks` selects mark indices (empty = all marks).
PotentialGrid potential_grid(const MarkedFamily& fam, const GridSpec& spec, double tol = 1e-10,
                             const std::vector<std::size_t>& marks = {});
/// Same layout from a closed-form function, for tests and calibration.
PotentialGrid sample_grid(const GridSpec& spec, const std::function<double(Complex)>& g);

inline constexpr double kClipEpsilon = 1e-9;

struct GridMeasure {
    GridSpec spec;
    std::vector<double> weights;
    std::vector<std::uint8_t> mask;      // flagged samples
    std::vector<std::uint8_t> excluded;  // boundary ring, flagged, or next to a flagged node
    double total_mass = 0;
    double clipped_total = 0;  // sum of |w| over clipped negative weights
    std::size_t clipped_count = 0;
    std::size_t significant_negative = 0;  // clipped weights below -kClipEpsilon
};

/// Weight at interior node = (1/2pi) (sum of the four neighbours - 4 g).
/// With clip = false negative weights are kept (the map is then linear in g).
GridMeasure laplacian_measure(const PotentialGrid& g, bool clip = true);

struct TestFunction {
    enum class Kind { Constant, GaussianBump, TensorHat };
    Kind kind = Kind::Constant;
    Complex center = 0;
    double width = 1;   // sigma for the bump, half-width for the hat
    double value = 1;   // the constant, or the peak scale

    static TestFunction constant(double c) { return {Kind::Constant, 0, 1, c}; }
    /// exp(-r^2 / 2 sigma^2) - exp(-9/2), cut to zero at r = 3 sigma.
    static TestFunction gaussian_bump(Complex c, double sigma) { return {Kind::GaussianBump, c, sigma, 1}; }
    /// (1 - |x - cx|/w)^+ (1 - |y - cy|/w)^+.
    static TestFunction tensor_hat(Complex c, double w) { return {Kind::TensorHat, c, w, 1}; }

    double operator()(Complex t) const;
    bool compact() const { return kind != Kind::Constant; }
    /// Bounding box of the support (meaningless for constants).
    double x_lo() const;
    double x_hi() const;
    double y_lo() const;
    double y_hi() const;
};

/// sum phi(node) weight(node).  InputError when a compactly supported phi
/// reaches the boundary ring or an excluded node.
double integrate_test_function(const GridMeasure& m, const TestFunction& phi);

/// x,y,g,weight,mask with one line per node.
void write_grid_csv(std::ostream& out, const PotentialGrid& g, const GridMeasure& m);
/// 16-bit binary PGM, top row = y_max, max-scaled; "# scale=" records the
/// value of one grey level.
void write_pgm(std::ostream& out, const GridSpec& spec, const std::vector<double>& values);

}  // namespace arithdyn
