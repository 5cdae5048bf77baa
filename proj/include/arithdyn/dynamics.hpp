#pragma once

// Rational self-maps of P^1 over Q and over C, exact iteration, certified
// canonical heights and their decomposition into local contributions.

#include <optional>
#include <variant>
#include <vector>

#include "arithdyn/rat_core.hpp"

namespace arithdyn {

/// Point of P^1(Q) as a coprime integer pair, b >= 0, and (1:0) at infinity.
class ProjPointQ {
public:
    ProjPointQ() : a_(1), b_(0) {}
    /// Normalizes; throws InputError for (0,0).
    ProjPointQ(BigInt a, BigInt b);
    static ProjPointQ from_rational(const BigRat& z);
    static ProjPointQ infinity() { return {}; }

    const BigInt& a() const { return a_; }
    const BigInt& b() const { return b_; }
    bool is_infinity() const { return b_ == 0; }
    /// Bits of the larger coordinate.
    std::size_t bits() const;

    bool operator==(const ProjPointQ& o) const { return a_ == o.a_ && b_ == o.b_; }

private:
    BigInt a_, b_;
};

std::string to_string(const ProjPointQ& x);

/// log max(|a|, |b|).
double naive_height(const ProjPointQ& x);

/// Homogeneous form of degree d evaluated at (a, b).  Coefficient i of `form`
/// multiplies a^i b^(d-i).
BigInt eval_form(const PolyZ& form, int degree, const BigInt& a, const BigInt& b);

struct ApplyResult {
    ProjPointQ image;
    BigInt removed_gcd;  // positive gcd of (F(a,b), G(a,b))
};

/// Degree-d map [F : G] with integer coefficients of combined content 1 and
/// nonzero resultant.
class RationalMapQ {
public:
    /// Clears denominators and normalizes content.  Throws InputError if
    /// d < 2, a form exceeds degree d, or the resultant vanishes.
    RationalMapQ(const PolyQ& f, const PolyQ& g, int degree);

    /// z^d
    static RationalMapQ power(int d);
    /// z^d + c
    static RationalMapQ unicritical(int d, const BigRat& c);

    int degree() const { return d_; }
    const PolyZ& f() const { return f_; }
    const PolyZ& g() const { return g_; }
    const BigInt& resultant() const { return res_; }

    /// C >= 0 with |h(f(x)) - d h(x)| <= C for every x in P^1(Q).
    double iteration_constant() const { return c_q_; }
    /// C >= 0 with |log||F(v)|| - d log||v||| <= C on C^2 (sup norm).
    double complex_constant() const { return c_c_; }

    ApplyResult apply(const ProjPointQ& x) const;

private:
    int d_;
    PolyZ f_, g_;
    BigInt res_;
    double c_q_ = 0, c_c_ = 0;
};

ProjPointQ apply(const RationalMapQ& f, const ProjPointQ& x);
double iteration_constant(const RationalMapQ& f);

struct HeightCertificate {
    double value = 0;
    double radius = 0;
    int n_used = 0;
    bool contains(double h) const { return h >= value - radius && h <= value + radius; }
};

struct HeightOptions {
    /// Exact iteration stops once a coordinate exceeds this many bits; the
    /// remaining tail is then closed with the local decomposition.
    std::size_t bit_budget = std::size_t{1} << 20;
    /// Hard cap on exact iterations.
    int max_steps = 4096;
};

/// Certified canonical height.  Throws InputError if tol <= 0 and
/// ResourceError if the tail cannot be closed (resultant not factorable).
HeightCertificate canonical_height(const RationalMapQ& f, const ProjPointQ& x, double tol,
                                   const HeightOptions& opts = {});

struct Preperiodic {
    int period;
    int preperiod;
};
struct NotPreperiodic {
    HeightCertificate certificate;
};
struct Undecided {};
using PreperiodicDecision = std::variant<Preperiodic, NotPreperiodic, Undecided>;

PreperiodicDecision is_preperiodic(const RationalMapQ& f, const ProjPointQ& x, int orbit_cap);

/// sum_{k<=n} d^-k v_p(g_k) log p where g_k is the gcd removed at step k.
/// Computed p-adically with exact precision bookkeeping.
double local_height_series_at_prime(const RationalMapQ& f, const ProjPointQ& x, const BigInt& p, int n);

/// Distinct prime divisors by trial division plus a primality test on the
/// cofactor.  Throws ResourceError if a composite cofactor remains.
std::vector<BigInt> prime_factors(BigInt n);

// ---------------------------------------------------------------------------
// Complex maps and escape rates.

/// Unit-norm (sup norm) pair representing a point of P^1(C).
class ProjPointC {
public:
    ProjPointC(Complex x, Complex y);
    static ProjPointC affine(Complex z) { return {z, 1.0}; }
    Complex x() const { return x_; }
    Complex y() const { return y_; }

private:
    Complex x_, y_;
};

class ComplexMap {
public:
    /// Coefficient i of f, g multiplies x^i y^(d-i).  Throws InputError when
    /// |Res| / (||F||_1 ||G||_1)^d < degeneracy_floor.
    ComplexMap(std::vector<Complex> f, std::vector<Complex> g, int degree, double degeneracy_floor = 1e-14);
    /// Coefficients scaled by a power of two to stay in double range; the
    /// shift in the potential is folded into potential_offset().
    static ComplexMap from(const RationalMapQ& f);

    int degree() const { return d_; }
    std::pair<Complex, Complex> operator()(Complex x, Complex y) const;
    double constant() const { return c_; }
    /// |Res| / (||F||_1 ||G||_1)^d
    double resultant_ratio() const { return res_ratio_; }
    /// Added to every potential value: log(lambda)/(d-1) when the stored
    /// forms are the original ones divided by lambda.
    double potential_offset() const { return offset_; }

private:
    std::vector<Complex> f_, g_;
    int d_;
    double c_ = 0, res_ratio_ = 0, offset_ = 0;
};

struct EscapeEstimate {
    double value = 0;
    double radius = 0;
    int n_used = 0;
};

/// G_F(v) = lim d^-n log ||F^n(v)|| for the given lift v = (x, y) != 0.
EscapeEstimate escape_potential(const ComplexMap& f, Complex x, Complex y, double tol);

/// Potential of the standard lift: (x/y, 1) for finite points, (1, 0) at
/// infinity.  For polynomials this is the classical Green function.
EscapeEstimate archimedean_escape_rate(const ComplexMap& f, const ProjPointC& z, double tol);

/// h_hat(y) - h(y) from the place decomposition, with radius <= target.
HeightCertificate height_correction(const RationalMapQ& f, const ProjPointQ& y, double target);

}  // namespace arithdyn
