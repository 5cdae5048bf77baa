#pragma once

// Exact integer/rational arithmetic and univariate polynomials over Z, Q and
// complex doubles.  BigInt/BigRat are GMP values; everything on top of them
// (polynomials, resultants, gcd, squarefree parts) lives here.

#include <gmpxx.h>

#include <complex>
#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace arithdyn {

using BigInt = mpz_class;
using BigRat = mpq_class;
using Complex = std::complex<double>;

/// Parses "p/q", "p" or "-p/q".  The result is in lowest terms with a
/// positive denominator.  Throws InputError on malformed text or q == 0.
BigRat parse_rational(std::string_view text);
std::string to_string(const BigRat& r);

/// log|x| computed without overflow; -inf for zero.
double log_abs(const BigInt& x);
double log_abs(const BigRat& x);
/// Binary exponent and mantissa: x = m * 2^e with 0.5 <= |m| < 1.
std::pair<double, long> split_exponent(const BigInt& x);

class PolyQ;

/// Integer polynomial, lowest degree first, no trailing zeros.
class PolyZ {
public:
    PolyZ() = default;
    explicit PolyZ(std::vector<BigInt> coeffs);

    static PolyZ constant(const BigInt& c);
    static PolyZ monomial(const BigInt& c, int degree);

    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    const std::vector<BigInt>& coeffs() const { return c_; }
    BigInt coeff(int i) const;
    const BigInt& lead() const { return c_.back(); }

    PolyZ operator+(const PolyZ& o) const;
    PolyZ operator-(const PolyZ& o) const;
    PolyZ operator*(const PolyZ& o) const;
    PolyZ operator*(const BigInt& s) const;
    PolyZ operator-() const;
    bool operator==(const PolyZ& o) const { return c_ == o.c_; }

    PolyZ derivative() const;
    /// Positive gcd of all coefficients (0 for the zero polynomial).
    BigInt content() const;
    /// Divided by the content, leading coefficient made positive.
    PolyZ primitive() const;
    /// Exact division by a polynomial known to divide this one over Z.
    /// Throws InputError if the division leaves a remainder.
    PolyZ exact_div(const PolyZ& divisor) const;
    /// Exact division of every coefficient by s.
    PolyZ divexact(const BigInt& s) const;

    /// Homogenized value num^D... : returns sum c_k num^k den^(deg-k).
    BigInt eval_homogeneous(const BigInt& num, const BigInt& den) const;
    BigRat eval(const BigRat& t) const;

    PolyQ to_q() const;

private:
    void trim();
    std::vector<BigInt> c_;
};

/// Pseudo-remainder lc(b)^k * a mod b (k = deg a - deg b + 1).
PolyZ pseudo_remainder(const PolyZ& a, const PolyZ& b);
/// Primitive gcd with positive leading coefficient.
PolyZ gcd(const PolyZ& a, const PolyZ& b);
/// Upper bound on deg gcd(a, b) from reductions modulo word-size primes.
/// Returns min(deg a, deg b) when no usable prime was found.
int modular_gcd_degree_bound(const PolyZ& a, const PolyZ& b);

/// Rational polynomial, lowest degree first, no trailing zeros.
class PolyQ {
public:
    PolyQ() = default;
    explicit PolyQ(std::vector<BigRat> coeffs);
    PolyQ(std::initializer_list<long> coeffs);

    static PolyQ constant(const BigRat& c);
    static PolyQ x();

    int degree() const { return static_cast<int>(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    const std::vector<BigRat>& coeffs() const { return c_; }
    BigRat coeff(int i) const;
    const BigRat& lead() const { return c_.back(); }

    PolyQ operator+(const PolyQ& o) const;
    PolyQ operator-(const PolyQ& o) const;
    PolyQ operator*(const PolyQ& o) const;
    PolyQ operator*(const BigRat& s) const;
    PolyQ operator-() const;
    bool operator==(const PolyQ& o) const { return c_ == o.c_; }

    PolyQ derivative() const;
    BigRat eval(const BigRat& t) const;
    Complex eval(Complex t) const;
    /// Quotient and remainder over Q.  Throws InputError on division by zero.
    std::pair<PolyQ, PolyQ> divmod(const PolyQ& divisor) const;

    /// Least common multiple of the denominators.
    BigInt denominator_lcm() const;
    /// Clears denominators and removes the content; leading coefficient > 0.
    PolyZ primitive() const;

private:
    void trim();
    std::vector<BigRat> c_;
};

/// Primitive gcd over Q (integer coefficients, positive leading coefficient).
PolyQ gcd(const PolyQ& a, const PolyQ& b);

/// p / gcd(p, p'), primitive.  Throws InputError for the zero polynomial.
PolyQ squarefree_part(const PolyQ& p);

// ---------------------------------------------------------------------------
// Binary forms and resultants.  A binary form of degree d is stored
// dehomogenized: coefficient i multiplies x^i y^(d-i).

/// Sylvester resultant of two forms of the declared degree d >= 1.
/// Throws InputError if either form exceeds the declared degree.
BigRat resultant(const PolyQ& f, const PolyQ& g, int degree);

/// Cofactors of the Sylvester system: x^(2d-1) = u_x f + v_x g and
/// y^(2d-1) = u_y f + v_y g with u, v forms of degree d-1.
struct BezoutCofactors {
    PolyQ u_x, v_x, u_y, v_y;
};
/// Throws InputError when the resultant vanishes.
BezoutCofactors bezout_cofactors(const PolyQ& f, const PolyQ& g, int degree);

/// Exact determinant and linear solve over Q.
using MatrixQ = std::vector<std::vector<BigRat>>;
BigRat determinant(MatrixQ m);
std::vector<BigRat> solve_exact(MatrixQ a, std::vector<BigRat> b);

// ---------------------------------------------------------------------------

/// Complex polynomial in a scaled variable: p(t) = q(t / 2^var_scale_exp)
/// up to an overall constant, where q has the stored coefficients.
class PolyC {
public:
    PolyC() = default;
    explicit PolyC(std::vector<Complex> coeffs, int var_scale_exp = 0);

    int degree() const { return static_cast<int>(c_.size()) - 1; }
    const std::vector<Complex>& coeffs() const { return c_; }
    int var_scale_exp() const { return scale_exp_; }

    struct Value {
        Complex p;
        Complex dp;
        double scale;  // sum |c_k| max(1,|u|)^k
    };
    /// Horner evaluation in the scaled variable u.
    Value eval_scaled(Complex u) const;

private:
    std::vector<Complex> c_;
    int scale_exp_ = 0;
};

/// Rounds coefficients to doubles.  When the coefficient range exceeds the
/// double exponent range the variable is rescaled by a power of two, which is
/// recorded in the result.
PolyC to_complex(const PolyQ& p);

}  // namespace arithdyn
