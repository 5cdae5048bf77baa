#pragma once

// One-parameter marked families f_t with marked points a_j(t).

#include <string>
#include <vector>

#include "arithdyn/dynamics.hpp"
#include "arithdyn/roots.hpp"

namespace arithdyn {

/// Projective mark (A(t) : B(t)).
struct Mark {
    PolyQ a;
    PolyQ b;
    bool operator==(const Mark& o) const { return a == o.a && b == o.b; }
};

/// f_t = [F_t : G_t] where F_t = sum_i f[i](t) x^i y^(d-i) and likewise G_t.
class MarkedFamily {
public:
    /// Throws InputError unless d >= 2, both coefficient lists have d+1
    /// entries, the resultant in t is not identically zero, q >= 1 and no
    /// mark is identically (0,0).
    MarkedFamily(int degree, std::vector<PolyQ> f, std::vector<PolyQ> g, std::vector<Mark> marks,
                 std::string name = {});

    /// z^d + t with affine constant marks.
    static MarkedFamily unicritical(int d, const std::vector<BigRat>& marks);
    /// z^4/4 - (2/3) t z^3 + (t^2/2) z^2 + t^4 marked at a(t) = t.
    static MarkedFamily quartic_slice();

    int degree() const { return d_; }
    const std::vector<PolyQ>& f() const { return f_; }
    const std::vector<PolyQ>& g() const { return g_; }
    const std::vector<Mark>& marks() const { return marks_; }
    const std::string& name() const { return name_; }
    std::size_t mark_count() const { return marks_.size(); }

    /// Res(F_t, G_t) as a polynomial in t.
    const PolyQ& resultant_poly() const { return res_; }

    /// G_t = c * y^d with c a nonzero constant and F_t of exact degree d in
    /// x with constant leading coefficient: f_t is a polynomial with a
    /// superattracting fixed point at infinity for every t.
    bool is_polynomial() const;

    MarkedFamily with_marks(std::vector<Mark> marks) const;
    MarkedFamily with_mark(std::size_t j) const;

    /// Forms of f_t at a complex parameter (coefficient i multiplies x^i y^(d-i)).
    std::pair<std::vector<Complex>, std::vector<Complex>> forms_at(Complex t) const;
    std::pair<Complex, Complex> mark_at(std::size_t j, Complex t) const;

private:
    int d_;
    std::vector<PolyQ> f_, g_;
    std::vector<Mark> marks_;
    std::string name_;
    PolyQ res_;
    // numeric shadow, lowest degree first
    std::vector<std::vector<double>> fn_, gn_;
    std::vector<std::pair<std::vector<double>, std::vector<double>>> marks_n_;
};

/// Parameters where specialization degenerates: roots of the resultant in t
/// and common roots of each mark's (A, B).
std::vector<RootEstimate> bad_parameters(const MarkedFamily& fam, double tol = 1e-10);

struct Specialization {
    RationalMapQ map;
    std::vector<ProjPointQ> marks;
};

/// Throws DegenerateParameter when Res(t) = 0 or a mark specializes to (0:0).
Specialization specialize_exact(const MarkedFamily& fam, const BigRat& t);

/// sum_j h_hat_{f_t}(a_j(t)).  `tol` applies to each mark's certificate, so
/// the radius is at most q * tol and the value is the exact sum of the
/// single-mark values.
HeightCertificate parametric_height(const MarkedFamily& fam, const BigRat& t, double tol);

struct PotentialSample {
    double value = 0;
    double radius = 0;
    bool flagged = false;  // parameter below the degeneration floor
};

/// sum_j G_{F_t}(A_j(t), B_j(t)) with radius <= tol; flagged (value 0) when
/// the specialized map is numerically degenerate or a mark lift vanishes.
PotentialSample parametric_potential(const MarkedFamily& fam, Complex t, double tol);

}  // namespace arithdyn
