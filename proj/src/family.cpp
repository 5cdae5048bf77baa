#include "arithdyn/family.hpp"

#include <algorithm>
#include <cmath>

#include "arithdyn/errors.hpp"

namespace arithdyn {

namespace {

std::vector<double> shadow(const PolyQ& p) {
    std::vector<double> out;
    for (const auto& c : p.coeffs()) out.push_back(c.get_d());
    return out;
}

Complex horner(const std::vector<double>& c, Complex t) {
    Complex v = 0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * t + *it;
    return v;
}

PolyQ form_at(const std::vector<PolyQ>& coeffs, const BigRat& t) {
    std::vector<BigRat> out;
    for (const auto& c : coeffs) out.push_back(c.eval(t));
    return PolyQ(std::move(out));
}

// Newton interpolation through (x_i, y_i) over Q.
PolyQ interpolate(const std::vector<BigRat>& xs, std::vector<BigRat> ys) {
    const std::size_t n = xs.size();
    for (std::size_t j = 1; j < n; ++j) {
        for (std::size_t i = n - 1; i >= j; --i) {
            ys[i] = (ys[i] - ys[i - 1]) / (xs[i] - xs[i - j]);
        }
    }
    PolyQ out = PolyQ::constant(ys[n - 1]);
    for (std::size_t i = n - 1; i-- > 0;) {
        out = out * PolyQ(std::vector<BigRat>{-xs[i], BigRat(1)}) + PolyQ::constant(ys[i]);
    }
    return out;
}

}  // namespace

MarkedFamily::MarkedFamily(int degree, std::vector<PolyQ> f, std::vector<PolyQ> g, std::vector<Mark> marks,
                           std::string name)
    : d_(degree), f_(std::move(f)), g_(std::move(g)), marks_(std::move(marks)), name_(std::move(name)) {
    if (d_ < 2) throw InputError("family degree must be at least 2");
    const auto n = static_cast<std::size_t>(d_) + 1;
    if (f_.size() > n || g_.size() > n) throw InputError("family form has more than d+1 coefficients");
    f_.resize(n);
    g_.resize(n);
    if (marks_.empty()) throw InputError("family needs at least one mark");
    for (const auto& m : marks_) {
        if (m.a.is_zero() && m.b.is_zero()) throw InputError("mark is identically (0:0)");
    }
    int deg_f = 0, deg_g = 0;
    for (const auto& c : f_) deg_f = std::max(deg_f, c.degree());
    for (const auto& c : g_) deg_g = std::max(deg_g, c.degree());
    const int bound = d_ * (deg_f + deg_g);
    std::vector<BigRat> xs, ys;
    for (int i = 0; i <= bound; ++i) {
        xs.emplace_back(i);
        ys.push_back(resultant(form_at(f_, xs.back()), form_at(g_, xs.back()), d_));
    }
    res_ = interpolate(xs, ys);
    if (res_.is_zero()) throw InputError("resultant of the family vanishes identically");

    for (const auto& c : f_) fn_.push_back(shadow(c));
    for (const auto& c : g_) gn_.push_back(shadow(c));
    for (const auto& m : marks_) marks_n_.emplace_back(shadow(m.a), shadow(m.b));
}

MarkedFamily MarkedFamily::unicritical(int d, const std::vector<BigRat>& marks) {
    std::vector<PolyQ> f(static_cast<std::size_t>(d) + 1), g(static_cast<std::size_t>(d) + 1);
    f[0] = PolyQ::x();
    f[static_cast<std::size_t>(d)] = PolyQ({1});
    g[0] = PolyQ({1});
    std::vector<Mark> m;
    for (const auto& v : marks) m.push_back({PolyQ::constant(v), PolyQ({1})});
    return {d, std::move(f), std::move(g), std::move(m), "z^" + std::to_string(d) + "+t"};
}

MarkedFamily MarkedFamily::quartic_slice() {
    std::vector<PolyQ> f(5), g(5);
    f[4] = PolyQ::constant(BigRat(1, 4));
    f[3] = PolyQ(std::vector<BigRat>{BigRat(0), BigRat(-2, 3)});
    f[2] = PolyQ(std::vector<BigRat>{BigRat(0), BigRat(0), BigRat(1, 2)});
    f[0] = PolyQ({0, 0, 0, 0, 1});
    g[0] = PolyQ({1});
    return {4, std::move(f), std::move(g), {Mark{PolyQ::x(), PolyQ({1})}}, "quartic-slice"};
}

bool MarkedFamily::is_polynomial() const {
    for (int i = 1; i <= d_; ++i) {
        if (!g_[static_cast<std::size_t>(i)].is_zero()) return false;
    }
    const auto& lead = f_[static_cast<std::size_t>(d_)];
    return g_[0].degree() == 0 && lead.degree() == 0;
}

MarkedFamily MarkedFamily::with_marks(std::vector<Mark> marks) const {
    return {d_, f_, g_, std::move(marks), name_};
}

MarkedFamily MarkedFamily::with_mark(std::size_t j) const { return with_marks({marks_.at(j)}); }

std::pair<std::vector<Complex>, std::vector<Complex>> MarkedFamily::forms_at(Complex t) const {
    std::vector<Complex> f, g;
    for (const auto& c : fn_) f.push_back(horner(c, t));
    for (const auto& c : gn_) g.push_back(horner(c, t));
    return {f, g};
}

std::pair<Complex, Complex> MarkedFamily::mark_at(std::size_t j, Complex t) const {
    return {horner(marks_n_[j].first, t), horner(marks_n_[j].second, t)};
}

std::vector<RootEstimate> bad_parameters(const MarkedFamily& fam, double tol) {
    std::vector<RootEstimate> out;
    auto add = [&](const PolyQ& p) {
        if (p.degree() < 1) return;
        const PolyQ s = squarefree_part(p);
        if (s.degree() < 1) return;
        for (const auto& r : complex_roots(to_complex(s), tol)) out.push_back(r);
    };
    add(fam.resultant_poly());
    for (const auto& m : fam.marks()) add(gcd(m.a, m.b));
    return out;
}

Specialization specialize_exact(const MarkedFamily& fam, const BigRat& t) {
    const BigRat r = fam.resultant_poly().eval(t);
    if (r == 0) {
        throw DegenerateParameter("resultant polynomial Res(F_t,G_t) vanishes at t = " + to_string(t));
    }
    RationalMapQ map(form_at(fam.f(), t), form_at(fam.g(), t), fam.degree());
    std::vector<ProjPointQ> pts;
    for (std::size_t j = 0; j < fam.marks().size(); ++j) {
        const BigRat a = fam.marks()[j].a.eval(t), b = fam.marks()[j].b.eval(t);
        if (a == 0 && b == 0) {
            throw DegenerateParameter("mark " + std::to_string(j) + " specializes to (0:0) at t = " + to_string(t));
        }
        BigInt l;
        mpz_lcm(l.get_mpz_t(), a.get_den().get_mpz_t(), b.get_den().get_mpz_t());
        pts.emplace_back(BigInt(a.get_num() * (l / a.get_den())), BigInt(b.get_num() * (l / b.get_den())));
    }
    return {std::move(map), std::move(pts)};
}

HeightCertificate parametric_height(const MarkedFamily& fam, const BigRat& t, double tol) {
    const Specialization s = specialize_exact(fam, t);
    HeightCertificate total;
    for (const auto& x : s.marks) {
        const HeightCertificate c = canonical_height(s.map, x, tol);
        total.value += c.value;
        total.radius += c.radius;
        total.n_used = std::max(total.n_used, c.n_used);
    }
    return total;
}

PotentialSample parametric_potential(const MarkedFamily& fam, Complex t, double tol) {
    if (!(tol > 0)) throw InputError("parametric potential needs tol > 0");
    auto [f, g] = fam.forms_at(t);
    try {
        const ComplexMap map(std::move(f), std::move(g), fam.degree());
        PotentialSample out;
        const double share = tol / static_cast<double>(fam.mark_count());
        for (std::size_t j = 0; j < fam.mark_count(); ++j) {
            auto [a, b] = fam.mark_at(j, t);
            if (std::max(std::abs(a), std::abs(b)) < 1e-300) return {0.0, 0.0, true};
            const EscapeEstimate e = escape_potential(map, a, b, share);
            out.value += e.value;
            out.radius += e.radius;
        }
        return out;
    } catch (const InputError&) {
        return {0.0, 0.0, true};
    }
}

}  // namespace arithdyn
