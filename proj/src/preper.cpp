#include "arithdyn/preper.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>

#include "arithdyn/errors.hpp"

namespace arithdyn {

namespace {

// Integer forms of the family, cleared by a common denominator.
struct IntegerFamily {
    std::vector<PolyZ> f, g;
    PolyZ a, b;
};

IntegerFamily clear(const MarkedFamily& fam) {
    BigInt l = 1;
    for (const auto* side : {&fam.f(), &fam.g()}) {
        for (const auto& c : *side) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.denominator_lcm().get_mpz_t());
    }
    auto scaled = [](const PolyQ& p, const BigInt& s) {
        std::vector<BigInt> out;
        for (const auto& c : p.coeffs()) {
            BigRat v = c * s;
            out.push_back(v.get_num());
        }
        return PolyZ(std::move(out));
    };
    IntegerFamily out;
    for (const auto& c : fam.f()) out.f.push_back(scaled(c, l));
    for (const auto& c : fam.g()) out.g.push_back(scaled(c, l));
    const Mark& mk = fam.marks().front();
    BigInt lm;
    mpz_lcm(lm.get_mpz_t(), mk.a.denominator_lcm().get_mpz_t(), mk.b.denominator_lcm().get_mpz_t());
    out.a = scaled(mk.a, lm);
    out.b = scaled(mk.b, lm);
    return out;
}

int predicted_degree(const std::vector<PolyZ>& form, int d, int da, int db) {
    int best = -1;
    for (int i = 0; i <= d; ++i) {
        const auto& c = form[static_cast<std::size_t>(i)];
        if (c.is_zero()) continue;
        best = std::max(best, c.degree() + i * std::max(da, 0) + (d - i) * std::max(db, 0));
    }
    return best;
}

void normalize(PolyZ& a, PolyZ& b) {
    if (a.degree() >= 1 && b.degree() >= 1) {
        const PolyZ g = gcd(a, b);
        if (g.degree() >= 1) {
            a = a.exact_div(g);
            b = b.exact_div(g);
        }
    }
    BigInt c;
    mpz_gcd(c.get_mpz_t(), a.content().get_mpz_t(), b.content().get_mpz_t());
    if (c > 1) {
        a = a.divexact(c);
        b = b.divexact(c);
    }
}

// Orbit evaluation of P = a_n - a_m and dP/dt for polynomial families with a
// constant mark denominator.
class OrbitEvaluator {
public:
    explicit OrbitEvaluator(const PreperPoly& p) : n_(p.n), m_(p.m), d_(p.family.degree()) {
        const auto& fam = p.family;
        const double g0 = fam.g()[0].coeff(0).get_d();
        for (const auto& c : fam.f()) {
            std::vector<double> v;
            for (const auto& x : c.coeffs()) v.push_back(x.get_d() / g0);
            f_.push_back(v);
        }
        const Mark& mk = fam.marks().front();
        const double b0 = mk.b.coeff(0).get_d();
        for (const auto& x : mk.a.coeffs()) a_.push_back(x.get_d() / b0);
    }

    struct Value {
        Complex p, dp;
        bool escaped = false;
        Complex log_deriv;  // dP/P when escaped
    };

    Value operator()(Complex t) const {
        std::vector<Complex> c(f_.size()), dc(f_.size());
        for (std::size_t i = 0; i < f_.size(); ++i) horner(f_[i], t, c[i], dc[i]);
        Complex z, dz;
        horner(a_, t, z, dz);
        Complex zm = z, dzm = dz;
        for (int k = 1; k <= n_; ++k) {
            if (std::abs(z) > 1e100) return escape(c, dc, z, dz, n_ - k + 1);
            Complex v = 0, dv = 0, dvt = 0;
            for (std::size_t i = f_.size(); i-- > 0;) {
                dv = dv * z + v;
                v = v * z + c[i];
                dvt = dvt * z + dc[i];
            }
            dz = dv * dz + dvt;
            z = v;
            if (k == m_) {
                zm = z;
                dzm = dz;
            }
        }
        return {z - zm, dz - dzm};
    }

private:
    static void horner(const std::vector<double>& p, Complex t, Complex& v, Complex& dv) {
        v = 0;
        dv = 0;
        for (auto it = p.rbegin(); it != p.rend(); ++it) {
            dv = dv * t + v;
            v = v * t + *it;
        }
    }

    // |z| is huge: continue with the logarithmic derivative of the orbit,
    // evaluating the map as a polynomial in 1/z.
    Value escape(const std::vector<Complex>& c, const std::vector<Complex>& dc, Complex z, Complex dz,
                 int remaining) const {
        Complex lz = dz / z;
        Complex w = 1.0 / z;
        for (int k = 0; k < remaining; ++k) {
            Complex s = 0, si = 0, st = 0, pw = 1;
            for (std::size_t i = c.size(); i-- > 0;) {
                s += c[i] * pw;
                si += static_cast<double>(i) * c[i] * pw;
                st += dc[i] * pw;
                pw *= w;
            }
            lz = (si / s) * lz + st / s;
            w = std::pow(w, static_cast<double>(d_)) / s;
        }
        Value out;
        out.escaped = true;
        out.log_deriv = lz;
        return out;
    }

    int n_, m_, d_;
    std::vector<std::vector<double>> f_;
    std::vector<double> a_;
};

bool orbit_evaluable(const MarkedFamily& fam) {
    return fam.is_polynomial() && fam.marks().front().b.degree() == 0;
}

PolyZ squarefree(const PolyZ& p, PolyZ& g) {
    g = gcd(p, p.derivative());
    if (g.degree() < 1) {
        g = PolyZ({1});
        return p;
    }
    return p.exact_div(g).primitive();
}

void check_conjugates(const std::vector<RootEstimate>& pts) {
    std::vector<Complex> z;
    for (const auto& r : pts) z.push_back(r.z);
    std::sort(z.begin(), z.end(), [](Complex a, Complex b) { return a.real() < b.real(); });
    for (const auto& r : pts) {
        const Complex c = std::conj(r.z);
        const double tol = 1e-6 * std::max(1.0, std::abs(c));
        auto lo = std::lower_bound(z.begin(), z.end(), c.real() - tol,
                                   [](Complex a, double x) { return a.real() < x; });
        bool found = false;
        for (auto it = lo; it != z.end() && it->real() <= c.real() + tol; ++it) {
            if (std::abs(*it - c) <= tol) {
                found = true;
                break;
            }
        }
        if (!found) throw NumericError("root set is not closed under complex conjugation", r.residual);
    }
}

// Continued-fraction convergents of x with denominator at most qmax.
std::vector<BigRat> convergents(double x, long qmax) {
    std::vector<BigRat> out;
    long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    double r = x;
    for (int i = 0; i < 40; ++i) {
        const double a = std::floor(r);
        if (std::abs(a) > 1e12) break;
        const long ai = static_cast<long>(a);
        const long p2 = ai * p1 + p0, q2 = ai * q1 + q0;
        if (q2 > qmax) break;
        out.emplace_back(p2, q2);
        out.back().canonicalize();
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
        const double frac = r - a;
        if (frac < 1e-15) break;
        r = 1.0 / frac;
    }
    return out;
}

// Chordal distance between f_t^n(a(t)) and f_t^m(a(t)); 1 when the map degenerates.
double chordal_relation(const MarkedFamily& fam, Complex t, int n, int m) {
    auto [f, g] = fam.forms_at(t);
    try {
        const ComplexMap map(std::move(f), std::move(g), fam.degree());
        auto [x, y] = fam.mark_at(0, t);
        Complex xm = x, ym = y;
        for (int k = 1; k <= n; ++k) {
            std::tie(x, y) = map(x, y);
            const double s = std::max(std::abs(x), std::abs(y));
            if (!(s > 0)) return 1.0;
            x /= s;
            y /= s;
            if (k == m) {
                xm = x;
                ym = y;
            }
        }
        const double nv = std::hypot(std::abs(x), std::abs(y)), nm = std::hypot(std::abs(xm), std::abs(ym));
        return std::abs(x * ym - xm * y) / (nv * nm);
    } catch (const InputError&) {
        return 1.0;
    }
}

}  // namespace

PreperPoly preper_poly(const MarkedFamily& fam, int n, int m, int degree_budget) {
    if (fam.mark_count() != 1) throw InputError("preper_poly needs a family with exactly one mark");
    if (!(n > m && m >= 0)) throw InputError("preper_poly needs n > m >= 0");
    const int d = fam.degree();
    const IntegerFamily fi = clear(fam);
    PolyZ a = fi.a, b = fi.b;
    normalize(a, b);
    PolyZ am = a, bm = b;
    for (int k = 1; k <= n; ++k) {
        const int pred = std::max(predicted_degree(fi.f, d, a.degree(), b.degree()),
                                  predicted_degree(fi.g, d, a.degree(), b.degree()));
        if (pred > degree_budget) {
            throw ResourceError("iterate " + std::to_string(k) + " would have degree " + std::to_string(pred) +
                                    " > budget " + std::to_string(degree_budget),
                                k - 1);
        }
        std::vector<PolyZ> pa(static_cast<std::size_t>(d) + 1), pb(static_cast<std::size_t>(d) + 1);
        pa[0] = PolyZ({1});
        pb[0] = PolyZ({1});
        for (int i = 1; i <= d; ++i) {
            pa[static_cast<std::size_t>(i)] = pa[static_cast<std::size_t>(i - 1)] * a;
            pb[static_cast<std::size_t>(i)] = pb[static_cast<std::size_t>(i - 1)] * b;
        }
        PolyZ na, nb;
        for (int i = 0; i <= d; ++i) {
            const auto ui = static_cast<std::size_t>(i), vi = static_cast<std::size_t>(d - i);
            if (!fi.f[ui].is_zero()) na = na + fi.f[ui] * (pa[ui] * pb[vi]);
            if (!fi.g[ui].is_zero()) nb = nb + fi.g[ui] * (pa[ui] * pb[vi]);
        }
        a = std::move(na);
        b = std::move(nb);
        normalize(a, b);
        if (k == m) {
            am = a;
            bm = b;
        }
    }
    const PolyZ diff = a * bm - am * b;
    if (diff.is_zero()) {
        throw StructuralError("f_t^" + std::to_string(n) + "(a(t)) = f_t^" + std::to_string(m) +
                              "(a(t)) holds identically in t");
    }
    return {n, m, diff.primitive(), fam};
}

RootSet make_root_set(std::vector<RootEstimate> points, std::shared_ptr<const PreperPoly> source, double tol) {
    RootSet rs;
    rs.points = std::move(points);
    rs.source = std::move(source);
    rs.residual_tol = tol;
    return rs;
}

RootSet root_set(const PreperPoly& p, double tol, std::uint64_t seed) {
    if (p.degree() < 1) throw InputError("root_set needs a polynomial of degree >= 1");
    if (!(tol > 0)) throw InputError("root_set needs tol > 0");
    auto src = std::make_shared<const PreperPoly>(p);
    PolyZ g;
    const PolyZ s = squarefree(p.poly, g);
    RootSet rs = make_root_set({}, src, tol);
    rs.repeated = p.degree() - s.degree();

    if (!orbit_evaluable(p.family)) {
        rs.points = complex_roots(to_complex(s.to_q()), tol, seed);
        check_conjugates(rs.points);
        return rs;
    }

    // exact zero roots split off
    std::size_t zeros = 0;
    while (s.coeffs()[zeros] == 0) ++zeros;
    for (std::size_t i = 0; i < zeros; ++i) rs.points.push_back({Complex(0.0), 0.0, 1});
    if (static_cast<int>(zeros) == s.degree()) return rs;

    std::vector<double> la;
    for (std::size_t k = zeros; k < s.coeffs().size(); ++k) la.push_back(log_abs(s.coeffs()[k]));
    auto init = newton_polygon_guesses(la, seed);

    const OrbitEvaluator orbit(p);
    const PolyC gc = to_complex(g.to_q());
    const double gscale = std::ldexp(1.0, gc.var_scale_exp());
    const bool has_g = g.degree() >= 1;
    const double shift = static_cast<double>(zeros);
    NewtonEvaluator eval = [&](Complex t) {
        const auto v = orbit(t);
        Complex lp = v.escaped ? v.log_deriv : v.dp / v.p;
        if (!v.escaped && v.p == Complex(0.0)) return NewtonStep{Complex(0.0), 0.0, 0.0};
        if (has_g) {
            const auto gv = gc.eval_scaled(t / gscale);
            lp -= gv.dp / (gv.p * gscale);
        }
        if (shift > 0) lp -= shift / t;
        const Complex ratio = 1.0 / lp;
        const double res = v.escaped ? std::numeric_limits<double>::infinity() : std::abs(ratio);
        return NewtonStep{ratio, res, 0.0};
    };
    AberthOptions opts;
    opts.tol = tol;
    opts.seed = seed;
    opts.freeze_residual = 0;
    opts.cluster_radius = 1e-13;
    auto found = aberth(eval, std::move(init), opts);
    for (const auto& r : found) {
        if (r.multiplicity > 1) {
            throw NumericError("root approximations coalesced near " + std::to_string(r.z.real()) + "+" +
                                   std::to_string(r.z.imag()) + "i",
                               r.residual);
        }
        rs.points.push_back(r);
    }
    check_conjugates(rs.points);
    return rs;
}

void write_root_set_csv(std::ostream& out, const RootSet& rs) {
    out << "re,im,residual\n";
    char buf[128];
    for (const auto& r : rs.points) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.3e\n", r.z.real(), r.z.imag(), r.residual);
        out << buf;
    }
}

double SmallnessReport::fraction_certified() const {
    if (entries.empty()) return 1.0;
    return static_cast<double>(exact + numeric) / static_cast<double>(entries.size());
}

SmallnessReport certify_small(const MarkedFamily& fam, const RootSet& rs, double tol) {
    SmallnessReport rep;
    rep.entries.resize(rs.points.size());
    const bool numeric_ok = fam.is_polynomial();
#pragma omp parallel for schedule(dynamic, 8)
    for (std::size_t i = 0; i < rs.points.size(); ++i) {
        SmallEntry& e = rep.entries[i];
        e.t = rs.points[i].z;
        if (std::abs(e.t.imag()) <= 1e-12 * std::max(1.0, std::abs(e.t))) {
            for (const auto& r : convergents(e.t.real(), 1000000)) {
                if (std::abs(r.get_d() - e.t.real()) > 1e-9 * std::max(1.0, std::abs(e.t.real()))) continue;
                if (rs.source && rs.source->poly.eval(r) != 0) continue;
                e.rational = to_string(r);
                try {
                    const Specialization s = specialize_exact(fam, r);
                    bool all = true;
                    for (const auto& x : s.marks) {
                        if (!std::holds_alternative<Preperiodic>(is_preperiodic(s.map, x, 4096))) all = false;
                    }
                    e.verdict = all ? SmallVerdict::ExactPreperiodic : SmallVerdict::Failed;
                } catch (const DegenerateParameter&) {
                    e.verdict = SmallVerdict::Failed;
                }
                break;
            }
        }
        if (e.verdict != SmallVerdict::Unchecked) continue;
        if (!numeric_ok) {
            if (rs.source) {
                e.escape = chordal_relation(fam, e.t, rs.source->n, rs.source->m);
                e.verdict = e.escape <= tol ? SmallVerdict::NumericBounded : SmallVerdict::Failed;
            }
            continue;
        }
        const PotentialSample g = parametric_potential(fam, e.t, tol * 1e-2);
        e.escape = g.value;
        e.verdict = (!g.flagged && g.value <= tol) ? SmallVerdict::NumericBounded : SmallVerdict::Failed;
    }
    for (const auto& e : rep.entries) {
        switch (e.verdict) {
            case SmallVerdict::ExactPreperiodic: ++rep.exact; break;
            case SmallVerdict::NumericBounded: ++rep.numeric; break;
            case SmallVerdict::Failed: ++rep.failed; break;
            case SmallVerdict::Unchecked: ++rep.unchecked; break;
        }
    }
    return rep;
}

}  // namespace arithdyn
