#include "arithdyn/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <unordered_map>

#include "arithdyn/errors.hpp"

namespace arithdyn {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Outward rounding for constants computed in floating point.
double inflate(double c) { return c > 0 ? c * (1 + 1e-12) + 1e-15 : 0.0; }

BigRat l1_norm(const PolyQ& p) {
    BigRat s = 0;
    for (const auto& c : p.coeffs()) s += abs(c);
    return s;
}

BigInt l1_norm(const PolyZ& p) {
    BigInt s = 0;
    for (const auto& c : p.coeffs()) s += abs(c);
    return s;
}

int valuation(BigInt x, const BigInt& p, int cap) {
    if (x == 0) return cap;
    int v = 0;
    while (v < cap && mpz_divisible_p(x.get_mpz_t(), p.get_mpz_t())) {
        mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), p.get_mpz_t());
        ++v;
    }
    return v;
}

}  // namespace

// ---------------------------------------------------------------------------

ProjPointQ::ProjPointQ(BigInt a, BigInt b) : a_(std::move(a)), b_(std::move(b)) {
    if (a_ == 0 && b_ == 0) throw InputError("(0,0) is not a projective point");
    if (b_ == 0) {
        a_ = 1;
        return;
    }
    BigInt g;
    mpz_gcd(g.get_mpz_t(), a_.get_mpz_t(), b_.get_mpz_t());
    if (b_ < 0) g = -g;
    mpz_divexact(a_.get_mpz_t(), a_.get_mpz_t(), g.get_mpz_t());
    mpz_divexact(b_.get_mpz_t(), b_.get_mpz_t(), g.get_mpz_t());
}

ProjPointQ ProjPointQ::from_rational(const BigRat& z) { return {z.get_num(), z.get_den()}; }

std::size_t ProjPointQ::bits() const {
    return std::max(mpz_sizeinbase(a_.get_mpz_t(), 2), mpz_sizeinbase(b_.get_mpz_t(), 2));
}

std::string to_string(const ProjPointQ& x) { return "[" + x.a().get_str() + ":" + x.b().get_str() + "]"; }

double naive_height(const ProjPointQ& x) {
    const BigInt& big = abs(x.a()) > abs(x.b()) ? x.a() : x.b();
    return std::max(0.0, log_abs(big));
}

BigInt eval_form(const PolyZ& form, int degree, const BigInt& a, const BigInt& b) {
    BigInt v = form.coeff(degree);
    BigInt bpow = 1;
    for (int i = degree - 1; i >= 0; --i) {
        bpow *= b;
        v *= a;
        const BigInt c = form.coeff(i);
        if (c != 0) mpz_addmul(v.get_mpz_t(), c.get_mpz_t(), bpow.get_mpz_t());
    }
    return v;
}

// ---------------------------------------------------------------------------

RationalMapQ::RationalMapQ(const PolyQ& f, const PolyQ& g, int degree) : d_(degree) {
    if (degree < 2) throw InputError("map degree must be at least 2");
    if (f.degree() > degree || g.degree() > degree) throw InputError("form exceeds the declared degree");
    BigInt l;
    mpz_lcm(l.get_mpz_t(), f.denominator_lcm().get_mpz_t(), g.denominator_lcm().get_mpz_t());
    auto clear = [&l](const PolyQ& p) {
        std::vector<BigInt> c;
        for (const auto& x : p.coeffs()) {
            BigInt t;
            mpz_divexact(t.get_mpz_t(), l.get_mpz_t(), x.get_den().get_mpz_t());
            c.push_back(x.get_num() * t);
        }
        return PolyZ(std::move(c));
    };
    f_ = clear(f);
    g_ = clear(g);
    BigInt content;
    mpz_gcd(content.get_mpz_t(), f_.content().get_mpz_t(), g_.content().get_mpz_t());
    if (content == 0) throw InputError("map with both forms zero");
    f_ = f_.divexact(content);
    g_ = g_.divexact(content);

    BigRat res = arithdyn::resultant(f_.to_q(), g_.to_q(), d_);
    if (res == 0) throw InputError("forms share a projective root (resultant 0)");
    res_ = res.get_num();

    const BezoutCofactors co = bezout_cofactors(f_.to_q(), g_.to_q(), d_);
    const BigRat kx = l1_norm(co.u_x) + l1_norm(co.v_x);
    const BigRat ky = l1_norm(co.u_y) + l1_norm(co.v_y);
    const double log_k = log_abs(kx > ky ? kx : ky);
    const double log_up = log_abs(std::max(l1_norm(f_), l1_norm(g_)));
    c_c_ = inflate(std::max({0.0, log_up, log_k}));
    c_q_ = inflate(std::max({0.0, log_up, log_k + log_abs(res_)}));
}

RationalMapQ RationalMapQ::power(int d) {
    std::vector<BigRat> f(static_cast<std::size_t>(d) + 1, BigRat(0));
    f.back() = 1;
    return {PolyQ(std::move(f)), PolyQ({1}), d};
}

RationalMapQ RationalMapQ::unicritical(int d, const BigRat& c) {
    std::vector<BigRat> f(static_cast<std::size_t>(d) + 1, BigRat(0));
    f.back() = 1;
    f.front() = c;
    return {PolyQ(std::move(f)), PolyQ({1}), d};
}

ApplyResult RationalMapQ::apply(const ProjPointQ& x) const {
    BigInt a = eval_form(f_, d_, x.a(), x.b());
    BigInt b = eval_form(g_, d_, x.a(), x.b());
    BigInt g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return {ProjPointQ(std::move(a), std::move(b)), g};
}

ProjPointQ apply(const RationalMapQ& f, const ProjPointQ& x) { return f.apply(x).image; }

double iteration_constant(const RationalMapQ& f) { return f.iteration_constant(); }

// ---------------------------------------------------------------------------

std::vector<BigInt> prime_factors(BigInt n) {
    n = abs(n);
    std::vector<BigInt> out;
    if (n <= 1) return out;
    for (unsigned long p = 2; p <= 1000000UL; p += (p == 2 ? 1 : 2)) {
        if (BigInt(p) * p > n) break;
        if (mpz_divisible_ui_p(n.get_mpz_t(), p)) {
            out.emplace_back(p);
            while (mpz_divisible_ui_p(n.get_mpz_t(), p)) mpz_divexact_ui(n.get_mpz_t(), n.get_mpz_t(), p);
        }
    }
    if (n > 1) {
        if (mpz_probab_prime_p(n.get_mpz_t(), 40) == 0) {
            throw ResourceError("cannot factor resultant cofactor " + n.get_str(), 0);
        }
        out.push_back(n);
    }
    return out;
}

double local_height_series_at_prime(const RationalMapQ& f, const ProjPointQ& x, const BigInt& p, int n) {
    if (n < 1) throw InputError("local height series needs n >= 1");
    if (p < 2) throw InputError("local height series needs a prime");
    const int vres = valuation(f.resultant(), p, std::numeric_limits<int>::max());
    if (vres == 0) return 0.0;
    int prec = n * vres + vres + 1;
    BigInt mod;
    mpz_pow_ui(mod.get_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(prec));
    BigInt a = x.a() % mod, b = x.b() % mod;
    const double logp = log_abs(p);
    const double d = f.degree();
    double weight = 1.0, sum = 0.0;
    for (int k = 1; k <= n; ++k) {
        weight /= d;
        BigInt fa = eval_form(f.f(), f.degree(), a, b) % mod;
        BigInt fb = eval_form(f.g(), f.degree(), a, b) % mod;
        const int e = std::min(valuation(fa, p, prec), valuation(fb, p, prec));
        if (e >= prec) throw NumericError("p-adic precision exhausted", 0.0);
        sum += weight * e * logp;
        if (e > 0) {
            BigInt pe;
            mpz_pow_ui(pe.get_mpz_t(), p.get_mpz_t(), static_cast<unsigned long>(e));
            mpz_divexact(fa.get_mpz_t(), fa.get_mpz_t(), pe.get_mpz_t());
            mpz_divexact(fb.get_mpz_t(), fb.get_mpz_t(), pe.get_mpz_t());
            prec -= e;
            mpz_divexact(mod.get_mpz_t(), mod.get_mpz_t(), pe.get_mpz_t());
        }
        a = fa % mod;
        b = fb % mod;
    }
    return sum;
}

// ---------------------------------------------------------------------------

ProjPointC::ProjPointC(Complex x, Complex y) {
    const double s = std::max(std::abs(x), std::abs(y));
    if (!(s > 0) || !std::isfinite(s)) throw InputError("projective point needs a finite nonzero lift");
    x_ = x / s;
    y_ = y / s;
}

namespace {

// Complex Gaussian elimination with partial pivoting.  Returns the
// determinant; `rhs` columns are overwritten with solutions when det != 0.
Complex solve_complex(std::vector<std::vector<Complex>> a, std::vector<std::vector<Complex>>& rhs) {
    const std::size_t n = a.size();
    Complex det = 1;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r) {
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        }
        if (a[piv][col] == Complex(0.0)) return 0;
        if (piv != col) {
            std::swap(a[piv], a[col]);
            for (auto& b : rhs) std::swap(b[piv], b[col]);
            det = -det;
        }
        det *= a[col][col];
        for (std::size_t r = col + 1; r < n; ++r) {
            const Complex f = a[r][col] / a[col][col];
            if (f == Complex(0.0)) continue;
            for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
            for (auto& b : rhs) b[r] -= f * b[col];
        }
    }
    for (auto& b : rhs) {
        for (std::size_t i = n; i-- > 0;) {
            Complex s = b[i];
            for (std::size_t c = i + 1; c < n; ++c) s -= a[i][c] * b[c];
            b[i] = s / a[i][i];
        }
    }
    return det;
}

}  // namespace

ComplexMap::ComplexMap(std::vector<Complex> f, std::vector<Complex> g, int degree, double floor)
    : f_(std::move(f)), g_(std::move(g)), d_(degree) {
    if (degree < 2) throw InputError("map degree must be at least 2");
    if (f_.size() > static_cast<std::size_t>(degree) + 1 || g_.size() > static_cast<std::size_t>(degree) + 1) {
        throw InputError("form exceeds the declared degree");
    }
    f_.resize(static_cast<std::size_t>(degree) + 1, 0.0);
    g_.resize(static_cast<std::size_t>(degree) + 1, 0.0);
    double nf = 0, ng = 0;
    for (auto c : f_) nf += std::abs(c);
    for (auto c : g_) ng += std::abs(c);
    if (!(nf > 0) || !(ng > 0)) throw InputError("degenerate complex map: a form vanishes");

    const std::size_t n = 2 * static_cast<std::size_t>(d_);
    std::vector<std::vector<Complex>> m(n, std::vector<Complex>(n, 0.0));
    for (int i = 0; i < d_; ++i) {
        for (int k = 0; k <= d_; ++k) {
            m[static_cast<std::size_t>(i + k)][static_cast<std::size_t>(i)] = f_[static_cast<std::size_t>(k)] / nf;
            m[static_cast<std::size_t>(i + k)][static_cast<std::size_t>(d_ + i)] = g_[static_cast<std::size_t>(k)] / ng;
        }
    }
    std::vector<std::vector<Complex>> rhs(2, std::vector<Complex>(n, 0.0));
    rhs[0].back() = 1;
    rhs[1].front() = 1;
    res_ratio_ = std::abs(solve_complex(m, rhs));
    if (!(res_ratio_ >= floor)) throw InputError("degenerate complex map: resultant below floor");
    double k = 0;
    for (const auto& sol : rhs) {
        double s = 0;
        for (int i = 0; i < d_; ++i) {
            s += std::abs(sol[static_cast<std::size_t>(i)]) / nf + std::abs(sol[static_cast<std::size_t>(d_ + i)]) / ng;
        }
        k = std::max(k, s);
    }
    c_ = std::max({0.0, std::log(std::max(nf, ng)), std::log(k)});
    c_ = c_ * (1 + 1e-9) + 1e-12;
}

ComplexMap ComplexMap::from(const RationalMapQ& f) {
    long top = std::numeric_limits<long>::min();
    for (const auto* form : {&f.f(), &f.g()}) {
        for (const auto& c : form->coeffs()) {
            if (c != 0) top = std::max(top, split_exponent(c).second);
        }
    }
    auto conv = [top](const PolyZ& p) {
        std::vector<Complex> out;
        for (const auto& c : p.coeffs()) {
            if (c == 0) {
                out.emplace_back(0.0);
                continue;
            }
            auto [m, e] = split_exponent(c);
            const long shift = e - top;
            out.emplace_back(shift < -1070 ? 0.0 : std::ldexp(m, static_cast<int>(shift)));
        }
        return out;
    };
    ComplexMap cm(conv(f.f()), conv(f.g()), f.degree());
    cm.offset_ = static_cast<double>(top) * std::numbers::ln2 / (f.degree() - 1);
    return cm;
}

std::pair<Complex, Complex> ComplexMap::operator()(Complex x, Complex y) const {
    Complex fx = f_[static_cast<std::size_t>(d_)], fy = g_[static_cast<std::size_t>(d_)];
    Complex ypow = 1;
    for (int i = d_ - 1; i >= 0; --i) {
        ypow *= y;
        fx = fx * x + f_[static_cast<std::size_t>(i)] * ypow;
        fy = fy * x + g_[static_cast<std::size_t>(i)] * ypow;
    }
    return {fx, fy};
}

EscapeEstimate escape_potential(const ComplexMap& f, Complex x, Complex y, double tol) {
    if (!(tol > 0)) throw InputError("escape rate needs tol > 0");
    const double s0 = std::max(std::abs(x), std::abs(y));
    if (!(s0 > 0) || !std::isfinite(s0)) throw InputError("escape rate needs a finite nonzero lift");
    const double d = f.degree();
    const double c = f.constant();
    int n = 1;
    double tail = c / (d * (d - 1));
    while (tail > tol && n < 4000) {
        tail /= d;
        ++n;
    }
    double value = std::log(s0);
    double err = 4 * kEps * std::abs(value);
    x /= s0;
    y /= s0;
    double weight = 1.0;
    for (int k = 0; k < n; ++k) {
        weight /= d;
        auto [fx, fy] = f(x, y);
        const double s = std::max(std::abs(fx), std::abs(fy));
        const double ls = std::log(s);
        value += weight * ls;
        err += weight * 8 * kEps * (std::abs(ls) + 1);
        x = fx / s;
        y = fy / s;
    }
    return {value + f.potential_offset(), tail + err, n};
}

EscapeEstimate archimedean_escape_rate(const ComplexMap& f, const ProjPointC& z, double tol) {
    if (z.y() == Complex(0.0)) return escape_potential(f, 1.0, 0.0, tol);
    EscapeEstimate e = escape_potential(f, z.x(), z.y(), tol);
    e.value -= std::log(std::abs(z.y()));
    return e;
}

// ---------------------------------------------------------------------------

HeightCertificate height_correction(const RationalMapQ& f, const ProjPointQ& y, double target) {
    if (!(target > 0)) throw InputError("height correction needs a positive target");
    const auto primes = prime_factors(f.resultant());
    const double d = f.degree();
    const ComplexMap fc = ComplexMap::from(f);

    // unit lift of y
    const long ea = y.a() == 0 ? std::numeric_limits<long>::min() : split_exponent(y.a()).second;
    const long eb = y.b() == 0 ? std::numeric_limits<long>::min() : split_exponent(y.b()).second;
    const long top = std::max(ea, eb);
    auto scaled = [top](const BigInt& v) {
        if (v == 0) return 0.0;
        auto [m, e] = split_exponent(v);
        return std::ldexp(m, static_cast<int>(std::max<long>(e - top, -1070)));
    };
    const ProjPointC u(scaled(y.a()), scaled(y.b()));
    const double share = target / (2.0 * static_cast<double>(primes.size() + 1));
    const EscapeEstimate arch = escape_potential(fc, u.x(), u.y(), share);

    HeightCertificate out;
    out.value = arch.value;
    out.radius = arch.radius;
    for (const auto& p : primes) {
        const int vres = valuation(f.resultant(), p, std::numeric_limits<int>::max());
        const double bound = vres * log_abs(p);
        int n = 1;
        double tail = bound / (d * (d - 1));
        while (tail > share && n < 4000) {
            tail /= d;
            ++n;
        }
        out.value -= local_height_series_at_prime(f, y, p, n);
        out.radius += tail + 4 * kEps * bound;
    }
    out.n_used = arch.n_used;
    return out;
}

HeightCertificate canonical_height(const RationalMapQ& f, const ProjPointQ& x, double tol, const HeightOptions& opts) {
    if (!(tol > 0)) throw InputError("canonical height needs tol > 0");
    const double c = f.iteration_constant();
    if (c == 0) return {naive_height(x), 0.0, 0};
    const double d = f.degree();
    double scale = 1.0;  // d^-n
    double tail = c / (d - 1);
    ProjPointQ y = x;
    int n = 0;
    while (tail > tol && n < opts.max_steps && y.bits() <= opts.bit_budget) {
        y = f.apply(y).image;
        ++n;
        scale /= d;
        tail /= d;
    }
    if (tail <= tol) {
        const double v = naive_height(y) * scale;
        return {v, tail, n};
    }
    const HeightCertificate corr = height_correction(f, y, tol / scale);
    return {(naive_height(y) + corr.value) * scale, corr.radius * scale, n};
}

PreperiodicDecision is_preperiodic(const RationalMapQ& f, const ProjPointQ& x, int orbit_cap) {
    if (orbit_cap < 1) throw InputError("orbit cap must be at least 1");
    const double bound = f.iteration_constant() / (f.degree() - 1) + 1e-9;
    std::unordered_map<std::size_t, std::vector<std::pair<ProjPointQ, int>>> seen;
    auto key = [](const ProjPointQ& p) {
        std::size_t h = mpz_size(p.b().get_mpz_t());
        const auto mix = [&h](mpz_srcptr z) {
            const std::size_t limbs = mpz_size(z);
            for (std::size_t i = 0; i < limbs && i < 4; ++i) h = h * 1000003u ^ mpz_getlimbn(z, static_cast<mp_size_t>(i));
            h = h * 31u + static_cast<std::size_t>(mpz_sgn(z) + 1);
        };
        mix(p.a().get_mpz_t());
        mix(p.b().get_mpz_t());
        return h;
    };
    ProjPointQ y = x;
    for (int k = 0; k <= orbit_cap; ++k) {
        auto& bucket = seen[key(y)];
        for (const auto& [pt, idx] : bucket) {
            if (pt == y) return Preperiodic{k - idx, idx};
        }
        bucket.emplace_back(y, k);
        if (naive_height(y) > bound) break;  // preperiodic orbits stay below C/(d-1)
        y = f.apply(y).image;
    }
    for (double tol : {1e-3, 1e-6, 1e-9}) {
        try {
            const HeightCertificate cert = canonical_height(f, x, tol);
            if (cert.value - cert.radius > 0) return NotPreperiodic{cert};
        } catch (const ResourceError&) {
            break;
        }
    }
    return Undecided{};
}

}  // namespace arithdyn
