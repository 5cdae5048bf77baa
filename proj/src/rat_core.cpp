#include "arithdyn/rat_core.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "arithdyn/errors.hpp"

namespace arithdyn {

namespace {

bool parse_integer(std::string_view s, BigInt& out) {
    if (s.empty()) return false;
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i == s.size()) return false;
    for (std::size_t j = i; j < s.size(); ++j) {
        if (s[j] < '0' || s[j] > '9') return false;
    }
    std::string digits(s.substr(s[0] == '+' ? 1 : 0));
    return out.set_str(digits, 10) == 0;
}

std::string_view strip(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
}

}  // namespace

BigRat parse_rational(std::string_view text) {
    text = strip(text);
    BigInt num, den = 1;
    auto slash = text.find('/');
    if (slash == std::string_view::npos) {
        if (!parse_integer(text, num)) throw InputError("malformed rational '" + std::string(text) + "'");
    } else {
        if (!parse_integer(strip(text.substr(0, slash)), num) ||
            !parse_integer(strip(text.substr(slash + 1)), den)) {
            throw InputError("malformed rational '" + std::string(text) + "'");
        }
        if (den == 0) throw InputError("zero denominator in '" + std::string(text) + "'");
    }
    BigRat r(num, den);
    r.canonicalize();
    return r;
}

std::string to_string(const BigRat& r) {
    if (r.get_den() == 1) return r.get_num().get_str();
    return r.get_num().get_str() + "/" + r.get_den().get_str();
}

std::pair<double, long> split_exponent(const BigInt& x) {
    long e = 0;
    double m = mpz_get_d_2exp(&e, x.get_mpz_t());
    return {m, e};
}

double log_abs(const BigInt& x) {
    if (x == 0) return -std::numeric_limits<double>::infinity();
    auto [m, e] = split_exponent(x);
    return std::log(std::abs(m)) + static_cast<double>(e) * std::numbers::ln2;
}

double log_abs(const BigRat& x) { return log_abs(x.get_num()) - log_abs(x.get_den()); }

// ---------------------------------------------------------------------------
// PolyZ

PolyZ::PolyZ(std::vector<BigInt> coeffs) : c_(std::move(coeffs)) { trim(); }

PolyZ PolyZ::constant(const BigInt& c) { return PolyZ({c}); }

PolyZ PolyZ::monomial(const BigInt& c, int degree) {
    std::vector<BigInt> v(static_cast<std::size_t>(degree) + 1, BigInt(0));
    v.back() = c;
    return PolyZ(std::move(v));
}

void PolyZ::trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

BigInt PolyZ::coeff(int i) const {
    if (i < 0 || i > degree()) return 0;
    return c_[static_cast<std::size_t>(i)];
}

PolyZ PolyZ::operator+(const PolyZ& o) const {
    std::vector<BigInt> r(std::max(c_.size(), o.c_.size()), BigInt(0));
    for (std::size_t i = 0; i < c_.size(); ++i) r[i] = c_[i];
    for (std::size_t i = 0; i < o.c_.size(); ++i) r[i] += o.c_[i];
    return PolyZ(std::move(r));
}

PolyZ PolyZ::operator-() const {
    std::vector<BigInt> r(c_);
    for (auto& x : r) x = -x;
    return PolyZ(std::move(r));
}

PolyZ PolyZ::operator-(const PolyZ& o) const { return *this + (-o); }

PolyZ PolyZ::operator*(const PolyZ& o) const {
    if (is_zero() || o.is_zero()) return {};
    std::vector<BigInt> r(c_.size() + o.c_.size() - 1, BigInt(0));
    for (std::size_t i = 0; i < c_.size(); ++i) {
        if (c_[i] == 0) continue;
        mpz_srcptr a = c_[i].get_mpz_t();
        for (std::size_t j = 0; j < o.c_.size(); ++j) {
            mpz_addmul(r[i + j].get_mpz_t(), a, o.c_[j].get_mpz_t());
        }
    }
    return PolyZ(std::move(r));
}

PolyZ PolyZ::operator*(const BigInt& s) const {
    std::vector<BigInt> r(c_);
    for (auto& x : r) x *= s;
    return PolyZ(std::move(r));
}

PolyZ PolyZ::derivative() const {
    if (c_.size() <= 1) return {};
    std::vector<BigInt> r(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i) r[i - 1] = c_[i] * static_cast<unsigned long>(i);
    return PolyZ(std::move(r));
}

BigInt PolyZ::content() const {
    BigInt g = 0;
    for (const auto& x : c_) {
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), x.get_mpz_t());
        if (g == 1) break;
    }
    return g;
}

PolyZ PolyZ::divexact(const BigInt& s) const {
    std::vector<BigInt> r(c_);
    for (auto& x : r) mpz_divexact(x.get_mpz_t(), x.get_mpz_t(), s.get_mpz_t());
    return PolyZ(std::move(r));
}

PolyZ PolyZ::primitive() const {
    if (is_zero()) return {};
    BigInt g = content();
    if (lead() < 0) g = -g;
    return divexact(g);
}

PolyZ PolyZ::exact_div(const PolyZ& divisor) const {
    if (divisor.is_zero()) throw InputError("division by the zero polynomial");
    if (is_zero()) return {};
    if (divisor.degree() > degree()) throw InputError("inexact polynomial division");
    std::vector<BigInt> rem(c_);
    const int dd = divisor.degree();
    std::vector<BigInt> q(static_cast<std::size_t>(degree() - dd) + 1);
    BigInt r;
    for (int k = degree() - dd; k >= 0; --k) {
        auto& top = rem[static_cast<std::size_t>(k + dd)];
        mpz_tdiv_qr(q[static_cast<std::size_t>(k)].get_mpz_t(), r.get_mpz_t(), top.get_mpz_t(),
                    divisor.lead().get_mpz_t());
        if (r != 0) throw InputError("inexact polynomial division");
        const auto& qk = q[static_cast<std::size_t>(k)];
        if (qk == 0) continue;
        for (int j = 0; j <= dd; ++j) {
            mpz_submul(rem[static_cast<std::size_t>(k + j)].get_mpz_t(), qk.get_mpz_t(),
                       divisor.c_[static_cast<std::size_t>(j)].get_mpz_t());
        }
    }
    for (int i = 0; i < dd; ++i) {
        if (rem[static_cast<std::size_t>(i)] != 0) throw InputError("inexact polynomial division");
    }
    return PolyZ(std::move(q));
}

BigInt PolyZ::eval_homogeneous(const BigInt& num, const BigInt& den) const {
    if (is_zero()) return 0;
    // Horner on the homogenized polynomial: v <- v*num + c_k * den^(deg-k)
    BigInt v = c_.back();
    BigInt den_pow = 1;
    for (int k = degree() - 1; k >= 0; --k) {
        den_pow *= den;
        v *= num;
        mpz_addmul(v.get_mpz_t(), c_[static_cast<std::size_t>(k)].get_mpz_t(), den_pow.get_mpz_t());
    }
    return v;
}

BigRat PolyZ::eval(const BigRat& t) const {
    if (is_zero()) return 0;
    BigInt den_pow;
    mpz_pow_ui(den_pow.get_mpz_t(), t.get_den().get_mpz_t(), static_cast<unsigned long>(degree()));
    BigRat r(eval_homogeneous(t.get_num(), t.get_den()), den_pow);
    r.canonicalize();
    return r;
}

PolyQ PolyZ::to_q() const {
    std::vector<BigRat> r(c_.begin(), c_.end());
    return PolyQ(std::move(r));
}

PolyZ pseudo_remainder(const PolyZ& a, const PolyZ& b) {
    if (b.is_zero()) throw InputError("pseudo-remainder by the zero polynomial");
    std::vector<BigInt> r(a.coeffs());
    const int db = b.degree();
    const BigInt& lb = b.lead();
    int dr = static_cast<int>(r.size()) - 1;
    while (dr >= db) {
        BigInt lr = r[static_cast<std::size_t>(dr)];
        for (auto& x : r) x *= lb;
        const int shift = dr - db;
        for (int j = 0; j <= db; ++j) {
            mpz_submul(r[static_cast<std::size_t>(shift + j)].get_mpz_t(), lr.get_mpz_t(),
                       b.coeffs()[static_cast<std::size_t>(j)].get_mpz_t());
        }
        while (!r.empty() && r.back() == 0) r.pop_back();
        dr = static_cast<int>(r.size()) - 1;
    }
    return PolyZ(std::move(r));
}

namespace {

constexpr std::uint64_t kPrimes[] = {2147483647ULL, 2147483629ULL, 2147483587ULL, 2147483579ULL};

std::uint64_t pow_mod(std::uint64_t b, std::uint64_t e, std::uint64_t p) {
    std::uint64_t r = 1;
    b %= p;
    while (e) {
        if (e & 1) r = r * b % p;
        b = b * b % p;
        e >>= 1;
    }
    return r;
}

std::vector<std::uint64_t> reduce_mod(const PolyZ& a, std::uint64_t p) {
    std::vector<std::uint64_t> r(a.coeffs().size());
    for (std::size_t i = 0; i < r.size(); ++i) {
        r[i] = mpz_fdiv_ui(a.coeffs()[i].get_mpz_t(), static_cast<unsigned long>(p));
    }
    while (!r.empty() && r.back() == 0) r.pop_back();
    return r;
}

int gcd_degree_mod(std::vector<std::uint64_t> a, std::vector<std::uint64_t> b, std::uint64_t p) {
    if (a.size() < b.size()) std::swap(a, b);
    while (!b.empty()) {
        const std::uint64_t inv = pow_mod(b.back(), p - 2, p);
        const std::size_t db = b.size() - 1;
        while (a.size() >= b.size()) {
            const std::uint64_t f = a.back() * inv % p;
            const std::size_t shift = a.size() - 1 - db;
            for (std::size_t j = 0; j <= db; ++j) {
                a[shift + j] = (a[shift + j] + p - f * b[j] % p) % p;
            }
            while (!a.empty() && a.back() == 0) a.pop_back();
        }
        std::swap(a, b);
    }
    return static_cast<int>(a.size()) - 1;
}

}  // namespace

int modular_gcd_degree_bound(const PolyZ& a, const PolyZ& b) {
    int best = std::min(a.degree(), b.degree());
    for (std::uint64_t p : kPrimes) {
        if (mpz_fdiv_ui(a.lead().get_mpz_t(), static_cast<unsigned long>(p)) == 0) continue;
        if (mpz_fdiv_ui(b.lead().get_mpz_t(), static_cast<unsigned long>(p)) == 0) continue;
        best = std::min(best, gcd_degree_mod(reduce_mod(a, p), reduce_mod(b, p), p));
        if (best == 0) break;
    }
    return best;
}

PolyZ gcd(const PolyZ& a, const PolyZ& b) {
    if (a.is_zero()) return b.primitive();
    if (b.is_zero()) return a.primitive();
    if (a.degree() == 0 || b.degree() == 0) return PolyZ::constant(1);
    if (modular_gcd_degree_bound(a, b) == 0) return PolyZ::constant(1);
    // primitive pseudo-remainder sequence
    PolyZ x = a.primitive(), y = b.primitive();
    if (x.degree() < y.degree()) std::swap(x, y);
    while (!y.is_zero()) {
        PolyZ r = pseudo_remainder(x, y);
        x = std::move(y);
        y = r.primitive();
    }
    return x.primitive();
}

// ---------------------------------------------------------------------------
// PolyQ

PolyQ::PolyQ(std::vector<BigRat> coeffs) : c_(std::move(coeffs)) {
    for (auto& x : c_) x.canonicalize();
    trim();
}

PolyQ::PolyQ(std::initializer_list<long> coeffs) {
    for (long v : coeffs) c_.emplace_back(v);
    trim();
}

PolyQ PolyQ::constant(const BigRat& c) { return PolyQ(std::vector<BigRat>{c}); }
PolyQ PolyQ::x() { return PolyQ({0, 1}); }

void PolyQ::trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

BigRat PolyQ::coeff(int i) const {
    if (i < 0 || i > degree()) return 0;
    return c_[static_cast<std::size_t>(i)];
}

PolyQ PolyQ::operator+(const PolyQ& o) const {
    std::vector<BigRat> r(std::max(c_.size(), o.c_.size()), BigRat(0));
    for (std::size_t i = 0; i < c_.size(); ++i) r[i] = c_[i];
    for (std::size_t i = 0; i < o.c_.size(); ++i) r[i] += o.c_[i];
    return PolyQ(std::move(r));
}

PolyQ PolyQ::operator-() const {
    std::vector<BigRat> r(c_);
    for (auto& x : r) x = -x;
    return PolyQ(std::move(r));
}

PolyQ PolyQ::operator-(const PolyQ& o) const { return *this + (-o); }

PolyQ PolyQ::operator*(const PolyQ& o) const {
    if (is_zero() || o.is_zero()) return {};
    std::vector<BigRat> r(c_.size() + o.c_.size() - 1, BigRat(0));
    for (std::size_t i = 0; i < c_.size(); ++i) {
        if (c_[i] == 0) continue;
        for (std::size_t j = 0; j < o.c_.size(); ++j) r[i + j] += c_[i] * o.c_[j];
    }
    return PolyQ(std::move(r));
}

PolyQ PolyQ::operator*(const BigRat& s) const {
    std::vector<BigRat> r(c_);
    for (auto& x : r) x *= s;
    return PolyQ(std::move(r));
}

PolyQ PolyQ::derivative() const {
    if (c_.size() <= 1) return {};
    std::vector<BigRat> r(c_.size() - 1);
    for (std::size_t i = 1; i < c_.size(); ++i) r[i - 1] = c_[i] * static_cast<unsigned long>(i);
    return PolyQ(std::move(r));
}

BigRat PolyQ::eval(const BigRat& t) const {
    BigRat v = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) v = v * t + *it;
    return v;
}

Complex PolyQ::eval(Complex t) const {
    Complex v = 0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) v = v * t + it->get_d();
    return v;
}

std::pair<PolyQ, PolyQ> PolyQ::divmod(const PolyQ& divisor) const {
    if (divisor.is_zero()) throw InputError("division by the zero polynomial");
    std::vector<BigRat> rem(c_);
    const int dd = divisor.degree();
    if (degree() < dd) return {PolyQ{}, *this};
    std::vector<BigRat> q(static_cast<std::size_t>(degree() - dd) + 1, BigRat(0));
    for (int k = degree() - dd; k >= 0; --k) {
        BigRat f = rem[static_cast<std::size_t>(k + dd)] / divisor.lead();
        q[static_cast<std::size_t>(k)] = f;
        if (f == 0) continue;
        for (int j = 0; j <= dd; ++j) {
            rem[static_cast<std::size_t>(k + j)] -= f * divisor.c_[static_cast<std::size_t>(j)];
        }
    }
    rem.resize(static_cast<std::size_t>(dd));
    return {PolyQ(std::move(q)), PolyQ(std::move(rem))};
}

BigInt PolyQ::denominator_lcm() const {
    BigInt l = 1;
    for (const auto& x : c_) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), x.get_den().get_mpz_t());
    return l;
}

PolyZ PolyQ::primitive() const {
    const BigInt l = denominator_lcm();
    std::vector<BigInt> r(c_.size());
    for (std::size_t i = 0; i < c_.size(); ++i) {
        BigInt tmp;
        mpz_divexact(tmp.get_mpz_t(), l.get_mpz_t(), c_[i].get_den().get_mpz_t());
        r[i] = c_[i].get_num() * tmp;
    }
    return PolyZ(std::move(r)).primitive();
}

PolyQ gcd(const PolyQ& a, const PolyQ& b) { return gcd(a.primitive(), b.primitive()).to_q(); }

PolyQ squarefree_part(const PolyQ& p) {
    if (p.is_zero()) throw InputError("squarefree part of the zero polynomial");
    PolyZ pz = p.primitive();
    if (pz.degree() <= 0) return PolyQ({1});
    PolyZ g = gcd(pz, pz.derivative());
    return pz.exact_div(g).primitive().to_q();
}

// ---------------------------------------------------------------------------
// Linear algebra over Q

BigRat determinant(MatrixQ m) {
    const std::size_t n = m.size();
    BigRat det = 1;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && m[piv][col] == 0) ++piv;
        if (piv == n) return 0;
        if (piv != col) {
            std::swap(m[piv], m[col]);
            det = -det;
        }
        det *= m[col][col];
        for (std::size_t r = col + 1; r < n; ++r) {
            if (m[r][col] == 0) continue;
            BigRat f = m[r][col] / m[col][col];
            for (std::size_t c = col; c < n; ++c) m[r][c] -= f * m[col][c];
        }
    }
    return det;
}

std::vector<BigRat> solve_exact(MatrixQ a, std::vector<BigRat> b) {
    const std::size_t n = a.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && a[piv][col] == 0) ++piv;
        if (piv == n) throw InputError("singular linear system");
        std::swap(a[piv], a[col]);
        std::swap(b[piv], b[col]);
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col || a[r][col] == 0) continue;
            BigRat f = a[r][col] / a[col][col];
            for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
            b[r] -= f * b[col];
        }
    }
    for (std::size_t i = 0; i < n; ++i) b[i] /= a[i][i];
    return b;
}

namespace {

void check_form(const PolyQ& f, int degree) {
    if (degree < 1) throw InputError("binary form degree must be at least 1");
    if (f.degree() > degree) throw InputError("binary form exceeds its declared degree");
}

// Columns: u_0..u_{d-1}, v_0..v_{d-1}; rows: coefficient of x^j, j = 0..2d-1.
MatrixQ sylvester_system(const PolyQ& f, const PolyQ& g, int d) {
    const std::size_t n = 2 * static_cast<std::size_t>(d);
    MatrixQ m(n, std::vector<BigRat>(n, BigRat(0)));
    for (int i = 0; i < d; ++i) {
        for (int k = 0; k <= d; ++k) {
            m[static_cast<std::size_t>(i + k)][static_cast<std::size_t>(i)] = f.coeff(k);
            m[static_cast<std::size_t>(i + k)][static_cast<std::size_t>(d + i)] = g.coeff(k);
        }
    }
    return m;
}

}  // namespace

BigRat resultant(const PolyQ& f, const PolyQ& g, int degree) {
    check_form(f, degree);
    check_form(g, degree);
    // Classical Sylvester matrix: d rows of f's coefficients (x^d first), d rows of g's.
    const int d = degree;
    const std::size_t n = 2 * static_cast<std::size_t>(d);
    MatrixQ m(n, std::vector<BigRat>(n, BigRat(0)));
    for (int r = 0; r < d; ++r) {
        for (int k = 0; k <= d; ++k) {
            m[static_cast<std::size_t>(r)][static_cast<std::size_t>(r + k)] = f.coeff(d - k);
            m[static_cast<std::size_t>(d + r)][static_cast<std::size_t>(r + k)] = g.coeff(d - k);
        }
    }
    return determinant(std::move(m));
}

BezoutCofactors bezout_cofactors(const PolyQ& f, const PolyQ& g, int degree) {
    check_form(f, degree);
    check_form(g, degree);
    const int d = degree;
    const std::size_t n = 2 * static_cast<std::size_t>(d);
    MatrixQ m = sylvester_system(f, g, d);
    if (determinant(m) == 0) throw InputError("forms share a projective root");
    auto split = [d](const std::vector<BigRat>& sol) {
        std::vector<BigRat> u(sol.begin(), sol.begin() + d), v(sol.begin() + d, sol.end());
        return std::pair{PolyQ(std::move(u)), PolyQ(std::move(v))};
    };
    std::vector<BigRat> ex(n, BigRat(0)), ey(n, BigRat(0));
    ex.back() = 1;
    ey.front() = 1;
    auto [ux, vx] = split(solve_exact(m, std::move(ex)));
    auto [uy, vy] = split(solve_exact(std::move(m), std::move(ey)));
    return {ux, vx, uy, vy};
}

// ---------------------------------------------------------------------------
// PolyC

PolyC::PolyC(std::vector<Complex> coeffs, int var_scale_exp) : c_(std::move(coeffs)), scale_exp_(var_scale_exp) {
    while (!c_.empty() && c_.back() == Complex(0.0)) c_.pop_back();
}

PolyC::Value PolyC::eval_scaled(Complex u) const {
    Complex p = 0, dp = 0;
    double s = 0;
    const double au = std::max(1.0, std::abs(u));
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
        dp = dp * u + p;
        p = p * u + *it;
        s = s * au + std::abs(*it);
    }
    return {p, dp, s};
}

PolyC to_complex(const PolyQ& p) {
    if (p.is_zero()) return PolyC{};
    struct Split {
        double m;
        long e;
    };
    std::vector<Split> parts(static_cast<std::size_t>(p.degree()) + 1, {0.0, 0});
    long emax = std::numeric_limits<long>::min(), emin = std::numeric_limits<long>::max();
    int klow = -1;
    for (int k = 0; k <= p.degree(); ++k) {
        const BigRat& c = p.coeffs()[static_cast<std::size_t>(k)];
        if (c == 0) continue;
        auto [mn, en] = split_exponent(c.get_num());
        auto [md, ed] = split_exponent(c.get_den());
        parts[static_cast<std::size_t>(k)] = {mn / md, en - ed};
        emax = std::max(emax, en - ed);
        emin = std::min(emin, en - ed);
        if (klow < 0) klow = k;
    }
    int s = 0;
    const int deg = p.degree();
    if (emax - emin > 1800 && deg > klow) {
        const double slope = static_cast<double>(parts[static_cast<std::size_t>(klow)].e -
                                                 parts[static_cast<std::size_t>(deg)].e) /
                             static_cast<double>(deg - klow);
        s = static_cast<int>(std::lround(slope));
    }
    long top = std::numeric_limits<long>::min();
    for (int k = 0; k <= deg; ++k) {
        if (parts[static_cast<std::size_t>(k)].m == 0.0) continue;
        top = std::max(top, parts[static_cast<std::size_t>(k)].e + static_cast<long>(s) * k);
    }
    std::vector<Complex> c(static_cast<std::size_t>(deg) + 1, Complex(0.0));
    for (int k = 0; k <= deg; ++k) {
        const auto& pk = parts[static_cast<std::size_t>(k)];
        if (pk.m == 0.0) continue;
        const long e = pk.e + static_cast<long>(s) * k - top;
        c[static_cast<std::size_t>(k)] = e < -1100 ? 0.0 : std::ldexp(pk.m, static_cast<int>(e));
    }
    return PolyC(std::move(c), s);
}

}  // namespace arithdyn
