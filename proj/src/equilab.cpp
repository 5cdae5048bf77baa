#include "arithdyn/equilab.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>

#include "arithdyn/errors.hpp"

namespace arithdyn {

GridMeasure normalized(const GridMeasure& m) {
    if (!(m.total_mass > 0)) throw InputError("cannot normalize a grid measure of mass <= 0");
    GridMeasure out = m;
    for (auto& w : out.weights) w /= m.total_mass;
    out.total_mass = 1.0;
    out.clipped_total /= m.total_mass;
    return out;
}

PairingResult pairing_gap(const std::vector<Complex>& points, const GridMeasure& nm, const TestFunction& phi) {
    PairingResult r;
    r.grid_integral = integrate_test_function(nm, phi);
    const GridSpec& s = nm.spec;
    double sum = 0;
    for (const auto& z : points) {
        sum += phi(z);
        if (z.real() < s.x_min || z.real() > s.x_max || z.imag() < s.y_min || z.imag() > s.y_max) ++r.outside;
    }
    r.root_average = points.empty() ? 0.0 : sum / static_cast<double>(points.size());
    r.gap = std::abs(r.root_average - r.grid_integral);
    return r;
}

PairingResult pairing_gap(const RootSet& rs, const GridMeasure& nm, const TestFunction& phi) {
    std::vector<Complex> pts;
    for (const auto& r : rs.points) pts.push_back(r.z);
    return pairing_gap(pts, nm, phi);
}

double log_abs_poly(const PolyZ& p, Complex s) {
    if (p.degree() < 1) throw InputError("log_abs_poly needs degree >= 1");
    const int deg = p.degree();
    const double top = std::max(std::abs(s.real()), std::abs(s.imag()));
    long k = 0;
    if (top > 0) k = std::max(0L, 52L - static_cast<long>(std::ilogb(top)));
    const BigInt a(std::ldexp(s.real(), static_cast<int>(k))), b(std::ldexp(s.imag(), static_cast<int>(k)));
    BigInt vr = p.coeffs().back(), vi = 0, tr, ti, c;
    for (int j = deg - 1; j >= 0; --j) {
        // (vr + i vi)(a + i b) + c_j 2^(k (deg - j))
        tr = vr * a - vi * b;
        ti = vr * b + vi * a;
        mpz_mul_2exp(c.get_mpz_t(), p.coeffs()[static_cast<std::size_t>(j)].get_mpz_t(),
                     static_cast<mp_bitcnt_t>(k * (deg - j)));
        vr = tr + c;
        vi = std::move(ti);
    }
    const BigInt norm = vr * vr + vi * vi;
    if (norm == 0) return -std::numeric_limits<double>::infinity();
    // norm = m 2^e; the dyadic scale 2^(2kD) is removed from e exactly
    long e = 0;
    const double m = mpz_get_d_2exp(&e, norm.get_mpz_t());
    return 0.5 * (std::log(m) + static_cast<double>(e - 2 * k * deg) * std::log(2.0)) / deg;
}

std::vector<ProbeGap> potential_gap(const PolyZ& p, const std::vector<Complex>& roots,
                                    const std::vector<Complex>& probes,
                                    const std::function<double(Complex)>& g, double mass) {
    if (p.degree() < 1) throw InputError("potential_gap needs a polynomial of degree >= 1");
    std::vector<ProbeGap> out(probes.size());
    for (std::size_t i = 0; i < probes.size(); ++i) {
        out[i].probe = probes[i];
        for (const auto& r : roots) {
            if (std::abs(r - probes[i]) < kProbeGuard) out[i].flagged = true;
        }
        if (out[i].flagged) {
            out[i].gap = std::numeric_limits<double>::quiet_NaN();
            continue;
        }
        out[i].gap = std::abs(log_abs_poly(p, probes[i]) - g(probes[i]) / mass);
    }
    return out;
}

std::vector<ProbeGap> potential_gap(const RootSet& rs, const std::vector<Complex>& probes, double tol) {
    if (!rs.source) throw InputError("root set has no source polynomial");
    const PreperPoly& src = *rs.source;
    double dn = 1;
    for (int i = 0; i < src.n; ++i) dn *= src.family.degree();
    const double mass = src.degree() / dn;
    std::vector<Complex> roots;
    for (const auto& r : rs.points) roots.push_back(r.z);
    auto g = [&](Complex s) {
        const PotentialSample v = parametric_potential(src.family, s, tol);
        return v.flagged ? std::numeric_limits<double>::quiet_NaN() : v.value;
    };
    return potential_gap(src.poly, roots, probes, g, mass);
}

ConvergenceReport run_experiment(const ExperimentConfig& cfg) {
    ConvergenceReport rep;
    rep.family = cfg.family.name();
    rep.probes = cfg.probes;
    if (cfg.n_min > cfg.n_max) return rep;
    using Kind = ConvergenceReport::ErrorKind;
    std::string stage;
    try {
        // grid is built on first use so structural failures of the family surface first
        std::optional<GridMeasure> nm;
        for (int n = cfg.n_min; n <= cfg.n_max; ++n) {
            const auto t0 = std::chrono::steady_clock::now();
            ReportRow row;
            row.n = n;
            stage = "preper_poly(n=" + std::to_string(n) + ")";
            const PreperPoly p = preper_poly(cfg.family, n, cfg.m);
            stage = "root_set(n=" + std::to_string(n) + ")";
            const RootSet rs = root_set(p, cfg.root_tol, cfg.seed);
            row.count = rs.size();
            row.repeated = rs.repeated;
            stage = "certify_small(n=" + std::to_string(n) + ")";
            row.certified = certify_small(cfg.family, rs).fraction_certified();
            if (!nm) {
                stage = "grid";
                const auto measure = laplacian_measure(potential_grid(cfg.family, cfg.grid, cfg.grid_tol));
                rep.grid_mass = measure.total_mass;
                nm = normalized(measure);
            }
            stage = "pairing_gap(n=" + std::to_string(n) + ")";
            row.pairing = pairing_gap(rs, *nm, cfg.phi);
            stage = "potential_gap(n=" + std::to_string(n) + ")";
            row.potential = potential_gap(rs, cfg.probes);
            row.runtime = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            rep.rows.push_back(std::move(row));
        }
    } catch (const StructuralError& e) {
        rep.error = stage + ": " + e.what();
        rep.error_kind = Kind::Structural;
    } catch (const ResourceError& e) {
        rep.error = stage + ": " + e.what();
        rep.error_kind = Kind::Resource;
    } catch (const NumericError& e) {
        rep.error = stage + ": " + e.what();
        rep.error_kind = Kind::Numeric;
    } catch (const DegenerateParameter& e) {
        rep.error = stage + ": " + e.what();
        rep.error_kind = Kind::Degenerate;
    } catch (const InputError& e) {
        rep.error = stage + ": " + e.what();
        rep.error_kind = Kind::Input;
    }
    return rep;
}

namespace {

std::string num(double v) {
    if (std::isnan(v)) return "flagged";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string probe_label(Complex z) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%g%+gi", z.real(), z.imag());
    return buf;
}

}  // namespace

void write_report_csv(std::ostream& out, const ConvergenceReport& r) {
    out << "n,count,repeated,certified,pairing_gap,outside";
    for (const auto& p : r.probes) out << ",potential_gap@" << probe_label(p);
    out << "\n";
    for (const auto& row : r.rows) {
        out << row.n << "," << row.count << "," << row.repeated << "," << num(row.certified) << ","
            << num(row.pairing.gap) << "," << row.pairing.outside;
        for (const auto& g : row.potential) out << "," << num(g.gap);
        out << "\n";
    }
}

void write_report_table(std::ostream& out, const ConvergenceReport& r) {
    out << "# family: " << r.family << "\n";
    out << "# F_n are full root sets; genericity (o(#F_n) points on any fixed hypersurface) is not verified,\n"
           "# so agreement below shows consistency with equidistribution, not a proof of it.\n";
    char buf[256];
    std::snprintf(buf, sizeof buf, "# grid mass before normalization: %.6f\n", r.grid_mass);
    out << buf;
    std::snprintf(buf, sizeof buf, "%4s %8s %9s %12s", "n", "#F_n", "certified", "pairing");
    out << buf;
    for (const auto& p : r.probes) {
        std::snprintf(buf, sizeof buf, " %14s", ("pot@" + probe_label(p)).c_str());
        out << buf;
    }
    out << "  runtime_s\n";
    for (const auto& row : r.rows) {
        std::snprintf(buf, sizeof buf, "%4d %8zu %9.4f %12.4e", row.n, row.count, row.certified, row.pairing.gap);
        out << buf;
        for (const auto& g : row.potential) {
            std::snprintf(buf, sizeof buf, " %14.4e", g.gap);
            out << buf;
        }
        std::snprintf(buf, sizeof buf, "  %9.2f\n", row.runtime);
        out << buf;
    }
    if (r.error) out << "# error: " << *r.error << "\n";
}

}  // namespace arithdyn
