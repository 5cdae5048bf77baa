#include "arithdyn/bifurcation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "arithdyn/errors.hpp"

namespace arithdyn {

void GridSpec::validate() const {
    if (!(x_min < x_max) || !(y_min < y_max)) throw InputError("grid box is empty");
    if (nx < 16 || ny < 16) throw InputError("grid needs at least 16 nodes per axis");
    const double hx = (x_max - x_min) / (nx - 1), hy = (y_max - y_min) / (ny - 1);
    if (std::abs(hx - hy) > 1e-12 * std::max(hx, hy)) {
        throw InputError("grid cells must be square (h_x = " + std::to_string(hx) + ", h_y = " + std::to_string(hy) + ")");
    }
}

PotentialGrid potential_grid(const MarkedFamily& fam, const GridSpec& spec, double tol,
                             const std::vector<std::size_t>& marks) {
    spec.validate();
    std::vector<Mark> chosen;
    for (auto j : marks) chosen.push_back(fam.marks().at(j));
    const MarkedFamily use = marks.empty() ? fam : fam.with_marks(chosen);
    PotentialGrid out{spec, std::vector<double>(spec.size(), 0.0), std::vector<std::uint8_t>(spec.size(), 0)};
#pragma omp parallel for schedule(dynamic, 4)
    for (int j = 0; j < spec.ny; ++j) {
        for (int i = 0; i < spec.nx; ++i) {
            const auto s = parametric_potential(use, spec.node(i, j), tol);
            out.g[spec.index(i, j)] = s.value;
            out.mask[spec.index(i, j)] = s.flagged ? 1 : 0;
        }
    }
    return out;
}

PotentialGrid sample_grid(const GridSpec& spec, const std::function<double(Complex)>& g) {
    spec.validate();
    PotentialGrid out{spec, std::vector<double>(spec.size(), 0.0), std::vector<std::uint8_t>(spec.size(), 0)};
    for (int j = 0; j < spec.ny; ++j) {
        for (int i = 0; i < spec.nx; ++i) {
            const double v = g(spec.node(i, j));
            out.g[spec.index(i, j)] = std::isfinite(v) ? v : 0.0;
            out.mask[spec.index(i, j)] = std::isfinite(v) ? 0 : 1;
        }
    }
    return out;
}

GridMeasure laplacian_measure(const PotentialGrid& g, bool clip) {
    const GridSpec& s = g.spec;
    if (s.nx < 3 || s.ny < 3) throw InputError("laplacian needs at least 3 nodes per axis");
    GridMeasure m;
    m.spec = s;
    m.weights.assign(s.size(), 0.0);
    m.mask = g.mask;
    m.excluded.assign(s.size(), 1);
    const double c = 1.0 / (2.0 * std::numbers::pi);
    for (int j = 1; j + 1 < s.ny; ++j) {
        for (int i = 1; i + 1 < s.nx; ++i) {
            const std::size_t k = s.index(i, j);
            const std::size_t nb[4] = {s.index(i - 1, j), s.index(i + 1, j), s.index(i, j - 1), s.index(i, j + 1)};
            if (g.mask[k] || g.mask[nb[0]] || g.mask[nb[1]] || g.mask[nb[2]] || g.mask[nb[3]]) continue;
            m.excluded[k] = 0;
            m.weights[k] = c * (((g.g[nb[0]] + g.g[nb[1]]) + (g.g[nb[2]] + g.g[nb[3]])) - 4.0 * g.g[k]);
        }
    }
    for (auto& w : m.weights) {
        if (clip && w < 0) {
            m.clipped_total += -w;
            ++m.clipped_count;
            if (w < -kClipEpsilon) ++m.significant_negative;
            w = 0;
        }
        m.total_mass += w;
    }
    return m;
}

double TestFunction::operator()(Complex t) const {
    switch (kind) {
        case Kind::Constant: return value;
        case Kind::GaussianBump: {
            const double r2 = std::norm(t - center), s2 = width * width;
            if (r2 >= 9 * s2) return 0.0;
            return value * (std::exp(-r2 / (2 * s2)) - std::exp(-4.5));
        }
        case Kind::TensorHat: {
            const double hx = 1 - std::abs(t.real() - center.real()) / width;
            const double hy = 1 - std::abs(t.imag() - center.imag()) / width;
            return hx > 0 && hy > 0 ? value * hx * hy : 0.0;
        }
    }
    return 0.0;
}

double TestFunction::x_lo() const { return center.real() - (kind == Kind::GaussianBump ? 3 * width : width); }
double TestFunction::x_hi() const { return center.real() + (kind == Kind::GaussianBump ? 3 * width : width); }
double TestFunction::y_lo() const { return center.imag() - (kind == Kind::GaussianBump ? 3 * width : width); }
double TestFunction::y_hi() const { return center.imag() + (kind == Kind::GaussianBump ? 3 * width : width); }

double integrate_test_function(const GridMeasure& m, const TestFunction& phi) {
    const GridSpec& s = m.spec;
    if (phi.compact()) {
        const double h = s.h();
        if (phi.x_lo() < s.x_min + h || phi.x_hi() > s.x_max - h || phi.y_lo() < s.y_min + h ||
            phi.y_hi() > s.y_max - h) {
            throw InputError("test function support leaves the grid interior");
        }
    }
    double sum = 0;
    for (int j = 0; j < s.ny; ++j) {
        for (int i = 0; i < s.nx; ++i) {
            const std::size_t k = s.index(i, j);
            const double v = phi(s.node(i, j));
            if (v == 0.0) continue;
            if (m.excluded[k] && phi.compact() && (i > 0 && j > 0 && i + 1 < s.nx && j + 1 < s.ny)) {
                throw InputError("test function support meets a masked node");
            }
            sum += v * m.weights[k];
        }
    }
    return sum;
}

void write_grid_csv(std::ostream& out, const PotentialGrid& g, const GridMeasure& m) {
    const GridSpec& s = g.spec;
    out << "x,y,g,weight,mask\n";
    char buf[160];
    for (int j = 0; j < s.ny; ++j) {
        for (int i = 0; i < s.nx; ++i) {
            const std::size_t k = s.index(i, j);
            const Complex t = s.node(i, j);
            std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%d\n", t.real(), t.imag(), g.g[k], m.weights[k],
                          static_cast<int>(g.mask[k]));
            out << buf;
        }
    }
}

void write_pgm(std::ostream& out, const GridSpec& spec, const std::vector<double>& values) {
    double top = 0;
    for (double v : values) top = std::max(top, std::abs(v));
    const double scale = top > 0 ? top / 65535.0 : 1.0;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", scale);
    out << "P5\n# scale=" << buf << "\n" << spec.nx << " " << spec.ny << "\n65535\n";
    for (int j = spec.ny - 1; j >= 0; --j) {
        for (int i = 0; i < spec.nx; ++i) {
            const double v = std::max(0.0, values[spec.index(i, j)]) / scale;
            const auto q = static_cast<unsigned>(std::lround(std::min(v, 65535.0)));
            out.put(static_cast<char>(q >> 8));
            out.put(static_cast<char>(q & 0xff));
        }
    }
}

}  // namespace arithdyn
