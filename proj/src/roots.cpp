#include "arithdyn/roots.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>

#include "arithdyn/errors.hpp"

namespace arithdyn {

namespace {

double unit_from_seed(std::uint64_t seed) {
    std::mt19937_64 gen(seed);
    return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

}  // namespace

std::vector<Complex> newton_polygon_guesses(const std::vector<double>& la, std::uint64_t seed) {
    const int n = static_cast<int>(la.size()) - 1;
    std::vector<Complex> out;
    if (n < 1) return out;
    // upper hull by monotone chain
    std::vector<int> hull;
    for (int k = 0; k <= n; ++k) {
        if (!std::isfinite(la[static_cast<std::size_t>(k)])) continue;
        while (hull.size() >= 2) {
            const int a = hull[hull.size() - 2], b = hull.back();
            const double cross = (b - a) * (la[static_cast<std::size_t>(k)] - la[static_cast<std::size_t>(a)]) -
                                 (k - a) * (la[static_cast<std::size_t>(b)] - la[static_cast<std::size_t>(a)]);
            if (cross >= 0) {
                hull.pop_back();
            } else {
                break;
            }
        }
        hull.push_back(k);
    }
    const double sigma = 2.0 * std::numbers::pi * unit_from_seed(seed);
    for (std::size_t e = 0; e + 1 < hull.size(); ++e) {
        const int k1 = hull[e], k2 = hull[e + 1];
        const int m = k2 - k1;
        const double r = std::exp((la[static_cast<std::size_t>(k1)] - la[static_cast<std::size_t>(k2)]) / m);
        for (int j = 0; j < m; ++j) {
            const double theta = 2.0 * std::numbers::pi * j / m + 2.0 * std::numbers::pi * e / n + sigma + 0.4;
            out.push_back(std::polar(r, theta));
        }
    }
    return out;
}

void cluster_roots(std::vector<RootEstimate>& roots, const std::vector<double>& incl, double rel_radius) {
    const std::size_t n = roots.size();
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t i) {
        while (parent[i] != i) i = parent[i] = parent[parent[i]];
        return i;
    };
    // sort by real part so that only a window needs pairwise checks
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return roots[a].z.real() < roots[b].z.real(); });
    double max_incl = 0;
    for (double r : incl) max_incl = std::max(max_incl, r);
    for (std::size_t a = 0; a < n; ++a) {
        const std::size_t i = order[a];
        const double reach_i = rel_radius * std::max(1.0, std::abs(roots[i].z));
        for (std::size_t b = a + 1; b < n; ++b) {
            const std::size_t j = order[b];
            const double dx = roots[j].z.real() - roots[i].z.real();
            if (dx > 2 * max_incl + 4 * reach_i + 1e-300) break;
            const double dist = std::abs(roots[j].z - roots[i].z);
            const double reach = std::max(std::max(reach_i, rel_radius * std::max(1.0, std::abs(roots[j].z))),
                                          incl[i] + incl[j]);
            if (dist <= reach) parent[find(i)] = find(j);
        }
    }
    std::vector<Complex> sum(n, 0.0);
    std::vector<int> count(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        sum[find(i)] += roots[i].z;
        ++count[find(i)];
    }
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t r = find(i);
        if (count[r] > 1) {
            roots[i].z = sum[r] / static_cast<double>(count[r]);
            roots[i].multiplicity = count[r];
        }
    }
}

std::vector<RootEstimate> aberth(const NewtonEvaluator& eval, std::vector<Complex> z, const AberthOptions& opts) {
    const std::size_t n = z.size();
    std::vector<RootEstimate> out(n);
    if (n == 0) return out;
    std::vector<char> frozen(n, 0);
    std::vector<Complex> next(n);
    std::vector<NewtonStep> last(n);
    std::size_t active = n;
    for (int iter = 0; iter < opts.max_iter && active > 0; ++iter) {
#pragma omp parallel for schedule(dynamic, 16)
        for (std::size_t i = 0; i < n; ++i) {
            next[i] = z[i];
            if (frozen[i]) continue;
            const NewtonStep s = eval(z[i]);
            last[i] = s;
            Complex w = s.ratio;
            if (s.ratio != Complex(0.0) && std::isfinite(std::abs(s.ratio))) {
                Complex acc = 0;
                for (std::size_t j = 0; j < n; ++j) {
                    if (j != i) acc += 1.0 / (z[i] - z[j]);
                }
                w = s.ratio / (1.0 - s.ratio * acc);
            }
            if (!std::isfinite(std::abs(w))) w = 0;
            next[i] = z[i] - w;
            if (s.residual <= opts.freeze_residual ||
                std::abs(w) <= opts.step_tol * std::max(1.0, std::abs(z[i]))) {
                frozen[i] = 1;
            }
        }
        z.swap(next);
        active = static_cast<std::size_t>(std::count(frozen.begin(), frozen.end(), 0));
    }
    double worst = 0;
    std::vector<double> incl(n);
    const double deg = static_cast<double>(n);
#pragma omp parallel for schedule(dynamic, 16)
    for (std::size_t i = 0; i < n; ++i) {
        const NewtonStep s = eval(z[i]);
        out[i].z = z[i];
        out[i].residual = s.residual;
        incl[i] = std::isfinite(std::abs(s.ratio)) ? deg * (std::abs(s.ratio) + s.noise) : 0.0;
    }
    for (const auto& r : out) worst = std::max(worst, std::isnan(r.residual) ? 1e300 : r.residual);
    if (worst > opts.tol) {
        throw NumericError("root finder did not converge: worst residual " + std::to_string(worst), worst);
    }
    cluster_roots(out, incl, opts.cluster_radius);
    return out;
}

std::vector<RootEstimate> complex_roots(const PolyC& p, double tol, std::uint64_t seed) {
    if (p.degree() < 1) throw InputError("complex_roots needs degree >= 1");
    if (!(tol > 0)) throw InputError("complex_roots needs tol > 0");
    const auto& c = p.coeffs();
    std::size_t zeros = 0;
    while (c[zeros] == Complex(0.0)) ++zeros;
    const double scale = std::ldexp(1.0, p.var_scale_exp());

    std::vector<RootEstimate> out;
    for (std::size_t i = 0; i < zeros; ++i) out.push_back({0.0, 0.0, static_cast<int>(zeros)});
    if (zeros == c.size() - 1) return out;

    PolyC reduced(std::vector<Complex>(c.begin() + static_cast<long>(zeros), c.end()));
    std::vector<double> la(reduced.coeffs().size());
    for (std::size_t k = 0; k < la.size(); ++k) {
        const double a = std::abs(reduced.coeffs()[k]);
        la[k] = a > 0 ? std::log(a) : -std::numeric_limits<double>::infinity();
    }
    auto init = newton_polygon_guesses(la, seed);
    NewtonEvaluator eval = [&reduced](Complex u) {
        const auto v = reduced.eval_scaled(u);
        const double res = v.scale > 0 ? std::abs(v.p) / v.scale : 0.0;
        if (v.dp == Complex(0.0)) return NewtonStep{Complex(0.0), res, 0.0};
        const double noise = 4 * std::numeric_limits<double>::epsilon() * v.scale / std::abs(v.dp);
        return NewtonStep{v.p / v.dp, res, noise};
    };
    AberthOptions opts;
    opts.tol = tol;
    opts.seed = seed;
    opts.freeze_residual = std::min(tol, 4 * std::numeric_limits<double>::epsilon());
    auto found = aberth(eval, std::move(init), opts);
    for (auto& r : found) {
        r.z *= scale;
        out.push_back(r);
    }
    return out;
}

}  // namespace arithdyn
