// arithdyn: heights, bifurcation grids, Preper root sets and equidistribution
// reports from a family spec file.

#include <omp.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "arithdyn/equilab.hpp"
#include "arithdyn/errors.hpp"
#include "arithdyn/family_spec.hpp"
#include "json.hpp"

using namespace arithdyn;

namespace {

enum Exit { kOk = 0, kDomain = 2, kResource = 3, kStructural = 5, kUsage = 64, kNoInput = 66 };

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream in(s);
    std::string item;
    while (std::getline(in, item, sep)) out.push_back(item);
    if (!s.empty() && s.back() == sep) out.emplace_back();
    return out;
}

double to_double(const std::string& s, const std::string& what) {
    std::size_t used = 0;
    double v = 0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != s.size()) throw UsageError("bad number '" + s + "' in " + what);
    return v;
}

int to_int(const std::string& s, const std::string& what) {
    const double v = to_double(s, what);
    if (v != static_cast<int>(v)) throw UsageError("expected an integer in " + what + ", got '" + s + "'");
    return static_cast<int>(v);
}

GridSpec parse_grid(const std::string& s) {
    const auto parts = split(s, ',');
    if (parts.size() != 5) throw UsageError("--grid expects x0,x1,y0,y1,n");
    GridSpec g;
    g.x_min = to_double(parts[0], "--grid");
    g.x_max = to_double(parts[1], "--grid");
    g.y_min = to_double(parts[2], "--grid");
    g.y_max = to_double(parts[3], "--grid");
    g.nx = g.ny = to_int(parts[4], "--grid");
    try {
        g.validate();
    } catch (const InputError& e) {
        throw UsageError(std::string("--grid: ") + e.what());
    }
    return g;
}

// "1", "-0.5", "2+1i", "0.3-0.2i", "1i"
Complex parse_complex(std::string s) {
    if (s.empty()) throw UsageError("empty probe");
    if (s.back() != 'i') return to_double(s, "--probes");
    s.pop_back();
    std::size_t cut = std::string::npos;
    for (std::size_t k = s.size(); k-- > 1;) {
        if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
            cut = k;
            break;
        }
    }
    if (cut == std::string::npos) {
        const std::string im = s.empty() || s == "+" || s == "-" ? s + "1" : s;
        return {0.0, to_double(im, "--probes")};
    }
    std::string im = s.substr(cut);
    if (im == "+" || im == "-") im += "1";
    return {to_double(s.substr(0, cut), "--probes"), to_double(im, "--probes")};
}

void set_threads(int threads) {
    if (threads < 0) throw UsageError("--threads must be >= 0");
    if (threads > 0) omp_set_num_threads(threads);
}

std::ofstream open_out(const std::string& path, bool binary = false) {
    std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
    if (!out) throw std::filesystem::filesystem_error("cannot write", path, std::make_error_code(std::errc::io_error));
    return out;
}

int run_height(const std::string& spec, const std::string& t_text, double tol) {
    const auto fam = load_family_spec(spec);
    BigRat t;
    try {
        t = parse_rational(t_text);
    } catch (const InputError& e) {
        std::fprintf(stderr, "arithdyn height: %s\n", e.what());
        return kDomain;
    }
    const auto cert = parametric_height(fam, t, tol);
    std::printf("%.17g %.3g %d\n", cert.value, cert.radius, cert.n_used);
    return kOk;
}

int run_bif(const std::string& spec, const std::string& grid_text, const std::string& out, double tol) {
    const auto fam = load_family_spec(spec);
    const GridSpec grid = grid_text.empty() ? GridSpec{} : parse_grid(grid_text);
    const auto g = potential_grid(fam, grid, tol);
    const auto m = laplacian_measure(g);
    {
        auto csv = open_out(out + ".csv");
        write_grid_csv(csv, g, m);
        auto pgm = open_out(out + ".pgm", true);
        write_pgm(pgm, grid, g.g);
    }
    std::printf("mass %.6f\n", m.total_mass);
    std::printf("# clipped %.6g over %zu nodes (%zu below -%g); %s.csv %s.pgm\n", m.clipped_total, m.clipped_count,
                m.significant_negative, kClipEpsilon, out.c_str(), out.c_str());
    return kOk;
}

int run_preper(const std::string& spec, int n, int m, std::size_t mark, const std::string& out, double tol,
               std::uint64_t seed) {
    const auto fam = load_family_spec(spec);
    if (mark >= fam.mark_count()) throw UsageError("--mark out of range");
    const auto p = std::make_shared<const PreperPoly>(preper_poly(fam.with_mark(mark), n, m));
    std::printf("degree %d\n", p->degree());
    std::string coeffs;
    for (std::size_t i = 0; i < p->poly.coeffs().size(); ++i) {
        if (i) coeffs += ",";
        coeffs += p->poly.coeffs()[i].get_str();
    }
    if (p->degree() <= 32) std::printf("coefficients %s\n", coeffs.c_str());
    if (out.empty()) return kOk;
    {
        auto poly = open_out(out + "_poly.txt");
        poly << coeffs << "\n";
    }
    if (p->degree() >= 1) {
        auto rs = root_set(*p, tol, seed);
        rs.source = p;
        auto csv = open_out(out + "_roots.csv");
        write_root_set_csv(csv, rs);
        std::printf("roots %zu (repeated %d); %s_poly.txt %s_roots.csv\n", rs.size(), rs.repeated, out.c_str(),
                    out.c_str());
    }
    return kOk;
}

int run_equidist(const std::string& spec, const std::string& range, const std::string& probes, int m,
                 std::optional<std::size_t> mark, const std::string& grid_text, const std::string& out,
                 std::uint64_t seed) {
    ExperimentConfig cfg;
    cfg.family = load_family_spec(spec);
    if (mark) {
        if (*mark >= cfg.family.mark_count()) throw UsageError("--mark out of range");
        cfg.family = cfg.family.with_mark(*mark);
    }
    const auto r = split(range, ':');
    if (r.size() != 2) throw UsageError("--n-range expects a:b");
    cfg.n_min = to_int(r[0], "--n-range");
    cfg.n_max = to_int(r[1], "--n-range");
    cfg.m = m;
    if (!probes.empty()) {
        cfg.probes.clear();
        for (const auto& p : split(probes, ',')) cfg.probes.push_back(parse_complex(p));
    }
    if (!grid_text.empty()) cfg.grid = parse_grid(grid_text);
    cfg.seed = seed;
    if (cfg.family.mark_count() != 1) throw UsageError("equidist needs a single-mark family (use --mark)");

    const auto rep = run_experiment(cfg);
    write_report_table(std::cout, rep);
    if (!out.empty()) {
        auto csv = open_out(out + ".csv");
        write_report_csv(csv, rep);
        auto txt = open_out(out + ".txt");
        write_report_table(txt, rep);
        auto fam = open_out(out + ".family.json");
        fam << write_family_spec(cfg.family);
        nlohmann::ordered_json j;
        j["family"] = std::filesystem::path(out + ".family.json").filename().string();
        j["n_range"] = {cfg.n_min, cfg.n_max};
        j["m"] = cfg.m;
        std::vector<std::string> ps;
        for (const auto& p : cfg.probes) {
            char buf[80];
            std::snprintf(buf, sizeof buf, "%.17g%+.17gi", p.real(), p.imag());
            ps.emplace_back(buf);
        }
        j["probes"] = ps;
        j["grid"] = {cfg.grid.x_min, cfg.grid.x_max, cfg.grid.y_min, cfg.grid.y_max, cfg.grid.nx};
        j["phi"] = {{"kind", "gaussian_bump"}, {"center", {cfg.phi.center.real(), cfg.phi.center.imag()}},
                    {"width", cfg.phi.width}};
        j["seed"] = cfg.seed;
        auto cj = open_out(out + ".config.json");
        cj << j.dump(2) << "\n";
    }
    using K = ConvergenceReport::ErrorKind;
    switch (rep.error_kind) {
        case K::None: return kOk;
        case K::Structural: std::fprintf(stderr, "arithdyn equidist: %s\n", rep.error->c_str()); return kStructural;
        case K::Resource:
        case K::Numeric: std::fprintf(stderr, "arithdyn equidist: %s\n", rep.error->c_str()); return kResource;
        case K::Degenerate:
        case K::Input: std::fprintf(stderr, "arithdyn equidist: %s\n", rep.error->c_str()); return kDomain;
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"arithdyn: arithmetic dynamics of marked families over Q"};
    app.require_subcommand(1);
    int threads = 0;
    std::uint64_t seed = 0;
    app.add_option("--threads", threads, "worker threads (0 = hardware count)");
    app.add_option("--seed", seed, "root finder seed");

    std::string spec, t_text, grid, out, range, probes;
    double tol = 1e-10;
    int n = 0, m = 0;
    std::size_t mark = 0;

    auto* height = app.add_subcommand("height", "sum of canonical heights of the marks at a rational t");
    height->add_option("spec", spec, "family spec file")->required();
    height->add_option("t", t_text, "parameter as p/q")->required();
    height->add_option("--tol", tol, "certificate radius per mark");

    auto* bif = app.add_subcommand("bif", "parametric potential and bifurcation measure on a grid");
    bif->add_option("spec", spec, "family spec file")->required();
    auto* grid_opt = bif->add_option("--grid", grid, "x0,x1,y0,y1,n (default -2.5,1.5,-2,2,1024)");
    bif->add_option("--out", out, "output prefix (default bif)");
    bif->add_option("--tol", tol, "potential tolerance");

    auto* pre = app.add_subcommand("preper", "Preper(n, m) polynomial and its root set");
    pre->add_option("spec", spec, "family spec file")->required();
    pre->add_option("--n", n, "n")->required();
    pre->add_option("--m", m, "m")->default_val(0);
    pre->add_option("--mark", mark, "mark index")->default_val(0);
    pre->add_option("--out", out, "output prefix (omit for the degree line only)");
    pre->add_option("--tol", tol, "root residual tolerance");

    auto* eq = app.add_subcommand("equidist", "convergence report of Preper root sets");
    eq->add_option("spec", spec, "single-mark family spec file")->required();
    eq->add_option("--n-range", range, "a:b")->required();
    eq->add_option("--m", m, "m")->default_val(0);
    std::optional<std::size_t> eq_mark;
    eq->add_option("--mark", eq_mark, "mark index for multi-mark families");
    eq->add_option("--probes", probes, "comma separated, e.g. 1,2+1i");
    auto* eq_grid = eq->add_option("--grid", grid, "x0,x1,y0,y1,n");
    eq->add_option("--out", out, "output prefix");

    for (auto* sub : {height, bif, pre, eq}) {
        sub->add_option("--threads", threads, "worker threads (0 = hardware count)");
        sub->add_option("--seed", seed, "root finder seed");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        set_threads(threads);
        if (*height) return run_height(spec, t_text, tol);
        if (*bif) {
            if (grid_opt->count() && grid.empty()) throw UsageError("--grid is empty");
            return run_bif(spec, grid, out.empty() ? "bif" : out, tol);
        }
        if (*pre) return run_preper(spec, n, m, mark, out, tol, seed);
        if (*eq) {
            if (eq_grid->count() && grid.empty()) throw UsageError("--grid is empty");
            return run_equidist(spec, range, probes, m, eq_mark, grid, out, seed);
        }
    } catch (const UsageError& e) {
        std::fprintf(stderr, "arithdyn: %s\n", e.what());
        return kUsage;
    } catch (const std::filesystem::filesystem_error& e) {
        std::fprintf(stderr, "arithdyn: %s\n", e.what());
        return kNoInput;
    } catch (const DegenerateParameter& e) {
        std::fprintf(stderr, "arithdyn: degenerate parameter: %s\n", e.what());
        return kDomain;
    } catch (const StructuralError& e) {
        std::fprintf(stderr, "arithdyn: structural: %s\n", e.what());
        return kStructural;
    } catch (const ResourceError& e) {
        std::fprintf(stderr, "arithdyn: resource: %s (last completed step %d)\n", e.what(), e.partial());
        return kResource;
    } catch (const NumericError& e) {
        std::fprintf(stderr, "arithdyn: numeric: %s (worst residual %.3g)\n", e.what(), e.worst_residual());
        return kResource;
    } catch (const InputError& e) {
        std::fprintf(stderr, "arithdyn: %s\n", e.what());
        return kUsage;
    }
    return kUsage;
}
