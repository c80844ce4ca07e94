#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "skewnum/skewnum.hpp"

namespace {

using namespace skewnum;

/// Shortest decimal form that parses back to the same double.
std::string fmt(double x) { return nlohmann::ordered_json(x).dump(); }

std::string fmt_entry(Complex z) {
    if (z.imag() == 0.0) return fmt(z.real());
    return fmt(z.real()) + (z.imag() < 0 ? " - " : " + ") + fmt(std::abs(z.imag())) + "i";
}

void print_matrix(const Matrix& m, const std::string& indent) {
    for (int i = 0; i < m.dim(); ++i) {
        std::cout << indent << "[";
        for (int j = 0; j < m.dim(); ++j) {
            if (j) std::cout << ", ";
            std::cout << fmt_entry(m(i, j));
        }
        std::cout << "]\n";
    }
}

void print_gap_report(const GapReport& rep) {
    for (const auto& t : rep.terms)
        std::cout << "  " << t.name << (t.name.size() < 4 ? std::string(4 - t.name.size(), ' ')
                                                          : std::string())
                  << " = " << fmt(t.value) << "\n";
    std::cout << "  gap  = " << fmt(rep.gap) << "\n";
    std::cout << "  tolerance = " << fmt(rep.tolerance) << "\n";
    std::cout << "  violated: " << (rep.violated ? "yes" : "no") << "\n";
}

std::pair<int, int> parse_dims(const std::string& s) {
    int d1 = 0, d2 = 0;
    char extra = 0;
    if (std::sscanf(s.c_str(), "%d,%d%c", &d1, &d2, &extra) != 2 || d1 < 1 || d2 < 1)
        throw std::invalid_argument("--dims expects D1,D2 with positive integers, got '" + s +
                                    "'");
    return {d1, d2};
}

std::vector<double> parse_grid(const std::string& s) {
    double start = 0, stop = 0, step = 0;
    char extra = 0;
    const int n = std::sscanf(s.c_str(), "%lf:%lf:%lf%c", &start, &stop, &step, &extra);
    if (n == 1 && s.find(':') == std::string::npos) return {start};
    if (n != 3)
        throw std::invalid_argument("--grid expects start:stop:step, got '" + s + "'");
    if (!(step > 0.0) || stop < start)
        throw std::invalid_argument("--grid requires step > 0 and stop >= start");
    const int count = static_cast<int>(std::floor((stop - start) / step + 1e-9));
    std::vector<double> grid;
    grid.reserve(static_cast<std::size_t>(count) + 1);
    for (int i = 0; i <= count; ++i) grid.push_back(start + i * step);
    return grid;
}

int thread_cap_from_env() {
    const char* env = std::getenv("SKEWNUM_THREADS");
    if (!env || !*env) return 0;
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v < 0) {
        std::cerr << "warning: ignoring malformed SKEWNUM_THREADS='" << env << "'\n";
        return 0;
    }
    return static_cast<int>(v);
}

void write_sweep_svg(const std::string& path, const std::vector<double>& xs,
                     const std::vector<double>& ys) {
    const double w = 640, h = 420, ml = 80, mr = 20, mt = 20, mb = 50;
    double xmin = xs.front(), xmax = xs.front();
    for (double x : xs) {
        xmin = std::min(xmin, x);
        xmax = std::max(xmax, x);
    }
    double ymin = 0.0, ymax = 0.0;  // keep the zero line in frame
    for (double y : ys) {
        ymin = std::min(ymin, y);
        ymax = std::max(ymax, y);
    }
    if (xmax == xmin) {
        xmin -= 0.5;
        xmax += 0.5;
    }
    if (ymax == ymin) {
        ymin -= 1.0;
        ymax += 1.0;
    }
    auto px = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * (w - ml - mr); };
    auto py = [&](double y) { return h - mb - (y - ymin) / (ymax - ymin) * (h - mt - mb); };

    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot write SVG file " + path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
        << "\" viewBox=\"0 0 " << w << " " << h << "\">\n"
        << "<rect width=\"" << w << "\" height=\"" << h << "\" fill=\"white\"/>\n";
    out << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << h - mb
        << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << ml << "\" y1=\"" << h - mb << "\" x2=\"" << w - mr << "\" y2=\""
        << h - mb << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << ml << "\" y1=\"" << py(0.0) << "\" x2=\"" << w - mr << "\" y2=\""
        << py(0.0) << "\" stroke=\"gray\" stroke-dasharray=\"4 3\"/>\n";

    char buf[64];
    auto label = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.4g", v);
        return std::string(buf);
    };
    out << "<text x=\"" << (ml + w - mr) / 2 << "\" y=\"" << h - 12
        << "\" text-anchor=\"middle\" font-size=\"14\">p</text>\n";
    out << "<text x=\"18\" y=\"" << (mt + h - mb) / 2
        << "\" text-anchor=\"middle\" font-size=\"14\" transform=\"rotate(-90 18 "
        << (mt + h - mb) / 2 << ")\">gap</text>\n";
    out << "<text x=\"" << px(xmin) << "\" y=\"" << h - mb + 18
        << "\" text-anchor=\"middle\" font-size=\"12\">" << label(xmin) << "</text>\n";
    out << "<text x=\"" << px(xmax) << "\" y=\"" << h - mb + 18
        << "\" text-anchor=\"middle\" font-size=\"12\">" << label(xmax) << "</text>\n";
    out << "<text x=\"" << ml - 6 << "\" y=\"" << py(ymin) + 4
        << "\" text-anchor=\"end\" font-size=\"12\">" << label(ymin) << "</text>\n";
    out << "<text x=\"" << ml - 6 << "\" y=\"" << py(ymax) + 4
        << "\" text-anchor=\"end\" font-size=\"12\">" << label(ymax) << "</text>\n";

    out << "<polyline fill=\"none\" stroke=\"#1f6fb2\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < xs.size(); ++i)
        out << px(xs[i]) << "," << py(ys[i]) << (i + 1 < xs.size() ? " " : "");
    out << "\"/>\n";
    for (std::size_t i = 0; i < xs.size(); ++i)
        out << "<circle cx=\"" << px(xs[i]) << "\" cy=\"" << py(ys[i])
            << "\" r=\"3\" fill=\"#1f6fb2\"/>\n";
    out << "</svg>\n";
    if (!out) throw std::invalid_argument("write failed for SVG file " + path);
}

int run_verify(double tol, double p) {
    const VerificationReport rep = verify_counterexample(tol, p);
    int failed = 0;
    for (const auto& c : rep.checks) {
        std::printf("%-28s %-4s max error %s\n", c.name.c_str(), c.passed ? "ok" : "FAIL",
                    fmt(c.max_error).c_str());
        if (!c.passed) ++failed;
    }
    std::cout << "subadditivity gap = " << fmt(rep.gap)
              << " (violation flagged: " << (rep.violation_flagged ? "yes" : "no") << ")\n";
    if (failed) {
        std::cout << failed << " check(s) failed at tolerance " << fmt(tol) << "\n";
        return 4;
    }
    std::cout << "all checks passed at tolerance " << fmt(tol) << "\n";
    return 0;
}

int run_eval(const std::string& path, std::optional<double> p) {
    const InstanceFile f = load_instance_file(path);
    if (f.dims.size() == 2) {
        const BipartiteInstance inst = to_bipartite(f, p);
        std::cout << "p = " << fmt(inst.p) << "\n";
        print_gap_report(sa_gap(inst));
        std::cout << "partial trace over factor 2 (rho1):\n";
        print_matrix(partial_trace(inst.rho12, {0}).matrix.matrix(), "  ");
        std::cout << "partial trace over factor 1 (rho2):\n";
        print_matrix(partial_trace(inst.rho12, {1}).matrix.matrix(), "  ");
    } else if (f.dims.size() == 3) {
        const TripartiteInstance inst = to_tripartite(f, p);
        std::cout << "p = " << fmt(inst.p) << "\n";
        print_gap_report(ssa_gap(inst));
        std::cout << "partial trace rho12:\n";
        print_matrix(partial_trace(inst.rho123, {0, 1}).matrix.matrix(), "  ");
        std::cout << "partial trace rho23:\n";
        print_matrix(partial_trace(inst.rho123, {1, 2}).matrix.matrix(), "  ");
        std::cout << "partial trace rho2:\n";
        print_matrix(partial_trace(inst.rho123, {1}).matrix.matrix(), "  ");
    } else {
        throw std::invalid_argument("eval: expected an instance with 2 or 3 factors");
    }
    return 0;
}

int run_check_sa(const std::string& path, std::optional<double> p, std::optional<double> tol) {
    const BipartiteInstance inst = to_bipartite(load_instance_file(path), p);
    const GapReport rep = tol ? sa_gap(inst, *tol) : sa_gap(inst);
    std::cout << "subadditivity check at p = " << fmt(inst.p) << "\n";
    print_gap_report(rep);
    return rep.violated ? 3 : 0;
}

int run_check_ssa(const std::string& path, std::optional<double> p, std::optional<double> tol) {
    const TripartiteInstance inst = to_tripartite(load_instance_file(path), p);
    const GapReport rep = tol ? ssa_gap(inst, *tol) : ssa_gap(inst);
    std::cout << "strong subadditivity check at p = " << fmt(inst.p) << "\n";
    print_gap_report(rep);
    return rep.violated ? 3 : 0;
}

int run_quadrature(const std::string& path, std::optional<double> p,
                   std::optional<double> abs_tol) {
    const InstanceFile f = load_instance_file(path);
    const MultipartiteOperator k_joint = local_sum(f.observables, f.dims);
    const double exponent = resolve_exponent(f, p);

    QuadratureConfig cfg;
    if (abs_tol) cfg.abs_tol = *abs_tol;
    const double closed = wyd_entropy(f.rho, k_joint.matrix, exponent);
    const QuadratureResult qr = wyd_quadrature_detail(f.rho, k_joint.matrix, exponent, cfg);
    if (!qr.converged)
        throw QuadratureError("quadrature did not converge (error estimate " +
                                  fmt(qr.error_estimate) + ")",
                              qr);
    std::cout << "p = " << fmt(exponent) << "\n"
              << "closed form = " << fmt(closed) << "\n"
              << "quadrature  = " << fmt(qr.value) << " (panels " << qr.panels
              << ", error estimate " << fmt(qr.error_estimate) << ")\n"
              << "difference  = " << fmt(qr.value - closed) << "\n";
    return 0;
}

int run_search(const std::string& dims_str, double p, int restarts, std::uint64_t seed,
               const std::string& warm_path, bool k2_zero, const std::string& out_path) {
    SearchConfig cfg;
    cfg.dims = parse_dims(dims_str);
    cfg.p = p;
    cfg.restarts = restarts;
    cfg.seed = seed;
    cfg.fix_k2_zero = k2_zero;

    std::optional<BipartiteInstance> warm;
    if (!warm_path.empty()) warm = to_bipartite(load_instance_file(warm_path), p);

    const SearchOutcome out = search_sa_violation(cfg, warm, thread_cap_from_env());
    std::cout << "search: dims " << cfg.dims.first << "x" << cfg.dims.second << ", p = " << fmt(p)
              << ", restarts = " << restarts << ", seed = " << seed
              << (warm ? ", warm start" : "") << (k2_zero ? ", k2 fixed to 0" : "") << "\n";
    std::cout << "best start: "
              << (out.restart_index < 0 ? std::string("warm start")
                                        : "restart " + std::to_string(out.restart_index))
              << "\n";
    print_gap_report(out.report);
    save_instance_file(from_bipartite(out.instance), out_path);
    std::cout << "best instance written to " << out_path << "\n";
    return 0;
}

int run_sweep(const std::string& path, const std::string& grid_str, const std::string& svg_path) {
    const BipartiteInstance inst = to_bipartite(load_instance_file(path));
    const std::vector<double> grid = parse_grid(grid_str);
    const std::vector<GapReport> reports = p_sweep(inst, grid);

    std::printf("%-8s %-24s %s\n", "p", "gap", "violated");
    for (std::size_t i = 0; i < grid.size(); ++i)
        std::printf("%-8s %-24s %s\n", fmt(grid[i]).c_str(), fmt(reports[i].gap).c_str(),
                    reports[i].violated ? "yes" : "no");
    std::cout << "note: negative gaps are numerical evidence, not proof, of subadditivity "
                 "failure at the swept exponents.\n";

    if (!svg_path.empty()) {
        std::vector<double> gaps;
        gaps.reserve(reports.size());
        for (const auto& r : reports) gaps.push_back(r.gap);
        write_sweep_svg(svg_path, grid, gaps);
        std::cout << "plot written to " << svg_path << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "skewnum: Wigner-Yanase-Dyson entropies, subadditivity gap checkers, and "
        "violation search"};
    app.require_subcommand(1);

    double verify_tol = 1e-9, verify_p = 0.5;
    auto* verify = app.add_subcommand(
        "verify-paper", "Recompute the built-in counterexample against its published values");
    verify->add_option("--tol", verify_tol, "absolute tolerance per check")
        ->capture_default_str();
    verify->add_option("--p", verify_p, "entropy exponent")->capture_default_str();

    std::string eval_file;
    std::optional<double> eval_p;
    auto* eval = app.add_subcommand("eval", "Evaluate entropy terms and partial traces");
    eval->add_option("--instance", eval_file, "instance JSON file")->required();
    eval->add_option("--p", eval_p, "entropy exponent (overrides the file)");

    std::string sa_file;
    std::optional<double> sa_p, sa_tol;
    auto* check_sa = app.add_subcommand("check-sa", "Check subadditivity on a 2-factor instance");
    check_sa->add_option("--instance", sa_file, "instance JSON file")->required();
    check_sa->add_option("--p", sa_p, "entropy exponent (overrides the file)");
    check_sa->add_option("--tol", sa_tol, "violation tolerance (default 1e-8*max(1,|S12|))");

    std::string ssa_file;
    std::optional<double> ssa_p, ssa_tol;
    auto* check_ssa =
        app.add_subcommand("check-ssa", "Check strong subadditivity on a 3-factor instance");
    check_ssa->add_option("--instance", ssa_file, "instance JSON file")->required();
    check_ssa->add_option("--p", ssa_p, "entropy exponent (overrides the file)");
    check_ssa->add_option("--tol", ssa_tol, "violation tolerance (default 1e-8*max(1,|S123|))");

    std::string quad_file;
    std::optional<double> quad_p, quad_tol;
    auto* quad = app.add_subcommand(
        "quadrature", "Cross-check the closed-form entropy against its integral form");
    quad->add_option("--instance", quad_file, "instance JSON file")->required();
    quad->add_option("--p", quad_p, "entropy exponent (overrides the file)");
    quad->add_option("--abs-tol", quad_tol, "quadrature absolute tolerance (default 1e-8)");

    std::string search_dims = "2,2", search_warm, search_out = "best-instance.json";
    double search_p = 0.5;
    int search_restarts = 16;
    std::uint64_t search_seed = 0;
    bool search_k2_zero = false;
    auto* search = app.add_subcommand("search", "Search for subadditivity violations");
    search->add_option("--dims", search_dims, "factor dimensions D1,D2")->capture_default_str();
    search->add_option("--p", search_p, "entropy exponent")->capture_default_str();
    search->add_option("--restarts", search_restarts, "independent restarts")
        ->capture_default_str();
    search->add_option("--seed", search_seed, "random seed")->capture_default_str();
    search->add_option("--warm-start", search_warm, "instance JSON file to start from");
    search->add_flag("--k2-zero", search_k2_zero, "fix the second observable to 0");
    search->add_option("--out", search_out, "output file for the best instance")
        ->capture_default_str();

    std::string sweep_file, sweep_grid = "0.1:0.9:0.1", sweep_svg;
    auto* sweep = app.add_subcommand("sweep", "Evaluate the gap across a grid of exponents");
    sweep->add_option("--instance", sweep_file, "instance JSON file")->required();
    sweep->add_option("--grid", sweep_grid, "exponent grid start:stop:step")
        ->capture_default_str();
    sweep->add_option("--svg", sweep_svg, "write a gap-versus-p plot to this file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (verify->parsed()) return run_verify(verify_tol, verify_p);
        if (eval->parsed()) return run_eval(eval_file, eval_p);
        if (check_sa->parsed()) return run_check_sa(sa_file, sa_p, sa_tol);
        if (check_ssa->parsed()) return run_check_ssa(ssa_file, ssa_p, ssa_tol);
        if (quad->parsed()) return run_quadrature(quad_file, quad_p, quad_tol);
        if (search->parsed())
            return run_search(search_dims, search_p, search_restarts, search_seed, search_warm,
                              search_k2_zero, search_out);
        if (sweep->parsed()) return run_sweep(sweep_file, sweep_grid, sweep_svg);
    } catch (const std::logic_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 4;
    }
    return 0;
}
