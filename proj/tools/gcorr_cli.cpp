// gcorr: numerical checks for Gaussian correlation bounds of convex bodies
// against layers, tail-bound tables, and the supporting reductions.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gcorr/errors.hpp"
#include "gcorr/extremal.hpp"
#include "gcorr/gauss.hpp"
#include "gcorr/lineregion.hpp"
#include "gcorr/profile.hpp"
#include "gcorr/quadrature.hpp"
#include "gcorr/reduction.hpp"
#include "gcorr/rng.hpp"
#include "gcorr/verify.hpp"
#include "gcorr/version.hpp"

namespace {

using nlohmann::json;
using namespace gcorr;

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitInternal = 3;

constexpr std::uint64_t kDefaultSeed = 12345;  // fixed so default runs repeat

struct RunConfig {
    std::string subcommand;
    double tol = 1e-10;
    std::uint64_t seed = kDefaultSeed;
    std::int64_t trials = 0;
    std::int64_t mc = 1000000;
    double w = 0.5;
    std::string out;
    std::string format;  // empty: the subcommand's natural format
    std::string profile_file;
    std::string polygon_file;
    std::string dir = "1,0";
    std::string grid_spec;
    double m = 1.0, h = -1.0, a = 0.0, b = 1.0;
    bool single_instance = false;
    bool relaxed = false;
    int dim = 3;
    int layers = 4;

    json to_json() const {
        json j;
        j["subcommand"] = subcommand;
        j["tol"] = tol;
        j["seed"] = seed;
        j["trials"] = trials;
        j["mc"] = mc;
        j["w"] = w;
        j["format"] = format;
        if (!profile_file.empty()) j["profile"] = profile_file;
        if (!polygon_file.empty()) j["polygon"] = polygon_file;
        if (!grid_spec.empty()) j["grid_spec"] = grid_spec;
        return j;
    }
};

std::string resolve_out(const std::string& out) {
    if (out.empty() || out.front() == '/')
        return out;
    const char* dir = std::getenv("GCORR_OUT_DIR");
    if (dir && *dir)
        return std::string(dir) + "/" + out;
    return out;
}

class Sink {
public:
    explicit Sink(const std::string& path) {
        std::string resolved = resolve_out(path);
        if (!resolved.empty()) {
            file_.open(resolved);
            if (!file_)
                throw std::runtime_error("cannot open output file: " + resolved);
        }
    }
    std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

private:
    std::ofstream file_;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot read file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty())
            out.push_back(std::stod(item));
    return out;
}

json meta(const RunConfig& cfg) {
    json j;
    j["tool"] = "gcorr";
    j["version"] = kVersion;
    j["config"] = cfg.to_json();
    return j;
}

// ---------------------------------------------------------------- bounds-table

int run_bounds_table(const RunConfig& cfg, const std::vector<double>& xs) {
    auto rows = error_table(xs.empty() ? error_table_default_xs() : xs);
    Sink sink(cfg.out);
    auto& os = sink.stream();
    if (cfg.format == "json" || cfg.format == "jsonl") {
        json j = meta(cfg);
        auto& arr = j["rows"] = json::array();
        for (const auto& r : rows)
            arr.push_back({{"x", r.x},
                           {"err_upper_new", r.err_upper_new},
                           {"err_upper_komatsu", r.err_upper_komatsu},
                           {"err_lower", r.err_lower}});
        os << j.dump() << "\n";
        return kExitOk;
    }
    os << "# gcorr " << kVersion << "\n";
    os << "# config " << cfg.to_json().dump() << "\n";
    os << "x,err_upper_new,err_upper_komatsu,err_lower\n";
    char buf[160];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", r.x,
                      r.err_upper_new, r.err_upper_komatsu, r.err_lower);
        os << buf;
    }
    return kExitOk;
}

// ----------------------------------------------------------------- check-props

int run_check_props(const RunConfig& cfg, int grid_points) {
    bool ok = true;
    auto report = [&](const char* name, bool pass, double worst) {
        std::printf("%-44s %s  (worst %.3e)\n", name, pass ? "pass" : "FAIL",
                    worst);
        ok = ok && pass;
    };

    {  // sandwich and ordering of the closed-form bounds
        double worst_lo = kInf, worst_hi = kInf, worst_cmp = kInf;
        int n = grid_points;
        for (int i = 0; i < n; ++i) {
            double s = -6.0 + (std::log10(61.0) + 6.0) * i / (n - 1);
            double x = -1.0 + std::pow(10.0, s);
            double g = mills(x);
            TailBoundSet t = tail_bounds(x);
            worst_lo = std::min(worst_lo, (g - t.lower) / g);
            worst_hi = std::min(worst_hi, (t.upper_new - g) / g);
            if (x >= 0)
                worst_cmp = std::min(worst_cmp, t.upper_komatsu - t.upper_new);
        }
        report("tail sandwich: lower <= g", worst_lo >= -1e-12, worst_lo);
        report("tail sandwich: g <= upper", worst_hi >= -1e-12, worst_hi);
        report("upper bound ordering", worst_cmp >= -1e-15, worst_cmp);
    }
    {  // derivative identity of the ratio, and of its upper bound
        double worst_id = 0, worst_ub = -kInf;
        const double step = 1e-5;
        int n = grid_points;
        for (int i = 0; i < n; ++i) {
            double s = -6.0 + (std::log10(61.0) + 6.0) * i / (n - 1);
            double x = -1.0 + std::pow(10.0, s);
            double d = (mills(x + step) - mills(x - step)) / (2 * step);
            worst_id = std::max(worst_id, std::fabs(d - (x * mills(x) - 1.0)));
            if (x - step > -1.0) {
                auto up = [](double t) {
                    return 4.0 / (3 * t + std::sqrt(t * t + 8.0));
                };
                double du = (up(x + step) - up(x - step)) / (2 * step);
                worst_ub = std::max(worst_ub, du - (x * up(x) - 1.0));
            }
        }
        report("ratio derivative identity", worst_id <= 1e-6, worst_id);
        report("upper-bound differential inequality", worst_ub <= 1e-12, worst_ub);
    }
    {  // hazard shape
        const double h = 1e-3;
        double w1 = kInf, w2 = kInf, w3 = kInf;
        for (double x = -10.0; x <= 10.0 - 2 * h; x += h) {
            double f0 = hazard(x), f1 = hazard(x + h), f2 = hazard(x + 2 * h);
            w1 = std::min(w1, (f1 - f0) / h);
            w2 = std::min(w2, (f2 - 2 * f1 + f0) / (h * h));
            w3 = std::min(w3, 1.0 - (f1 - f0) / h);
        }
        report("hazard increasing", w1 >= -1e-8, w1);
        report("hazard convex", w2 >= -1e-8, w2);
        report("diagonal gap increasing", w3 >= -1e-8, w3);
        bool dec = true;
        double prev = std::fabs(1.0 - hazard(1.0));
        double worst = kInf;
        for (double x = 1.5; x <= 40.0; x += 0.5) {
            double cur = std::fabs(x - hazard(x));
            worst = std::min(worst, prev - cur);
            dec = dec && (cur < prev);
            prev = cur;
        }
        report("diagonal gap magnitude decreasing", dec, worst);
    }
    (void)cfg;
    return ok ? kExitOk : kExitCheckFailed;
}

// ------------------------------------------------------------------- linearize

int run_linearize(const RunConfig& cfg) {
    ConcaveProfile psi = profile_from_json(slurp(cfg.profile_file));
    LinearizationResult r = linearize(psi, cfg.a, cfg.b, cfg.tol);
    json j = meta(cfg);
    j["m0"] = r.m0;
    j["h0"] = r.h0;
    j["mass_residual"] = r.mass_residual;
    j["moment_residual"] = r.moment_residual;
    j["intersections"] = r.intersections;
    j["endpoint_values_ok"] = r.endpoint_values_ok;
    j["endpoint_slopes_ok"] = r.endpoint_slopes_ok;
    bool pass = std::fabs(r.mass_residual) <= cfg.tol * 10 &&
                std::fabs(r.moment_residual) <= cfg.tol * 10 &&
                r.endpoint_values_ok && r.endpoint_slopes_ok;
    j["status"] = pass ? "pass" : "fail";
    Sink sink(cfg.out);
    sink.stream() << j.dump(2) << "\n";
    return pass ? kExitOk : kExitCheckFailed;
}

// --------------------------------------------------------------- scan grids

ExtremalGrids parse_grid_spec(const std::string& spec) {
    ExtremalGrids g;
    std::stringstream ss(spec);
    std::string part;
    while (std::getline(ss, part, ';')) {
        auto eq = part.find('=');
        if (eq == std::string::npos)
            throw CLI::ValidationError("--grid-spec",
                                       "expected key=v1,v2,...;key=...");
        std::string key = part.substr(0, eq);
        std::string val = part.substr(eq + 1);
        if (key == "m")
            g.ms = parse_list(val);
        else if (key == "c")
            g.cs = parse_list(val);
        else if (key == "w")
            g.ws = parse_list(val);
        else if (key == "h")
            g.h_points = std::stoi(val);
        else
            throw CLI::ValidationError("--grid-spec", "unknown key: " + key);
    }
    return g;
}

int run_scan_extremal(const RunConfig& cfg) {
    ExtremalGrids grids = cfg.grid_spec.empty() ? ExtremalGrids{}
                                                : parse_grid_spec(cfg.grid_spec);
    json points = json::array();
    auto enc = [](double v) -> json {
        if (v == kInf)
            return "inf";
        if (v == -kInf)
            return "-inf";
        return v;
    };
    auto emit = [&points, &enc](const ExtremalScanPoint& p) {
        json jp;
        jp["params"] = {{"kind", p.kind == RegionKind::R1 ? "R1" : "R2"},
                        {"m", p.m},
                        {"c", p.c},
                        {"w", p.w},
                        {"h", enc(p.h)}};
        jp["quantity"] = p.quantity;
        jp["value"] = enc(p.value);
        if (std::isfinite(p.forward_difference))
            jp["forward_difference"] = p.forward_difference;
        points.push_back(std::move(jp));
    };
    ExtremalScanSummary s = scan_extremal_grids(grids, cfg.tol, emit);
    bool pass = s.min_diff_B >= -1e-8 && s.min_diff_A >= -1e-8 &&
                s.min_diff_F1 >= -1e-8 && s.max_F1 <= 1.0 + 1e-8 &&
                s.max_F2 <= 1.0 + 1e-8;
    json j = meta(cfg);
    j["points"] = std::move(points);
    j["summary"] = {{"min_forward_difference_B", s.min_diff_B},
                    {"min_forward_difference_A", s.min_diff_A},
                    {"min_forward_difference_F1", s.min_diff_F1},
                    {"max_F1", s.max_F1},
                    {"max_F2", s.max_F2},
                    {"evaluated", s.evaluated},
                    {"skipped", s.skipped},
                    {"status", pass ? "pass" : "fail"}};
    Sink sink(cfg.out);
    sink.stream() << j.dump() << "\n";
    return pass ? kExitOk : kExitCheckFailed;
}

// ------------------------------------------------------------------ final-case

int run_final_case(const RunConfig& cfg) {
    json j = meta(cfg);
    json items = json::array();
    bool pass = true;
    auto add = [&](const FinalCaseReport& r, double m, double h, double a,
                   double b) {
        json it;
        it["m"] = m;
        it["h"] = h;
        it["a"] = a;
        it["b"] = b;
        it["x0"] = r.x0;
        it["trivial"] = r.trivial;
        it["average_margin"] = r.average_margin;
        if (r.reduced_applicable) {
            it["reduced_margin"] = r.reduced_margin;
            it["triangle_margin"] = r.triangle_margin;
        }
        bool ok = r.average_margin >= -1e-9 &&
                  (!r.reduced_applicable ||
                   (r.reduced_margin >= -1e-9 && r.triangle_margin >= -1e-9));
        it["status"] = ok ? "pass" : "fail";
        pass = pass && ok;
        items.push_back(std::move(it));
    };
    if (cfg.single_instance && cfg.relaxed) {
        // optional mode: midpoint condition only, either intercept sign
        RelaxedAverageReport r =
            relaxed_average_check(cfg.m, cfg.h, cfg.a, cfg.b, cfg.tol);
        json it;
        it["m"] = cfg.m;
        it["h"] = cfg.h;
        it["a"] = cfg.a;
        it["b"] = cfg.b;
        it["x0"] = r.x0;
        it["average"] = r.average;
        it["half_plane"] = r.half_plane;
        it["margin"] = r.margin;
        bool ok = r.margin >= -1e-9;
        it["status"] = ok ? "pass" : "fail";
        pass = ok;
        items.push_back(std::move(it));
    } else if (cfg.single_instance) {
        add(final_case_check(cfg.m, cfg.h, cfg.a, cfg.b, cfg.tol), cfg.m,
            cfg.h, cfg.a, cfg.b);
    } else {
        // 100 negative-intercept instances with midpoint at the crossing
        for (const auto& [m, h, a, b] : final_case_grid())
            add(final_case_check(m, h, a, b, cfg.tol), m, h, a, b);
        // companion scan for nonnegative intercepts
        std::vector<double> dg;
        for (double d = 0.1; d <= 3.0; d += 0.1)
            dg.push_back(d);
        for (double m : {0.5, 1.0, 2.0})
            for (double h : {0.0, 0.5, 2.0}) {
                SymmetricAverageReport rep =
                    symmetric_average_scan(m, h, dg, cfg.tol);
                json it;
                it["m"] = m;
                it["h"] = h;
                it["max_forward_increase"] = rep.max_forward_increase;
                bool ok = rep.max_forward_increase <= 1e-9;
                it["status"] = ok ? "pass" : "fail";
                pass = pass && ok;
                items.push_back(std::move(it));
            }
    }
    j["checks"] = std::move(items);
    j["status"] = pass ? "pass" : "fail";
    Sink sink(cfg.out);
    sink.stream() << j.dump() << "\n";
    return pass ? kExitOk : kExitCheckFailed;
}

// ------------------------------------------------------------- verify commands

int run_verify_theorem1(const RunConfig& cfg) {
    Sink sink(cfg.out);
    auto& os = sink.stream();
    os << meta(cfg).dump() << "\n";
    bool pass = true;
    auto emit = [&](const VerificationReport& r) {
        os << to_jsonl(r) << "\n";
        pass = pass && (r.status != VerificationReport::Status::fail);
    };
    if (!cfg.profile_file.empty()) {
        ConcaveProfile psi = profile_from_json(slurp(cfg.profile_file));
        emit(verify_theorem1(psi, cfg.w, cfg.tol));
    } else if (!cfg.polygon_file.empty()) {
        ConvexPolygon poly = polygon_from_json(slurp(cfg.polygon_file));
        auto d = parse_list(cfg.dir);
        if (d.size() != 2)
            throw CLI::ValidationError("--dir", "expected x,y");
        double n = std::hypot(d[0], d[1]);
        emit(verify_theorem1_polygon(poly, {d[0] / n, d[1] / n}, 101, cfg.w,
                                     cfg.tol));
    } else {
        std::int64_t trials = cfg.trials > 0 ? cfg.trials : 100;
        std::int64_t skipped = 0;
        for (std::int64_t i = 0; i < trials; ++i) {
            ConcaveProfile psi =
                random_profile(CounterRng::mix(cfg.seed + i), 1 + i % 6);
            try {
                emit(verify_theorem1(psi, cfg.w, cfg.tol));
            } catch (const infeasible_error&) {
                ++skipped;
            } catch (const degenerate_error&) {
                ++skipped;
            }
        }
        json tail;
        tail["skipped"] = skipped;
        os << tail.dump() << "\n";
    }
    return pass ? kExitOk : kExitCheckFailed;
}

int run_verify_theorem1a(const RunConfig& cfg) {
    Sink sink(cfg.out);
    auto& os = sink.stream();
    os << meta(cfg).dump() << "\n";
    bool pass = true;
    std::int64_t trials = cfg.trials > 0 ? cfg.trials : 10;
    int n = cfg.dim;
    for (std::int64_t t = 0; t < trials; ++t) {
        RngStream rng(cfg.seed, 0x6131 + t);
        // unit-diagonal covariance from a random factor loading
        std::vector<double> lam(n);
        for (auto& v : lam)
            v = rng.uniform(-0.9, 0.9);
        GaussianVector gv;
        gv.n = n;
        gv.covariance.assign(n * n, 0.0);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                gv.covariance[i * n + j] =
                    (i == j) ? 1.0 : lam[i] * lam[j];
        std::vector<double> thresholds(n - 1);
        for (auto& v : thresholds)
            v = rng.uniform(-0.2, 2.0);
        VerificationReport r = verify_theorem1a(
            gv, thresholds, 0, cfg.w, cfg.mc, CounterRng::mix(cfg.seed + t));
        os << to_jsonl(r) << "\n";
        pass = pass && (r.status != VerificationReport::Status::fail);
    }
    return pass ? kExitOk : kExitCheckFailed;
}

int run_verify_sidak(const RunConfig& cfg) {
    Sink sink(cfg.out);
    auto& os = sink.stream();
    os << meta(cfg).dump() << "\n";
    bool pass = true;
    std::int64_t trials = cfg.trials > 0 ? cfg.trials : 50;
    for (std::int64_t t = 0; t < trials; ++t) {
        RngStream rng(cfg.seed, 0x5164 + t);
        std::vector<std::vector<double>> dirs(cfg.layers,
                                              std::vector<double>(cfg.dim));
        std::vector<double> radii(cfg.layers);
        for (int i = 0; i < cfg.layers; ++i) {
            for (int k = 0; k < cfg.dim; ++k)
                dirs[i][k] = rng.normal();
            radii[i] = rng.uniform(0.5, 2.5);
        }
        VerificationReport r =
            verify_sidak(dirs, radii, cfg.mc, CounterRng::mix(cfg.seed ^ t));
        os << to_jsonl(r) << "\n";
        pass = pass && (r.status != VerificationReport::Status::fail);
    }
    return pass ? kExitOk : kExitCheckFailed;
}

int run_search_problem2(const RunConfig& cfg) {
    std::int64_t trials = cfg.trials > 0 ? cfg.trials : 10000;
    Problem2Report rep = search_problem2(trials, cfg.seed, cfg.tol);
    Sink sink(cfg.out);
    auto& os = sink.stream();
    os << meta(cfg).dump() << "\n";
    os << rep.to_jsonl();
    return kExitOk;  // exploratory: no assertion
}

}  // namespace

int main(int argc, char** argv) {
    RunConfig cfg;
    CLI::App app{"gcorr: numerical checks for Gaussian correlation bounds"};
    app.set_help_flag("--help", "print help");  // leave -h/--h to subcommands
    app.set_config("--config");
    app.require_subcommand(1);
    app.add_option("--tol", cfg.tol, "quadrature/root tolerance")
        ->capture_default_str();
    app.add_option("--seed", cfg.seed, "master seed (fixed default)")
        ->capture_default_str();
    app.add_option("--out", cfg.out,
                   "output path (GCORR_OUT_DIR prefixes relative paths)");
    app.add_option("--format", cfg.format,
                   "csv|json|jsonl (default: the subcommand's natural format)")
        ->check(CLI::IsMember({"csv", "json", "jsonl"}));

    std::vector<double> xs;
    auto* cmd_table = app.add_subcommand(
        "bounds-table", "tail-bound relative error table (CSV)");
    cmd_table->add_option("--xs", xs, "abscissas (default reference set)");

    int grid_points = 10000;
    auto* cmd_props = app.add_subcommand(
        "check-props", "tail-bound and hazard property suites");
    cmd_props->add_option("--grid-points", grid_points);

    auto* cmd_lin = app.add_subcommand("linearize",
                                       "mass/moment-matching line for a profile");
    cmd_lin->add_option("--profile", cfg.profile_file)->required();
    cmd_lin->add_option("--a", cfg.a)->required();
    cmd_lin->add_option("--b", cfg.b)->required();

    auto* cmd_scan = app.add_subcommand("scan-extremal",
                                        "boundary/ratio monotonicity grids");
    cmd_scan->add_option("--grid-spec", cfg.grid_spec,
                         "m=...;c=...;w=...;h=N");

    auto* cmd_final = app.add_subcommand("final-case",
                                         "negative-intercept strip checks");
    auto* opt_m = cmd_final->add_option("--m", cfg.m);
    cmd_final->add_option("--h", cfg.h);
    cmd_final->add_option("--a", cfg.a);
    cmd_final->add_option("--b", cfg.b);
    cmd_final->add_flag("--relaxed", cfg.relaxed,
                        "midpoint-only half-plane average bound");

    auto* cmd_t1 = app.add_subcommand("verify-theorem1",
                                      "body-vs-layer correlation bound");
    cmd_t1->add_option("--profile", cfg.profile_file);
    cmd_t1->add_option("--polygon", cfg.polygon_file);
    cmd_t1->add_option("--dir", cfg.dir, "slice direction x,y");
    cmd_t1->add_option("--w", cfg.w);
    cmd_t1->add_option("--trials", cfg.trials);

    auto* cmd_t1a = app.add_subcommand("verify-theorem1a",
                                       "rectangle-vs-band Monte Carlo");
    cmd_t1a->add_option("--dim", cfg.dim);
    cmd_t1a->add_option("--w", cfg.w);
    cmd_t1a->add_option("--trials", cfg.trials);
    cmd_t1a->add_option("--mc", cfg.mc);

    auto* cmd_sidak = app.add_subcommand("verify-sidak",
                                         "symmetric-slab product bound");
    cmd_sidak->add_option("--n", cfg.dim);
    cmd_sidak->add_option("--layers", cfg.layers);
    cmd_sidak->add_option("--trials", cfg.trials);
    cmd_sidak->add_option("--mc", cfg.mc);

    auto* cmd_p2 = app.add_subcommand("search-problem2",
                                      "centroid-matched polygon-pair search");
    cmd_p2->add_option("--trials", cfg.trials);

    // global flags may appear after the subcommand name
    for (CLI::App* sc : {cmd_table, cmd_props, cmd_lin, cmd_scan, cmd_final,
                         cmd_t1, cmd_t1a, cmd_sidak, cmd_p2})
        sc->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (cmd_table->parsed()) {
            cfg.subcommand = "bounds-table";
            return run_bounds_table(cfg, xs);
        }
        if (cmd_props->parsed()) {
            cfg.subcommand = "check-props";
            return run_check_props(cfg, grid_points);
        }
        if (cmd_lin->parsed()) {
            cfg.subcommand = "linearize";
            return run_linearize(cfg);
        }
        if (cmd_scan->parsed()) {
            cfg.subcommand = "scan-extremal";
            return run_scan_extremal(cfg);
        }
        if (cmd_final->parsed()) {
            cfg.subcommand = "final-case";
            cfg.single_instance = !opt_m->empty();
            return run_final_case(cfg);
        }
        if (cmd_t1->parsed()) {
            cfg.subcommand = "verify-theorem1";
            return run_verify_theorem1(cfg);
        }
        if (cmd_t1a->parsed()) {
            cfg.subcommand = "verify-theorem1a";
            return run_verify_theorem1a(cfg);
        }
        if (cmd_sidak->parsed()) {
            cfg.subcommand = "verify-sidak";
            return run_verify_sidak(cfg);
        }
        if (cmd_p2->parsed()) {
            cfg.subcommand = "search-problem2";
            return run_search_problem2(cfg);
        }
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInternal;
    }
}
