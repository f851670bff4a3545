#include "gcorr/extremal.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "gcorr/errors.hpp"
#include "gcorr/quadrature.hpp"

namespace gcorr {

namespace {

// signed x-moment about c of the region restricted to [lo, hi]
double strip_moment_about(double m, double h, double c, double lo, double hi,
                          double tol) {
    return line_gauss_xmoment(m, h, lo, hi) -
           c * line_gauss_mass(m, h, lo, hi, tol);
}

void validate_slope_intercept(double m, double h) {
    if (!(m >= 0))
        throw std::domain_error("extremal: slope must be >= 0 (symmetry reduction)");
    if (h == -kInf || std::isnan(h))
        throw std::domain_error("extremal: intercept must be finite or +inf");
}

// The centroid equation is homogeneous, and for strongly negative
// intercepts every moment in it is exponentially small (the region mass can
// sit at 1e-60 without losing relative accuracy).  All residuals are
// therefore measured against the configuration's own scale.
double eq14_scale(double m, double h, double c) {
    double s = std::fabs(half_plane_xmoment(m, h)) +
               (1.0 + std::fabs(c)) * half_plane_mass(m, h);
    return std::max(s, 1e-300);
}

}  // namespace

double boundary_for_centroid(RegionKind kind, double m, double h, double c,
                             double tol) {
    validate_slope_intercept(m, h);
    if (!(std::fabs(c) < kTailCut))
        throw std::domain_error("boundary_for_centroid: centroid out of range");
    const double scale = eq14_scale(m, h, c);
    const double inner =
        std::max(std::min(tol, 1e-11) * std::min(1.0, scale), 1e-290);
    const double feas = std::max(tol, 1e-12);
    double total =
        (half_plane_xmoment(m, h) - c * half_plane_mass(m, h)) / scale;

    if (kind == RegionKind::R1) {
        auto f = [&](double B) {
            return strip_moment_about(m, h, c, -kInf, B, inner) / scale;
        };
        if (!(f(kTailCut) > 0.0)) {  // no finite root this side of the cut
            if (total < -feas)
                throw infeasible_error(
                    "boundary_for_centroid: requested centroid " +
                    std::to_string(c) +
                    " exceeds the half-plane centroid " +
                    std::to_string(half_plane_centroid(m, h)) +
                    "; the limit boundary escapes to +inf before reaching it");
            return kInf;
        }
        return find_root(f, c, kTailCut, tol, 200, /*f_tol=*/0.0).root;
    }
    auto f = [&](double A) {
        return strip_moment_about(m, h, c, A, kInf, inner) / scale;
    };
    if (!(f(-kTailCut) < 0.0)) {
        if (total > feas)
            throw infeasible_error(
                "boundary_for_centroid: requested centroid " +
                std::to_string(c) + " lies below the half-plane centroid " +
                std::to_string(half_plane_centroid(m, h)) +
                "; the limit boundary escapes to -inf before reaching it");
        return -kInf;
    }
    return find_root(f, -kTailCut, c, tol, 200, /*f_tol=*/0.0).root;
}

ExtremalConfig make_config(RegionKind kind, double m, double h, double c,
                           double tol) {
    ExtremalConfig cfg;
    cfg.kind = kind;
    cfg.m = m;
    cfg.h = h;
    cfg.c = c;
    cfg.boundary = boundary_for_centroid(kind, m, h, c, tol);
    return cfg;
}

double config_moment_residual(const ExtremalConfig& cfg, double tol) {
    // one-shot quadrature of (x - c) Phi(mx + h), independent of the
    // closed-form moment used by the solver
    double lo = (cfg.kind == RegionKind::R1) ? -kInf : cfg.boundary;
    double hi = (cfg.kind == RegionKind::R1) ? cfg.boundary : kInf;
    if (lo >= hi)
        return 0.0;
    auto f = [&cfg](double x) {
        double y = (cfg.h == kInf) ? 1.0 : std_cdf(cfg.m * x + cfg.h);
        return (x - cfg.c) * y;
    };
    std::vector<double> brk;
    if (cfg.m > 0 && std::isfinite(cfg.h))
        brk.push_back(-cfg.h / cfg.m);
    return integrate_gauss(f, lo, hi, tol, brk).value;
}

double region_mass(const ExtremalConfig& cfg, double tol) {
    double lo = (cfg.kind == RegionKind::R1) ? -kInf : cfg.boundary;
    double hi = (cfg.kind == RegionKind::R1) ? cfg.boundary : kInf;
    if (lo >= hi)
        return 0.0;
    return line_gauss_mass(cfg.m, cfg.h, lo, hi, tol);
}

double f_ratio(const ExtremalConfig& cfg, const Layer& layer, double tol,
               bool require_centroid_match) {
    if (require_centroid_match) {
        if (std::fabs(cfg.c - layer.c) > 1e-9)
            throw std::domain_error(
                "f_ratio: configuration centroid does not match the layer");
        // root tolerance can leave the solved boundary a hair under b at
        // the first admissible intercept
        if (cfg.kind == RegionKind::R1 && cfg.boundary < layer.b - 1e-6)
            throw std::domain_error(
                "f_ratio: R1 boundary below the layer top is excluded");
    }
    // both integrals shrink together as the intercept falls; the ratio
    // keeps its relative accuracy down to the edge of the double range
    double scale = half_plane_mass(cfg.m, cfg.h);
    double inner = std::max(tol * std::min(1.0, scale), 1e-290);
    double num = region_mass(cfg, inner);
    double strip = line_gauss_mass(cfg.m, cfg.h, layer.a, layer.b, inner);
    double den = strip / layer.w;
    if (!(den > 1e-290))
        throw degenerate_error("f_ratio: strip average vanishes");
    return num / den;
}

double h_star(double m, double c, double b, double tol) {
    validate_slope_intercept(m, 0.0);
    // G(h) = moment about c over (-inf, b], against the h-dependent scale;
    // G > 0 iff B(h) < b
    auto G = [&](double h) {
        double scale = eq14_scale(m, h, c);
        double inner =
            std::max(std::min(tol, 1e-11) * std::min(1.0, scale), 1e-290);
        return strip_moment_about(m, h, c, -kInf, b, inner) / scale;
    };
    double g_limit = -std_pdf(b) - c * std_cdf(b);  // h -> +inf
    if (g_limit >= 0.0)
        throw infeasible_error(
            "h_star: layer top " + std::to_string(b) +
            " is not below the limit boundary; no intercept reaches it");
    double lo = -1.0, hi = 1.0;
    int guard = 0;
    while (G(hi) > 0) {
        hi *= 2;
        if (hi > kTailCut || ++guard > 16)
            return kInf;  // boundary reaches b only in the strip limit
    }
    guard = 0;
    while (G(lo) < 0) {
        lo *= 2;
        if (lo < -kTailCut || ++guard > 16)
            return -kInf;  // boundary is past b already for every intercept
    }
    return find_root(G, lo, hi, tol, 200, /*f_tol=*/0.0).root;
}

double h_tilde(double m, double c, double tol) {
    validate_slope_intercept(m, 0.0);
    if (c <= 0.0)
        return kInf;  // the boundary stays finite for every intercept
    if (m == 0.0)
        return -kInf;  // horizontal boundary: no R1 configuration at any h
    auto q = [&](double h) { return half_plane_centroid(m, h) - c; };
    double lo = -1.0, hi = 1.0;
    int guard = 0;
    while (q(hi) > 0) {
        hi *= 2;
        if (hi > kTailCut || ++guard > 16)
            throw infeasible_error("h_tilde: centroid is unreachably large");
    }
    guard = 0;
    while (q(lo) < 0) {
        lo *= 2;
        if (lo < -kTailCut || ++guard > 16)
            throw infeasible_error("h_tilde: centroid not reached by any intercept");
    }
    return find_root(q, lo, hi, tol, 200, /*f_tol=*/0.0).root;
}

double limit_boundary(RegionKind kind, double c, double tol) {
    return boundary_for_centroid(kind, 0.0, kInf, c, tol);
}

std::vector<double> intercept_grid(double lo, double hi, int count,
                                   bool append_limit) {
    if (count < 2)
        throw std::domain_error("intercept_grid: need at least 2 points");
    if (!(lo < hi))
        throw std::domain_error("intercept_grid: requires lo < hi");
    std::vector<double> out;
    out.reserve(count + (append_limit ? 1 : 0));
    const double k = 5.0;  // geometric concentration towards lo
    for (int i = 0; i < count; ++i) {
        double u = static_cast<double>(i) / (count - 1);
        out.push_back(lo + (hi - lo) * std::expm1(k * u) / std::expm1(k));
    }
    if (append_limit)
        out.push_back(kInf);
    return out;
}

MonotonicityReport scan_boundary_monotonicity(RegionKind kind, double m, double c,
                               const std::vector<double>& h_grid, double tol) {
    MonotonicityReport rep;
    for (double h : h_grid) {
        ScanPoint pt;
        pt.h = h;
        try {
            pt.value = boundary_for_centroid(kind, m, h, c, tol);
            pt.feasible = true;
        } catch (const infeasible_error& e) {
            pt.feasible = false;
            pt.note = e.what();
            ++rep.skipped;
        }
        rep.points.push_back(std::move(pt));
    }
    rep.min_forward_difference = kInf;
    const ScanPoint* prev = nullptr;
    for (const ScanPoint& pt : rep.points) {
        if (!pt.feasible)
            continue;
        if (prev) {
            double d;
            if (std::isinf(prev->value) && std::isinf(pt.value) &&
                prev->value == pt.value)
                d = 0.0;
            else
                d = pt.value - prev->value;
            rep.min_forward_difference = std::min(rep.min_forward_difference, d);
        }
        prev = &pt;
    }
    return rep;
}

MonotonicityReport scan_ratio_monotonicity(double m, double c, double w,
                               const std::vector<double>& h_grid, double tol) {
    MonotonicityReport rep;
    Layer layer = match_layer(c, w, std::min(tol, 1e-11));
    double hs = h_star(m, c, layer.b, tol);
    double ht = h_tilde(m, c, tol);
    for (double h : h_grid) {
        ScanPoint pt;
        pt.h = h;
        if (h < hs - 1e-12 || h > ht + 1e-12) {
            pt.feasible = false;
            pt.note = "outside [h*, h~]";
            ++rep.skipped;
            rep.points.push_back(std::move(pt));
            continue;
        }
        try {
            ExtremalConfig cfg = make_config(RegionKind::R1, m, h, c, tol);
            pt.value = f_ratio(cfg, layer, tol);
            pt.feasible = true;
        } catch (const infeasible_error& e) {
            pt.feasible = false;
            pt.note = e.what();
            ++rep.skipped;
        }
        rep.points.push_back(std::move(pt));
    }
    rep.min_forward_difference = kInf;
    const ScanPoint* prev = nullptr;
    for (const ScanPoint& pt : rep.points) {
        if (!pt.feasible)
            continue;
        if (prev)
            rep.min_forward_difference =
                std::min(rep.min_forward_difference, pt.value - prev->value);
        prev = &pt;
    }
    return rep;
}

AveragingReport averaging_inequality_check(
    const std::function<double(double)>& g,
    const std::function<double(double)>& rho,
    std::pair<double, double> outer, std::pair<double, double> inner,
    double tol) {
    auto [al, be] = outer;
    auto [alp, bep] = inner;
    if (!(al <= alp && alp < bep && bep <= be))
        throw std::domain_error("averaging_inequality_check: intervals must nest");
    if (!(std::isfinite(alp) && std::isfinite(bep)))
        throw std::domain_error("averaging_inequality_check: inner interval must be finite");
    double lo = std::max(al, -kTailCut);
    double hi = std::min(be, kTailCut);
    const double inner_tol = std::min(tol * 0.1, 1e-11);
    auto averages = [&](double x0, double x1) {
        double mass = integrate(rho, x0, x1, inner_tol).value;
        if (mass <= 0)
            throw degenerate_error("averaging_inequality_check: weight vanishes");
        double bary =
            integrate([&](double x) { return x * rho(x); }, x0, x1, inner_tol)
                .value /
            mass;
        double avg =
            integrate([&](double x) { return g(x) * rho(x); }, x0, x1, inner_tol)
                .value /
            mass;
        return std::make_pair(bary, avg);
    };
    auto [bary_out, avg_out] = averages(lo, hi);
    auto [bary_in, avg_in] = averages(alp, bep);
    AveragingReport rep;
    rep.hypothesis_value = (bary_out - bary_in) * (g(bep) - g(alp));
    rep.hypothesis_met = rep.hypothesis_value >= -tol;
    rep.outer_average = avg_out;
    rep.inner_average = avg_in;
    rep.margin = avg_out - avg_in;
    return rep;
}

FinalCaseReport final_case_check(double m, double h, double a, double b,
                                 double tol) {
    if (!(m > 0))
        throw std::domain_error("final_case_check: requires m > 0");
    if (!(h < 0))
        throw std::domain_error("final_case_check: requires h < 0");
    if (!(a < b))
        throw std::domain_error("final_case_check: requires a < b");
    const double inner = std::min(tol * 0.1, 1e-11);
    FinalCaseReport rep;
    double s = std::sqrt(1.0 + m * m);
    rep.h0 = h / s;
    rep.phi0 = std_cdf(rep.h0);
    rep.x0 = (rep.h0 - h) / m;
    if ((a + b) / 2 < rep.x0 - 1e-12)
        throw infeasible_error(
            "final_case_check: strip midpoint " + std::to_string((a + b) / 2) +
            " lies left of the crossing point " + std::to_string(rep.x0) +
            "; the bound is not claimed there");

    double w = gauss_mass(a, b);
    rep.average_margin = line_gauss_mass(m, h, a, b, inner) / w - rep.phi0;
    rep.trivial = (a >= rep.x0 - 1e-12);

    rep.a_reduced = 2.0 * rep.x0 - b;
    double d = b - rep.x0;
    rep.reduced_applicable = !rep.trivial && d > 1e-9;
    if (rep.reduced_applicable) {
        double ar = rep.a_reduced;
        double left_deficit = rep.phi0 * gauss_mass(ar, rep.x0) -
                              line_gauss_mass(m, h, ar, rep.x0, inner);
        double right_excess = line_gauss_mass(m, h, rep.x0, b, inner) -
                              rep.phi0 * gauss_mass(rep.x0, b);
        rep.reduced_margin = right_excess - left_deficit;

        rep.x1 = rep.x0 + d / s;
        rep.x2 = rep.x0 + d * s;
        // the rotated copy of the slanted boundary: slope -1/m through the
        // same crossing geometry
        double refl_m = -1.0 / m;
        double refl_h = rep.x0 / m + rep.h0 + s * d / m;
        double lhs = line_gauss_mass(refl_m, refl_h, b, rep.x2, inner) -
                     rep.phi0 * gauss_mass(b, rep.x2);
        double rhs = line_gauss_mass(m, h, rep.x1, b, inner) -
                     line_gauss_mass(refl_m, refl_h, rep.x1, b, inner);
        rep.triangle_margin = rhs - lhs;
    }
    return rep;
}

RelaxedAverageReport relaxed_average_check(double m, double h, double a,
                                           double b, double tol) {
    if (!(m > 0))
        throw std::domain_error("relaxed_average_check: requires m > 0");
    if (!(a < b))
        throw std::domain_error("relaxed_average_check: requires a < b");
    const double inner = std::min(tol * 0.1, 1e-11);
    RelaxedAverageReport rep;
    double s = std::sqrt(1.0 + m * m);
    rep.half_plane = std_cdf(h / s);
    rep.x0 = (h < 0) ? (h / s - h) / m : 0.0;
    rep.midpoint = 0.5 * (a + b);
    if (rep.midpoint < rep.x0 - 1e-12)
        throw infeasible_error(
            "relaxed_average_check: strip midpoint left of the admissible "
            "threshold " + std::to_string(rep.x0));
    rep.average = line_gauss_mass(m, h, a, b, inner) / gauss_mass(a, b);
    rep.margin = rep.average - rep.half_plane;
    return rep;
}

SymmetricAverageReport symmetric_average_scan(double m, double h,
                                              const std::vector<double>& d_grid,
                                              double tol) {
    if (!(h >= 0))
        throw std::domain_error("symmetric_average_scan: requires h >= 0");
    const double inner = std::min(tol * 0.1, 1e-11);
    SymmetricAverageReport rep;
    rep.d_grid = d_grid;
    rep.max_forward_increase = -kInf;
    double prev = 0;
    bool have_prev = false;
    for (double d : d_grid) {
        if (!(d > 0))
            throw std::domain_error("symmetric_average_scan: d must be positive");
        double avg = line_gauss_mass(m, h, -d, d, inner) / gauss_mass(-d, d);
        rep.averages.push_back(avg);
        if (have_prev)
            rep.max_forward_increase =
                std::max(rep.max_forward_increase, avg - prev);
        prev = avg;
        have_prev = true;
    }
    return rep;
}

SupportExtension extend_support(const ConcaveProfile& psi, double a, double b,
                                double m, double h, double c, double tol) {
    if (!(a < b))
        throw std::domain_error("extend_support: requires a < b");
    if (!(c > a && c < b))
        throw std::domain_error("extend_support: centroid must lie strictly inside [a,b]");
    const double inner = std::min(tol * 0.1, 1e-11);
    std::vector<double> brk = psi.breakpoints();

    auto psi_moment = [&](double lo, double hi) {
        if (lo >= hi)
            return 0.0;
        return integrate_gauss(
                   [&](double x) { return (x - c) * std_cdf(psi(x)); }, lo, hi,
                   inner, brk)
            .value;
    };
    auto psi_mass = [&](double lo, double hi) {
        if (lo >= hi)
            return 0.0;
        return integrate_gauss([&](double x) { return std_cdf(psi(x)); }, lo,
                               hi, inner, brk)
            .value;
    };

    SupportExtension ext;

    // left boundary: match the outside moment of the original region
    double t_left = psi_moment(-kInf, a);
    auto s_left = [&](double A0) {
        return strip_moment_about(m, h, c, A0, a, inner) - t_left;
    };
    if (s_left(-kTailCut) > -1e-13)
        ext.A0 = -kInf;
    else
        ext.A0 = find_root(s_left, -kTailCut, a, tol).root;

    double t_right = psi_moment(b, kInf);
    auto s_right = [&](double B0) {
        return strip_moment_about(m, h, c, b, B0, inner) - t_right;
    };
    if (s_right(kTailCut) < 1e-13)
        ext.B0 = kInf;
    else
        ext.B0 = find_root(s_right, b, kTailCut, tol).root;

    double a_eff = std::max(ext.A0, -kTailCut);
    double b_eff = std::min(ext.B0, kTailCut);
    ext.left_mass_gain =
        line_gauss_mass(m, h, a_eff, a, inner) - psi_mass(-kInf, a);
    ext.right_mass_gain =
        line_gauss_mass(m, h, b, b_eff, inner) - psi_mass(b, kInf);
    ext.mass_gain =
        line_gauss_mass(m, h, a_eff, b_eff, inner) - psi_mass(-kInf, kInf);
    ext.centroid_residual = strip_moment_about(m, h, c, a_eff, b_eff, inner);
    if (ext.mass_gain < -std::max(100.0 * tol, 1e-8))
        throw std::logic_error(
            "extend_support: extended region lost mass; the matching "
            "boundaries are inconsistent");

    // terminal configuration: widen at fixed centroid until one side
    // escapes.  One-boundary configurations carry a nonnegative slope by
    // the x -> -x symmetry, so mirror the problem when the line tilts down.
    double mt = m, ht2 = h, ct = c;
    if (m < 0) {
        mt = -m;
        ct = -c;
        ext.reflected = true;
    }
    double total = half_plane_xmoment(mt, ht2) - ct * half_plane_mass(mt, ht2);
    RegionKind terminal_kind =
        (total >= 0.0) ? RegionKind::R1 : RegionKind::R2;
    ext.terminal = make_config(terminal_kind, mt, ht2, ct, tol);

    // a short widening path (A stepped geometrically, B solved), for the
    // report only
    if (std::isfinite(ext.A0) && std::isfinite(ext.B0)) {
        double A = ext.A0;
        for (int step = 0; step < 8 && A > -kTailCut + 1.0; ++step) {
            A = c - 2.0 * (c - A);
            if (A < -kTailCut)
                A = -kTailCut;
            if (strip_moment_about(m, h, c, A, kInf, inner) < 0)
                break;  // the right boundary has escaped to +inf
            try {
                double B = find_root(
                    [&](double B1) {
                        return strip_moment_about(m, h, c, A, B1, inner);
                    },
                    c, kTailCut, tol).root;
                ext.trace.emplace_back(A, B);
            } catch (const bracketing_error&) {
                break;
            }
        }
    }
    return ext;
}

ExtremalScanSummary scan_extremal_grids(
    const ExtremalGrids& grids, double tol,
    const std::function<void(const ExtremalScanPoint&)>& emit) {
    ExtremalScanSummary s;
    auto point = [&](RegionKind kind, double m, double c, double w, double h,
                     const char* quantity, double value, double fwd) {
        if (emit)
            emit({kind, m, c, w, h, quantity, value, fwd});
    };
    for (double m : grids.ms) {
        for (double c : grids.cs) {
            for (double w : grids.ws) {
                if (std::fabs(c) >= max_layer_centroid(w) * 0.999) {
                    ++s.skipped;
                    continue;
                }
                Layer layer = match_layer(c, w, std::min(tol, 1e-11));

                // R1 branch on [h*, h~] (capped for the grid)
                double hs = 0, ht = 0;
                bool r1_ok = true;
                try {
                    hs = h_star(m, c, layer.b, tol);
                    ht = h_tilde(m, c, tol);
                } catch (const infeasible_error&) {
                    r1_ok = false;
                }
                if (r1_ok && std::isfinite(hs) && hs < kTailCut && ht > hs) {
                    double cap = std::min(ht, std::max(hs + 16.0, 8.0));
                    auto grid = intercept_grid(hs, cap, grids.h_points,
                                               /*append_limit=*/ht == kInf);
                    MonotonicityReport b8 =
                        scan_boundary_monotonicity(RegionKind::R1, m, c, grid, tol);
                    MonotonicityReport f9 = scan_ratio_monotonicity(m, c, w, grid, tol);
                    s.min_diff_B =
                        std::min(s.min_diff_B, b8.min_forward_difference);
                    s.min_diff_F1 =
                        std::min(s.min_diff_F1, f9.min_forward_difference);
                    s.skipped += b8.skipped + f9.skipped;
                    const ScanPoint* prev = nullptr;
                    for (const ScanPoint& pb : b8.points) {
                        if (!pb.feasible)
                            continue;
                        point(RegionKind::R1, m, c, w, pb.h, "boundary",
                              pb.value, prev ? pb.value - prev->value : kInf);
                        prev = &pb;
                    }
                    prev = nullptr;
                    for (const ScanPoint& pf : f9.points) {
                        if (!pf.feasible)
                            continue;
                        point(RegionKind::R1, m, c, w, pf.h, "ratio", pf.value,
                              prev ? pf.value - prev->value : kInf);
                        s.max_F1 = std::max(s.max_F1, pf.value);
                        ++s.evaluated;
                        prev = &pf;
                    }
                }

                // R2 branch exists only for c > 0
                if (c > 0) {
                    double lo =
                        (r1_ok && std::isfinite(ht)) ? ht + 1e-6 : -8.0;
                    if (m == 0.0)
                        lo = -8.0;
                    auto grid = intercept_grid(lo, std::max(lo + 16.0, 8.0),
                                               grids.h_points, true);
                    MonotonicityReport a8 =
                        scan_boundary_monotonicity(RegionKind::R2, m, c, grid, tol);
                    s.min_diff_A =
                        std::min(s.min_diff_A, a8.min_forward_difference);
                    s.skipped += a8.skipped;
                    const ScanPoint* prev = nullptr;
                    for (const ScanPoint& pa : a8.points) {
                        if (!pa.feasible)
                            continue;
                        point(RegionKind::R2, m, c, w, pa.h, "boundary",
                              pa.value, prev ? pa.value - prev->value : kInf);
                        prev = &pa;
                        try {
                            ExtremalConfig cfg;
                            cfg.kind = RegionKind::R2;
                            cfg.m = m;
                            cfg.h = pa.h;
                            cfg.boundary = pa.value;
                            cfg.c = c;
                            double f2 = f_ratio(cfg, layer, tol);
                            point(RegionKind::R2, m, c, w, pa.h, "ratio", f2,
                                  kInf);
                            s.max_F2 = std::max(s.max_F2, f2);
                            ++s.evaluated;
                        } catch (const degenerate_error&) {
                            ++s.skipped;
                        }
                    }
                }
            }
        }
    }
    return s;
}

std::vector<std::array<double, 4>> final_case_grid() {
    std::vector<std::array<double, 4>> out;
    for (double m : {0.5, 1.0, 2.0, 4.0})
        for (double h : {-0.5, -1.0, -2.0, -3.0, -4.0})
            for (double d : {0.25, 0.5, 1.0, 1.5, 2.0}) {
                double s = std::sqrt(1.0 + m * m);
                double x0 = (h / s - h) / m;
                out.push_back({m, h, x0 - d, x0 + d});
            }
    return out;
}

double f1_dh_diagnostic(double m, double c, const Layer& layer, double h,
                        double tol) {
    if (!std::isfinite(h))
        throw std::domain_error("f1_dh_diagnostic: needs a finite intercept");
    const double inner = std::min(tol * 0.1, 1e-11);
    double B = boundary_for_centroid(RegionKind::R1, m, h, c, tol);
    if (!std::isfinite(B))
        throw std::domain_error("f1_dh_diagnostic: boundary at the strip limit");

    double num = line_gauss_mass(m, h, -kInf, B, inner);
    double den = line_gauss_mass(m, h, layer.a, layer.b, inner) / layer.w;

    auto phi_line = [m, h](double x) { return std_pdf(m * x + h); };
    double dmom = integrate_gauss(
                      [&](double x) { return (x - c) * phi_line(x); }, -kInf,
                      B, inner)
                      .value;
    double Bp = -dmom / ((B - c) * std_cdf(m * B + h) * std_pdf(B));
    double dnum = Bp * std_cdf(m * B + h) * std_pdf(B) +
                  integrate_gauss(phi_line, -kInf, B, inner).value;
    double dden =
        integrate_gauss(phi_line, layer.a, layer.b, inner).value / layer.w;
    return (dnum * den - num * dden) / (den * den);
}

}  // namespace gcorr
