#include "gcorr/reduction.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "gcorr/errors.hpp"
#include "gcorr/lineregion.hpp"
#include "gcorr/quadrature.hpp"

namespace gcorr {

ConvexPolygon::ConvexPolygon(std::vector<Vec2> vertices) : v_(std::move(vertices)) {
    if (v_.size() < 3)
        throw std::invalid_argument("ConvexPolygon: need at least 3 vertices");
    size_t n = v_.size();
    for (size_t i = 0; i < n; ++i) {
        Vec2 e1 = v_[(i + 1) % n] - v_[i];
        Vec2 e2 = v_[(i + 2) % n] - v_[(i + 1) % n];
        if (!(cross(e1, e2) > 0))
            throw std::invalid_argument(
                "ConvexPolygon: vertices must be strictly convex and "
                "counterclockwise");
    }
}

std::pair<double, double> ConvexPolygon::projection_range(Vec2 u) const {
    double lo = dot(v_[0], u), hi = lo;
    for (const Vec2& p : v_) {
        lo = std::min(lo, dot(p, u));
        hi = std::max(hi, dot(p, u));
    }
    return {lo, hi};
}

std::optional<std::pair<double, double>> ConvexPolygon::slice(Vec2 u,
                                                              double t) const {
    const Vec2 v = rot90(u);
    double s_lo = kInf, s_hi = -kInf;
    size_t n = v_.size();
    for (size_t i = 0; i < n; ++i) {
        const Vec2& p = v_[i];
        const Vec2& q = v_[(i + 1) % n];
        double fp = dot(p, u) - t;
        double fq = dot(q, u) - t;
        if (fp == 0.0) {
            double s = dot(p, v);
            s_lo = std::min(s_lo, s);
            s_hi = std::max(s_hi, s);
        }
        if ((fp > 0 && fq < 0) || (fp < 0 && fq > 0)) {
            double lam = fp / (fp - fq);
            Vec2 x = p + lam * (q - p);
            double s = dot(x, v);
            s_lo = std::min(s_lo, s);
            s_hi = std::max(s_hi, s);
        }
    }
    if (s_lo > s_hi)
        return std::nullopt;
    return std::make_pair(s_lo, s_hi);
}

bool ConvexPolygon::contains(Vec2 p, double eps) const {
    size_t n = v_.size();
    for (size_t i = 0; i < n; ++i) {
        Vec2 e = v_[(i + 1) % n] - v_[i];
        if (cross(e, p - v_[i]) < -eps)
            return false;
    }
    return true;
}

std::string to_json(const ConvexPolygon& poly) {
    nlohmann::json j;
    auto& vs = j["vertices"] = nlohmann::json::array();
    for (const Vec2& p : poly.vertices())
        vs.push_back({p.x, p.y});
    return j.dump();
}

ConvexPolygon polygon_from_json(std::string_view text) {
    nlohmann::json j = nlohmann::json::parse(text);
    std::vector<Vec2> pts;
    for (const auto& v : j.at("vertices"))
        pts.push_back({v.at(0).get<double>(), v.at(1).get<double>()});
    return ConvexPolygon(std::move(pts));
}

ConvexPolygon translated(const ConvexPolygon& poly, Vec2 t) {
    std::vector<Vec2> pts = poly.vertices();
    for (Vec2& p : pts)
        p = p + t;
    return ConvexPolygon(std::move(pts));
}

ConvexPolygon convex_hull(std::vector<Vec2> pts) {
    if (pts.size() < 3)
        throw degenerate_error("convex_hull: need at least 3 points");
    std::sort(pts.begin(), pts.end(), [](Vec2 a, Vec2 b) {
        return a.x < b.x || (a.x == b.x && a.y < b.y);
    });
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](Vec2 a, Vec2 b) { return a.x == b.x && a.y == b.y; }),
              pts.end());
    const double eps = 1e-12;
    auto turns_left = [eps](Vec2 a, Vec2 b, Vec2 c) {
        return cross(b - a, c - b) > eps;
    };
    std::vector<Vec2> hull(2 * pts.size());
    size_t k = 0;
    for (const Vec2& p : pts) {  // lower chain
        while (k >= 2 && !turns_left(hull[k - 2], hull[k - 1], p))
            --k;
        hull[k++] = p;
    }
    size_t lower = k + 1;
    for (size_t i = pts.size() - 1; i-- > 0;) {  // upper chain
        const Vec2& p = pts[i];
        while (k >= lower && !turns_left(hull[k - 2], hull[k - 1], p))
            --k;
        hull[k++] = p;
    }
    hull.resize(k > 0 ? k - 1 : 0);
    if (hull.size() < 3)
        throw degenerate_error("convex_hull: degenerate (collinear) point set");
    return ConvexPolygon(std::move(hull));
}

std::optional<ConvexPolygon> intersect(const ConvexPolygon& a,
                                       const ConvexPolygon& b) {
    std::vector<Vec2> poly = a.vertices();
    const auto& clip = b.vertices();
    size_t nc = clip.size();
    for (size_t i = 0; i < nc && poly.size() >= 3; ++i) {
        Vec2 ca = clip[i];
        Vec2 cb = clip[(i + 1) % nc];
        Vec2 edge = cb - ca;
        std::vector<Vec2> out;
        size_t np = poly.size();
        for (size_t j = 0; j < np; ++j) {
            Vec2 p = poly[j];
            Vec2 q = poly[(j + 1) % np];
            double dp = cross(edge, p - ca);
            double dq = cross(edge, q - ca);
            if (dp >= 0)
                out.push_back(p);
            if ((dp > 0 && dq < 0) || (dp < 0 && dq > 0)) {
                double lam = dp / (dp - dq);
                out.push_back(p + lam * (q - p));
            }
        }
        poly = std::move(out);
    }
    if (poly.size() < 3)
        return std::nullopt;
    // re-hull to drop duplicates/collinear points introduced by clipping
    try {
        return convex_hull(std::move(poly));
    } catch (const degenerate_error&) {
        return std::nullopt;
    }
}

PolygonMoments polygon_moments(const ConvexPolygon& poly, double tol) {
    const Vec2 e1{1, 0};
    auto [t_lo, t_hi] = poly.projection_range(e1);
    std::vector<double> brk;
    for (const Vec2& p : poly.vertices())
        brk.push_back(p.x);
    auto band = [&poly, e1](double t) -> std::pair<double, double> {
        auto s = poly.slice(e1, t);
        if (!s)
            return {0.0, 0.0};
        return *s;
    };
    PolygonMoments out;
    out.mass = integrate_gauss(
                   [&](double t) {
                       auto [y1, y2] = band(t);
                       return gauss_mass(std::min(y1, y2), std::max(y1, y2));
                   },
                   t_lo, t_hi, tol, brk)
                   .value;
    out.moment.x = integrate_gauss(
                       [&](double t) {
                           auto [y1, y2] = band(t);
                           return t * gauss_mass(std::min(y1, y2),
                                                 std::max(y1, y2));
                       },
                       t_lo, t_hi, tol, brk)
                       .value;
    out.moment.y = integrate_gauss(
                       [&](double t) {
                           auto [y1, y2] = band(t);
                           return std_pdf(y1) - std_pdf(y2);
                       },
                       t_lo, t_hi, tol, brk)
                       .value;
    return out;
}

std::vector<ProfileSample> ehrhard_profile(const ConvexPolygon& poly, Vec2 u,
                                           const std::vector<double>& grid) {
    double norm = std::sqrt(dot(u, u));
    if (std::fabs(norm - 1.0) > 1e-9)
        throw std::domain_error("ehrhard_profile: direction must be unit length");
    std::vector<ProfileSample> out;
    out.reserve(grid.size());
    for (double t : grid) {
        auto s = poly.slice(u, t);
        if (!s || !(s->second > s->first)) {
            out.push_back({t, -kInf});
            continue;
        }
        double mass = gauss_mass(s->first, s->second);
        out.push_back({t, std_cdf_inv(mass)});
    }
    return out;
}

ConcavityReport check_concavity(const std::vector<ProfileSample>& samples,
                                double tol) {
    std::vector<ProfileSample> fin;
    for (const auto& s : samples)
        if (std::isfinite(s.psi))
            fin.push_back(s);
    if (fin.size() < 3)
        throw degenerate_error(
            "check_concavity: need at least 3 finite samples");
    for (size_t i = 0; i + 1 < fin.size(); ++i)
        if (!(fin[i + 1].t > fin[i].t))
            throw std::domain_error("check_concavity: t must be strictly increasing");
    ConcavityReport rep;
    rep.finite_samples = static_cast<int>(fin.size());
    rep.max_violation = -kInf;
    rep.tol = tol;
    for (size_t i = 1; i + 1 < fin.size(); ++i) {
        double sl = (fin[i].psi - fin[i - 1].psi) / (fin[i].t - fin[i - 1].t);
        double sr = (fin[i + 1].psi - fin[i].psi) / (fin[i + 1].t - fin[i].t);
        double v = (sr - sl) / (1.0 + std::fabs(sl) + std::fabs(sr));
        if (v > rep.max_violation) {
            rep.max_violation = v;
            rep.at_t = fin[i].t;
        }
    }
    rep.passed = rep.max_violation <= tol;
    return rep;
}

ConcaveProfile profile_from_samples(const std::vector<ProfileSample>& samples) {
    std::vector<ConcaveProfile::Knot> knots;
    for (const auto& s : samples)
        if (std::isfinite(s.psi))
            knots.push_back({s.t, s.psi});
    if (knots.size() < 2)
        throw degenerate_error("profile_from_samples: too few finite samples");
    double lo = knots.front().x;
    double hi = knots.back().x;
    return ConcaveProfile(lo, hi, std::move(knots));
}

namespace {

struct MassMatcher {
    const ConcaveProfile& psi;
    double a, b;
    double target;      // mass of the region under psi on [a,b]
    double inner_tol;

    double intercept_for(double m) const {
        double w_ab = gauss_mass(a, b);
        // average height of the target region seeds the bracket
        double c_ab = layer_centroid(a, b);
        double h0 = std_cdf_inv(std::min(1.0 - 1e-15, std::max(1e-15, target / w_ab))) -
                    m * c_ab;
        double lo = h0 - 1.0, hi = h0 + 1.0;
        auto f = [&](double h) {
            return line_gauss_mass(m, h, a, b, inner_tol) - target;
        };
        double step = 1.0;
        int guard = 0;
        while (f(lo) > 0) {
            step *= 2;
            lo -= step;
            if (++guard > 64)
                throw bracketing_error("mass_match_intercept: lower bracket ran away");
        }
        step = 1.0;
        guard = 0;
        while (f(hi) < 0) {
            step *= 2;
            hi += step;
            if (++guard > 64)
                throw bracketing_error("mass_match_intercept: upper bracket ran away");
        }
        return find_root(f, lo, hi, inner_tol).root;
    }
};

}  // namespace

double mass_match_intercept(const ConcaveProfile& psi, double a, double b,
                            double slope, double tol) {
    if (!(a < b))
        throw std::domain_error("mass_match_intercept: requires a < b");
    double inner_tol = std::min(tol, 1e-11);
    double target = functionals(psi, a, b, inner_tol * 0.1).mass;
    double w_ab = gauss_mass(a, b);
    if (target < 1e-12 || target > w_ab * (1.0 - 1e-12))
        throw degenerate_error(
            "mass_match_intercept: region mass must lie strictly between 0 "
            "and the strip weight");
    return MassMatcher{psi, a, b, target, inner_tol}.intercept_for(slope);
}

namespace {

std::vector<double> line_profile_intersections(const ConcaveProfile& psi,
                                               double a, double b, double m0,
                                               double h0) {
    // d(x) = psi(x) - line(x) is piecewise linear between these abscissas
    std::vector<double> xs;
    xs.push_back(a);
    for (double x : psi.breakpoints())
        if (x > a && x < b)
            xs.push_back(x);
    xs.push_back(b);
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

    const double touch = 1e-9;
    auto sgn = [&](double v) -> int {
        if (v > touch)
            return 1;
        if (v < -touch)
            return -1;
        return 0;
    };
    std::vector<double> d(xs.size());
    for (size_t i = 0; i < xs.size(); ++i) {
        double p = psi(xs[i]);
        d[i] = (p == -kInf) ? -kInf : p - (m0 * xs[i] + h0);
    }
    std::vector<double> hits;
    int last_sign = sgn(std::isfinite(d[0]) ? d[0] : -1.0);
    bool in_zero_run = (last_sign == 0);
    if (in_zero_run)
        hits.push_back(xs[0]);
    for (size_t i = 1; i < xs.size(); ++i) {
        double dv = std::isfinite(d[i]) ? d[i] : -kInf;
        int s = sgn(dv == -kInf ? -1.0 : dv);
        if (s == 0) {
            if (!in_zero_run) {
                hits.push_back(xs[i]);  // tangential touch counts once
                in_zero_run = true;
            }
            continue;
        }
        if (in_zero_run) {
            in_zero_run = false;
            last_sign = s;
            continue;  // the touch was already recorded
        }
        if (last_sign != 0 && s != last_sign) {
            // strict crossing inside the segment
            double dl = std::isfinite(d[i - 1]) ? d[i - 1] : -1e300;
            double x = xs[i - 1] + (xs[i] - xs[i - 1]) * (0.0 - dl) / (dv - dl);
            hits.push_back(x);
        }
        last_sign = s;
    }
    return hits;
}

}  // namespace

LinearizationResult linearize(const ConcaveProfile& psi, double a, double b,
                              double tol) {
    if (!(a < b))
        throw std::domain_error("linearize: requires a < b");
    LinearizationResult out;
    if (psi.linear_on(a, b)) {
        out.m0 = psi.right_slope(a);
        out.h0 = psi(a) - out.m0 * a;
        out.endpoint_values_ok = true;
        out.endpoint_slopes_ok = true;
        return out;
    }
    double inner_tol = std::min(tol * 1e-2, 1e-11);
    GaussFunctionals target = functionals(psi, a, b, inner_tol * 0.1);
    double w_ab = gauss_mass(a, b);
    if (target.mass < 1e-10 || target.mass > w_ab * (1.0 - 1e-12))
        throw degenerate_error("linearize: region mass too close to 0 or to "
                               "the full strip weight");

    MassMatcher matcher{psi, a, b, target.mass, inner_tol};
    auto moment_gap = [&](double m) {
        double h = matcher.intercept_for(m);
        return line_gauss_xmoment(m, h, a, b) - target.moment;
    };

    // As the slope grows the matched region concentrates to the right
    // (vertical-strip limit), so the gap changes sign; expand until it does.
    double lo = -1.0, hi = 1.0;
    double flo = moment_gap(lo), fhi = moment_gap(hi);
    std::string trace;
    int guard = 0;
    while (fhi < 0) {
        hi *= 2;
        fhi = moment_gap(hi);
        trace += " M(" + std::to_string(hi) + ")=" + std::to_string(fhi);
        if (++guard > 48)
            throw bracketing_error("linearize: slope bracket expansion failed:" + trace);
    }
    guard = 0;
    while (flo > 0) {
        lo *= 2;
        flo = moment_gap(lo);
        trace += " M(" + std::to_string(lo) + ")=" + std::to_string(flo);
        if (++guard > 48)
            throw bracketing_error("linearize: slope bracket expansion failed:" + trace);
    }
    RootResult root = find_root(moment_gap, lo, hi, tol * 0.3);
    out.m0 = root.root;
    out.h0 = matcher.intercept_for(out.m0);
    out.mass_residual =
        line_gauss_mass(out.m0, out.h0, a, b, inner_tol) - target.mass;
    out.moment_residual =
        line_gauss_xmoment(out.m0, out.h0, a, b) - target.moment;
    out.intersections = line_profile_intersections(psi, a, b, out.m0, out.h0);

    double cmp = std::max(1e-9, 10.0 * tol);
    double pa = psi(a), pb = psi(b);
    double la = out.m0 * a + out.h0, lb = out.m0 * b + out.h0;
    out.endpoint_values_ok = (pa <= la + cmp) && (pb <= lb + cmp);
    out.endpoint_slopes_ok = (out.m0 <= psi.right_slope(a) + cmp) &&
                             (out.m0 >= psi.left_slope(b) - cmp);
    return out;
}

}  // namespace gcorr
