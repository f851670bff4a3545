#include "gcorr/profile.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "gcorr/errors.hpp"
#include "gcorr/quadrature.hpp"
#include "gcorr/rng.hpp"

namespace gcorr {

ConcaveProfile::ConcaveProfile(double support_lo, double support_hi,
                               std::vector<Knot> knots)
    : lo_(support_lo), hi_(support_hi), knots_(std::move(knots)) {
    validate();
}

void ConcaveProfile::validate() const {
    if (!(lo_ < hi_))
        throw std::invalid_argument("ConcaveProfile: empty support");
    if (knots_.empty())
        throw std::invalid_argument("ConcaveProfile: no knots");
    for (const Knot& k : knots_) {
        if (!std::isfinite(k.x))
            throw std::invalid_argument("ConcaveProfile: knot x must be finite");
        if (k.x < lo_ || k.x > hi_)
            throw std::invalid_argument("ConcaveProfile: knot outside support");
    }
    if (knots_.size() == 1) {
        if (knots_[0].y == -kInf)
            throw std::invalid_argument("ConcaveProfile: identically -inf");
        return;  // constant profile; +inf allowed here
    }
    double prev_slope = kInf;
    for (size_t i = 0; i + 1 < knots_.size(); ++i) {
        double dx = knots_[i + 1].x - knots_[i].x;
        if (!(dx > 0))
            throw std::invalid_argument(
                "ConcaveProfile: knot x must be strictly increasing");
        if (!std::isfinite(knots_[i].y) || !std::isfinite(knots_[i + 1].y))
            throw std::invalid_argument(
                "ConcaveProfile: non-constant profile needs finite values");
        double slope = (knots_[i + 1].y - knots_[i].y) / dx;
        double scale = std::max(1.0, std::fabs(prev_slope));
        if (i > 0 && slope > prev_slope + 1e-9 * scale)
            throw std::invalid_argument("ConcaveProfile: not concave");
        prev_slope = slope;
    }
}

ConcaveProfile ConcaveProfile::constant(double value, double support_lo,
                                        double support_hi) {
    double anchor = 0.0;
    if (std::isfinite(support_lo))
        anchor = support_lo;
    else if (std::isfinite(support_hi))
        anchor = support_hi;
    return ConcaveProfile(support_lo, support_hi, {{anchor, value}});
}

ConcaveProfile ConcaveProfile::line(double slope, double intercept,
                                    double support_lo, double support_hi) {
    double x0 = 0.0, x1 = 1.0;
    if (std::isfinite(support_lo) && std::isfinite(support_hi)) {
        x0 = support_lo;
        x1 = support_hi;
    } else if (std::isfinite(support_lo)) {
        x0 = support_lo;
        x1 = support_lo + 1.0;
    } else if (std::isfinite(support_hi)) {
        x0 = support_hi - 1.0;
        x1 = support_hi;
    }
    return ConcaveProfile(support_lo, support_hi,
                          {{x0, slope * x0 + intercept},
                           {x1, slope * x1 + intercept}});
}

bool ConcaveProfile::is_constant_infinite() const {
    return knots_.size() == 1 && knots_[0].y == kInf;
}

double ConcaveProfile::operator()(double x) const {
    if (x < lo_ || x > hi_)
        return -kInf;
    if (knots_.size() == 1)
        return knots_[0].y;
    if (x <= knots_.front().x) {
        double s = (knots_[1].y - knots_[0].y) / (knots_[1].x - knots_[0].x);
        return knots_[0].y + s * (x - knots_[0].x);
    }
    if (x >= knots_.back().x) {
        size_t n = knots_.size();
        double s = (knots_[n - 1].y - knots_[n - 2].y) /
                   (knots_[n - 1].x - knots_[n - 2].x);
        return knots_[n - 1].y + s * (x - knots_[n - 1].x);
    }
    auto it = std::upper_bound(
        knots_.begin(), knots_.end(), x,
        [](double v, const Knot& k) { return v < k.x; });
    const Knot& hi = *it;
    const Knot& lo = *(it - 1);
    double t = (x - lo.x) / (hi.x - lo.x);
    return lo.y + t * (hi.y - lo.y);
}

double ConcaveProfile::right_slope(double x) const {
    if (x < lo_)
        return kInf;  // psi rises from -inf at the support edge
    if (x >= hi_)
        return -kInf;
    if (knots_.size() == 1)
        return 0.0;
    size_t i = 0;
    while (i + 2 < knots_.size() && knots_[i + 1].x <= x)
        ++i;
    return (knots_[i + 1].y - knots_[i].y) / (knots_[i + 1].x - knots_[i].x);
}

double ConcaveProfile::left_slope(double x) const {
    if (x > hi_)
        return -kInf;
    if (x <= lo_)
        return kInf;
    if (knots_.size() == 1)
        return 0.0;
    size_t n = knots_.size();
    size_t i = n - 2;
    while (i > 0 && knots_[i].x >= x)
        --i;
    return (knots_[i + 1].y - knots_[i].y) / (knots_[i + 1].x - knots_[i].x);
}

bool ConcaveProfile::linear_on(double a, double b) const {
    if (a < lo_ || b > hi_)
        return false;
    if (knots_.size() == 1)
        return std::isfinite(knots_[0].y);
    double s0 = right_slope(a);
    for (const Knot& k : knots_) {
        if (k.x > a && k.x < b) {
            double sl = right_slope(k.x);
            if (std::fabs(sl - s0) > 1e-12 * std::max(1.0, std::fabs(s0)))
                return false;
        }
    }
    return true;
}

std::vector<double> ConcaveProfile::breakpoints() const {
    std::vector<double> out;
    if (std::isfinite(lo_))
        out.push_back(lo_);
    for (const Knot& k : knots_)
        out.push_back(k.x);
    if (std::isfinite(hi_))
        out.push_back(hi_);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

ConcaveProfile ConcaveProfile::shifted(double dy) const {
    std::vector<Knot> ks = knots_;
    for (Knot& k : ks)
        k.y += dy;
    return ConcaveProfile(lo_, hi_, std::move(ks));
}

namespace {

nlohmann::json encode_extended(double v) {
    if (v == kInf)
        return "inf";
    if (v == -kInf)
        return "-inf";
    return v;
}

double decode_extended(const nlohmann::json& j) {
    if (j.is_string()) {
        std::string s = j.get<std::string>();
        if (s == "inf")
            return kInf;
        if (s == "-inf")
            return -kInf;
        throw std::invalid_argument("unrecognized extended-real sentinel: " + s);
    }
    return j.get<double>();
}

}  // namespace

std::string to_json(const ConcaveProfile& p) {
    nlohmann::json j;
    j["support"] = {encode_extended(p.support_lo()),
                    encode_extended(p.support_hi())};
    auto& pts = j["points"] = nlohmann::json::array();
    for (const auto& k : p.knots())
        pts.push_back({k.x, encode_extended(k.y)});
    return j.dump();
}

ConcaveProfile profile_from_json(std::string_view text) {
    nlohmann::json j = nlohmann::json::parse(text);
    double lo = decode_extended(j.at("support").at(0));
    double hi = decode_extended(j.at("support").at(1));
    std::vector<ConcaveProfile::Knot> knots;
    for (const auto& pt : j.at("points"))
        knots.push_back({pt.at(0).get<double>(), decode_extended(pt.at(1))});
    return ConcaveProfile(lo, hi, std::move(knots));
}

Layer make_layer(double a, double b) {
    Layer l;
    l.a = a;
    l.b = b;
    l.w = gauss_mass(a, b);
    l.c = layer_centroid(a, b);
    return l;
}

double max_layer_centroid(double w) {
    if (!(w > 0.0 && w < 1.0))
        throw std::domain_error("max_layer_centroid: w must be in (0,1)");
    return std_pdf(std_cdf_inv(w)) / w;
}

Layer match_layer(double c, double w, double tol) {
    if (!(w > 0.0 && w < 1.0))
        throw std::domain_error("match_layer: w must be in (0,1)");
    double bound = max_layer_centroid(w);
    if (!(std::fabs(c) < bound))
        throw infeasible_error(
            "match_layer: no layer of weight " + std::to_string(w) +
            " has centroid " + std::to_string(c) + "; attainable range is (" +
            std::to_string(-bound) + ", " + std::to_string(bound) + ")");
    if (c == 0.0) {
        double b = std_cdf_inv(0.5 + 0.5 * w);
        return {-b, b, w, 0.0};
    }
    // centroid of [a, b(a)] is strictly increasing in a; bracket by the
    // extreme layers and solve
    auto upper_of = [w](double a) { return std_cdf_inv(std_cdf(a) + w); };
    auto centroid_of = [&](double a) { return layer_centroid(a, upper_of(a)); };
    double a_hi = std_cdf_inv(1.0 - w);  // layer escapes to +inf here
    double lo = std::max(-kTailCut + 1.0, a_hi - 60.0);
    double hi = a_hi - 1e-9 * std::max(1.0, std::fabs(a_hi));
    // keep the bracket inside the feasible sign change
    while (centroid_of(hi) < c) {
        double gap = a_hi - hi;
        hi = a_hi - gap / 16.0;
        if (gap < 1e-13)
            throw infeasible_error("match_layer: centroid target too close to limit");
    }
    RootResult r = find_root([&](double a) { return centroid_of(a) - c; }, lo,
                             hi, tol);
    double a = r.root;
    Layer out;
    out.a = a;
    out.b = upper_of(a);
    out.w = gauss_mass(out.a, out.b);
    out.c = layer_centroid(out.a, out.b);
    return out;
}

GaussFunctionals functionals(const ConcaveProfile& psi, double lo, double hi,
                             double tol) {
    if (!(lo < hi))
        throw std::domain_error("functionals: requires lo < hi");
    double a = std::max(lo, psi.support_lo());
    double b = std::min(hi, psi.support_hi());
    if (!(a < b))
        return {0.0, 0.0};
    GaussFunctionals out;
    if (psi.is_constant_infinite()) {
        out.mass = gauss_mass(a, b);
        out.moment = std_pdf(a) - std_pdf(b);
        return out;
    }
    std::vector<double> brk = psi.breakpoints();
    out.mass = integrate_gauss([&](double x) { return std_cdf(psi(x)); }, a, b,
                               tol, brk)
                   .value;
    out.moment =
        integrate_gauss([&](double x) { return x * std_cdf(psi(x)); }, a, b,
                        tol, brk)
            .value;
    return out;
}

double centroid_x(const ConcaveProfile& psi, double lo, double hi, double tol) {
    GaussFunctionals f = functionals(psi, lo, hi, tol);
    if (f.mass < std::max(1e-8, 10.0 * tol))
        throw degenerate_error(
            "centroid_x: region mass " + std::to_string(f.mass) +
            " is below the degeneracy threshold");
    return f.moment / f.mass;
}

ConcaveProfile random_profile(std::uint64_t seed, int pieces,
                              const ProfileBox& box) {
    if (pieces < 1)
        throw std::domain_error("random_profile: pieces must be >= 1");
    RngStream rng(seed, /*stream=*/0x70726f66ull);

    // stratified abscissas: strictly increasing with a guaranteed gap
    int n = pieces + 1;
    double span = 2.0 * box.x_half;
    std::vector<double> xs(n);
    for (int i = 0; i < n; ++i)
        xs[i] = -box.x_half + span * (i + 0.1 + 0.8 * rng.uniform()) / n;

    std::vector<double> slopes(pieces);
    for (int i = 0; i < pieces; ++i)
        slopes[i] = rng.uniform(-box.slope_max, box.slope_max);
    std::sort(slopes.begin(), slopes.end(), std::greater<double>());

    int anchor = std::min<int>(n - 1, static_cast<int>(rng.uniform() * n));
    double y_anchor = rng.uniform(box.y_lo, box.y_hi);

    std::vector<ConcaveProfile::Knot> knots(n);
    knots[anchor] = {xs[anchor], y_anchor};
    for (int i = anchor; i + 1 < n; ++i)
        knots[i + 1] = {xs[i + 1],
                        knots[i].y + slopes[i] * (xs[i + 1] - xs[i])};
    for (int i = anchor; i > 0; --i)
        knots[i - 1] = {xs[i - 1],
                        knots[i].y - slopes[i - 1] * (xs[i] - xs[i - 1])};

    double lo = -kInf, hi = kInf;
    double u = rng.uniform();
    if (u < 0.25) {
        lo = xs.front();
        hi = xs.back();
    } else if (u < 0.5) {
        lo = xs.front();
    } else if (u < 0.75) {
        hi = xs.back();
    }
    return ConcaveProfile(lo, hi, std::move(knots));
}

}  // namespace gcorr
