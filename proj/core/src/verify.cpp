#include "gcorr/verify.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <json.hpp>

#include "gcorr/errors.hpp"
#include "gcorr/quadrature.hpp"
#include "gcorr/rng.hpp"

namespace gcorr {

const char* to_string(VerificationReport::Status s) {
    switch (s) {
        case VerificationReport::Status::pass: return "pass";
        case VerificationReport::Status::fail: return "fail";
        default: return "inconclusive";
    }
}

std::string to_jsonl(const VerificationReport& r) {
    nlohmann::json j;
    j["instance"] = r.instance;
    j["lhs"] = r.lhs;
    j["rhs"] = r.rhs;
    j["margin"] = r.margin;
    j["tolerance"] = r.tolerance;
    j["method"] = r.method;
    if (r.mc_std_error)
        j["mc_std_error"] = *r.mc_std_error;
    j["status"] = to_string(r.status);
    return j.dump();
}

VerificationReport verify_theorem1(const ConcaveProfile& psi, double w,
                                   double tol) {
    const double inner = std::min(tol * 1e-2, 1e-10);
    GaussFunctionals full = functionals(psi, -kInf, kInf, inner);
    if (full.mass < 1e-8)
        throw degenerate_error("verify_theorem1: body carries almost no mass");
    double c = full.moment / full.mass;
    Layer layer = match_layer(c, w, inner);

    VerificationReport rep;
    rep.instance = "{\"profile\":" + to_json(psi) +
                   ",\"w\":" + std::to_string(w) + "}";
    rep.method = "quadrature";
    rep.tolerance = tol;
    rep.lhs = functionals(psi, layer.a, layer.b, inner).mass;
    rep.rhs = full.mass * layer.w;
    rep.margin = rep.lhs - rep.rhs;
    rep.status = (rep.margin >= -tol) ? VerificationReport::Status::pass
                                      : VerificationReport::Status::fail;
    return rep;
}

VerificationReport verify_theorem1_polygon(const ConvexPolygon& poly, Vec2 u,
                                           int grid_points, double w,
                                           double tol) {
    if (grid_points < 5)
        throw std::domain_error("verify_theorem1_polygon: grid too coarse");
    auto [t_lo, t_hi] = poly.projection_range(u);
    std::vector<double> grid(grid_points);
    for (int i = 0; i < grid_points; ++i)
        grid[i] = t_lo + (t_hi - t_lo) * i / (grid_points - 1);
    ConcaveProfile psi = profile_from_samples(ehrhard_profile(poly, u, grid));
    VerificationReport rep = verify_theorem1(psi, w, tol);
    rep.instance = "{\"polygon\":" + to_json(poly) + ",\"u\":[" +
                   std::to_string(u.x) + "," + std::to_string(u.y) +
                   "],\"w\":" + std::to_string(w) + "}";
    return rep;
}

std::vector<double> cholesky_psd(const GaussianVector& gv) {
    int n = gv.n;
    if (n <= 0 || static_cast<int>(gv.covariance.size()) != n * n)
        throw std::invalid_argument("cholesky_psd: bad dimensions");
    const auto& S = gv.covariance;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < i; ++j)
            if (std::fabs(S[i * n + j] - S[j * n + i]) > 1e-12)
                throw std::invalid_argument("cholesky_psd: covariance not symmetric");
    std::vector<double> L(n * n, 0.0);
    for (int j = 0; j < n; ++j) {
        double d = S[j * n + j];
        for (int k = 0; k < j; ++k)
            d -= L[j * n + k] * L[j * n + k];
        if (d < -1e-10)
            throw std::invalid_argument("cholesky_psd: covariance not PSD");
        if (d <= 0.0) {
            // semidefinite direction: the whole column collapses
            continue;
        }
        double root = std::sqrt(d);
        L[j * n + j] = root;
        for (int i = j + 1; i < n; ++i) {
            double s = S[i * n + j];
            for (int k = 0; k < j; ++k)
                s -= L[i * n + k] * L[j * n + k];
            L[i * n + j] = s / root;
        }
    }
    return L;
}

namespace {

struct BatchAccumulator {
    // batch means over a fixed number of batches, for std-error estimates of
    // ratio statistics
    static constexpr int kBatches = 20;
    std::vector<double> sums;
    explicit BatchAccumulator(int streams)
        : sums(static_cast<size_t>(streams) * kBatches, 0.0) {}
    void add(int stream, std::int64_t sample, std::int64_t total, double v) {
        int batch = static_cast<int>(sample * kBatches / total);
        sums[static_cast<size_t>(stream) * kBatches + batch] += v;
    }
    double total(int stream) const {
        double t = 0;
        for (int b = 0; b < kBatches; ++b)
            t += sums[static_cast<size_t>(stream) * kBatches + b];
        return t;
    }
    double batch(int stream, int b) const {
        return sums[static_cast<size_t>(stream) * kBatches + b];
    }
};

double batch_std_error(const std::vector<double>& per_batch) {
    int n = static_cast<int>(per_batch.size());
    double mean = 0;
    for (double v : per_batch)
        mean += v;
    mean /= n;
    double var = 0;
    for (double v : per_batch)
        var += (v - mean) * (v - mean);
    var /= (n - 1.0);
    return std::sqrt(var / n);
}

}  // namespace

VerificationReport verify_theorem1a(
    const GaussianVector& gv, const std::vector<double>& thresholds,
    int y_index, double w, std::int64_t mc, std::uint64_t seed,
    std::optional<std::pair<double, double>> band) {
    if (mc < 100000)
        throw std::domain_error("verify_theorem1a: needs at least 1e5 samples");
    int n = gv.n;
    if (y_index < 0 || y_index >= n)
        throw std::domain_error("verify_theorem1a: y_index out of range");
    if (static_cast<int>(thresholds.size()) != n - 1)
        throw std::domain_error(
            "verify_theorem1a: need one threshold per conditioning coordinate");
    std::vector<double> L = cholesky_psd(gv);
    std::vector<double> mean = gv.mean;
    if (mean.empty())
        mean.assign(n, 0.0);
    if (static_cast<int>(mean.size()) != n)
        throw std::invalid_argument("verify_theorem1a: mean has wrong size");
    double var_y = gv.covariance[y_index * n + y_index];
    if (!(var_y > 0))
        throw std::invalid_argument("verify_theorem1a: the band coordinate is degenerate");
    double sigma_y = std::sqrt(var_y);
    double mu_y = mean[y_index];

    CounterRng rng(seed, /*stream=*/0x74316100ull);
    auto sample = [&](std::int64_t i, std::vector<double>& z,
                      std::vector<double>& x) {
        for (int k = 0; k < n; ++k)
            z[k] = rng.normal(static_cast<std::uint64_t>(i) * n + k);
        for (int k = 0; k < n; ++k) {
            double s = mean[k];
            for (int j = 0; j <= k; ++j)
                s += L[k * n + j] * z[j];
            x[k] = s;
        }
    };

    double a, b;
    if (band) {
        a = band->first;
        b = band->second;
    } else {
        // conditional centroid target: the rectangle's own mean in the band
        // coordinate, from a pilot pass
        const std::int64_t pilot = std::max<std::int64_t>(mc / 10, 50000);
        CounterRng prng(seed, /*stream=*/0x74316101ull);
        std::vector<double> z(n), x(n);
        double sum = 0;
        std::int64_t hits = 0;
        for (std::int64_t i = 0; i < pilot; ++i) {
            for (int k = 0; k < n; ++k)
                z[k] = prng.normal(static_cast<std::uint64_t>(i) * n + k);
            for (int k = 0; k < n; ++k) {
                double s = mean[k];
                for (int j = 0; j <= k; ++j)
                    s += L[k * n + j] * z[j];
                x[k] = s;
            }
            bool in_rect = true;
            int ti = 0;
            for (int k = 0; k < n && in_rect; ++k) {
                if (k == y_index)
                    continue;
                in_rect = (x[k] <= thresholds[ti]);
                ++ti;
            }
            if (in_rect) {
                sum += x[y_index];
                ++hits;
            }
        }
        if (hits == 0)
            throw degenerate_error("verify_theorem1a: rectangle has no pilot hits");
        double target = (sum / hits - mu_y) / sigma_y;
        double bound = max_layer_centroid(w);
        if (std::fabs(target) >= bound)
            target = std::copysign(bound * 0.999, target);
        Layer l = match_layer(target, w, 1e-11);
        a = mu_y + l.a * sigma_y;
        b = mu_y + l.b * sigma_y;
    }
    double band_mean_exact =
        mu_y + sigma_y * layer_centroid((a - mu_y) / sigma_y, (b - mu_y) / sigma_y);
    double w_exact = gauss_mass((a - mu_y) / sigma_y, (b - mu_y) / sigma_y);

    // main pass: batch sums of indicators and conditional means
    constexpr int kJointHits = 0, kJointY = 1, kRect = 2, kBand = 3, kBandY = 4;
    BatchAccumulator acc(5);
    std::vector<double> z(n), x(n);
    for (std::int64_t i = 0; i < mc; ++i) {
        sample(i, z, x);
        bool in_rect = true;
        int ti = 0;
        for (int k = 0; k < n && ti < n - 1; ++k) {
            if (k == y_index)
                continue;
            if (x[k] > thresholds[ti])
                in_rect = false;
            ++ti;
        }
        double y = x[y_index];
        bool in_band = (y >= a && y <= b);
        if (in_rect) {
            acc.add(kRect, i, mc, 1.0);
            if (in_band) {
                acc.add(kJointHits, i, mc, 1.0);
                acc.add(kJointY, i, mc, y);
            }
        }
        if (in_band) {
            acc.add(kBand, i, mc, 1.0);
            acc.add(kBandY, i, mc, y);
        }
    }

    double joint_hits = acc.total(kJointHits);
    if (joint_hits < 10)
        throw degenerate_error("verify_theorem1a: rectangle-band intersection has "
                               "vanishing probability");
    double p_joint = joint_hits / mc;
    double p_rect = acc.total(kRect) / mc;

    // hypothesis residual and margin with batch-means errors
    std::vector<double> resid_b(BatchAccumulator::kBatches);
    std::vector<double> margin_b(BatchAccumulator::kBatches);
    for (int bb = 0; bb < BatchAccumulator::kBatches; ++bb) {
        double jh = acc.batch(kJointHits, bb);
        double jy = acc.batch(kJointY, bb);
        double per = static_cast<double>(mc) / BatchAccumulator::kBatches;
        resid_b[bb] = (jh > 0 ? jy / jh : 0.0) - band_mean_exact;
        margin_b[bb] = jh / per - (acc.batch(kRect, bb) / per) * w_exact;
    }
    double resid = (acc.total(kJointY) / joint_hits) - band_mean_exact;
    double se_resid = batch_std_error(resid_b);
    double margin = p_joint - p_rect * w_exact;
    double se_margin = batch_std_error(margin_b);

    VerificationReport rep;
    nlohmann::json inst;
    inst["n"] = n;
    inst["thresholds"] = thresholds;
    inst["y_index"] = y_index;
    inst["band"] = {a, b};
    inst["w"] = w;
    inst["mc"] = mc;
    inst["seed"] = seed;
    inst["hypothesis_residual"] = resid;
    inst["hypothesis_se"] = se_resid;
    rep.instance = inst.dump();
    rep.method = "monte-carlo";
    rep.lhs = p_joint;
    rep.rhs = p_rect * w_exact;
    rep.margin = margin;
    rep.mc_std_error = se_margin;
    rep.tolerance = 3.0 * se_margin;
    if (std::fabs(resid) > 3.0 * se_resid)
        rep.status = VerificationReport::Status::inconclusive;
    else
        rep.status = (margin >= -3.0 * se_margin)
                         ? VerificationReport::Status::pass
                         : VerificationReport::Status::fail;
    return rep;
}

VerificationReport verify_sidak(const std::vector<std::vector<double>>& directions,
                                const std::vector<double>& radii,
                                std::int64_t mc, std::uint64_t seed) {
    size_t N = directions.size();
    if (N < 2)
        throw std::domain_error("verify_sidak: need at least two slabs");
    if (radii.size() != N)
        throw std::domain_error("verify_sidak: one radius per direction");
    size_t n = directions[0].size();
    for (const auto& u : directions)
        if (u.size() != n)
            throw std::domain_error("verify_sidak: inconsistent dimensions");

    double product = 1.0;
    std::vector<std::vector<double>> unit(N);
    for (size_t i = 0; i < N; ++i) {
        double norm = 0;
        for (double v : directions[i])
            norm += v * v;
        norm = std::sqrt(norm);
        if (!(norm > 0) || !(radii[i] > 0))
            throw std::domain_error("verify_sidak: degenerate slab");
        unit[i] = directions[i];
        for (double& v : unit[i])
            v /= norm;
        product *= 2.0 * std_cdf(radii[i]) - 1.0;
    }

    CounterRng rng(seed, /*stream=*/0x73696441ull);
    std::int64_t hits = 0;
    std::vector<double> x(n);
    for (std::int64_t s = 0; s < mc; ++s) {
        for (size_t k = 0; k < n; ++k)
            x[k] = rng.normal(static_cast<std::uint64_t>(s) * n + k);
        bool inside = true;
        for (size_t i = 0; i < N && inside; ++i) {
            double proj = 0;
            for (size_t k = 0; k < n; ++k)
                proj += unit[i][k] * x[k];
            inside = (std::fabs(proj) <= radii[i]);
        }
        if (inside)
            ++hits;
    }
    double p = static_cast<double>(hits) / mc;
    double se = std::sqrt(std::max(p * (1.0 - p), 1e-12) / mc);

    VerificationReport rep;
    nlohmann::json inst;
    inst["n"] = n;
    inst["slabs"] = N;
    inst["radii"] = radii;
    inst["mc"] = mc;
    inst["seed"] = seed;
    rep.instance = inst.dump();
    rep.method = "monte-carlo";
    rep.lhs = p;
    rep.rhs = product;
    rep.margin = p - product;
    rep.mc_std_error = se;
    rep.tolerance = 3.0 * se;
    rep.status = (rep.margin >= -3.0 * se) ? VerificationReport::Status::pass
                                           : VerificationReport::Status::fail;
    return rep;
}

ConvexPolygon random_convex_polygon(std::uint64_t seed) {
    // hulls of Gaussian clouds cover elongated and asymmetric shapes
    for (int attempt = 0; attempt < 64; ++attempt) {
        RngStream rng(seed, /*stream=*/0x706f6c79ull + attempt);
        int cloud = 6 + static_cast<int>(rng.uniform() * 18);
        double sx = 0.4 + 1.2 * rng.uniform();
        double sy = 0.4 + 1.2 * rng.uniform();
        double ox = rng.uniform(-0.8, 0.8);
        double oy = rng.uniform(-0.8, 0.8);
        double rot = rng.uniform(0.0, 6.283185307179586);
        std::vector<Vec2> pts;
        pts.reserve(cloud);
        for (int i = 0; i < cloud; ++i) {
            double gx = sx * rng.normal();
            double gy = sy * rng.normal();
            pts.push_back({ox + gx * std::cos(rot) - gy * std::sin(rot),
                           oy + gx * std::sin(rot) + gy * std::cos(rot)});
        }
        try {
            ConvexPolygon hull = convex_hull(pts);
            if (hull.vertices().size() <= 12)
                return hull;
        } catch (const degenerate_error&) {
        }
    }
    throw degenerate_error("random_convex_polygon: generation kept degenerating");
}

Problem2Report search_problem2(std::int64_t trials, std::uint64_t seed,
                               double tol) {
    if (trials < 1)
        throw std::domain_error("search_problem2: trials must be positive");
    Problem2Report rep;
    rep.ranked.reserve(trials);
    const double inner = std::min(tol, 1e-9);
    for (std::int64_t i = 0; i < trials; ++i) {
        std::uint64_t s1 = CounterRng::mix(seed + 2 * i);
        std::uint64_t s2 = CounterRng::mix(seed + 2 * i + 1);
        ConvexPolygon k1 = random_convex_polygon(s1);
        ConvexPolygon k2 = random_convex_polygon(s2);

        PolygonMoments m1 = polygon_moments(k1, inner);
        Vec2 c1 = m1.centroid();

        // damped Newton on the translation matching the second centroid
        Vec2 c2_start = polygon_moments(k2, inner).centroid();
        Vec2 t{c1.x - c2_start.x, c1.y - c2_start.y};
        bool converged = false;
        Vec2 gap{};
        for (int it = 0; it < 24; ++it) {
            PolygonMoments m2 = polygon_moments(translated(k2, t), inner);
            Vec2 c2 = m2.centroid();
            gap = {c1.x - c2.x, c1.y - c2.y};
            double err = std::hypot(gap.x, gap.y);
            if (err <= 1e-9) {
                converged = true;
                break;
            }
            // Jacobian of the centroid in the translation, by differences
            const double fd = 1e-5;
            PolygonMoments mx = polygon_moments(translated(k2, {t.x + fd, t.y}), inner);
            PolygonMoments my = polygon_moments(translated(k2, {t.x, t.y + fd}), inner);
            Vec2 cx = mx.centroid(), cy = my.centroid();
            double j11 = (cx.x - c2.x) / fd, j12 = (cy.x - c2.x) / fd;
            double j21 = (cx.y - c2.y) / fd, j22 = (cy.y - c2.y) / fd;
            double det = j11 * j22 - j12 * j21;
            Vec2 step;
            if (std::fabs(det) < 1e-12) {
                step = gap;  // gradient-ish fallback
            } else {
                step = {(j22 * gap.x - j12 * gap.y) / det,
                        (-j21 * gap.x + j11 * gap.y) / det};
            }
            double len = std::hypot(step.x, step.y);
            if (len > 1.0)
                step = (1.0 / len) * step;  // damping
            t = t + step;
        }
        if (!converged) {
            ++rep.skipped;
            continue;
        }
        ConvexPolygon k2t = translated(k2, t);
        PolygonMoments m2 = polygon_moments(k2t, inner);
        auto inter = intersect(k1, k2t);
        double mass_inter = 0;
        double err_inter = 0;
        if (inter) {
            mass_inter = polygon_moments(*inter, inner).mass;
            err_inter = inner;
        }
        Problem2Instance inst;
        inst.index = static_cast<std::uint64_t>(i);
        inst.mass1 = m1.mass;
        inst.mass2 = m2.mass;
        inst.mass_inter = mass_inter;
        inst.margin = mass_inter - m1.mass * m2.mass;
        inst.std_error = 3.0 * inner + err_inter;
        inst.centroid_residual = std::hypot(gap.x, gap.y);
        inst.converged = true;
        rep.ranked.push_back(inst);
    }
    std::sort(rep.ranked.begin(), rep.ranked.end(),
              [](const Problem2Instance& a, const Problem2Instance& b) {
                  return a.margin < b.margin ||
                         (a.margin == b.margin && a.index < b.index);
              });
    rep.min_margin = rep.ranked.empty() ? 0.0 : rep.ranked.front().margin;
    return rep;
}

std::string Problem2Report::to_jsonl() const {
    std::string out;
    for (const auto& r : ranked) {
        nlohmann::json j;
        j["index"] = r.index;
        j["margin"] = r.margin;
        j["std_error"] = r.std_error;
        j["mass1"] = r.mass1;
        j["mass2"] = r.mass2;
        j["mass_inter"] = r.mass_inter;
        j["centroid_residual"] = r.centroid_residual;
        out += j.dump();
        out += '\n';
    }
    nlohmann::json tail;
    tail["skipped"] = skipped;
    tail["min_margin"] = min_margin;
    tail["instances"] = ranked.size();
    out += tail.dump();
    out += '\n';
    return out;
}

}  // namespace gcorr
