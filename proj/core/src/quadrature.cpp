#include "gcorr/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>

#include "gcorr/errors.hpp"
#include "gcorr/gauss.hpp"

namespace gcorr {

namespace {

// Gauss-Kronrod (7,15) abscissas on [0,1] side, Kronrod and Gauss weights.
constexpr double kXgk[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728};
constexpr double kWg[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119,
    0.417959183673469};

struct Panel {
    double a, b;
    double value;
    double err;
};

Panel evaluate_panel(const Fn& f, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double fc = f(center);
    double k15 = kWgk[7] * fc;
    double g7 = kWg[3] * fc;
    for (int i = 0; i < 7; ++i) {
        double dx = half * kXgk[i];
        double fsum = f(center - dx) + f(center + dx);
        k15 += kWgk[i] * fsum;
        if (i % 2 == 1)
            g7 += kWg[i / 2] * fsum;
    }
    k15 *= half;
    g7 *= half;
    // |K15 - G7| is a conservative bound on the Kronrod error
    double err = std::fabs(k15 - g7);
    if (err == 0.0)
        err = std::fabs(k15) * 1e-16;
    return {a, b, k15, err};
}

}  // namespace

IntegrationResult integrate(const Fn& f, double a, double b, double tol,
                            const std::vector<double>& breakpoints,
                            std::int64_t max_evaluations) {
    if (!(tol > 0.0))
        throw std::domain_error("integrate: tol must be positive");
    if (!(a < b)) {
        if (a == b)
            return {0.0, 0.0, 0};
        throw std::domain_error("integrate: requires a <= b");
    }

    std::vector<double> cuts;
    cuts.push_back(a);
    for (double x : breakpoints)
        if (x > a && x < b)
            cuts.push_back(x);
    cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    std::vector<Panel> panels;
    std::int64_t evals = 0;
    for (size_t i = 0; i + 1 < cuts.size(); ++i) {
        panels.push_back(evaluate_panel(f, cuts[i], cuts[i + 1]));
        evals += 15;
    }

    auto total_err = [&panels] {
        double e = 0;
        for (const Panel& p : panels)
            e += p.err;
        return e;
    };

    while (total_err() > tol) {
        if (evals + 30 > max_evaluations) {
            throw convergence_error(
                "integrate: evaluation budget exhausted (error estimate " +
                std::to_string(total_err()) + " > tol " + std::to_string(tol) +
                ")");
        }
        size_t worst = 0;
        for (size_t i = 1; i < panels.size(); ++i)
            if (panels[i].err > panels[worst].err)
                worst = i;
        Panel p = panels[worst];
        double mid = 0.5 * (p.a + p.b);
        if (mid <= p.a || mid >= p.b) {
            // interval exhausted at machine resolution; accept its estimate
            break;
        }
        panels[worst] = evaluate_panel(f, p.a, mid);
        panels.push_back(evaluate_panel(f, mid, p.b));
        evals += 30;
    }

    // accumulate in ascending-interval order so the result does not depend
    // on the subdivision history
    std::sort(panels.begin(), panels.end(),
              [](const Panel& x, const Panel& y) { return x.a < y.a; });
    IntegrationResult r;
    for (const Panel& p : panels) {
        r.value += p.value;
        r.error_estimate += p.err;
    }
    r.evaluations = evals;
    return r;
}

IntegrationResult integrate_gauss(const Fn& f, double a, double b, double tol,
                                  const std::vector<double>& breakpoints,
                                  std::int64_t max_evaluations) {
    double lo = std::max(a, -kTailCut);
    double hi = std::min(b, kTailCut);
    if (lo >= hi)
        return {0.0, 0.0, 0};
    // pre-split across the bulk of the weight: a single wide panel can have
    // every node in the tails and silently report zero
    std::vector<double> cuts = breakpoints;
    for (double c : {-8.0, -4.0, -2.0, -1.0, 0.0, 1.0, 2.0, 4.0, 8.0})
        cuts.push_back(c);
    auto weighted = [&f](double x) { return f(x) * std_pdf(x); };
    return integrate(weighted, lo, hi, tol, cuts, max_evaluations);
}

RootResult find_root(const Fn& f, double lo, double hi, double tol,
                     int max_iter, double f_tol) {
    if (!(tol > 0.0))
        throw std::domain_error("find_root: tol must be positive");
    if (!(lo < hi))
        throw std::domain_error("find_root: requires lo < hi");
    if (f_tol < 0.0)
        f_tol = tol;

    double fa = f(lo), fb = f(hi);
    if (fa == 0.0 && fb == 0.0)
        throw bracketing_error(
            "find_root: no sign change (function vanishes at both ends of [" +
            std::to_string(lo) + ", " + std::to_string(hi) + "])");
    if (fa == 0.0)
        return {lo, 0.0, {lo, hi}, 0};
    if (fb == 0.0)
        return {hi, 0.0, {lo, hi}, 0};
    if ((fa > 0) == (fb > 0))
        throw bracketing_error("find_root: no sign change on [" +
                               std::to_string(lo) + ", " + std::to_string(hi) +
                               "]");

    // Brent (1973): inverse quadratic interpolation guarded by bisection
    double a = lo, b = hi, c = lo;
    double fc = fa;
    double d = b - a, e = d;
    int iter = 0;
    for (; iter < max_iter; ++iter) {
        if ((fb > 0) == (fc > 0)) {
            c = a;
            fc = fa;
            d = e = b - a;
        }
        if (std::fabs(fc) < std::fabs(fb)) {
            a = b; b = c; c = a;
            fa = fb; fb = fc; fc = fa;
        }
        double xtol = 2.0 * 2.2e-16 * std::fabs(b) + 0.5 * tol;
        double m = 0.5 * (c - b);
        if (std::fabs(m) <= xtol || fb == 0.0 || std::fabs(fb) <= f_tol)
            return {b, fb, {lo, hi}, iter};
        if (std::fabs(e) < xtol || std::fabs(fa) <= std::fabs(fb)) {
            d = e = m;
        } else {
            double s = fb / fa, p, q;
            if (a == c) {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                double qq = fa / fc, r = fb / fc;
                p = s * (2.0 * m * qq * (qq - r) - (b - a) * (r - 1.0));
                q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if (p > 0)
                q = -q;
            p = std::fabs(p);
            if (2.0 * p < std::min(3.0 * m * q - std::fabs(xtol * q),
                                   std::fabs(e * q))) {
                e = d;
                d = p / q;
            } else {
                d = e = m;
            }
        }
        a = b;
        fa = fb;
        b += (std::fabs(d) > xtol) ? d : (m > 0 ? xtol : -xtol);
        fb = f(b);
    }
    throw convergence_error("find_root: no convergence after " +
                            std::to_string(max_iter) + " iterations");
}

const std::pair<std::vector<double>, std::vector<double>>& gauss_legendre(int n) {
    static std::map<int, std::pair<std::vector<double>, std::vector<double>>> cache;
    static std::mutex mutex;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(n);
    if (it != cache.end())
        return it->second;

    // Newton on Legendre polynomials from the Chebyshev initial guess
    std::vector<double> x(n), w(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0;
        for (int it2 = 0; it2 < 100; ++it2) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (z * p0 - p1) / (z * z - 1.0);
            double dz = p0 / pp;
            z -= dz;
            if (std::fabs(dz) < 1e-15)
                break;
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = w[n - 1 - i] = 2.0 / ((1.0 - z * z) * pp * pp);
    }
    return cache.emplace(n, std::make_pair(std::move(x), std::move(w)))
        .first->second;
}

}  // namespace gcorr
