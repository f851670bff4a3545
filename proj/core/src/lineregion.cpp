#include "gcorr/lineregion.hpp"

#include <cmath>
#include <vector>

#include "gcorr/gauss.hpp"
#include "gcorr/quadrature.hpp"

namespace gcorr {

double half_plane_mass(double m, double h) {
    if (h == kInf)
        return 1.0;
    if (h == -kInf)
        return 0.0;
    return std_cdf(h / std::sqrt(1.0 + m * m));
}

double half_plane_xmoment(double m, double h) {
    if (std::isinf(h))
        return 0.0;
    double s = std::sqrt(1.0 + m * m);
    return (m / s) * std_pdf(h / s);
}

double half_plane_centroid(double m, double h) {
    return half_plane_xmoment(m, h) / half_plane_mass(m, h);
}

double line_gauss_mass(double m, double h, double lo, double hi, double tol) {
    if (h == -kInf)
        return 0.0;
    if (h == kInf || m == 0.0) {
        double scale = (h == kInf) ? 1.0 : std_cdf(h);
        if (lo >= hi)
            return 0.0;
        return scale * gauss_mass(lo, hi);
    }
    std::vector<double> brk;
    if (m != 0.0)
        brk.push_back(-h / m);  // transition of the near-step factor
    return integrate_gauss([m, h](double x) { return std_cdf(m * x + h); }, lo,
                           hi, tol, brk)
        .value;
}

double line_gauss_xmoment(double m, double h, double lo, double hi) {
    // d/dx[-pdf(x)] = x pdf(x):
    // int x Phi(mx+h) pdf(x) dx
    //   = [-pdf(x) Phi(mx+h)] + m int pdf(x) pdf(mx+h) dx
    // and pdf(x) pdf(mx+h) = pdf(h/s)/s * pdf(s x + m h / s) * s with
    // s = sqrt(1+m^2), which integrates to a Phi difference.
    if (h == -kInf)
        return 0.0;
    auto boundary = [m, h](double x) {
        if (std::isinf(x))
            return 0.0;
        double y = (h == kInf) ? 1.0 : std_cdf(m * x + h);
        return -std_pdf(x) * y;
    };
    double value = boundary(hi) - boundary(lo);
    if (h != kInf && m != 0.0) {
        double s = std::sqrt(1.0 + m * m);
        double u = m * h / (1.0 + m * m);
        auto gphi = [s, u](double x) {
            if (x == kInf)
                return 1.0;
            if (x == -kInf)
                return 0.0;
            return std_cdf(s * (x + u));
        };
        value += (m / s) * std_pdf(h / s) * (gphi(hi) - gphi(lo));
    }
    return value;
}

}  // namespace gcorr
