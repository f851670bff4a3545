#include "gcorr/gauss.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "gcorr/errors.hpp"

namespace gcorr {

namespace {

constexpr double kSqrt2 = 1.4142135623730950488;
constexpr double kInvSqrt2Pi = 0.39894228040143267794;
constexpr double kSqrtPiOver2 = 1.2533141373155002512;

// e^{-x^2/2} with the argument split so the rounding of x^2/2 does not
// leak into the result for large |x| (cf. cephes/approxcdf practice).
double exp_half_neg_square(double x) {
    double ax = std::fabs(x);
    if (ax < 5.0)
        return std::exp(-0.5 * x * x);
    double x1 = std::floor(ax * 0x1.0p16 + 0.5) * 0x1.0p-16;
    double x2 = ax - x1;
    return std::exp(-0.5 * x1 * x1) * std::exp((-0.5 * x2 - x1) * x2);
}

// Cody's rational Chebyshev approximation of e^{z^2} erfc(z)
// (W. J. Cody, Math. Comp. 23 (1969); SPECFUN CALERF, jint = 2).
double erfcx_cody(double z) {
    static const double a[5] = {3.1611237438705656, 113.864154151050156,
                                377.485237685302021, 3209.37758913846947,
                                .185777706184603153};
    static const double b[4] = {23.6012909523441209, 244.024637934444173,
                                1282.61652607737228, 2844.23683343917062};
    static const double c[9] = {.564188496988670089, 8.88314979438837594,
                                66.1191906371416295, 298.635138197400131,
                                881.95222124176909,  1712.04761263407058,
                                2051.07837782607147, 1230.33935479799725,
                                2.15311535474403846e-8};
    static const double d[8] = {15.7449261107098347, 117.693950891312499,
                                537.181101862009858, 1621.38957456669019,
                                3290.79923573345963, 4362.61909014324716,
                                3439.36767414372164, 1230.33935480374942};
    static const double p[6] = {.305326634961232344, .360344899949804439,
                                .125781726111229246, .0160837851487422766,
                                6.58749161529837803e-4, .0163153871373020978};
    static const double q[5] = {2.56852019228982242, 1.87295284992346047,
                                .527905102951428412, .0605183413124413191,
                                .00233520497626869185};
    constexpr double sqrpi = 0.56418958354775628695;  // 1/sqrt(pi)
    constexpr double thresh = 0.46875;

    const double y = std::fabs(z);
    double result;
    if (y <= thresh) {
        double ysq = (y > 1.11e-16) ? y * y : 0.0;
        double xnum = a[4] * ysq;
        double xden = ysq;
        for (int i = 0; i < 3; ++i) {
            xnum = (xnum + a[i]) * ysq;
            xden = (xden + b[i]) * ysq;
        }
        double erf = z * (xnum + a[3]) / (xden + b[3]);
        return std::exp(ysq) * (1.0 - erf);
    } else if (y <= 4.0) {
        double xnum = c[8] * y;
        double xden = y;
        for (int i = 0; i < 7; ++i) {
            xnum = (xnum + c[i]) * y;
            xden = (xden + d[i]) * y;
        }
        result = (xnum + c[7]) / (xden + d[7]);
    } else {
        double ysq = 1.0 / (y * y);
        double xnum = p[5] * ysq;
        double xden = ysq;
        for (int i = 0; i < 4; ++i) {
            xnum = (xnum + p[i]) * ysq;
            xden = (xden + q[i]) * ysq;
        }
        result = ysq * (xnum + p[4]) / (xden + q[4]);
        result = (sqrpi - result) / y;
    }
    if (z < 0.0) {
        // erfcx(-y) = 2 e^{y^2} - erfcx(y), with y^2 split for accuracy
        double ysq = std::floor(y * 16.0) / 16.0;
        double del = (y - ysq) * (y + ysq);
        double e = std::exp(ysq * ysq) * std::exp(del);
        result = (e + e) - result;
    }
    return result;
}

}  // namespace

double std_pdf(double x) {
    if (std::isinf(x))
        return 0.0;
    return kInvSqrt2Pi * exp_half_neg_square(x);
}

double std_cdf_c(double x) {
    if (std::isnan(x))
        return x;
    if (x == kInf)
        return 0.0;
    if (x == -kInf)
        return 1.0;
    // tails via the scaled complement: the library erfc loses ~1e-13 of
    // relative accuracy far out because it squares the argument in double
    if (x >= 0.5)
        return mills(x) * std_pdf(x);
    if (x <= -0.5)
        return 1.0 - mills(-x) * std_pdf(x);
    return 0.5 * std::erfc(x / kSqrt2);
}

double std_cdf(double x) { return std_cdf_c(-x); }

double erfcx(double z) { return erfcx_cody(z); }

double mills(double x) { return kSqrtPiOver2 * erfcx_cody(x / kSqrt2); }

double hazard(double x) { return 1.0 / mills(x); }

namespace {

// Wichura's algorithm AS 241 (PPND16): quantile of the standard normal to
// about 1e-16 relative; a single Newton step against std_cdf tightens the
// residual in p to machine level.
double ppnd16(double p) {
    const double q = p - 0.5;
    if (std::fabs(q) <= 0.425) {
        static const double a[8] = {
            3.3871328727963666080e0,  1.3314166789178437745e2,
            1.9715909503065514427e3,  1.3731693765509461125e4,
            4.5921953931549871457e4,  6.7265770927008700853e4,
            3.3430575583588128105e4,  2.5090809287301226727e3};
        static const double b[8] = {
            1.0,                      4.2313330701600911252e1,
            6.8718700749205790830e2,  5.3941960214247511077e3,
            2.1213794301586595867e4,  3.9307895800092710610e4,
            2.8729085735721942674e4,  5.2264952788528545610e3};
        double r = 0.180625 - q * q;
        double num = a[7], den = b[7];
        for (int i = 6; i >= 0; --i) {
            num = num * r + a[i];
            den = den * r + b[i];
        }
        return q * num / den;
    }
    double r = (q < 0) ? p : 1.0 - p;
    r = std::sqrt(-std::log(r));
    double x;
    if (r <= 5.0) {
        static const double c[8] = {
            1.42343711074968357734e0,  4.63033784615654529590e0,
            5.76949722146069140550e0,  3.64784832476320460504e0,
            1.27045825245236838258e0,  2.41780725177450611770e-1,
            2.27238449892691845833e-2, 7.74545014278341407640e-4};
        static const double d[8] = {
            1.0,                       2.05319162663775882187e0,
            1.67638483018380384940e0,  6.89767334985100004550e-1,
            1.48103976427480074590e-1, 1.51986665636164571966e-2,
            5.47593808499534494600e-4, 1.05075007164441684324e-9};
        r -= 1.6;
        double num = c[7], den = d[7];
        for (int i = 6; i >= 0; --i) {
            num = num * r + c[i];
            den = den * r + d[i];
        }
        x = num / den;
    } else {
        static const double e[8] = {
            6.65790464350110377720e0,  5.46378491116411436990e0,
            1.78482653991729133580e0,  2.96560571828504891230e-1,
            2.65321895265761230930e-2, 1.24266094738807843860e-3,
            2.71155556874348757815e-5, 2.01033439929228813265e-7};
        static const double f[8] = {
            1.0,                       5.99832206555887937690e-1,
            1.36929880922735805310e-1, 1.48753612908506148525e-2,
            7.86869131145613259100e-4, 1.84631831751005468180e-5,
            1.42151175831644588870e-7, 2.04426310338993978564e-15};
        r -= 5.0;
        double num = e[7], den = f[7];
        for (int i = 6; i >= 0; --i) {
            num = num * r + e[i];
            den = den * r + f[i];
        }
        x = num / den;
    }
    return (q < 0) ? -x : x;
}

}  // namespace

double std_cdf_inv(double p) {
    if (std::isnan(p) || p < 0.0 || p > 1.0)
        throw std::domain_error("std_cdf_inv: p must lie in [0,1], got " +
                                std::to_string(p));
    if (p == 0.0)
        return -kInf;
    if (p == 1.0)
        return kInf;
    double x = ppnd16(p);
    if (p > 1e-10 && p < 1.0 - 1e-10) {
        double err = std_cdf(x) - p;
        x -= err / std_pdf(x);
    }
    return x;
}

double gauss_mass(double a, double b) {
    if (std::isnan(a) || std::isnan(b) || a > b)
        throw std::domain_error("gauss_mass: requires a <= b");
    if (a == b)
        return 0.0;
    if (a >= 0.0)
        return std_cdf_c(a) - std_cdf_c(b);
    if (b <= 0.0)
        return std_cdf_c(-b) - std_cdf_c(-a);
    return std_cdf(b) - std_cdf(a);
}

double layer_centroid(double a, double b) {
    if (!(a < b))
        throw std::domain_error("layer_centroid: requires a < b");
    double w = gauss_mass(a, b);
    if (w <= 0.0)
        throw degenerate_error("layer_centroid: interval carries no Gaussian mass");
    return (std_pdf(a) - std_pdf(b)) / w;
}

TailBoundSet tail_bounds(double x) {
    TailBoundSet t;
    t.x = x;
    t.lower = 2.0 / (x + std::sqrt(x * x + 4.0));
    t.upper_komatsu = 2.0 / (x + std::sqrt(x * x + 2.0));
    double denom = 3.0 * x + std::sqrt(x * x + 8.0);
    if (x > -1.0 && denom > 0.0) {
        t.upper_new = 4.0 / denom;
        t.upper_new_valid = true;
    } else {
        t.upper_new = kInf;
        t.upper_new_valid = false;
    }
    return t;
}

std::vector<ErrorTableRow> error_table(const std::vector<double>& xs) {
    std::vector<ErrorTableRow> rows;
    rows.reserve(xs.size());
    for (double x : xs) {
        if (!(x > -1.0))
            throw std::domain_error("error_table: bounds require x > -1, got " +
                                    std::to_string(x));
        double g = mills(x);
        TailBoundSet t = tail_bounds(x);
        rows.push_back({x, (t.upper_new - g) / g, (t.upper_komatsu - g) / g,
                        (t.lower - g) / g});
    }
    return rows;
}

const std::vector<double>& error_table_default_xs() {
    static const std::vector<double> xs = {0, 2, 4, 6, 8, 10, 20, 30, 40, 50};
    return xs;
}

SigDigits round_sig2(double v) {
    if (v == 0.0)
        return {0, 0};
    if (!std::isfinite(v))
        throw std::domain_error("round_sig2: value must be finite");
    int sign = v < 0 ? -1 : 1;
    double a = std::fabs(v);
    int e = static_cast<int>(std::floor(std::log10(a)));
    double r = std::round(a / std::pow(10.0, e - 1));
    if (r >= 100.0) {
        r /= 10.0;
        e += 1;
    }
    return {sign * static_cast<int>(r), e + 1};
}

}  // namespace gcorr
