#pragma once

#include <limits>
#include <vector>

namespace gcorr {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Standard normal density.
double std_pdf(double x);

/// Standard normal CDF on the extended reals: std_cdf(-inf) = 0,
/// std_cdf(inf) = 1, relative error <= 1e-14 on finite arguments.
double std_cdf(double x);

/// Upper tail 1 - Phi(x), computed with full relative accuracy.
double std_cdf_c(double x);

/// Inverse CDF; returns -inf at p = 0 and +inf at p = 1; throws
/// std::domain_error outside [0,1].
double std_cdf_inv(double p);

/// Scaled complementary error function e^{z^2} erfc(z), stable for all z
/// where 2 e^{z^2} does not overflow.
double erfcx(double z);

/// Mills-ratio function g(x) = e^{x^2/2} \int_x^inf e^{-t^2/2} dt.
/// Positive, strictly decreasing, accurate for large x.
double mills(double x);

/// Gaussian hazard f(x) = 1/g(x); positive and increasing.
double hazard(double x);

/// Phi(b) - Phi(a) without cancellation in the tails; endpoints may be
/// infinite; requires a <= b.
double gauss_mass(double a, double b);

/// Mean of the standard normal conditioned on [a,b]:
/// (pdf(a) - pdf(b)) / (Phi(b) - Phi(a)).  Endpoints may be infinite.
/// Throws std::domain_error for a >= b, degenerate_error for zero mass.
double layer_centroid(double a, double b);

/// The three closed-form bounds on mills(x): the classical two-sided pair
/// and the tighter upper bound valid for x > -1.
struct TailBoundSet {
    double x = 0;
    double lower = 0;          // 2 / (x + sqrt(x^2 + 4))
    double upper_new = 0;      // 4 / (3x + sqrt(x^2 + 8)), +inf for x <= -1
    double upper_komatsu = 0;  // 2 / (x + sqrt(x^2 + 2))
    bool upper_new_valid = false;  // false for x <= -1; excludes the row
                                   // from bound comparisons
};

TailBoundSet tail_bounds(double x);

/// Relative errors (bound - g)/g of the three bounds at a point.
struct ErrorTableRow {
    double x = 0;
    double err_upper_new = 0;
    double err_upper_komatsu = 0;
    double err_lower = 0;
};

/// Throws std::domain_error if any x <= -1.
std::vector<ErrorTableRow> error_table(const std::vector<double>& xs);

/// The canonical abscissas of the reference error table.
const std::vector<double>& error_table_default_xs();

/// Decimal rounding to two significant digits, half away from zero.
/// value ~ 0.digits * 10^exponent with |digits| in [10, 99].
struct SigDigits {
    int digits = 0;
    int exponent = 0;
    bool operator==(const SigDigits&) const = default;
};

SigDigits round_sig2(double v);

}  // namespace gcorr
