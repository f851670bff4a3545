#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

namespace gcorr {

/// Integration limits beyond |x| = 40 are clipped; the Gaussian mass outside
/// is below 1e-300 of the total and cannot register in double precision.
inline constexpr double kTailCut = 40.0;

struct IntegrationResult {
    double value = 0;
    double error_estimate = 0;  // absolute
    std::int64_t evaluations = 0;
};

using Fn = std::function<double(double)>;

/// Globally adaptive Gauss-Kronrod (7,15) on \int_a^b f(x) dx.
/// Breakpoints split the initial panels so piecewise-smooth integrands with
/// known kinks converge at full order.  Throws convergence_error when the
/// evaluation budget runs out before the tolerance is met.
IntegrationResult integrate(const Fn& f, double a, double b, double tol,
                            const std::vector<double>& breakpoints = {},
                            std::int64_t max_evaluations = 2000000);

/// \int_a^b f(x) dmu1(x) with the standard Gaussian weight; endpoints may be
/// infinite (clipped at kTailCut).
IntegrationResult integrate_gauss(const Fn& f, double a, double b, double tol,
                                  const std::vector<double>& breakpoints = {},
                                  std::int64_t max_evaluations = 2000000);

struct RootResult {
    double root = 0;
    double residual = 0;
    std::pair<double, double> bracket{0, 0};
    int iterations = 0;
};

/// Brent's method on a bracketing interval.  Stops when |f| <= f_tol or the
/// bracket width falls below tol; the returned root never leaves the initial
/// bracket.  f_tol defaults to tol; passing 0 makes the solve width-driven,
/// which is the right mode when |f| varies over many orders of magnitude
/// across the bracket.  Throws bracketing_error without a sign change and
/// convergence_error past max_iter.
RootResult find_root(const Fn& f, double lo, double hi, double tol,
                     int max_iter = 200, double f_tol = -1.0);

/// Nodes and weights of an n-point Gauss-Legendre rule on [-1,1], computed
/// once and cached; used as a fast fixed rule for smooth integrands on
/// bounded intervals inside solver loops.
const std::pair<std::vector<double>, std::vector<double>>& gauss_legendre(int n);

}  // namespace gcorr
