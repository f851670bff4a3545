#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "gcorr/lineregion.hpp"
#include "gcorr/profile.hpp"

namespace gcorr {

/// The two one-boundary regions the reduction ends in:
///   R1(h,B) = { x <= B, y <= m x + h },  R2(h,A) = { x >= A, y <= m x + h }.
enum class RegionKind { R1, R2 };

struct ExtremalConfig {
    RegionKind kind = RegionKind::R1;
    double m = 0;         // slope, >= 0 by the symmetry reduction
    double h = 0;         // intercept, may be +inf (vertical-strip limit)
    double boundary = 0;  // B for R1, A for R2; may be +-inf
    double c = 0;         // prescribed x-centroid of the region
};

/// Solves the region's centroid equation for the free boundary: the unique
/// B (resp. A) making the signed x-moment about c vanish.  Returns +-inf
/// when the root escapes to the limit configuration; throws infeasible_error
/// (naming the violated limit) when no boundary can reach the prescribed c.
double boundary_for_centroid(RegionKind kind, double m, double h, double c,
                             double tol);

ExtremalConfig make_config(RegionKind kind, double m, double h, double c,
                           double tol);

/// Independent recomputation of the centroid-equation residual.
double config_moment_residual(const ExtremalConfig&, double tol);

double region_mass(const ExtremalConfig&, double tol);

/// Mass ratio whose bound by one is the correlation inequality for the
/// configuration: region mass over (strip-restricted mass / strip weight).
/// When require_centroid_match is set, layer.c must satisfy the config's
/// centroid equation; the relaxed final-case analysis passes false.
double f_ratio(const ExtremalConfig&, const Layer&, double tol,
               bool require_centroid_match = true);

/// Intercept at which the R1 boundary equals the layer top: B(h*) = b.
double h_star(double m, double c, double b, double tol);

/// Intercept at which the R1 boundary escapes to +inf (finite only for
/// c > 0 with m > 0; +inf when B stays finite for all h, -inf when no R1
/// configuration exists at any h).
double h_tilde(double m, double c, double tol);

/// Boundary of the h = +inf (vertical strip) limit configuration.
double limit_boundary(RegionKind kind, double c, double tol);

/// Grid of intercepts spread geometrically from lo towards hi (denser near
/// lo), optionally appending +inf for the limit configuration.
std::vector<double> intercept_grid(double lo, double hi, int count,
                                   bool append_limit = false);

struct ScanPoint {
    double h = 0;
    double value = 0;        // boundary (monotonicity scans) or ratio
    bool feasible = false;
    std::string note;
};

struct MonotonicityReport {
    std::vector<ScanPoint> points;
    double min_forward_difference = 0;  // over consecutive feasible points
    int skipped = 0;
};

/// Boundary monotonicity in the intercept for fixed slope and centroid.
MonotonicityReport scan_boundary_monotonicity(RegionKind kind, double m, double c,
                               const std::vector<double>& h_grid, double tol);

/// Ratio monotonicity in the intercept for a layer fixed by (c, w); grid
/// points outside [h*, h~] are reported and skipped.
MonotonicityReport scan_ratio_monotonicity(double m, double c, double w,
                               const std::vector<double>& h_grid, double tol);

/// Weighted-average comparison for a convex integrand: when the barycenter
/// hypothesis holds, the average over the outer interval dominates the
/// average over the inner one.
struct AveragingReport {
    bool hypothesis_met = false;
    double hypothesis_value = 0;  // (outer bary - inner bary)(g(b') - g(a'))
    double outer_average = 0;
    double inner_average = 0;
    double margin = 0;  // outer - inner; asserted >= -tol only if hypothesis_met
};

AveragingReport averaging_inequality_check(const std::function<double(double)>& g,
                                           const std::function<double(double)>& rho,
                                           std::pair<double, double> outer,
                                           std::pair<double, double> inner,
                                           double tol);

/// The h < 0 case of the half-plane average bound: geometry of the
/// reflection argument plus the three numerical checks.
struct FinalCaseReport {
    double phi0 = 0;  // half-plane mass
    double h0 = 0;    // horizontal line with the same mass
    double x0 = 0;    // where the slanted line crosses height h0
    double x1 = 0;
    double x2 = 0;
    bool trivial = false;        // a >= x0: average bound immediate
    double average_margin = 0;   // strip average minus phi0
    bool reduced_applicable = false;
    double a_reduced = 0;        // symmetrized lower endpoint (same b)
    double reduced_margin = 0;   // right excess minus left deficit
    double triangle_margin = 0;  // reflected-triangle comparison
};

FinalCaseReport final_case_check(double m, double h, double a, double b,
                                 double tol);

/// Relaxed strip-average bound for half-plane sections, dropping the
/// centroid pairing: for h >= 0 any strip with nonnegative midpoint, and
/// for h < 0 any strip with midpoint at or right of the crossing point,
/// averages at least the half-plane mass.
struct RelaxedAverageReport {
    double x0 = 0;             // crossing point (0 when h >= 0)
    double midpoint = 0;
    double average = 0;
    double half_plane = 0;     // the bound
    double margin = 0;         // average - half_plane
};

RelaxedAverageReport relaxed_average_check(double m, double h, double a,
                                           double b, double tol);

/// For h >= 0: the symmetric-strip average of the half-plane section mass
/// is nonincreasing in the half-width; returns the averages on the grid and
/// the largest forward increase.
struct SymmetricAverageReport {
    std::vector<double> d_grid;
    std::vector<double> averages;
    double max_forward_increase = 0;
};

SymmetricAverageReport symmetric_average_scan(double m, double h,
                                              const std::vector<double>& d_grid,
                                              double tol);

/// Support extension of a linearized profile: boundaries (A0, B0) matching
/// the outside moments, validity checks, and the terminal one-boundary
/// configuration reached by widening at fixed centroid.
struct SupportExtension {
    double A0 = 0;
    double B0 = 0;
    double left_mass_gain = 0;   // line-over-psi mass surplus on [A0, a]
    double right_mass_gain = 0;  // same on [b, B0]
    double mass_gain = 0;        // region mass surplus over all of K_psi
    double centroid_residual = 0;
    ExtremalConfig terminal;     // mirrored (x -> -x) when reflected is set,
                                 // keeping the slope nonnegative
    bool reflected = false;
    std::vector<std::pair<double, double>> trace;  // (A, B) widening path
};

SupportExtension extend_support(const ConcaveProfile& psi, double a, double b,
                                double m, double h, double c, double tol);

/// Closed-form derivative of the ratio in the intercept (diagnostic; the scans
/// establish monotonicity by differences).
double f1_dh_diagnostic(double m, double c, const Layer& layer, double h,
                        double tol);

/// Default parameter grids for the full extremal sweep.
struct ExtremalGrids {
    std::vector<double> ms = {0.0, 0.25, 0.5, 1.0, 2.0, 4.0};
    std::vector<double> cs = {-1.0, -0.5, -0.2, 0.0, 0.2, 0.5, 1.0};
    std::vector<double> ws = {0.1, 0.3, 0.5, 0.7, 0.9};
    int h_points = 17;
};

struct ExtremalScanPoint {
    RegionKind kind;
    double m, c, w, h;
    const char* quantity;  // "boundary" | "ratio"
    double value;
    double forward_difference;  // +inf when there is no predecessor
};

struct ExtremalScanSummary {
    double min_diff_B = kInf;
    double min_diff_A = kInf;
    double min_diff_F1 = kInf;
    double max_F1 = -kInf;
    double max_F2 = -kInf;
    std::int64_t evaluated = 0;
    std::int64_t skipped = 0;
};

/// Sweeps both configuration kinds over the grids: boundary monotonicity in
/// the intercept, ratio monotonicity on the admissible range, and the
/// ratio-below-one bound.  Infeasible combinations are counted, not errors.
ExtremalScanSummary scan_extremal_grids(
    const ExtremalGrids& grids, double tol,
    const std::function<void(const ExtremalScanPoint&)>& emit = {});

/// The standard negative-intercept instance grid: slopes x intercepts x
/// symmetric half-widths around the crossing point; entries {m, h, a, b}.
std::vector<std::array<double, 4>> final_case_grid();

}  // namespace gcorr
