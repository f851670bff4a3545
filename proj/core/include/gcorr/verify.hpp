#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gcorr/profile.hpp"
#include "gcorr/reduction.hpp"

namespace gcorr {

/// Structured outcome of one inequality check.
struct VerificationReport {
    std::string instance;  // serialized inputs, including any seed
    double lhs = 0;
    double rhs = 0;
    double margin = 0;  // lhs - rhs
    double tolerance = 0;
    std::string method;  // "quadrature" | "monte-carlo"
    std::optional<double> mc_std_error;
    enum class Status { pass, fail, inconclusive } status = Status::fail;
};

const char* to_string(VerificationReport::Status);

/// One-line JSON rendering (JSON Lines report format).
std::string to_jsonl(const VerificationReport&);

/// Correlation bound for the body below a concave profile against the layer
/// whose centroid matches the body's; quadrature both sides.
/// Throws infeasible_error when no layer of weight w has that centroid.
VerificationReport verify_theorem1(const ConcaveProfile& psi, double w,
                                   double tol);

/// Same check for a convex polygon: the section profile along u is sampled
/// on grid_points abscissas first.
VerificationReport verify_theorem1_polygon(const ConvexPolygon& poly, Vec2 u,
                                           int grid_points, double w,
                                           double tol);

/// Gaussian vector given by a dense covariance (row-major) and an optional
/// mean (empty means centered).
struct GaussianVector {
    int n = 0;
    std::vector<double> covariance;
    std::vector<double> mean;  // empty or size n
};

/// Lower-triangular Cholesky factor; tolerates semidefinite pivots, throws
/// std::invalid_argument for asymmetric or indefinite input.
std::vector<double> cholesky_psd(const GaussianVector&);

/// Monte Carlo check of the rectangle-vs-band correlation bound.  The band
/// on the y-th coordinate is constructed from (conditional centroid target,
/// w) unless an explicit band is supplied.  The conditional-mean hypothesis
/// is estimated, never assumed: instances violating it come back
/// inconclusive.
VerificationReport verify_theorem1a(
    const GaussianVector& gv, const std::vector<double>& thresholds,
    int y_index, double w, std::int64_t mc, std::uint64_t seed,
    std::optional<std::pair<double, double>> band = std::nullopt);

/// Monte Carlo check of the product bound for symmetric slabs
/// |<x, u_i>| <= t_i; per-slab masses are exact.
VerificationReport verify_sidak(const std::vector<std::vector<double>>& directions,
                                const std::vector<double>& radii,
                                std::int64_t mc, std::uint64_t seed);

/// Exploratory search over centroid-matched convex polygon pairs; records
/// margins, never asserts.
struct Problem2Instance {
    std::uint64_t index = 0;
    double margin = 0;
    double std_error = 0;  // combined quadrature error estimate
    double mass1 = 0, mass2 = 0, mass_inter = 0;
    double centroid_residual = 0;  // |centroid mismatch| after matching
    bool converged = false;
};

struct Problem2Report {
    std::vector<Problem2Instance> ranked;  // most negative margin first
    std::int64_t skipped = 0;              // centroid matching failures
    double min_margin = 0;
    std::string to_jsonl() const;
};

Problem2Report search_problem2(std::int64_t trials, std::uint64_t seed,
                               double tol);

/// Hull of a Gaussian point cloud with 3..12 hull vertices (deterministic
/// in the seed).
ConvexPolygon random_convex_polygon(std::uint64_t seed);

}  // namespace gcorr
