#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gcorr/profile.hpp"

namespace gcorr {

struct Vec2 {
    double x = 0;
    double y = 0;
};

inline Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
inline Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
inline Vec2 operator*(double s, Vec2 v) { return {s * v.x, s * v.y}; }
inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline Vec2 rot90(Vec2 v) { return {-v.y, v.x}; }

/// Strictly convex polygon, vertices in counterclockwise order.
class ConvexPolygon {
public:
    explicit ConvexPolygon(std::vector<Vec2> vertices);

    const std::vector<Vec2>& vertices() const { return v_; }

    /// Range of <p, u> over the polygon.
    std::pair<double, double> projection_range(Vec2 u) const;

    /// The slice { s : t*u + s*rot90(u) in K } as an interval, or nullopt
    /// when the line misses the polygon.
    std::optional<std::pair<double, double>> slice(Vec2 u, double t) const;

    bool contains(Vec2 p, double eps = 1e-12) const;

private:
    std::vector<Vec2> v_;
};

/// Polygon JSON: {"vertices":[[x,y],...]}.
std::string to_json(const ConvexPolygon&);
ConvexPolygon polygon_from_json(std::string_view text);

ConvexPolygon translated(const ConvexPolygon&, Vec2 t);

/// Convex hull (counterclockwise) of a point set; throws when the hull is
/// degenerate (fewer than 3 extreme points).
ConvexPolygon convex_hull(std::vector<Vec2> points);

/// Intersection of two convex polygons (Sutherland-Hodgman clipping);
/// nullopt when the intersection has empty interior.
std::optional<ConvexPolygon> intersect(const ConvexPolygon&, const ConvexPolygon&);

/// Gaussian mass and first moments of a polygon under the planar standard
/// Gaussian, via exact slicing and one-dimensional quadrature.
struct PolygonMoments {
    double mass = 0;
    Vec2 moment{};
    Vec2 centroid() const { return {moment.x / mass, moment.y / mass}; }
};

PolygonMoments polygon_moments(const ConvexPolygon&, double tol);

struct ProfileSample {
    double t = 0;
    double psi = 0;  // may be -inf outside the projection range
};

/// Section profile psi(t) = quantile(gauss mass of the slice at t) along
/// direction u (must be unit length).  Slice endpoints are exact from edge
/// intersections.
std::vector<ProfileSample> ehrhard_profile(const ConvexPolygon&, Vec2 u,
                                           const std::vector<double>& grid);

struct ConcavityReport {
    double max_violation = 0;  // largest normalized slope increase
    double at_t = 0;
    int finite_samples = 0;
    double tol = 0;
    bool passed = false;  // max_violation <= tol
};

/// Normalized second-difference test on sampled (t, psi); needs at least 3
/// finite samples with strictly increasing t.
ConcavityReport check_concavity(const std::vector<ProfileSample>&, double tol);

/// Piecewise-linear profile through the finite samples (support = their
/// t-range).
ConcaveProfile profile_from_samples(const std::vector<ProfileSample>&);

/// The intercept h such that the region under slope*x + h matches the mass
/// of the region under psi on [a,b]; monotone in h, solved by bracketing.
double mass_match_intercept(const ConcaveProfile& psi, double a, double b,
                            double slope, double tol);

struct LinearizationResult {
    double m0 = 0;
    double h0 = 0;
    double mass_residual = 0;
    double moment_residual = 0;
    std::vector<double> intersections;  // where the line meets psi in (a,b)
    bool endpoint_values_ok = false;    // psi(a) <= line(a), psi(b) <= line(b)
    bool endpoint_slopes_ok = false;    // m0 <= psi'(a+), m0 >= psi'(b-)
};

/// The mass- and moment-matching line for psi on [a,b]: outer root-find on
/// the slope, inner mass matching on the intercept.  A linear psi comes back
/// unchanged with zero residuals.
LinearizationResult linearize(const ConcaveProfile& psi, double a, double b,
                              double tol);

}  // namespace gcorr
