#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "gcorr/gauss.hpp"

namespace gcorr {

/// A concave piecewise-linear function psi on a support interval [A,B]
/// (either end may be infinite), -inf outside the support.  The region
/// { (x,y) : y <= psi(x) } is the two-dimensional body the function stands
/// for.  A value of +inf is allowed only as the constant profile, which
/// makes the region a full vertical strip over its support.
class ConcaveProfile {
public:
    struct Knot {
        double x;
        double y;
    };

    /// Knots must have strictly increasing x inside [support_lo, support_hi]
    /// and nonincreasing consecutive slopes.  Beyond the first/last knot the
    /// end segments extrapolate linearly up to the support bounds.  A single
    /// knot defines a constant profile.
    ConcaveProfile(double support_lo, double support_hi, std::vector<Knot> knots);

    static ConcaveProfile constant(double value, double support_lo = -kInf,
                                   double support_hi = kInf);
    static ConcaveProfile line(double slope, double intercept,
                               double support_lo = -kInf,
                               double support_hi = kInf);

    /// Piecewise-linear evaluation; -inf outside the support.
    double operator()(double x) const;

    double support_lo() const { return lo_; }
    double support_hi() const { return hi_; }
    const std::vector<Knot>& knots() const { return knots_; }
    bool is_constant_infinite() const;

    /// One-sided slopes of the restriction to the support.  At or left of
    /// the support's interior start the right slope is +inf when psi jumps
    /// up from -inf; symmetric convention on the right.
    double right_slope(double x) const;
    double left_slope(double x) const;

    /// True when the profile restricted to [a,b] is a single linear piece
    /// covering all of [a,b].
    bool linear_on(double a, double b) const;

    /// Kink abscissas (knots and finite support edges), for quadrature
    /// subdivision.
    std::vector<double> breakpoints() const;

    ConcaveProfile shifted(double dy) const;

private:
    double lo_, hi_;
    std::vector<Knot> knots_;
    void validate() const;
};

/// Profile JSON: {"support":[A,B],"points":[[x,y],...]} with "inf"/"-inf"
/// string sentinels for infinite entries.
std::string to_json(const ConcaveProfile&);
ConcaveProfile profile_from_json(std::string_view text);

/// A vertical slab a <= x <= b with its Gaussian weight and centroid.
struct Layer {
    double a = 0;
    double b = 0;
    double w = 0;  // gauss_mass(a,b)
    double c = 0;  // layer_centroid(a,b)
};

/// Computes w and c; requires a < b with positive mass.
Layer make_layer(double a, double b);

/// Largest |centroid| attainable by a layer of weight w.
double max_layer_centroid(double w);

/// Solves for the layer with prescribed centroid c and weight w; throws
/// infeasible_error (naming the attainable range) when |c| is too large.
Layer match_layer(double c, double w, double tol = 1e-12);

/// Gaussian mass and first moment of the region under psi, restricted to an
/// interval.
struct GaussFunctionals {
    double mass = 0;
    double moment = 0;
};

GaussFunctionals functionals(const ConcaveProfile& psi, double lo, double hi,
                             double tol);

/// moment/mass over the interval; throws degenerate_error when the mass is
/// below max(1e-8, 10*tol).
double centroid_x(const ConcaveProfile& psi, double lo, double hi, double tol);

struct ProfileBox {
    double x_half = 2.0;
    double y_lo = -1.5;
    double y_hi = 1.5;
    double slope_max = 3.0;
};

/// Deterministic generator: decreasing slopes integrated from a random
/// anchor; support finite, half-infinite, or infinite by a sampled flag.
ConcaveProfile random_profile(std::uint64_t seed, int pieces,
                              const ProfileBox& box = {});

}  // namespace gcorr
