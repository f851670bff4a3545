#pragma once

namespace gcorr {

/// Gaussian functionals of the planar region { (x,y) : y <= m x + h }
/// restricted to vertical strips, reduced to one-dimensional integrals by
/// the product structure of the measure.  h may be +-inf (full/empty).

/// Measure of the half-plane: Phi(h / sqrt(1 + m^2)).
double half_plane_mass(double m, double h);

/// \int x Phi(m x + h) dmu1(x) over the whole line (closed form).
double half_plane_xmoment(double m, double h);

/// x-coordinate of the half-plane's Gaussian centroid.
double half_plane_centroid(double m, double h);

/// \int_lo^hi Phi(m x + h) dmu1(x); adaptive quadrature, endpoints may be
/// infinite.
double line_gauss_mass(double m, double h, double lo, double hi, double tol);

/// \int_lo^hi x Phi(m x + h) dmu1(x) in closed form (integration by parts).
double line_gauss_xmoment(double m, double h, double lo, double hi);

}  // namespace gcorr
