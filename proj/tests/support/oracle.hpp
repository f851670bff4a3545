#pragma once

// Test-only reference evaluator for the standard Gaussian family, carried out
// in __float128 (~33 significant digits).  Deliberately independent of the
// library implementation paths: erf here comes from a Maclaurin series and a
// Lentz continued fraction, the quantile from Newton iteration, integrals
// from Richardson-extrapolated composite Simpson.  Used to freeze expected
// values in the unit tests and to cross-check the fast double-precision code.

#include <functional>

namespace oracle {

using qfloat = __float128;

qfloat erf_q(qfloat z);
qfloat erfc_q(qfloat z);
qfloat erfcx_q(qfloat z);   // e^{z^2} erfc(z), stable for large z

qfloat cdf_q(qfloat x);     // standard normal CDF
qfloat pdf_q(qfloat x);
qfloat mills_q(qfloat x);   // e^{x^2/2} \int_x^inf e^{-t^2/2} dt
qfloat quantile_q(qfloat p);
qfloat mass_q(qfloat a, qfloat b);  // cdf(b) - cdf(a), tail-stable

// Richardson-extrapolated composite Simpson on [a,b]; f must be smooth.
qfloat integrate_q(const std::function<qfloat(qfloat)>& f, qfloat a, qfloat b,
                   int levels = 14);

// Convert with explicit narrowing for test assertions.
double to_double(qfloat x);

// Decimal rendering for oracle_dump.
void print_q(const char* label, qfloat x);

}  // namespace oracle
