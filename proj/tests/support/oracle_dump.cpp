// Prints the reference values frozen into the unit tests, plus the
// two-significant-digit tail-bound error table for eyeball comparison.
// Build and run manually; not part of the test suite.

#include "oracle.hpp"

#include <quadmath.h>

#include <cmath>
#include <cstdio>

using oracle::qfloat;

static void sig2(qfloat v, int* digits, int* expo) {
    // round |v| to two significant digits, half away from zero
    qfloat a = fabsq(v);
    int e = (int)floorq(log10q(a));
    qfloat scale = powq(10.0Q, (qfloat)(e - 1));
    qfloat r = roundq(a / scale);  // in [10, 100]
    if (r >= 100.0Q) { r /= 10.0Q; e += 1; }
    *digits = (int)r * (v < 0 ? -1 : 1);
    *expo = e + 1;  // value = 0.digits x 10^expo
}

int main() {
    using namespace oracle;

    print_q("cdf(1.96)", cdf_q(1.96Q));
    print_q("cdf(1)", cdf_q(1.0Q));
    print_q("cdf(2)", cdf_q(2.0Q));
    print_q("cdf(1)-cdf(-1)", cdf_q(1.0Q) - cdf_q(-1.0Q));
    print_q("quantile(cdf(1)-cdf(-1))", quantile_q(cdf_q(1.0Q) - cdf_q(-1.0Q)));
    print_q("quantile(0.95)", quantile_q(0.95Q));
    print_q("quantile(0.975002)", quantile_q(0.975002Q));

    print_q("mills(0)", mills_q(0.0Q));
    print_q("mills(2)", mills_q(2.0Q));
    print_q("mills(10)", mills_q(10.0Q));
    print_q("mills(50)", mills_q(50.0Q));
    print_q("mills(-1)", mills_q(-1.0Q));
    print_q("hazard(2)", 1.0Q / mills_q(2.0Q));
    print_q("x-f(x) at 5", 5.0Q - 1.0Q / mills_q(5.0Q));
    print_q("x-f(x) at 10", 10.0Q - 1.0Q / mills_q(10.0Q));

    // truncated means
    auto layer_centroid = [](qfloat a, qfloat b) {
        return (pdf_q(a) - pdf_q(b)) / (cdf_q(b) - cdf_q(a));
    };
    print_q("layer_centroid(1,2)", layer_centroid(1.0Q, 2.0Q));
    print_q("half normal mean", sqrtq(2.0Q / M_PIq));

    // linear-profile functionals: mass, moment, centroid of y<=x over R
    qfloat lin_moment = integrate_q(
        [](qfloat x) { return x * cdf_q(x) * pdf_q(x); }, -12.0Q, 12.0Q);
    qfloat lin_mass = integrate_q(
        [](qfloat x) { return cdf_q(x) * pdf_q(x); }, -12.0Q, 12.0Q);
    print_q("int x*cdf(x) dmu", lin_moment);
    print_q("1/(2 sqrt(pi))", 1.0Q / (2.0Q * sqrtq(M_PIq)));
    print_q("int cdf(x) dmu", lin_mass);
    print_q("centroid (ratio)", lin_moment / lin_mass);
    print_q("1/sqrt(pi)", 1.0Q / sqrtq(M_PIq));

    // quadrature cross-check: mean of x over [1,2] under mu1
    qfloat num = integrate_q([](qfloat x) { return x * pdf_q(x); }, 1.0Q, 2.0Q);
    qfloat den = integrate_q([](qfloat x) { return pdf_q(x); }, 1.0Q, 2.0Q);
    print_q("quad centroid(1,2)", num / den);

    // tail bound error table
    std::printf("\nx    err_new           err_komatsu       err_lower        (2 sig digits)\n");
    const double xs[] = {0, 2, 4, 6, 8, 10, 20, 30, 40, 50};
    for (double xd : xs) {
        qfloat x = xd;
        qfloat g = mills_q(x);
        qfloat lower = 2.0Q / (x + sqrtq(x * x + 4.0Q));
        qfloat upper_new = 4.0Q / (3.0Q * x + sqrtq(x * x + 8.0Q));
        qfloat upper_k = 2.0Q / (x + sqrtq(x * x + 2.0Q));
        qfloat en = (upper_new - g) / g;
        qfloat ek = (upper_k - g) / g;
        qfloat el = (lower - g) / g;
        int dn, een, dk, eek, dl, eel;
        sig2(en, &dn, &een);
        sig2(ek, &dk, &eek);
        sig2(el, &dl, &eel);
        std::printf("%-4g %+.10e   %+.10e   %+.10e   (%de%d, %de%d, %de%d)\n", xd,
                    (double)en, (double)ek, (double)el, dn, een, dk, eek, dl, eel);
    }

    // cross-check the oracle itself against libquadmath
    std::printf("\noracle-vs-quadmath relative differences:\n");
    for (double z : {0.3, 1.0, 2.0, 3.9, 4.1, 8.0, 20.0, 35.0}) {
        qfloat mine = erfc_q(z);
        qfloat ref = erfcq((qfloat)z);
        std::printf("  erfc(%5.2f): %.3e\n", z, (double)fabsq(mine / ref - 1.0Q));
    }
    return 0;
}
