#pragma once

#include "intlab/common.hpp"
#include "intlab/series.hpp"

namespace intlab::special {

enum class JacobiKind { sn, cn, dn };
enum class AiryKind { ai, bi, aip, bip };

struct JacobiTriple {
    cplx sn, cn, dn;
};

// Real modulus only; complex argument via the imaginary-argument addition
// formulas. n = 0 and |n| = 1 are evaluated by their exact limits.
JacobiTriple jacobi(cplx u, cplx n);
cplx jacobi_elliptic(JacobiKind kind, cplx u, cplx n);

cplx carlson_rf(cplx x, cplx y, cplx z);
// F(Y, n) = integral_0^Y dt / (sqrt(1-t^2) sqrt(1-n^2 t^2)).
cplx elliptic_f(cplx Y, cplx n);

cplx gamma(cplx z);
cplx rgamma(cplx z);  // 1/Gamma, zero at the poles of Gamma

cplx bessel_j(cplx nu, cplx z);
cplx bessel_j_prime(cplx nu, cplx z);

cplx airy(AiryKind kind, cplx z);

// cosh(sqrt(z)) as an entire function of z.
cplx cosh_sqrt(cplx z);

// Taylor coefficients of f(base + h) up to h^order, for jet lifting.
Series jacobi_series(JacobiKind kind, cplx u0, cplx n, int order);
Series airy_series(AiryKind kind, cplx z0, int order);
Series bessel_series(cplx nu, cplx z0, int order);
Series elliptic_f_series(cplx Y0, cplx n, int order);
Series cosh_sqrt_series(cplx z0, int order);

}  // namespace intlab::special
