#include "intlab/special.hpp"

#include <array>
#include <cmath>

namespace intlab::special {

using lcplx = std::complex<long double>;

namespace {

double real_modulus(cplx n) {
    if (n.imag() != 0.0) throw DomainError("Jacobi functions require a real modulus, got " + format_complex(n));
    return std::abs(n.real());
}

// Bulirsch's descending Landen scheme for real u, parameter m = k^2 with
// complementary parameter mc = 1 - m (mc may be negative when k > 1).
JacobiTriple sncndn_real(double u, double mc) {
    constexpr double ca = 1e-8;
    double sn, cn, dn;
    if (mc == 0.0) {
        cn = 1.0 / std::cosh(u);
        return {std::tanh(u), cn, cn};
    }
    double em[16], en[16];
    double a, b, c = 1.0, d = 1.0, emc = mc;
    bool reciprocal = emc < 0.0;
    if (reciprocal) {
        d = 1.0 - emc;
        emc /= -1.0 / d;
        d = std::sqrt(d);
        u *= d;
    }
    a = 1.0;
    dn = 1.0;
    int l = -1;
    for (int i = 0; i < 16; ++i) {
        l = i;
        em[i] = a;
        en[i] = (emc = std::sqrt(emc));
        c = 0.5 * (a + emc);
        if (std::abs(a - emc) <= ca * a) break;
        if (i == 15) throw ConvergenceError("Landen iteration did not converge");
        emc *= a;
        a = c;
    }
    u *= c;
    sn = std::sin(u);
    cn = std::cos(u);
    if (sn != 0.0) {
        a = cn / sn;
        c *= a;
        for (int ii = l; ii >= 0; --ii) {
            b = em[ii];
            a *= c;
            c *= dn;
            dn = (en[ii] + a) / (b + a);
            a = c / b;
        }
        a = 1.0 / std::sqrt(c * c + 1.0);
        sn = sn >= 0.0 ? a : -a;
        cn = c * sn;
    }
    if (reciprocal) {
        a = dn;
        dn = cn;
        cn = a;
        sn /= d;
    }
    return {sn, cn, dn};
}

JacobiTriple jacobi_m(cplx u, double m) {
    if (m == 0.0) return {std::sin(u), std::cos(u), 1.0};
    if (m == 1.0) {
        cplx s = 1.0 / std::cosh(u);
        return {std::tanh(u), s, s};
    }
    if (u.imag() == 0.0) return sncndn_real(u.real(), 1.0 - m);
    JacobiTriple r = sncndn_real(u.real(), 1.0 - m);
    JacobiTriple i = sncndn_real(u.imag(), m);  // parameter 1 - m
    double s = r.sn.real(), c = r.cn.real(), d = r.dn.real();
    double s1 = i.sn.real(), c1 = i.cn.real(), d1 = i.dn.real();
    double den = c1 * c1 + m * s * s * s1 * s1;
    const cplx I(0.0, 1.0);
    return {(s * d1 + I * c * d * s1 * c1) / den, (c * c1 - I * s * d * s1 * d1) / den,
            (d * c1 * d1 - I * m * s * c * s1) / den};
}

}  // namespace

JacobiTriple jacobi(cplx u, cplx n) {
    double k = real_modulus(n);
    if (!std::isfinite(u.real()) || !std::isfinite(u.imag())) throw DomainError("Jacobi argument is not finite");
    if (k > 1.0) {
        JacobiTriple r = jacobi_m(k * u, 1.0 / (k * k));
        return {r.sn / k, r.dn, r.cn};
    }
    return jacobi_m(u, k * k);
}

cplx jacobi_elliptic(JacobiKind kind, cplx u, cplx n) {
    JacobiTriple r = jacobi(u, n);
    return kind == JacobiKind::sn ? r.sn : kind == JacobiKind::cn ? r.cn : r.dn;
}

cplx carlson_rf(cplx x, cplx y, cplx z) {
    int zeros = (x == 0.0) + (y == 0.0) + (z == 0.0);
    if (zeros > 1) throw DomainError("R_F needs at most one zero argument");
    for (int it = 0; it < 200; ++it) {
        cplx a = (x + y + z) / 3.0;
        double dev = std::max({std::abs(a - x), std::abs(a - y), std::abs(a - z)}) / std::abs(a);
        if (dev < 1e-3) {
            cplx X = 1.0 - x / a, Y = 1.0 - y / a, Z = -(X + Y);
            cplx e2 = X * Y - Z * Z, e3 = X * Y * Z;
            return (1.0 - e2 / 10.0 + e3 / 14.0 + e2 * e2 / 24.0 - 3.0 * e2 * e3 / 44.0) / std::sqrt(a);
        }
        cplx sx = std::sqrt(x), sy = std::sqrt(y), sz = std::sqrt(z);
        cplx lam = sx * sy + sx * sz + sy * sz;
        x = (x + lam) / 4.0;
        y = (y + lam) / 4.0;
        z = (z + lam) / 4.0;
    }
    throw ConvergenceError("R_F duplication did not converge");
}

cplx elliptic_f(cplx Y, cplx n) {
    if (Y == 0.0) return 0.0;
    cplx a = 1.0 - Y * Y, b = 1.0 - n * n * Y * Y;
    if (std::abs(a) < 1e-6 || std::abs(b) < 1e-6)
        throw DomainError("elliptic_f: argument within 1e-6 of a branch point");
    return Y * carlson_rf(a, b, 1.0);
}

cplx gamma(cplx z) {
    static const std::array<double, 9> g = {0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
                                            771.32342877765313,   -176.61502916214059,   12.507343278686905,
                                            -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
    if (z.real() < 0.5) return M_PI / (std::sin(M_PI * z) * gamma(1.0 - z));
    z -= 1.0;
    cplx x = g[0];
    for (int i = 1; i < 9; ++i) x += g[i] / (z + double(i));
    cplx t = z + 7.5;
    return std::sqrt(2.0 * M_PI) * std::pow(t, z + 0.5) * std::exp(-t) * x;
}

cplx rgamma(cplx z) {
    if (z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::round(z.real())) return 0.0;
    return 1.0 / gamma(z);
}

namespace {

bool is_integer(cplx nu) { return nu.imag() == 0.0 && nu.real() == std::round(nu.real()); }

cplx bessel_series_value(cplx nu, cplx z) {
    lcplx q = -lcplx(z) * lcplx(z) / 4.0L;
    lcplx term = lcplx(rgamma(nu + 1.0));
    lcplx sum = term;
    lcplx lnu(nu);
    for (int k = 0; k < 500; ++k) {
        term *= q / ((long double)(k + 1) * (lnu + (long double)(k + 1)));
        sum += term;
        if (std::abs(term) <= 1e-21L * std::abs(sum) && k > std::abs(z)) {
            return cplx(std::pow(z / 2.0, nu)) * cplx(sum);
        }
    }
    throw ConvergenceError("Bessel series did not converge");
}

cplx bessel_miller(cplx nu, cplx z) {
    int m = int(std::abs(z)) + 60;
    if (m % 2) ++m;
    std::vector<lcplx> f(m + 2);
    f[m + 1] = 0.0L;
    f[m] = 1e-30L;
    lcplx lz(z), lnu(nu);
    for (int k = m; k >= 1; --k) {
        f[k - 1] = 2.0L * (lnu + (long double)k) / lz * f[k] - f[k + 1];
        if (std::abs(f[k - 1]) > 1e200L) {
            for (int j = k - 1; j <= m + 1; ++j) f[j] *= 1e-200L;
        }
    }
    lcplx g1(gamma(nu + 1.0));
    lcplx sum = g1 * f[0];
    lcplx g = g1;  // Gamma(nu + j) / j! at j = 1
    for (int j = 1; 2 * j <= m; ++j) {
        sum += (lnu + 2.0L * (long double)j) * g * f[2 * j];
        g *= (lnu + (long double)j) / (long double)(j + 1);
    }
    return cplx(std::pow(z / 2.0, nu)) * cplx(f[0] / sum);
}

}  // namespace

cplx bessel_j(cplx nu, cplx z) {
    if (std::abs(z) > 500.0) throw ConvergenceError("bessel_j: |z| beyond supported range");
    if (z == 0.0) {
        if (nu == 0.0) return 1.0;
        if (nu.real() > 0.0 || is_integer(nu)) return 0.0;
        throw DomainError("bessel_j: pole at z = 0 for Re(nu) < 0");
    }
    if (is_integer(nu) && nu.real() < 0.0) {
        double s = (long(std::round(-nu.real())) % 2) ? -1.0 : 1.0;
        return s * bessel_j(-nu, z);
    }
    if (std::abs(z) <= 20.0) return bessel_series_value(nu, z);
    return bessel_miller(nu, z);
}

cplx bessel_j_prime(cplx nu, cplx z) { return 0.5 * (bessel_j(nu - 1.0, z) - bessel_j(nu + 1.0, z)); }

namespace {

constexpr long double kAi0 = 0.355028053887817239260L;
constexpr long double kAip0 = 0.258819403792806798405L;  // -Ai'(0)

struct AiryParts {
    lcplx f, g, fp, gp;
};

AiryParts airy_parts(cplx zz) {
    if (std::abs(zz) > 25.0) throw DomainError("airy: |z| beyond the Maclaurin range");
    lcplx z(zz), z3 = z * z * z;
    lcplx tf = 1.0L, tg = z, tfp = z * z / 2.0L, tgp = 1.0L;
    AiryParts p{tf, tg, tfp, tgp};
    for (int k = 0; k < 400; ++k) {
        long double k3 = 3.0L * k;
        tf *= z3 / ((k3 + 2.0L) * (k3 + 3.0L));
        tg *= z3 / ((k3 + 3.0L) * (k3 + 4.0L));
        tfp *= z3 / ((k3 + 3.0L) * (k3 + 5.0L));
        tgp *= z3 / ((k3 + 1.0L) * (k3 + 3.0L));
        p.f += tf;
        p.g += tg;
        p.fp += tfp;
        p.gp += tgp;
        long double scale = std::abs(p.f) + std::abs(p.g) + std::abs(p.fp) + std::abs(p.gp);
        if (std::abs(tf) + std::abs(tg) + std::abs(tfp) + std::abs(tgp) < 1e-22L * scale) return p;
    }
    throw ConvergenceError("airy series did not converge");
}

}  // namespace

cplx airy(AiryKind kind, cplx z) {
    AiryParts p = airy_parts(z);
    const long double s3 = std::sqrt(3.0L);
    switch (kind) {
    case AiryKind::ai: return cplx(kAi0 * p.f - kAip0 * p.g);
    case AiryKind::bi: return cplx(s3 * (kAi0 * p.f + kAip0 * p.g));
    case AiryKind::aip: return cplx(kAi0 * p.fp - kAip0 * p.gp);
    case AiryKind::bip: return cplx(s3 * (kAi0 * p.fp + kAip0 * p.gp));
    }
    return 0.0;
}

cplx cosh_sqrt(cplx z) { return cosh_sqrt_series(z, 0)[0]; }

Series jacobi_series(JacobiKind kind, cplx u0, cplx n, int order) {
    JacobiTriple v = jacobi(u0, n);
    Series s, c, d;
    series::jacobi(Series::identity(u0, order), n, v.sn, v.cn, v.dn, s, c, d);
    return kind == JacobiKind::sn ? s : kind == JacobiKind::cn ? c : d;
}

Series airy_series(AiryKind kind, cplx z0, int order) {
    bool prime = kind == AiryKind::aip || kind == AiryKind::bip;
    bool bi = kind == AiryKind::bi || kind == AiryKind::bip;
    int n = order + (prime ? 1 : 0);
    Series w(n);
    w[0] = airy(bi ? AiryKind::bi : AiryKind::ai, z0);
    if (n >= 1) w[1] = airy(bi ? AiryKind::bip : AiryKind::aip, z0);
    // w'' = z w  =>  (k+1)(k+2) w_{k+2} = z0 w_k + w_{k-1}
    for (int k = 0; k + 2 <= n; ++k) {
        cplx prev = k >= 1 ? w[k - 1] : cplx(0.0);
        w[k + 2] = (z0 * w[k] + prev) / double((k + 1) * (k + 2));
    }
    return prime ? w.derivative() : w;
}

Series bessel_series(cplx nu, cplx z0, int order) {
    Series w(order);
    w[0] = bessel_j(nu, z0);
    if (order == 0) return w;
    if (z0 == 0.0) throw DomainError("bessel_j: jet lifting at z = 0 is not supported");
    w[1] = bessel_j_prime(nu, z0);
    // z^2 w'' + z w' + (z^2 - nu^2) w = 0 expanded about z0.
    cplx z2 = z0 * z0, nu2 = nu * nu;
    for (int k = 0; k + 2 <= order; ++k) {
        double kk = k;
        cplx s = (2.0 * z0 * kk * (kk + 1.0) + z0 * (kk + 1.0)) * w[k + 1] +
                 (kk * (kk - 1.0) + kk + z2 - nu2) * w[k];
        if (k >= 1) s += 2.0 * z0 * w[k - 1];
        if (k >= 2) s += w[k - 2];
        w[k + 2] = -s / (z2 * (kk + 2.0) * (kk + 1.0));
    }
    return w;
}

Series elliptic_f_series(cplx Y0, cplx n, int order) {
    cplx f0 = elliptic_f(Y0, n);
    if (order == 0) return Series(0, f0);
    Series a = Series::identity(Y0, order - 1);
    Series one_minus = cplx(1.0) + (-(a * a));
    Series one_minus_n = cplx(1.0) + (-(n * n) * (a * a));
    Series dF = series::pow(one_minus, -0.5) * series::pow(one_minus_n, -0.5);
    return dF.integral(f0);
}

Series cosh_sqrt_series(cplx z0, int order) {
    Series r(order);
    if (std::abs(z0) > 1.0) {
        Series s, c;
        series::sinh_cosh(series::sqrt(Series::identity(z0, order)), s, c);
        return c;
    }
    // C(w) = sum_k w^k / (2k)!, so C^{(j)}(z0)/j! = sum_{k>=j} binom(k,j) z0^{k-j} / (2k)!.
    for (int j = 0; j <= order; ++j) {
        long double fact = 1.0L;  // (2k)! for k = j
        for (int m = 2; m <= 2 * j; ++m) fact *= m;
        lcplx sum = 0.0L, zp = 1.0L;
        long double binom = 1.0L;
        for (int k = j; k < j + 60; ++k) {
            lcplx term = binom * zp / fact;
            sum += term;
            if (std::abs(term) < 1e-22L * std::abs(sum)) break;
            zp *= lcplx(z0);
            binom = binom * (k + 1) / (k + 1 - j);
            fact *= (long double)(2 * k + 1) * (long double)(2 * k + 2);
        }
        r[j] = cplx(sum);
    }
    return r;
}

}  // namespace intlab::special
