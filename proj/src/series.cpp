#include "intlab/series.hpp"

#include <cmath>

namespace intlab {

Series::Series(int order, cplx c0) : c_(std::size_t(order + 1), cplx(0.0)) { c_[0] = c0; }

Series Series::identity(cplx base, int order) {
    Series s(order, base);
    if (order >= 1) s.c_[1] = 1.0;
    return s;
}

Series Series::from(std::vector<cplx> c) {
    Series s;
    s.c_ = std::move(c);
    return s;
}

Series Series::derivative() const {
    Series d(std::max(order() - 1, 0));
    for (int k = 1; k <= order(); ++k) d.c_[k - 1] = double(k) * c_[k];
    return d;
}

Series Series::integral(cplx c0) const {
    Series r(order() + 1, c0);
    for (int k = 0; k <= order(); ++k) r.c_[k + 1] = c_[k] / double(k + 1);
    return r;
}

Series Series::truncated(int n) const {
    Series r(n);
    for (int k = 0; k <= std::min(n, order()); ++k) r.c_[k] = c_[k];
    return r;
}

Series& Series::operator+=(const Series& o) {
    for (int k = 0; k <= order(); ++k) c_[k] += o.c_[k];
    return *this;
}

Series& Series::operator-=(const Series& o) {
    for (int k = 0; k <= order(); ++k) c_[k] -= o.c_[k];
    return *this;
}

Series operator*(const Series& a, const Series& b) {
    Series r(a.order());
    for (int k = 0; k <= a.order(); ++k) {
        cplx s = 0.0;
        for (int j = 0; j <= k; ++j) s += a.c_[j] * b.c_[k - j];
        r.c_[k] = s;
    }
    return r;
}

Series operator/(const Series& a, const Series& b) {
    Series q(a.order());
    for (int k = 0; k <= a.order(); ++k) {
        cplx s = a.c_[k];
        for (int j = 1; j <= k; ++j) s -= b.c_[j] * q.c_[k - j];
        q.c_[k] = s / b.c_[0];
    }
    return q;
}

Series operator*(cplx s, Series a) {
    for (auto& c : a.c_) c *= s;
    return a;
}

Series operator+(cplx s, Series a) {
    a.c_[0] += s;
    return a;
}

Series Series::operator-() const { return cplx(-1.0) * *this; }

namespace series {

Series exp(const Series& a) {
    Series b(a.order(), std::exp(a[0]));
    for (int k = 1; k <= a.order(); ++k) {
        cplx s = 0.0;
        for (int j = 1; j <= k; ++j) s += double(j) * a[j] * b[k - j];
        b[k] = s / double(k);
    }
    return b;
}

Series log(const Series& a) {
    if (a[0] == 0.0) throw DomainError("log: series base value is zero");
    Series b(a.order(), std::log(a[0]));
    for (int k = 1; k <= a.order(); ++k) {
        cplx s = 0.0;
        for (int j = 1; j < k; ++j) s += double(j) * b[j] * a[k - j];
        b[k] = (a[k] - s / double(k)) / a[0];
    }
    return b;
}

Series pow(const Series& a, cplx r) {
    if (a[0] == 0.0) throw DomainError("pow: non-analytic at zero base value");
    Series b(a.order(), r == 0.5 ? std::sqrt(a[0]) : std::pow(a[0], r));
    for (int k = 1; k <= a.order(); ++k) {
        cplx s = 0.0;
        for (int j = 1; j <= k; ++j) s += (r * double(j) - double(k - j)) * a[j] * b[k - j];
        b[k] = s / (double(k) * a[0]);
    }
    return b;
}

Series sqrt(const Series& a) { return pow(a, 0.5); }

void sin_cos(const Series& a, Series& s, Series& c) {
    int n = a.order();
    s = Series(n, std::sin(a[0]));
    c = Series(n, std::cos(a[0]));
    for (int k = 1; k <= n; ++k) {
        cplx ss = 0.0, cc = 0.0;
        for (int j = 1; j <= k; ++j) {
            ss += double(j) * a[j] * c[k - j];
            cc += double(j) * a[j] * s[k - j];
        }
        s[k] = ss / double(k);
        c[k] = -cc / double(k);
    }
}

void sinh_cosh(const Series& a, Series& s, Series& c) {
    int n = a.order();
    s = Series(n, std::sinh(a[0]));
    c = Series(n, std::cosh(a[0]));
    for (int k = 1; k <= n; ++k) {
        cplx ss = 0.0, cc = 0.0;
        for (int j = 1; j <= k; ++j) {
            ss += double(j) * a[j] * c[k - j];
            cc += double(j) * a[j] * s[k - j];
        }
        s[k] = ss / double(k);
        c[k] = cc / double(k);
    }
}

// b' = (1 + sign b^2) a'
static Series tan_like(const Series& a, cplx b0, double sign) {
    Series b(a.order(), b0);
    std::vector<cplx> sq(a.order() + 1);
    for (int k = 1; k <= a.order(); ++k) {
        int m = k - 1;
        cplx q = 0.0;
        for (int j = 0; j <= m; ++j) q += b[j] * b[m - j];
        sq[m] = sign * q;
        cplx s = 0.0;
        for (int j = 1; j <= k; ++j) s += double(j) * a[j] * ((k - j == 0 ? 1.0 : 0.0) + sq[k - j]);
        b[k] = s / double(k);
    }
    return b;
}

Series tan(const Series& a) { return tan_like(a, std::tan(a[0]), 1.0); }
Series tanh(const Series& a) { return tan_like(a, std::tanh(a[0]), -1.0); }

Series atan(const Series& a) {
    if (a.order() == 0) return Series(0, std::atan(a[0]));
    Series da = a.derivative();
    Series den = cplx(1.0) + a.truncated(da.order()) * a.truncated(da.order());
    return (da / den).integral(std::atan(a[0]));
}

void jacobi(const Series& a, cplx n, cplx s0, cplx c0, cplx d0, Series& s, Series& c, Series& d) {
    int N = a.order();
    s = Series(N, s0);
    c = Series(N, c0);
    d = Series(N, d0);
    std::vector<cplx> cd(N + 1), sd(N + 1), sc(N + 1);
    cplx n2 = n * n;
    for (int k = 1; k <= N; ++k) {
        int m = k - 1;
        cplx x = 0.0, y = 0.0, z = 0.0;
        for (int j = 0; j <= m; ++j) {
            x += c[j] * d[m - j];
            y += s[j] * d[m - j];
            z += s[j] * c[m - j];
        }
        cd[m] = x;
        sd[m] = y;
        sc[m] = z;
        cplx ds = 0.0, dc = 0.0, dd = 0.0;
        for (int j = 1; j <= k; ++j) {
            ds += double(j) * a[j] * cd[k - j];
            dc += double(j) * a[j] * sd[k - j];
            dd += double(j) * a[j] * sc[k - j];
        }
        s[k] = ds / double(k);
        c[k] = -dc / double(k);
        d[k] = -n2 * dd / double(k);
    }
}

}  // namespace series
}  // namespace intlab
