#include "intlab/jet.hpp"

#include <cmath>

namespace intlab {

Orders max(const Orders& a, const Orders& b) {
    return {std::max(a.x, b.x), std::max(a.t, b.t), std::max(a.p, b.p)};
}

Jet::Jet(const Point& base, const Orders& orders)
    : base_(base), ord_(orders),
      c_(std::size_t(orders.x + 1) * (orders.t + 1) * (orders.p + 1), cplx(0.0)) {
    if (orders.x < 0 || orders.t < 0 || orders.p < 0) throw Error("jet orders must be non-negative");
}

Jet Jet::constant(cplx v, const Point& base, const Orders& orders) {
    Jet j(base, orders);
    j.c_[0] = v;
    return j;
}

Jet Jet::lift(Axis axis, const Point& base, const Orders& orders) {
    Jet j(base, orders);
    switch (axis) {
    case Axis::x:
        j.c_[0] = base.x;
        if (orders.x >= 1) j.coeff(1, 0, 0) = 1.0;
        break;
    case Axis::t:
        j.c_[0] = base.t;
        if (orders.t >= 1) j.coeff(0, 1, 0) = 1.0;
        break;
    case Axis::p:
        j.c_[0] = base.p;
        if (orders.p >= 1) j.coeff(0, 0, 1) = 1.0;
        break;
    }
    return j;
}

Jet Jet::univariate(const Series& s, Axis axis, const Point& base, const Orders& orders) {
    Jet j(base, orders);
    int n = axis == Axis::x ? orders.x : axis == Axis::t ? orders.t : orders.p;
    for (int k = 0; k <= std::min(n, s.order()); ++k) {
        if (axis == Axis::x) j.coeff(k, 0, 0) = s[k];
        else if (axis == Axis::t) j.coeff(0, k, 0) = s[k];
        else j.coeff(0, 0, k) = s[k];
    }
    return j;
}

cplx Jet::coeff(int i, int j, int k) const {
    if (i < 0 || j < 0 || k < 0 || i > ord_.x || j > ord_.t || k > ord_.p) return 0.0;
    return c_[index(i, j, k)];
}

cplx& Jet::coeff(int i, int j, int k) {
    if (i < 0 || j < 0 || k < 0 || i > ord_.x || j > ord_.t || k > ord_.p)
        throw Error("jet coefficient index out of range");
    return c_[index(i, j, k)];
}

static double factorial(int n) {
    double f = 1.0;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
}

cplx Jet::derivative(int i, int j, int k) const {
    if (i < 0 || j < 0 || k < 0 || i > ord_.x || j > ord_.t || k > ord_.p)
        throw Error("derivative order (" + std::to_string(i) + "," + std::to_string(j) + "," +
                    std::to_string(k) + ") exceeds jet truncation");
    return factorial(i) * factorial(j) * factorial(k) * c_[index(i, j, k)];
}

Jet Jet::diff(Axis axis) const {
    Orders o = ord_;
    if (axis == Axis::x) --o.x;
    else if (axis == Axis::t) --o.t;
    else --o.p;
    if (o.x < 0 || o.t < 0 || o.p < 0) throw Error("cannot differentiate a jet of order 0 along that axis");
    Jet r(base_, o);
    for (int i = 0; i <= o.x; ++i)
        for (int j = 0; j <= o.t; ++j)
            for (int k = 0; k <= o.p; ++k) {
                if (axis == Axis::x) r.coeff(i, j, k) = double(i + 1) * coeff(i + 1, j, k);
                else if (axis == Axis::t) r.coeff(i, j, k) = double(j + 1) * coeff(i, j + 1, k);
                else r.coeff(i, j, k) = double(k + 1) * coeff(i, j, k + 1);
            }
    return r;
}

Jet Jet::truncate(const Orders& o) const {
    if (o.x > ord_.x || o.t > ord_.t || o.p > ord_.p) throw Error("truncate cannot raise jet orders");
    Jet r(base_, o);
    for (int i = 0; i <= o.x; ++i)
        for (int j = 0; j <= o.t; ++j)
            for (int k = 0; k <= o.p; ++k) r.coeff(i, j, k) = coeff(i, j, k);
    return r;
}

Jet Jet::p_slice(int k) const {
    if (k < 0 || k > ord_.p) throw Error("parameter-axis order out of range");
    Orders o{ord_.x, ord_.t, 0};
    Point b = base_;
    Jet r(b, o);
    for (int i = 0; i <= o.x; ++i)
        for (int j = 0; j <= o.t; ++j) r.coeff(i, j, 0) = coeff(i, j, k);
    return r;
}

bool Jet::is_constant() const {
    for (std::size_t n = 1; n < c_.size(); ++n)
        if (c_[n] != 0.0) return false;
    return true;
}

void Jet::check_compatible(const Jet& o) const {
    if (!(ord_ == o.ord_)) throw Error("jet arithmetic requires identical orders");
    if (base_.x != o.base_.x || base_.t != o.base_.t || base_.p != o.base_.p)
        throw Error("jet arithmetic requires identical base points");
}

Jet& Jet::operator+=(const Jet& o) {
    check_compatible(o);
    for (std::size_t n = 0; n < c_.size(); ++n) c_[n] += o.c_[n];
    return *this;
}

Jet& Jet::operator-=(const Jet& o) {
    check_compatible(o);
    for (std::size_t n = 0; n < c_.size(); ++n) c_[n] -= o.c_[n];
    return *this;
}

Jet& Jet::operator*=(cplx s) {
    for (auto& c : c_) c *= s;
    return *this;
}

Jet Jet::operator-() const {
    Jet r = *this;
    for (auto& c : r.c_) c = -c;
    return r;
}

Jet operator*(const Jet& a, const Jet& b) {
    a.check_compatible(b);
    const Orders& o = a.ord_;
    Jet r(a.base_, o);
    for (int i1 = 0; i1 <= o.x; ++i1)
        for (int j1 = 0; j1 <= o.t; ++j1)
            for (int k1 = 0; k1 <= o.p; ++k1) {
                cplx av = a.c_[a.index(i1, j1, k1)];
                if (av == 0.0) continue;
                for (int i2 = 0; i2 <= o.x - i1; ++i2)
                    for (int j2 = 0; j2 <= o.t - j1; ++j2)
                        for (int k2 = 0; k2 <= o.p - k1; ++k2)
                            r.c_[r.index(i1 + i2, j1 + j2, k1 + k2)] += av * b.c_[b.index(i2, j2, k2)];
            }
    return r;
}

Jet compose(const Series& f, const Jet& g) {
    Jet h = g;
    h.coeff(0, 0, 0) = 0.0;
    int n = std::min(f.order(), g.orders().total());
    Jet r = Jet::constant(f[n], g.base(), g.orders());
    for (int k = n - 1; k >= 0; --k) {
        r = r * h;
        r += f[k];
    }
    return r;
}

Jet reciprocal(const Jet& g) {
    cplx g0 = g.value();
    if (std::abs(g0) < kDivEps)
        throw SingularPoint("division by near-zero jet", g.base().x, g.base().t);
    int n = g.orders().total();
    Series f(n);
    cplx inv = 1.0 / g0, term = inv;
    for (int k = 0; k <= n; ++k) {
        f[k] = term;
        term *= -inv;
    }
    return compose(f, g);
}

Jet operator/(const Jet& a, const Jet& b) { return a * reciprocal(b); }
Jet operator/(cplx s, const Jet& a) { return reciprocal(a) * s; }

Jet ipow(const Jet& g, long n) {
    if (n < 0) return reciprocal(ipow(g, -n));
    Jet r = Jet::constant(1.0, g.base(), g.orders());
    Jet b = g;
    while (n > 0) {
        if (n & 1) r = r * b;
        n >>= 1;
        if (n) b = b * b;
    }
    return r;
}

static Series at(cplx base, const Jet& g) { return Series::identity(base, g.orders().total()); }

Jet pow(const Jet& g, cplx r) {
    if (r.imag() == 0.0 && r.real() == std::round(r.real()) && std::abs(r.real()) < 1e9)
        return ipow(g, long(r.real()));
    if (g.value() == 0.0) {
        if (g.orders().total() == 0) return Jet::constant(0.0, g.base(), g.orders());
        throw DomainError("non-analytic power at zero base value");
    }
    return compose(series::pow(at(g.value(), g), r), g);
}

Jet pow(const Jet& g, const Jet& r) {
    if (r.is_constant()) return pow(g, r.value());
    return exp(r * log(g));
}

Jet exp(const Jet& g) {
    int n = g.orders().total();
    Series f(n);
    cplx e = std::exp(g.value());
    double fact = 1.0;
    for (int k = 0; k <= n; ++k) {
        if (k > 0) fact *= k;
        f[k] = e / fact;
    }
    return compose(f, g);
}

Jet log(const Jet& g) {
    if (g.value() == 0.0) throw DomainError("log of zero");
    return compose(series::log(at(g.value(), g)), g);
}

Jet sqrt(const Jet& g) {
    if (g.value() == 0.0) {
        if (g.orders().total() == 0) return Jet::constant(0.0, g.base(), g.orders());
        throw DomainError("sqrt is non-analytic at zero");
    }
    return compose(series::sqrt(at(g.value(), g)), g);
}

Jet sin(const Jet& g) {
    Series s, c;
    series::sin_cos(at(g.value(), g), s, c);
    return compose(s, g);
}

Jet cos(const Jet& g) {
    Series s, c;
    series::sin_cos(at(g.value(), g), s, c);
    return compose(c, g);
}

Jet tan(const Jet& g) {
    if (std::abs(std::cos(g.value())) < kDivEps) throw SingularPoint("tan pole", g.base().x, g.base().t);
    return compose(series::tan(at(g.value(), g)), g);
}

Jet sinh(const Jet& g) {
    Series s, c;
    series::sinh_cosh(at(g.value(), g), s, c);
    return compose(s, g);
}

Jet cosh(const Jet& g) {
    Series s, c;
    series::sinh_cosh(at(g.value(), g), s, c);
    return compose(c, g);
}

Jet tanh(const Jet& g) {
    if (std::abs(std::cosh(g.value())) < kDivEps) throw SingularPoint("tanh pole", g.base().x, g.base().t);
    return compose(series::tanh(at(g.value(), g)), g);
}

Jet atan(const Jet& g) { return compose(series::atan(at(g.value(), g)), g); }

}  // namespace intlab
