#pragma once

#include <vector>

#include "intlab/common.hpp"
#include "intlab/series.hpp"

namespace intlab {

enum class Axis { x, t, p };

struct Point {
    cplx x = 0.0, t = 0.0, p = 0.0;
};

// Box truncation: coefficient (i,j,k) is kept iff i <= x, j <= t, k <= p.
struct Orders {
    int x = 6, t = 3, p = 0;
    int total() const { return x + t + p; }
    bool operator==(const Orders&) const = default;
};

Orders max(const Orders& a, const Orders& b);

constexpr double kDivEps = 1e-12;

// Truncated Taylor expansion about a base point in (x, t) plus an optional
// parameter axis p. Coefficients, not derivatives, are stored.
class Jet {
public:
    Jet() = default;
    Jet(const Point& base, const Orders& orders);  // zero jet

    static Jet constant(cplx v, const Point& base, const Orders& orders);
    static Jet lift(Axis axis, const Point& base, const Orders& orders);
    // Embed a univariate series in the variable `axis`.
    static Jet univariate(const Series& s, Axis axis, const Point& base, const Orders& orders);

    const Point& base() const { return base_; }
    const Orders& orders() const { return ord_; }
    cplx value() const { return c_[0]; }

    cplx coeff(int i, int j, int k = 0) const;
    cplx& coeff(int i, int j, int k = 0);
    // i! j! k! c[i][j][k]; throws Error when out of range.
    cplx derivative(int i, int j, int k = 0) const;

    Jet diff(Axis axis) const;            // order along axis drops by one
    Jet truncate(const Orders& o) const;  // o must not exceed current orders
    Jet p_slice(int k) const;             // coefficient of p^k as an (x,t) jet
    bool is_constant() const;             // all non-constant coefficients zero

    Jet& operator+=(const Jet& o);
    Jet& operator-=(const Jet& o);
    Jet& operator*=(cplx s);
    Jet& operator+=(cplx s) { c_[0] += s; return *this; }
    Jet operator-() const;

    friend Jet operator+(Jet a, const Jet& b) { return a += b; }
    friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
    friend Jet operator*(const Jet& a, const Jet& b);
    friend Jet operator/(const Jet& a, const Jet& b);
    friend Jet operator*(Jet a, cplx s) { return a *= s; }
    friend Jet operator*(cplx s, Jet a) { return a *= s; }
    friend Jet operator/(Jet a, cplx s) { return a *= 1.0 / s; }
    friend Jet operator+(Jet a, cplx s) { return a += s; }
    friend Jet operator+(cplx s, Jet a) { return a += s; }
    friend Jet operator-(Jet a, cplx s) { return a += -s; }
    friend Jet operator-(cplx s, const Jet& a) { return -a + s; }
    friend Jet operator/(cplx s, const Jet& a);

private:
    std::size_t index(int i, int j, int k) const {
        return (std::size_t(i) * (ord_.t + 1) + j) * (ord_.p + 1) + k;
    }
    void check_compatible(const Jet& o) const;

    Point base_;
    Orders ord_;
    std::vector<cplx> c_;
};

// f(g) where f is given by its Taylor coefficients at g.value().
Jet compose(const Series& f, const Jet& g);

Jet reciprocal(const Jet& g);
Jet ipow(const Jet& g, long n);  // exact for any base value when n >= 0
Jet pow(const Jet& g, cplx r);   // integer r dispatches to ipow
Jet pow(const Jet& g, const Jet& r);
Jet exp(const Jet& g);
Jet log(const Jet& g);
Jet sqrt(const Jet& g);
Jet sin(const Jet& g);
Jet cos(const Jet& g);
Jet tan(const Jet& g);
Jet sinh(const Jet& g);
Jet cosh(const Jet& g);
Jet tanh(const Jet& g);
Jet atan(const Jet& g);

}  // namespace intlab
