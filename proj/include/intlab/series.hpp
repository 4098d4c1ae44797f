#pragma once

#include <vector>

#include "intlab/common.hpp"

namespace intlab {

// Truncated univariate power series sum c[k] h^k, k = 0..order().
// All binary operations require equal orders.
class Series {
public:
    Series() = default;
    explicit Series(int order, cplx c0 = 0.0);
    static Series identity(cplx base, int order);  // base + h
    static Series from(std::vector<cplx> c);

    int order() const { return int(c_.size()) - 1; }
    cplx operator[](int k) const { return c_[k]; }
    cplx& operator[](int k) { return c_[k]; }
    const std::vector<cplx>& coeffs() const { return c_; }

    Series derivative() const;               // order drops by one
    Series integral(cplx c0) const;          // order grows by one
    Series truncated(int order) const;

    Series& operator+=(const Series& o);
    Series& operator-=(const Series& o);
    friend Series operator+(Series a, const Series& b) { return a += b; }
    friend Series operator-(Series a, const Series& b) { return a -= b; }
    friend Series operator*(const Series& a, const Series& b);
    friend Series operator/(const Series& a, const Series& b);
    friend Series operator*(cplx s, Series a);
    friend Series operator+(cplx s, Series a);
    Series operator-() const;

private:
    std::vector<cplx> c_;
};

namespace series {

Series exp(const Series& a);
Series log(const Series& a);
Series pow(const Series& a, cplx r);  // principal branch at a[0]; a[0] != 0
Series sqrt(const Series& a);
void sin_cos(const Series& a, Series& s, Series& c);
void sinh_cosh(const Series& a, Series& s, Series& c);
Series tan(const Series& a);
Series tanh(const Series& a);
Series atan(const Series& a);
// Jacobi triple along a: s' = c d a', c' = -s d a', d' = -n^2 s c a'.
void jacobi(const Series& a, cplx n, cplx s0, cplx c0, cplx d0, Series& s, Series& c, Series& d);

}  // namespace series

}  // namespace intlab
