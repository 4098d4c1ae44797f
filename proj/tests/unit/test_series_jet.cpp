#include <cmath>
#include <random>

#include "doctest.h"

#include "intlab/expr.hpp"
#include "intlab/jet.hpp"

using namespace intlab;

namespace {

const Orders kO{4, 2, 0};

Jet X(const Point& p, const Orders& o = kO) { return Jet::lift(Axis::x, p, o); }
Jet T(const Point& p, const Orders& o = kO) { return Jet::lift(Axis::t, p, o); }

}  // namespace

TEST_CASE("lift gives identity jets") {
    Point p{2.0, 3.0, 0.0};
    Jet x = X(p);
    CHECK(x.value() == cplx(2.0));
    CHECK(x.derivative(1, 0) == cplx(1.0));
    CHECK(x.derivative(0, 1) == cplx(0.0));
    Jet t = T({0.0, 0.0, 0.0});
    CHECK(t.coeff(0, 1) == cplx(1.0));
    Jet lam = Jet::lift(Axis::p, {0.0, 0.0, 0.0}, {0, 0, 3});
    CHECK(lam.coeff(0, 0, 1) == cplx(1.0));
    CHECK(lam.coeff(0, 0, 2) == cplx(0.0));
}

TEST_CASE("exp(x + t) has unit derivatives at the origin") {
    Point o{0.0, 0.0, 0.0};
    Jet e = exp(X(o) + T(o));
    for (int i = 0; i <= kO.x; ++i)
        for (int j = 0; j <= kO.t; ++j) CHECK(std::abs(e.derivative(i, j) - 1.0) < 1e-13);
}

TEST_CASE("sin(x) cos(t) mixed derivative") {
    Point o{0.0, 0.0, 0.0};
    Orders w{3, 2, 0};
    Jet f = sin(X(o, w)) * cos(T(o, w));
    CHECK(std::abs(f.derivative(3, 2) - 1.0) < 1e-14);
}

TEST_CASE("ring axioms and extraction") {
    Point p{0.4, -0.3, 0.0};
    Jet x = X(p);
    Jet z = x * x - ipow(x, 2);
    CHECK(z.is_constant());
    CHECK(std::abs(z.value()) < 1e-15);
    CHECK(std::abs(ipow(X({0.0, 0.0, 0.0}), 3).derivative(3, 0) - 6.0) < 1e-14);
    CHECK(Jet::constant(5.0, p, kO).derivative(0, 0) == cplx(5.0));
    CHECK(std::abs(tanh(X({0.0, 0.0, 0.0})).derivative(3, 0) + 2.0) < 1e-14);
}

TEST_CASE("extraction beyond the truncation throws") {
    Jet x = X({0.0, 0.0, 0.0});
    CHECK_THROWS_AS(x.derivative(kO.x + 1, 0), Error);
}

TEST_CASE("division by a vanishing jet reports the base point") {
    Jet x = X({0.0, 0.0, 0.0});
    CHECK_THROWS_AS(1.0 / x, SingularPoint);
}

TEST_CASE("jet derivatives agree with symbolic differentiation on random composites") {
    const char* forms[] = {
        "exp(sin(x*t)) + x^3/(2 + cos(t))",
        "log(2 + x^2) * tanh(t - x)",
        "sqrt(3 + x*t) * cos(x)",
        "sinh(x)^2 - cosh(x - t)/(1 + t^2)",
        "(x + 2*t)^(5/2) * exp(-x)",
        "tan(0.3*x) + arctan(x*t)",
        "jacobi_sn(x + t, 0.6) * jacobi_dn(x, 0.6)",
        "airy_ai(x - t) + bessel_j(1/3, 2 + x)",
        "cosh_sqrt(x*t + 1) * elliptic_f(0.3*x, 0.5)",
    };
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> U(0.1, 0.9);
    expr::SymbolTable tab{{"x", "t"}, {}};
    for (const char* f : forms) {
        auto e = expr::parse(f);
        for (int k = 0; k < 12; ++k) {
            Point p{U(rng), U(rng), 0.0};
            Jet j = expr::evaluate_jet(e, {{"x", X(p)}, {"t", T(p)}}, {}, p, kO);
            expr::Bindings b;
            b.values = {{"x", p.x}, {"t", p.t}};
            for (auto [i, jt] : {std::pair{1, 0}, {0, 1}, {2, 1}, {3, 0}, {1, 2}}) {
                auto d = expr::differentiate(expr::differentiate(e, "x", i, &tab), "t", jt, &tab);
                cplx want = expr::evaluate(d, b);
                cplx got = j.derivative(i, jt);
                CHECK(std::abs(got - want) / (1.0 + std::abs(want)) < 1e-9);
            }
        }
    }
}

TEST_CASE("parameter-axis jets reproduce the series of cosh(sqrt(lambda) a)") {
    // cosh(sqrt(lambda) a) = sum a^(2k) lambda^k / (2k)!
    Point p{0.7, 0.0, 0.0};
    Orders o{0, 0, 5};
    Jet lam = Jet::lift(Axis::p, p, o);
    Jet a = Jet::constant(0.7, p, o);
    Jet f = expr::apply_function(expr::Func::cosh_sqrt, {lam * a * a});
    double fact = 1.0;
    for (int k = 0; k <= 5; ++k) {
        if (k > 0) fact *= (2 * k - 1) * (2 * k);
        CHECK(std::abs(f.coeff(0, 0, k) - std::pow(0.7, 2 * k) / fact) < 1e-12);
    }
}

TEST_CASE("series arithmetic round trips") {
    Series s = Series::identity(0.5, 6);
    Series e = series::exp(series::log(s));
    for (int k = 0; k <= 6; ++k) CHECK(std::abs(e[k] - s[k]) < 1e-14);
    Series q = (s * s) / s;
    for (int k = 0; k <= 6; ++k) CHECK(std::abs(q[k] - s[k]) < 1e-14);
}
