#include <cmath>
#include <numbers>

#include "doctest.h"

#include "intlab/field.hpp"
#include "intlab/quadrature.hpp"
#include "intlab/sampling_impl.hpp"

using namespace intlab;

TEST_CASE("Gauss-Kronrod scalar and vector integrals") {
    cplx v = quad::gauss_kronrod([](cplx x) { return std::exp(x); }, 0.0, 1.0);
    CHECK(std::abs(v - (std::exp(1.0) - 1.0)) < 1e-14);
    // Complex segment: integral of 1/z from 1 to i along the chord is i pi/2.
    cplx w = quad::gauss_kronrod([](cplx z) { return 1.0 / z; }, 1.0, cplx(0, 1));
    CHECK(std::abs(w - cplx(0, std::numbers::pi / 2)) < 1e-13);
    auto r = quad::gauss_kronrod([](cplx x) { return std::vector<cplx>{x * x, std::sin(x)}; }, 0.0, 2.0);
    CHECK(std::abs(r.value[0] - 8.0 / 3.0) < 1e-13);
    CHECK(std::abs(r.value[1] - (1.0 - std::cos(2.0))) < 1e-13);
    CHECK(r.evaluations > 0);
}

TEST_CASE("Gauss-Kronrod reports non-convergence on a pole") {
    CHECK_THROWS_AS(quad::gauss_kronrod([](cplx x) { return std::vector<cplx>{1.0 / (x * x)}; }, -1.0, 1.0, 1e-12,
                                        1e-14, 50),
                    ConvergenceError);
}

TEST_CASE("expression fields and derivatives") {
    Field f = expression_field("f", "a*sin(x)*exp(t)", {{"a", 2.0}});
    CHECK(std::abs(f.value(0.4, 0.3) - 2.0 * std::sin(0.4) * std::exp(0.3)) < 1e-15);
    Field fxt = derivative(derivative(f, Axis::x), Axis::t);
    CHECK(std::abs(fxt.value(0.4, 0.3) - 2.0 * std::cos(0.4) * std::exp(0.3)) < 1e-14);
    CHECK_THROWS_AS(expression_field("g", "b*x", {}), UsageError);
}

TEST_CASE("declared loci are detected") {
    Field f = expression_field("f", "1/(x - t)", {}, {"x - t"});
    CHECK(f.near_locus({0.5, 0.5}));
    CHECK(f.near_locus({0.52, 0.5}));
    CHECK(!f.near_locus({1.5, 0.5}));
}

TEST_CASE("antiderivative in x carries t and p coefficients") {
    Field f = expression_field("f", "cos(x)*exp(t)", {});
    Field F = antiderivative_x(f, 0.0);
    CHECK(std::abs(F.value(1.1, 0.2) - std::sin(1.1) * std::exp(0.2)) < 1e-13);
    Jet j = F.jet({1.1, 0.2}, {2, 2, 0});
    CHECK(std::abs(j.derivative(1, 0) - std::cos(1.1) * std::exp(0.2)) < 1e-13);
    CHECK(std::abs(j.derivative(1, 1) - std::cos(1.1) * std::exp(0.2)) < 1e-13);
    CHECK(std::abs(j.derivative(0, 2) - std::sin(1.1) * std::exp(0.2)) < 1e-12);
}

TEST_CASE("Halton sampling is deterministic and fills the unit square") {
    auto a = halton(kHaltonOffset), b = halton(kHaltonOffset);
    CHECK(a == b);
    CHECK(halton(1).first == doctest::Approx(0.5));
    CHECK(halton(1).second == doctest::Approx(1.0 / 3.0));
    std::function<std::optional<double>(const Point&)> all = [](const Point& p) { return p.x.real(); };
    auto r1 = sample_admissible<double>({-1, 1, 0, 1}, 25, all);
    auto r2 = sample_admissible<double>({-1, 1, 0, 1}, 25, all);
    REQUIRE(r1.size() == 25);
    for (std::size_t i = 0; i < r1.size(); ++i) CHECK(r1[i].second == r2[i].second);
    for (const auto& [p, v] : r1) {
        CHECK(p.x.real() >= -1.0);
        CHECK(p.x.real() < 1.0);
        CHECK(p.t.real() >= 0.0);
        CHECK(p.t.real() < 1.0);
    }
}

TEST_CASE("a region with too few admissible points is rejected") {
    std::function<std::optional<double>(const Point&)> none = [](const Point&) { return std::optional<double>{}; };
    CHECK_THROWS_AS(sample_admissible<double>({-1, 1, 0, 1}, 10, none), DomainError);
}
