#include <cmath>
#include <random>

#include "doctest.h"

#include "intlab/catalog.hpp"
#include "intlab/flow.hpp"

using namespace intlab;
using catalog::Catalog;

namespace {

double rel(cplx a, cplx b) { return std::abs(a - b) / (1.0 + std::abs(b)); }

}  // namespace

TEST_CASE("seed family at the origin") {
    auto s = catalog::seed_family(1.0, 0.0, 0.0);
    CHECK(std::abs(s.u.value(0.0, 0.0)) < 1e-15);
    CHECK(std::abs(s.u1.value(0.0, 0.0)) < 1e-15);
    CHECK(std::abs(std::exp(s.v.value(0.0, 0.0)) + 1.0) < 1e-14);
    CHECK(std::abs(s.g.value(0.0, 0.0)) < 1e-15);
}

TEST_CASE("seed u1 approaches c - 2 sqrt(lambda) for large x") {
    auto s = catalog::seed_family(1.0, 0.4, 0.0);
    CHECK(std::abs(s.u1.value(30.0, 0.1) - (0.4 - 2.0)) < 1e-12);
    CHECK_THROWS_AS(catalog::seed_family(0.0, 0.0, 0.0), DomainError);
}

TEST_CASE("Levi transformation at the origin and at eps = 0") {
    auto s = catalog::seed_family(1.0, 0.0, 0.0);
    auto l = catalog::levi_apply(s, 1.0);
    CHECK(std::abs(l.u.value(0.0, 0.0) + 1.0) < 1e-14);
    auto id = catalog::levi_apply(s, 0.0);
    for (double x : {-1.3, 0.2, 2.0}) {
        CHECK(rel(id.u.value(x, 0.4), s.u.value(x, 0.4)) < 1e-15);
        CHECK(rel(id.g.value(x, 0.4), s.g.value(x, 0.4)) < 1e-15);
    }
}

TEST_CASE("catalog closed forms at reference points") {
    const auto& cat = Catalog::builtin();
    CHECK(std::abs(cat.make("rational-omega1").value(1.0, 0.0) - 1.0) < 1e-15);
    CHECK(std::abs(cat.make("pii.rational").value(2.0) + 0.5) < 1e-15);
    CHECK(std::abs(cat.make("neg.beta").value(0.5, 0.5) + 2.0) < 1e-15);
    CHECK(cat.make("seed.u1", {{"c", 0.5}}).params().at("c") == cplx(0.5));
}

TEST_CASE("PII reconstruction reproduces the rational omega1") {
    const auto& cat = Catalog::builtin();
    Field w1 = cat.make("rational-omega1-pii"), closed = cat.make("rational-omega1");
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> X(-3, 3), T(0.1, 1);
    int n = 0;
    while (n < 20) {
        Point p{X(rng), T(rng)};
        if (w1.near_locus(p) || closed.near_locus(p)) continue;
        try {
            CHECK(rel(w1.value(p.x, p.t), closed.value(p.x, p.t)) < 1e-9);
            ++n;
        } catch (const SingularPoint&) {
        }
    }
}

TEST_CASE("PII reconstruction with the zero solution gives omega1 = -lambda") {
    const auto& cat = Catalog::builtin();
    Field P = cat.make("pii.zero");
    // G' = 1/xi for P = 0, so G = log(xi).
    Field G = expression_field("G", "log(x)", {}, {"x"});
    catalog::PiiSetup s;
    s.a4 = -1.0;
    auto r = catalog::pii_reconstruct(P, G, s);
    for (double x : {-2.0, 0.7, 2.5}) {
        try {
            CHECK(std::abs(r.omega1.value(x, 0.3) + 1.0) < 1e-10);
        } catch (const SingularPoint&) {
        }
    }
}

TEST_CASE("Bessel omega1 from the Airy PII solution equals the closed form") {
    const auto& cat = Catalog::builtin();
    Field a = cat.make("bessel-omega1-pii"), b = cat.make("bessel-omega1");
    std::mt19937 rng(12);
    std::uniform_real_distribution<double> X(1, 3), T(0.1, 1);
    int n = 0;
    for (int k = 0; k < 200 && n < 10; ++k) {
        Point p{X(rng), T(rng)};
        if (a.near_locus(p) || b.near_locus(p)) continue;
        try {
            cplx va = a.value(p.x, p.t), vb = b.value(p.x, p.t);
            CHECK(rel(va, vb) < 1e-6);
            ++n;
        } catch (const DomainError&) {
        }
    }
    CHECK(n == 10);
}

TEST_CASE("cnoidal omega3 degenerates smoothly as the modulus tends to one") {
    const auto& cat = Catalog::builtin();
    cplx a = cat.make("cnoidal-omega3", {{"n", 0.999999}}).value(0.3, 0.2);
    cplx b = cat.make("cnoidal-omega3", {{"n", 1.0}}).value(0.3, 0.2);
    CHECK(rel(a, b) < 1e-4);
}

TEST_CASE("constraint values of the cnoidal ansatz") {
    catalog::CnoidalParams p;
    CHECK(std::abs(p.a5() + 0.859375) < 1e-15);
    CHECK(std::abs(p.a7_consistent() + 0.140625) < 1e-15);
    CHECK(std::abs(p.a7_stated() + 0.0703125) < 1e-15);
}

TEST_CASE("quadrature G is invariant up to a constant under an anchor shift") {
    Field P = Catalog::builtin().make("pii.rational");
    Field g1 = catalog::pii_G_quadrature(P, 1.0), g2 = catalog::pii_G_quadrature(P, 1.5);
    cplx d0 = g1.value(2.0) - g2.value(2.0);
    for (double x : {0.8, 1.3, 2.7}) CHECK(std::abs(g1.value(x) - g2.value(x) - d0) < 1e-12);
    Field closed = Catalog::builtin().make("pii.rational-G");
    CHECK(std::abs(g1.value(2.0) - (closed.value(2.0) - closed.value(1.0))) < 1e-12);
}

TEST_CASE("manifest parse errors carry the line number") {
    try {
        Catalog::parse("[a]\nexpr = x\n\n[b]\nexpr = (x\n");
        FAIL("no throw");
    } catch (const UsageError& e) {
        CHECK(std::string(e.what()).find("line 5") != std::string::npos);
    }
    CHECK_THROWS_AS(Catalog::parse("expr = x\n"), UsageError);
    CHECK_THROWS_AS(Catalog::parse("[a]\nexpr = x\n[a]\nexpr = t\n"), UsageError);
    auto c = Catalog::parse("# comment\n[a]\nparams = k=2\nexpr = k*x\n");
    CHECK(c.make("a").value(3.0, 0.0) == cplx(6.0));
    CHECK(c.make("a", {{"k", 1.0}, {"zz", 5.0}}).value(3.0, 0.0) == cplx(3.0));
}

TEST_CASE("every builtin entry constructs") {
    const auto& cat = Catalog::builtin();
    for (const auto& n : cat.names()) CHECK_NOTHROW(cat.make(n));
    CHECK(catalog::parse_params("a=1, b=-0.5, c=1i").at("c") == cplx(0, 1));
}
