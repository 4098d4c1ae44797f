#include <cmath>

#include "doctest.h"

#include "intlab/catalog.hpp"
#include "intlab/hirota.hpp"

using namespace intlab;
using hirota::BilinearRegistry;

TEST_CASE("D-operator reference values") {
    Field x = expression_field("x", "x", {}), t = expression_field("t", "t", {});
    Field one = constant_field("one", 1.0);
    // D_x x.1 = 1, D_x 1.x = -1, D_x^2 x.x = -2 x_x^2 + 2 x x_xx = -2.
    CHECK(std::abs(hirota::hirota_D(1, 0, x, one, {0.4, 0.1}) - 1.0) < 1e-15);
    CHECK(std::abs(hirota::hirota_D(1, 0, one, x, {0.4, 0.1}) + 1.0) < 1e-15);
    CHECK(std::abs(hirota::hirota_D(2, 0, x, x, {0.4, 0.1}) + 2.0) < 1e-15);
    // D_x D_t x.t = x_xt t - x_x t_t - x_t t_x + x t_xt = -1.
    CHECK(std::abs(hirota::hirota_D(1, 1, x, t, {0.4, 0.1}) + 1.0) < 1e-15);
    // D_x^2 f.f = 2 (f f_xx - f_x^2) with f = e^{2x} gives 0.
    Field e = expression_field("e", "exp(2*x)", {});
    CHECK(std::abs(hirota::hirota_D(2, 0, e, e, {0.3, 0.0})) < 1e-12);
}

TEST_CASE("exponential kernel of the bilinear pKdV") {
    // psi = 1 + exp(k x - k^3 t) solves (D_x^4 + D_x D_t) psi.psi = 0.
    Field psi = expression_field("psi", "1 + exp(k*x - k^3*t)", {{"k", 1.3}});
    const auto& eq = BilinearRegistry::builtin().get("BILIN_PKDV");
    auto r = hirota::bilinear_scan(eq, {{"psi", psi}}, {}, {-2, 2, 0, 1}, 15, 1e-11);
    CHECK(r.pass);
    Field bad = expression_field("psi", "1 + exp(k*x + k^3*t)", {{"k", 1.3}});
    CHECK(!hirota::bilinear_scan(eq, {{"psi", bad}}, {}, {-2, 2, 0, 1}, 15, 1e-11).pass);
}

TEST_CASE("jets shorter than the operator order are rejected") {
    Field x = expression_field("x", "x^5", {});
    Jet a = x.jet({0.2, 0.1}, {2, 0, 0});
    CHECK_THROWS(hirota::hirota_D(3, 0, a, a));
}

TEST_CASE("Cole-Hopf of the bilinear BT pair solves the potential KdV") {
    const auto& cat = catalog::Catalog::builtin();
    Field u1 = catalog::cole_hopf(cat.make("bilin.psi1-cosh"));
    Field seed = cat.make("seed.u1");
    for (auto [x, t] : {std::pair{0.3, 0.2}, {-1.2, 0.7}})
        CHECK(std::abs(u1.value(x, t) - seed.value(x, t)) < 1e-13);
}

TEST_CASE("second-hierarchy chain for K = 0..2") {
    const auto& cat = catalog::Catalog::builtin();
    std::vector<Point> pts{{0.3, 0.2}, {-0.8, 0.5}, {1.1, -0.4}};
    for (int K = 0; K <= 2; ++K) {
        auto r = hirota::second_hierarchy_chain_check(cat.make("bilin.psi-one"), cat.make("bilin.psi1-series"), K, pts);
        CHECK(r.max_rel.size() == std::size_t(K + 1));
        CHECK(r.worst < 1e-10);
    }
}

TEST_CASE("N-field variants of the negative and second flows") {
    CHECK(hirota::neg_flow(1).tag == "BILIN_NEG_FLOW");
    CHECK(hirota::neg_flow(3).roles.size() == 4);
    CHECK(hirota::second_flow(2).roles == std::vector<std::string>{"psi", "psibar0", "psibar1", "psibar2"});
    CHECK(hirota::second_chain(0).roles.size() == 2);
    CHECK(hirota::second_chain(2).roles.size() == 3);
    CHECK(BilinearRegistry::builtin().contains("BILIN_BT_T"));
}
