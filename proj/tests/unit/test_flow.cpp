#include <cmath>

#include "doctest.h"

#include "intlab/catalog.hpp"
#include "intlab/flow.hpp"

using namespace intlab;
using namespace intlab::flow;

namespace {

FlowState soliton(double phi) { return {{1.0 / std::cosh(phi)}, {-std::tanh(phi) / std::cosh(phi)}, {-2.0}, {1.0}}; }

double sech(double x) { return 1.0 / std::cosh(x); }

}  // namespace

TEST_CASE("DOPRI5 on y' = y with dense output") {
    auto sol = integrate([](double, const State& y, State& dy) { dy[0] = y[0]; }, 0.0, {1.0}, 2.0);
    CHECK(!sol.singular);
    CHECK(std::abs(sol.values().back()[0] - std::exp(2.0)) < 1e-9);
    for (double s : {0.13, 0.77, 1.5}) CHECK(std::abs(sol.at(s)[0] - std::exp(s)) < 1e-9);
    for (std::size_t i = 0; i < sol.nodes().size(); ++i)
        CHECK(std::abs(sol.at(sol.nodes()[i])[0] - sol.values()[i][0]) < 1e-13);
    CHECK_THROWS_AS(sol.at(3.0), DomainError);
    auto back = integrate([](double, const State& y, State& dy) { dy[0] = y[0]; }, 0.0, {1.0}, -1.0);
    CHECK(std::abs(back.values().back()[0] - std::exp(-1.0)) < 1e-9);
}

TEST_CASE("blow-up is reported as a movable singularity") {
    // y' = y^2, y(0) = 1 blows up at s = 1.
    auto sol = integrate([](double, const State& y, State& dy) { dy[0] = y[0] * y[0]; }, 0.0, {1.0}, 2.0);
    CHECK(sol.singular);
    CHECK(sol.end() < 1.0);
    CHECK(sol.end() > 0.999);
}

TEST_CASE("F0 carries the soliton data along x") {
    auto sol = integrate_F0(soliton(0.4), 0.0, 3.0);
    for (double x : {0.5, 1.7, 3.0}) {
        auto y = sol.at(x);
        CHECK(std::abs(y[0] - sech(x + 0.4)) < 1e-9);
        CHECK(std::abs(omega_of(soliton(0.4), y) + 2.0 * std::pow(sech(x + 0.4), 2)) < 1e-9);
    }
}

TEST_CASE("F0 conserves p^2 - (c/2) q^4 - lambda q^2 for N = 1") {
    FlowState s{{0.7}, {0.2}, {-1.0}, {1.5}};
    auto sol = integrate_F0(s, 0.0, 2.0);
    auto energy = [](const State& y) { return y[1] * y[1] + 0.5 * std::pow(y[0], 4) - 1.5 * y[0] * y[0]; };
    cplx e0 = energy(sol.values().front());
    for (const auto& y : sol.values()) CHECK(std::abs(energy(y) - e0) < 1e-9);
}

TEST_CASE("zero data stay at zero") {
    FlowState z{{0.0, 0.0}, {0.0, 0.0}, {1.0, -1.0}, {1.0, 2.0}};
    auto sol = integrate_F1(z, 0.0, 1.0);
    for (const auto& y : sol.values())
        for (cplx v : y) CHECK(v == cplx(0.0));
}

TEST_CASE("F1 moves the soliton at speed four") {
    auto sol = integrate_F1(soliton(0.3), 0.0, 0.5);
    for (double t : {0.1, 0.25, 0.5}) CHECK(std::abs(sol.at(t)[0] - sech(0.3 - 4 * t)) < 1e-9);
}

TEST_CASE("flow state validation") {
    FlowState bad{{1.0}, {0.0, 1.0}, {1.0}, {1.0}};
    CHECK_THROWS_AS(bad.validate(), UsageError);
    CHECK_THROWS_AS(FlowState{}.validate(), UsageError);
}

TEST_CASE("reconstruction of the one-soliton on a small grid") {
    GridSpec g{-2, 2, 0, 0.1, 81, 11};
    auto r = reconstruct_and_check_kdv(soliton(0.0), g);
    CHECK(!r.singular);
    for (std::size_t it = 0; it < r.ts.size(); it += 5)
        for (std::size_t ix = 0; ix < r.xs.size(); ix += 20) {
            double z = r.xs[ix] - 4 * r.ts[it];
            CHECK(std::abs(r.omega[it][ix] + 2.0 * sech(z) * sech(z)) < 1e-9);
        }
    CHECK(r.max_rel < 1e-3);
    std::string csv = grid_csv(r);
    CHECK(csv.rfind("x,t,omega_re,omega_im", 0) == 0);
    CHECK_THROWS_AS(reconstruct_and_check_kdv(soliton(0.0), GridSpec{1, 2, 0, 0.1, 81, 11}), UsageError);
}

TEST_CASE("trajectory CSV") {
    auto sol = integrate_F0(soliton(0.0), 0.0, 1.0);
    std::string csv = trajectory_csv(sol, soliton(0.0), {0.0, 0.5, 1.0}, "x");
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
    CHECK(csv.rfind("x,", 0) == 0);
}

TEST_CASE("F0 and F1 commute") {
    FlowState s{{0.3, -0.2}, {0.1, 0.4}, {-1.0, 0.5}, {1.0, 2.3}};
    CHECK(cross_consistency(s, 0.4, 0.1).difference < 1e-8);
}

TEST_CASE("Riccati x-flow over the zero background") {
    // u = 0, lambda = 1: u1_x = -2 + u1^2/2 with u1(0) = 0 gives -2 tanh(x).
    Field zero = constant_field("zero", 0.0);
    auto sol = integrate_riccati_x(zero, 1.0, 0.0, 0.0, 0.0, 2.0);
    for (double x : {0.5, 1.0, 2.0}) CHECK(std::abs(sol.at(x)[0] + 2.0 * std::tanh(x)) < 1e-8);
    // u1(0) = 5 lies above the stable branch and reaches a pole in finite x.
    auto pole = integrate_riccati_x(zero, 1.0, 0.0, 0.0, 5.0, 2.0);
    CHECK(pole.singular);
}

TEST_CASE("Riccati corner closes over the seed background") {
    auto s = catalog::seed_family(1.0, 0.0, 0.0);
    auto r = lax_cross_corner(s.u1, 0.3, 0.1, 0.0, 0.5, 0.5, 0.2);
    CHECK(!r.singular);
    CHECK(r.difference < 1e-8);
}

TEST_CASE("PII rational solution and pole detection") {
    auto s = integrate_PII(1.0, -1.0, 1.0, 1.0, 3.0);
    CHECK(!s.pole);
    CHECK(std::abs(s.sol.at(2.5)[0] + 0.4) < 1e-9);
    auto toward = integrate_PII(1.0, -1.0, 1.0, 1.0, -1.0);
    CHECK(toward.pole);
    CHECK(std::abs(toward.pole_estimate) < 1e-6);
}

TEST_CASE("PII Taylor recurrence") {
    Series a = pii_series(1.0, 2.0, -0.5, 0.25, 8);
    for (int k = 0; k <= 8; ++k) CHECK(std::abs(a[k] - (-0.5 * std::pow(-0.5, k))) < 1e-14);
}

TEST_CASE("H map and quadrature G for the rational solution") {
    const auto& cat = catalog::Catalog::builtin();
    Field P = cat.make("pii.rational"), G = cat.make("pii.rational-G");
    auto r = integrate_H_and_map(P, -3.0, 1.0, 0.6, 3.0, 20, &G);
    CHECK(r.reduced_h_max_rel < 1e-9);
    CHECK(r.u_minus_u1_max < 1e-10);
    CHECK(r.g_quadrature_max < 1e-10);
    Field Gq = quadrature_G(P, 0.6, 3.0, 1.0);
    CHECK(std::abs(Gq.value(2.0) - (G.value(2.0) - G.value(1.0))) < 1e-11);
    CHECK_THROWS_AS(quadrature_G(P, -3.0, -1.0, -2.0), SingularPoint);
}

TEST_CASE("quartic W reduction needs the consistent constant") {
    catalog::CnoidalParams p;
    std::vector<double> zs{0.1, 0.5, 0.9, 1.4, 2.2};
    CHECK(elliptic_W_check(p, p.a5(), p.a7_consistent(), zs).report.pass);
    CHECK(!elliptic_W_check(p, p.a5(), p.a7_stated(), zs).report.pass);
    CHECK(!elliptic_W_check(p, 1.1 * p.a5(), p.a7_consistent(), zs).report.pass);
    p.n = 1.0;
    CHECK_THROWS_AS(elliptic_W_check(p, p.a5(), p.a7_consistent(), zs), DomainError);
}
