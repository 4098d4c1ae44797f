// Acceptance criteria: one PASS/FAIL line per criterion, tolerances pinned here.
// Exits nonzero when any criterion is red.
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "intlab/catalog.hpp"
#include "intlab/flow.hpp"
#include "intlab/hirota.hpp"
#include "intlab/residual.hpp"
#include "intlab/sampling.hpp"

using namespace intlab;
using residual::FieldMap;
using residual::Registry;

namespace {

constexpr std::size_t kPoints = 30;
const Region kBox{-3.0, 3.0, 0.1, 1.0};

struct Check {
    std::string what;
    double metric = 0.0;
    double tol = 0.0;
    bool pass = false;
    bool informational = false;
};

struct Outcome {
    std::vector<Check> checks;
    std::vector<std::string> notes;

    // metric < tol
    void below(std::string what, double metric, double tol) {
        checks.push_back({std::move(what), metric, tol, std::isfinite(metric) && metric < tol, false});
    }
    // metric > tol
    void above(std::string what, double metric, double tol) {
        checks.push_back({std::move(what), metric, tol, std::isfinite(metric) && metric > tol, false});
    }
    void info(std::string what, double metric, double tol) {
        checks.push_back({std::move(what), metric, tol, metric < tol, true});
    }
    bool pass() const {
        for (const auto& c : checks)
            if (!c.informational && !c.pass) return false;
        return !checks.empty();
    }
};

double scan(const std::string& tag, const FieldMap& f, const Params& p, const Region& r = kBox,
            std::size_t n = kPoints) {
    auto eq = Registry::builtin().get(tag, p);
    return residual::scan(eq, f, p, r, n, 1.0).max_rel;
}

double bscan(const std::string& tag, const FieldMap& f, const Params& p, const Region& r = kBox) {
    const auto& eq = hirota::BilinearRegistry::builtin().get(tag);
    return hirota::bilinear_scan(eq, f, p, r, kPoints, 1.0).max_rel;
}

std::vector<Point> box_points(const Region& r, std::size_t n) {
    std::vector<Point> v;
    for (std::size_t i = 0; i < n; ++i) {
        auto h = halton(i + kHaltonOffset);
        v.push_back({r.x0 + (r.x1 - r.x0) * h.first, r.t0 + (r.t1 - r.t0) * h.second, 0.0});
    }
    return v;
}

std::vector<Point> line(double a, double b, int n) {
    std::vector<Point> v;
    for (int i = 0; i < n; ++i) v.push_back({a + (b - a) * i / (n - 1), 0.0, 0.0});
    return v;
}

double gap(const Field& f, const Field& g, const std::vector<Point>& pts) {
    double m = 0.0;
    for (const auto& p : pts) {
        if (f.near_locus(p) || g.near_locus(p)) continue;
        cplx a = f.value(p.x, p.t), b = g.value(p.x, p.t);
        m = std::max(m, std::abs(a - b) / (1.0 + std::abs(b)));
    }
    return m;
}

Field exp_of(const Field& v) {
    return Field("e^v", {}, [v](const Point& p, const Orders& o) { return exp(v.jet(p, o)); });
}

// u, e^v and g of two tuples; v is compared through e^v since log branches may differ by 2 pi i.
double tuple_gap(const catalog::Tuple& a, const catalog::Tuple& b, const std::vector<Point>& pts) {
    std::vector<Point> ok;
    for (const auto& p : pts)
        if (!a.u.near_locus(p) && !a.g.near_locus(p) && !b.u.near_locus(p) && !b.g.near_locus(p)) ok.push_back(p);
    return std::max({gap(a.u, b.u, ok), gap(exp_of(a.v), exp_of(b.v), ok), gap(a.g, b.g, ok)});
}

FieldMap tuple_map(const catalog::Tuple& t) { return {{"u", t.u}, {"u1", t.u1}, {"v", t.v}, {"g", t.g}}; }

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string num(double v) {
    char b[32];
    std::snprintf(b, sizeof b, "%.3g", v);
    return b;
}

const catalog::Catalog& cat() { return catalog::Catalog::builtin(); }

// ------------------------------------------------------------------ criteria

Outcome seed_chain() {
    Outcome o;
    auto t0 = std::chrono::steady_clock::now();
    auto s = catalog::seed_family(1.0, 0.3, -0.7);
    Params lam{{"lambda", 1.0}};
    double m = 0.0;
    m = std::max(m, scan("PKDV", {{"u", s.u}}, {}));
    m = std::max(m, scan("PKDV", {{"u", s.u1}}, {}));
    m = std::max(m, scan("KDV", {{"w", catalog::kdv_from_pkdv(s.u1)}}, {}));
    for (const char* tag : {"BT_X", "BT_T"}) m = std::max(m, scan(tag, tuple_map(s), lam));
    for (const auto& tag : Registry::builtin().expand("PROLONG")) m = std::max(m, scan(tag, tuple_map(s), lam));
    o.below("pKdV, KdV, BT and prolongation residuals of the seed tuple", m, 1e-10);
    o.below("runtime [s]", seconds_since(t0), 1.0);
    return o;
}

Outcome levi() {
    Outcome o;
    auto s = catalog::seed_family(1.0, 0.3, -0.7);
    for (double eps : {-1.0, 0.5, 2.0}) {
        auto l = catalog::levi_apply(s, eps);
        o.below("eps=" + num(eps) + ": pKdV residual of the transformed u", scan("PKDV", {{"u", l.u}}, {}), 1e-9);
        o.below("eps=" + num(eps) + ": KdV residual of the transformed omega",
                scan("KDV", {{"w", catalog::kdv_from_pkdv(l.u)}}, {}), 1e-9);
    }
    auto pts = box_points(kBox, kPoints);
    o.below("eps=0 reproduces the seed tuple", tuple_gap(catalog::levi_apply(s, 0.0), s, pts), 1e-14);
    o.below("composition eps=0.5 then -0.3 equals eps=0.2",
            tuple_gap(catalog::levi_apply(catalog::levi_apply(s, 0.5), -0.3), catalog::levi_apply(s, 0.2), pts),
            1e-9);
    return o;
}

Outcome nonlocal_symmetry() {
    Outcome o;
    auto s = catalog::seed_family(1.0, 0.3, -0.7);
    o.below("sigma = exp(v) solves the linearized pKdV",
            scan("SYM_PKDV", {{"sigma", residual::nonlocal_symmetry_sigma(s)}, {"u", s.u}}, {}), 1e-10);
    Field psi = cat().make("bilin.psi-one"), psi1 = cat().make("bilin.psi1-cosh");
    o.below("closed-form sigma_psi solves the bilinear symmetry equation",
            bscan("BILIN_SYM", {{"psi", psi}, {"sigma_psi", cat().make("bilin.sigma-psi")}}, {}), 1e-9);
    o.below("quadrature sigma_psi solves the bilinear symmetry equation",
            bscan("BILIN_SYM", {{"psi", psi}, {"sigma_psi", residual::bilinear_symmetry_sigma_psi(psi, psi1)}}, {},
                  {-1.5, 1.5, 0.1, 0.5}),
            1e-9);
    return o;
}

Outcome schwarzian() {
    Outcome o;
    auto s = catalog::seed_family(1.0, 0.3, -0.7);
    Params lam{{"lambda", 1.0}};
    o.below("seed g solves the Schwarzian KdV", scan("SKDV", {{"g", s.g}}, lam), 1e-9);
    for (double eps : {-1.0, 0.5, 2.0})
        o.below("transformed g, eps=" + num(eps) + ", solves the Schwarzian KdV",
                scan("SKDV", {{"g", catalog::levi_apply(s, eps).g}}, lam), 1e-9);
    o.above("negative control: opposite Schwarzian sign fails", scan("SKDV_REVERSED", {{"g", s.g}}, lam), 1e-3);
    return o;
}

Outcome bilinear() {
    Outcome o;
    Field one = cat().make("bilin.psi-one"), ch = cat().make("bilin.psi1-cosh");
    Params lam{{"lambda", 1.0}};
    o.below("psi=1, psi1=cosh: x-part", bscan("BILIN_BT_X", {{"psi", one}, {"psi1", ch}}, lam), 1e-11);
    o.below("psi=1, psi1=cosh: t-part", bscan("BILIN_BT_T", {{"psi", one}, {"psi1", ch}}, lam), 1e-11);
    Field lin = cat().make("bilin.psi-linear"), cst = cat().make("bilin.psi1-const");
    const Region pos{0.5, 2.0, 0.5, 1.0};
    Params l1{{"lambda1", 0.0}};
    o.below("psi=x+t, psi1=const: negative flow", bscan("BILIN_NEG_FLOW", {{"psi", lin}, {"psi1", cst}}, l1, pos),
            1e-11);
    o.below("psi=x+t, psi1=const: constraint",
            bscan("BILIN_NEG_CONSTRAINT", {{"psi", lin}, {"psi1", cst}}, l1, pos), 1e-11);
    // Exchange parity D(a.b) = (-1)^(m+n) D(b.a); odd orders annihilate a.a.
    std::mt19937 rng(20261016);
    std::uniform_real_distribution<double> U(-2.0, 2.0);
    Field a = expression_field("a", "sin(x + 2*t) + x^2*t", {});
    Field b = expression_field("b", "exp(x/3 - t) + cosh(x*t)", {});
    double par = 0.0, odd = 0.0;
    for (int k = 0; k < 30; ++k) {
        Point p{U(rng), U(rng) / 2};
        for (int i = 0; i <= 4; ++i)
            for (int j = 0; j <= 2; ++j) {
                cplx ab = hirota::hirota_D(i, j, a, b, p), ba = hirota::hirota_D(i, j, b, a, p);
                double sgn = (i + j) % 2 ? -1.0 : 1.0;
                par = std::max(par, std::abs(ab - sgn * ba) / (1.0 + std::abs(ab)));
                if ((i + j) % 2)
                    odd = std::max(odd, std::abs(hirota::hirota_D(i, j, a, a, p)) / (1.0 + std::abs(ab)));
            }
    }
    o.below("D-operator exchange parity at 30 random samples", par, 1e-11);
    o.below("odd-order D-operator annihilates a.a at 30 random samples", odd, 1e-11);
    return o;
}

Outcome chain() {
    Outcome o;
    auto r = hirota::second_hierarchy_chain_check(cat().make("bilin.psi-one"), cat().make("bilin.psi1-series"), 2,
                                                  box_points({-2, 2, -1, 1}, 10));
    for (int k = 0; k <= 2; ++k) o.below("psibar_" + std::to_string(k) + " link of the chain", r.max_rel[k], 1e-9);
    return o;
}

Outcome negative_flow() {
    Outcome o;
    Field u = cat().make("neg.u");
    const Region pos{0.5, 2.0, 0.5, 1.0};
    o.below("u = -2/(x+t) at lambda1 = 0", scan("NEG1", {{"u", u}}, {{"lambda1", 0.0}}, pos), 1e-10);
    auto eq = Registry::builtin().get("NEG1");
    double match = 0.0, worst = 0.0;
    for (const auto& p : box_points(pos, 20)) {
        auto r = residual::residual_at(eq, {{"u", u}}, {{"lambda1", 0.3}}, p);
        cplx want = -16.0 * 0.3 / std::pow(p.x + p.t, 4.0);
        match = std::max(match, std::abs(r.raw - want) / std::abs(want));
        worst = std::max(worst, r.rel);
    }
    o.above("negative control: lambda1 = 0.3 fails", worst, 1e-3);
    o.below("its raw residual equals -16 lambda1/(x+t)^4 (relative)", match, 1e-8);
    o.below("Liouville solution", scan("LIOUVILLE", {{"eta", cat().make("neg.liouville")}}, {}, pos), 1e-10);
    o.below("sine-Gordon solution", scan("SINE_GORDON", {{"eta", cat().make("neg.sine-gordon")}}, {}), 1e-10);
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> U(0.2, 1.5);
    double miura = 0.0;
    for (int k = 0; k < 20; ++k) {
        Params p{{"a", U(rng)}, {"b", U(rng)}, {"c", U(rng)}, {"d", U(rng)}};
        Field beta = expression_field("beta", "a + b*exp(c*x - d*t) + x^2*t/4", p);
        miura = std::max(miura, residual::miura_identity_check(beta, box_points({-1, 1, 0.1, 1}, 5)).max_abs);
    }
    o.below("Miura identity on 20 random beta", miura, 1e-12);
    return o;
}

Outcome point_symmetry() {
    Outcome o;
    auto s = catalog::seed_family(1.0, 0.3, -0.7);
    std::mt19937 rng(20261016);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    std::array<cplx, 7> c;
    for (auto& ci : c) ci = U(rng);
    auto ps = residual::point_symmetry_fields(s, c);
    FieldMap fm = tuple_map(s);
    fm["S"] = ps.sigma;
    fm["S1"] = ps.sigma1;
    fm["S2"] = ps.sigma2;
    fm["S3"] = ps.sigma3;
    double m = 0.0;
    for (const auto& tag : Registry::builtin().expand("LINEARIZED")) m = std::max(m, scan(tag, fm, {{"lambda", 1.0}}));
    o.below("seven linearized residuals with random c1..c7", m, 1e-8);
    // c4 alone gives -2 c4 times the nonlocal symmetry (e^v, 0, g, g^2/2).
    const cplx c4 = 0.7;
    auto p4 = residual::point_symmetry_fields(s, {0, 0, 0, c4, 0, 0, 0});
    double d = 0.0;
    for (const auto& p : box_points(kBox, kPoints)) {
        cplx v = s.v.value(p.x, p.t), g = s.g.value(p.x, p.t);
        cplx want[4] = {-2.0 * c4 * std::exp(v), 0.0, -2.0 * c4 * g, -c4 * g * g};
        cplx got[4] = {p4.sigma.value(p.x, p.t), p4.sigma1.value(p.x, p.t), p4.sigma2.value(p.x, p.t),
                       p4.sigma3.value(p.x, p.t)};
        for (int i = 0; i < 4; ++i) d = std::max(d, std::abs(got[i] - want[i]) / (1.0 + std::abs(want[i])));
    }
    o.below("c4-only symmetry equals -2 c4 (e^v, 0, g, g^2/2)", d, 1e-12);
    return o;
}

Outcome pii_pipeline() {
    Outcome o;
    auto pts = box_points(kBox, kPoints);
    o.below("rational alpha=1 reconstruction reproduces 2/(x-6t)^2 - 1",
            gap(cat().make("rational-omega1-pii"), cat().make("rational-omega1"), pts), 1e-9);
    auto xi = line(0.6, 3.0, 20);
    o.below("printed Bessel-form P equals the Airy-form P",
            gap(cat().make("pii.bessel-printed"), cat().make("pii.airy"), xi), 1e-8);
    o.info("corrected Bessel-form P (denominator 2 xi J_1/3) equals the Airy-form P",
           gap(cat().make("pii.bessel"), cat().make("pii.airy"), xi), 1e-8);
    const Region bessel{1.0, 3.0, 0.1, 1.0};
    o.below("Airy-based omega1 KdV residual", scan("KDV", {{"w", cat().make("bessel-omega1-pii")}}, {}, bessel), 1e-6);
    o.below("Bessel closed-form omega1 KdV residual", scan("KDV", {{"w", cat().make("bessel-omega1")}}, {}, bessel),
            1e-6);
    const Region uni{0.6, 3.0, 0.0, 0.0};
    double h = 0.0;
    for (const char* e : {"pii.rational-H", "pii.airy-H"}) {
        Params p = cat().merged(e, {});
        h = std::max(h, scan("REDUCED_H", {{"H", cat().make(e)}}, p, uni));
    }
    o.below("H map of the rational and Airy P solves the reduced H equation", h, 1e-7);
    o.info("as printed: rational omega2 KdV residual",
           scan("KDV", {{"w", cat().make("rational-omega2-printed")}}, {}), 1e-8);
    o.info("as printed: rational omega2 via the H-map formula, KdV residual",
           scan("KDV", {{"w", cat().make("rational-omega2-formula-printed")}}, {}), 1e-9);
    o.info("as printed: Bessel omega2 KdV residual",
           scan("KDV", {{"w", cat().make("bessel-omega2-printed")}}, {}, bessel), 1e-6);
    o.info("constructive Bessel omega2 KdV residual", scan("KDV", {{"w", cat().make("bessel-omega2")}}, {}, bessel),
           1e-6);
    o.notes.push_back("the printed Bessel form carries xi J_1/3 in its denominator; with 2 xi J_1/3 it agrees "
                      "with the Airy form, so the printed one is off by a factor near 2");
    return o;
}

Outcome elliptic_pipeline() {
    Outcome o;
    catalog::CnoidalParams p;
    std::vector<double> zs;
    for (int i = 0; i < 20; ++i) zs.push_back(-3.0 + 0.3 * i + 0.01);
    auto stated = flow::elliptic_W_check(p, p.a5(), p.a7_stated(), zs);
    auto consistent = flow::elliptic_W_check(p, p.a5(), p.a7_consistent(), zs);
    auto perturbed = flow::elliptic_W_check(p, 1.1 * p.a5(), p.a7_consistent(), zs);
    o.below("W satisfies the quartic under the stated constraints", stated.report.max_rel, 1e-9);
    o.info("W with a7 = a3^3 (n^2-1)/(32 n^2 a2^4)", consistent.report.max_rel, 1e-9);
    o.above("negative control: a5 perturbed by 10% fails", perturbed.report.max_rel, 1e-6);
    o.below("omega3 KdV residual", scan("KDV", {{"w", cat().make("cnoidal-omega3")}}, {}), 1e-8);
    Field printed = cat().make("cnoidal-omega4-printed"), rebuilt = cat().make("cnoidal-omega4");
    o.info("as printed: omega4 KdV residual", scan("KDV", {{"w", printed}}, {}), 1e-8);
    o.info("omega4 assembled from W and G, KdV residual", scan("KDV", {{"w", rebuilt}}, {}), 1e-8);
    auto terms = cat().term_fields("cnoidal-omega4-printed");
    auto pts = box_points(kBox, 10);
    for (std::size_t i = 0; i < terms.size(); ++i) {
        double mag = 0.0;
        for (const auto& q : pts) mag = std::max(mag, std::abs(terms[i].value(q.x, q.t)));
        o.notes.push_back("printed omega4 term " + std::to_string(i + 1) + " (" + terms[i].name() +
                          "): max |term| = " + num(mag));
    }
    o.notes.push_back("printed omega4 minus assembled omega4: max relative gap = " + num(gap(printed, rebuilt, pts)));
    o.notes.push_back("the stated a7 uses a3^2 where the quartic needs a3^3; the two agree only when a3 = 1");
    return o;
}

flow::FlowState soliton(double phi) {
    return {{1.0 / std::cosh(phi)}, {-std::tanh(phi) / std::cosh(phi)}, {-2.0}, {1.0}};
}

Outcome flows() {
    Outcome o;
    auto t0 = std::chrono::steady_clock::now();
    const double phi = 0.3;
    auto r = flow::reconstruct_and_check_kdv(soliton(phi), {});
    double m = 0.0;
    for (std::size_t it = 0; it < r.ts.size(); ++it)
        for (std::size_t ix = 0; ix < r.xs.size(); ++ix) {
            double sc = 1.0 / std::cosh(r.xs[ix] - 4 * r.ts[it] + phi);
            m = std::max(m, std::abs(r.omega[it][ix] + 2 * sc * sc));
        }
    o.below("N=1 reconstruction against -2 sech^2(x - 4t + phi)", m, 1e-6);
    o.below("N=1 finite-difference KdV residual (relative, 161x41 grid)", r.max_rel, 1e-4);
    o.below("runtime [s]", seconds_since(t0), 30.0);
    o.notes.push_back("absolute finite-difference residual " + num(r.max_abs));
    for (int n : {1, 2}) {
        std::mt19937 rng(100 + n);
        std::uniform_real_distribution<double> U(-0.5, 0.5);
        flow::FlowState st;
        for (int k = 0; k < n; ++k) {
            st.q.push_back(U(rng));
            st.p.push_back(U(rng));
            st.c.push_back(-1.0);
            st.lambda.push_back(1.0 + 1.3 * k);
        }
        o.below("F0/F1 cross-consistency, N=" + std::to_string(n), flow::cross_consistency(st, 0.3, 0.05).difference,
                1e-6);
    }
    flow::FlowState n2{{0.3, -0.2}, {0.1, 0.4}, {-1.0, -1.0}, {1.0, 2.3}};
    std::vector<double> res;
    for (auto [nx, nt] : {std::pair{81, 21}, {161, 41}, {321, 81}})
        res.push_back(flow::reconstruct_and_check_kdv(n2, {-4, 4, 0, 0.2, nx, nt}).max_abs);
    double r1 = std::log2(res[0] / res[1]), r2 = std::log2(res[1] / res[2]);
    o.above("FD convergence rate, 81x21 -> 161x41", r1, 3.5);
    o.above("FD convergence rate, 161x41 -> 321x81", r2, 3.5);
    return o;
}

Outcome lax() {
    Outcome o;
    Field u = cat().make("seed.u1", {{"lambda", 1.0}});
    auto r = flow::lax_cross_corner(u, 0.3, 0.1, 0.0, 0.5, 0.5, 0.2);
    o.below("x-then-t against t-then-x over a 0.5 x 0.5 box", r.singular ? INFINITY : r.difference, 1e-7);
    return o;
}

struct Criterion {
    int id;
    const char* label;
    Outcome (*run)();
};

}  // namespace

int main() {
    const Criterion criteria[] = {
        {1, "seed chain", seed_chain},
        {2, "finite transformation", levi},
        {3, "nonlocal and bilinear symmetry", nonlocal_symmetry},
        {4, "Schwarzian KdV", schwarzian},
        {5, "bilinear forms and D-operator", bilinear},
        {6, "second-hierarchy chain", chain},
        {7, "negative flow", negative_flow},
        {8, "point-symmetry system", point_symmetry},
        {9, "PII pipeline", pii_pipeline},
        {10, "elliptic pipeline", elliptic_pipeline},
        {11, "F0/F1 flows", flows},
        {12, "Lax compatibility", lax},
    };
    int red = 0;
    for (const auto& c : criteria) {
        Outcome o;
        std::string error;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            error = e.what();
        }
        bool pass = error.empty() && o.pass();
        red += !pass;
        std::printf("%s  %2d  %s\n", pass ? "PASS" : "FAIL", c.id, c.label);
        for (const auto& k : o.checks) {
            const char* tag = k.informational ? "info" : k.pass ? "ok  " : "RED ";
            std::printf("        %s %s: %s (tol %s)\n", tag, k.what.c_str(), num(k.metric).c_str(), num(k.tol).c_str());
        }
        for (const auto& n : o.notes) std::printf("        note %s\n", n.c_str());
        if (!error.empty()) std::printf("        error %s\n", error.c_str());
    }
    std::printf("%d of 12 criteria pass\n", 12 - red);
    return red == 0 ? 0 : 1;
}
