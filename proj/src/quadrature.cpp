#include "intlab/quadrature.hpp"

#include <cmath>
#include <queue>

namespace intlab::quad {

namespace {

// Kronrod abscissae on [0,1] of the symmetric 15-point rule; odd indices
// are the 7-point Gauss nodes.
constexpr double kX[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                          0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                          0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                          0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWK[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                           0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                           0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                           0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWG[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Piece {
    double s0, s1;
    std::vector<cplx> value;
    double error;
    bool operator<(const Piece& o) const { return error < o.error; }
};

double norm_inf(const std::vector<cplx>& v) {
    double m = 0;
    for (auto& z : v) m = std::max(m, std::abs(z));
    return m;
}

Piece rule(const VecFn& f, cplx a, cplx b, double s0, double s1, int& evals) {
    const cplx d = b - a;
    const double half = 0.5 * (s1 - s0), mid = 0.5 * (s0 + s1);
    auto at = [&](double s) { ++evals; return f(a + s * d); };
    std::vector<cplx> fc = at(mid);
    std::vector<cplx> k(fc.size()), g(fc.size());
    for (std::size_t m = 0; m < fc.size(); ++m) {
        k[m] = kWK[7] * fc[m];
        g[m] = kWG[3] * fc[m];
    }
    for (int i = 0; i < 7; ++i) {
        auto lo = at(mid - half * kX[i]);
        auto hi = at(mid + half * kX[i]);
        for (std::size_t m = 0; m < fc.size(); ++m) {
            k[m] += kWK[i] * (lo[m] + hi[m]);
            if (i % 2 == 1) g[m] += kWG[i / 2] * (lo[m] + hi[m]);
        }
    }
    double err = 0;
    for (std::size_t m = 0; m < fc.size(); ++m) {
        k[m] *= half * d;
        g[m] *= half * d;
        double d = std::abs(k[m] - g[m]);
        // std::max drops NaN, so a non-finite estimate is marked explicitly.
        err = std::isfinite(d) ? std::max(err, d) : INFINITY;
    }
    return Piece{s0, s1, std::move(k), err};
}

}  // namespace

Result gauss_kronrod(const VecFn& f, cplx a, cplx b, double rel_tol, double abs_tol, int max_intervals) {
    Result r;
    if (a == b) {
        r.value.assign(f(a).size(), 0.0);
        r.evaluations = 1;
        return r;
    }
    std::priority_queue<Piece> heap;
    heap.push(rule(f, a, b, 0.0, 1.0, r.evaluations));
    std::vector<cplx> total = heap.top().value;
    double err = heap.top().error;
    int intervals = 1;
    // A non-finite estimate fails every comparison; reject it before the loop test.
    while (!std::isfinite(err) || err > std::max(abs_tol, rel_tol * norm_inf(total))) {
        if (!std::isfinite(err)) throw ConvergenceError("quadrature integrand is not finite on the path");
        if (intervals >= max_intervals)
            throw ConvergenceError("quadrature did not converge (error " + std::to_string(err) + ")");
        Piece p = heap.top();
        heap.pop();
        double sm = 0.5 * (p.s0 + p.s1);
        Piece l = rule(f, a, b, p.s0, sm, r.evaluations), h = rule(f, a, b, sm, p.s1, r.evaluations);
        for (std::size_t m = 0; m < total.size(); ++m) total[m] += l.value[m] + h.value[m] - p.value[m];
        err += l.error + h.error - p.error;
        heap.push(std::move(l));
        heap.push(std::move(h));
        ++intervals;
    }
    // Re-sum to shed accumulated cancellation in the running total.
    std::fill(total.begin(), total.end(), cplx(0.0));
    err = 0;
    while (!heap.empty()) {
        for (std::size_t m = 0; m < total.size(); ++m) total[m] += heap.top().value[m];
        err += heap.top().error;
        heap.pop();
    }
    r.value = std::move(total);
    r.error = err;
    return r;
}

cplx gauss_kronrod(const std::function<cplx(cplx)>& f, cplx a, cplx b, double rel_tol, double abs_tol) {
    return gauss_kronrod([&](cplx z) { return std::vector<cplx>{f(z)}; }, a, b, rel_tol, abs_tol).value[0];
}

}  // namespace intlab::quad
