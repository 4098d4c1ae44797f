#include "intlab/flow.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <sstream>

namespace intlab::flow {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784, a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;
// Dense output weights.
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

State axpy(const State& y, double h, std::initializer_list<std::pair<double, const State*>> terms) {
    State r = y;
    for (std::size_t i = 0; i < r.size(); ++i) {
        cplx s = 0.0;
        for (const auto& [w, k] : terms) s += w * (*k)[i];
        r[i] += h * s;
    }
    return r;
}

double err_norm(const State& e, const State& y0, const State& y1, const Options& o) {
    double acc = 0.0;
    for (std::size_t i = 0; i < e.size(); ++i) {
        double sc = o.atol + o.rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
        double r = std::abs(e[i]) / sc;
        acc += r * r;
    }
    return std::sqrt(acc / double(std::max<std::size_t>(e.size(), 1)));
}

double max_abs(const State& y) {
    double m = 0.0;
    for (auto v : y) m = std::max(m, std::abs(v));
    return m;
}

bool finite(const State& y) {
    for (auto v : y)
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    return true;
}

double initial_step(const Rhs& f, double s0, const State& y0, const State& f0, double dir, double span,
                    const Options& o) {
    State zero(y0.size(), 0.0);
    double dn0 = err_norm(y0, zero, y0, o) , dn1 = err_norm(f0, zero, y0, o);
    double h = (dn0 < 1e-5 || dn1 < 1e-5) ? 1e-6 : 0.01 * dn0 / dn1;
    h = std::min(h, span);
    State y1 = axpy(y0, dir * h, {{1.0, &f0}}), f1(y0.size());
    f(s0 + dir * h, y1, f1);
    State df(y0.size());
    for (std::size_t i = 0; i < df.size(); ++i) df[i] = f1[i] - f0[i];
    double dn2 = err_norm(df, zero, y0, o) / h;
    double h1 = std::max(dn1, dn2) <= 1e-15 ? std::max(1e-6, h * 1e-3) : std::pow(0.01 / std::max(dn1, dn2), 0.2);
    return std::min({100 * h, h1, span});
}

}  // namespace

ODESolution integrate(const Rhs& f, double s0, const State& y0, double s1, const Options& opt) {
    ODESolution sol;
    sol.s_.push_back(s0);
    sol.y_.push_back(y0);
    if (s1 == s0) return sol;
    const std::size_t n = y0.size();
    const double dir = s1 > s0 ? 1.0 : -1.0, span = std::abs(s1 - s0);
    State k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n);
    State y = y0;
    double s = s0;
    f(s, y, k1);
    double h = initial_step(f, s0, y0, k1, dir, span, opt);
    constexpr double beta = 0.04, expo = 0.2 - beta * 0.75, safe = 0.9;
    double facold = 1e-4;
    bool last_rejected = false;
    for (long step = 0;; ++step) {
        if (step >= opt.max_steps) {
            sol.singular = true;
            sol.note = "step budget exhausted";
            break;
        }
        if (h < opt.h_min) {
            sol.singular = true;
            sol.note = "step size collapsed";
            break;
        }
        bool final_step = (std::abs(s1 - s) <= h * (1 + 1e-12));
        if (final_step) h = std::abs(s1 - s);
        double hs = dir * h;
        f(s + c2 * hs, axpy(y, hs, {{a21, &k1}}), k2);
        f(s + c3 * hs, axpy(y, hs, {{a31, &k1}, {a32, &k2}}), k3);
        f(s + c4 * hs, axpy(y, hs, {{a41, &k1}, {a42, &k2}, {a43, &k3}}), k4);
        f(s + c5 * hs, axpy(y, hs, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}), k5);
        f(s + hs, axpy(y, hs, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}), k6);
        State y1 = axpy(y, hs, {{a71, &k1}, {a73, &k3}, {a74, &k4}, {a75, &k5}, {a76, &k6}});
        f(s + hs, y1, k7);
        State e(n);
        for (std::size_t i = 0; i < n; ++i)
            e[i] = hs * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
        double err = finite(y1) && finite(k7) ? err_norm(e, y, y1, opt) : 1e300;
        double fac11 = std::pow(std::max(err, 1e-300), expo);
        if (err <= 1.0) {
            std::array<State, 5> rc;
            rc[0] = y;
            rc[1].resize(n), rc[2].resize(n), rc[3].resize(n), rc[4].resize(n);
            for (std::size_t i = 0; i < n; ++i) {
                rc[1][i] = y1[i] - y[i];
                rc[2][i] = hs * k1[i] - rc[1][i];
                rc[3][i] = rc[1][i] - hs * k7[i] - rc[2][i];
                rc[4][i] = hs * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] + d7 * k7[i]);
            }
            sol.cont_.push_back(std::move(rc));
            s = final_step ? s1 : s + hs;
            y = y1;
            k1 = k7;
            sol.s_.push_back(s);
            sol.y_.push_back(y);
            ++sol.accepted;
            if (max_abs(y) > opt.blowup) {
                sol.singular = true;
                sol.note = "solution exceeded blow-up bound";
                break;
            }
            if (final_step) break;
            double fac = fac11 / std::pow(facold, beta);
            fac = std::clamp(fac / safe, 0.1, 5.0);
            double hnew = h / fac;
            if (last_rejected) hnew = std::min(hnew, h);
            facold = std::max(err, 1e-4);
            h = hnew;
            last_rejected = false;
        } else {
            ++sol.rejected;
            h = h / std::min(5.0, fac11 / safe);
            last_rejected = true;
        }
    }
    return sol;
}

State ODESolution::at(double s) const {
    const double lo = std::min(s_.front(), s_.back()), hi = std::max(s_.front(), s_.back());
    const double slack = 1e-12 * std::max(1.0, std::abs(hi - lo));
    if (s < lo - slack || s > hi + slack) throw DomainError("dense output outside the integrated range");
    if (s_.size() == 1) return y_.front();
    const bool fwd = s_.back() > s_.front();
    auto it = fwd ? std::lower_bound(s_.begin(), s_.end(), s)
                  : std::lower_bound(s_.begin(), s_.end(), s, std::greater<double>());
    std::size_t j = std::clamp<std::size_t>(std::size_t(it - s_.begin()), 1, s_.size() - 1);
    const auto& rc = cont_[j - 1];
    double th = (s - s_[j - 1]) / (s_[j] - s_[j - 1]), th1 = 1.0 - th;
    State r(rc[0].size());
    for (std::size_t i = 0; i < r.size(); ++i)
        r[i] = rc[0][i] + th * (rc[1][i] + th1 * (rc[2][i] + th * (rc[3][i] + th1 * rc[4][i])));
    return r;
}

// ---------------------------------------------------------------- Riccati pair

ODESolution integrate_riccati_x(const Field& u, cplx lambda, double t, double x0, cplx u1_0, double x1,
                                const Options& opt) {
    Rhs f = [&](double x, const State& y, State& dy) {
        Jet j = u.jet({x, t, 0.0}, {1, 0, 0});
        cplx d = j.value() - y[0];
        dy[0] = -j.coeff(1, 0) - 2.0 * lambda + d * d / 2.0;
    };
    return integrate(f, x0, {u1_0}, x1, opt);
}

ODESolution integrate_riccati_t(const Field& u, cplx lambda, double x, double t0, cplx u1_0, double t1,
                                const Options& opt) {
    Rhs f = [&](double t, const State& y, State& dy) {
        Jet j = u.jet({x, t, 0.0}, {2, 1, 0});
        cplx U = j.value(), Ux = j.coeff(1, 0), Uxx = 2.0 * j.coeff(2, 0), Ut = j.coeff(0, 1);
        cplx d = U - y[0];
        cplx u1x = -Ux - 2.0 * lambda + d * d / 2.0;
        cplx u1xx = -Uxx + d * (Ux - u1x);
        dy[0] = -Ut + 2.0 * Ux * Ux + 2.0 * u1x * u1x + 2.0 * Ux * u1x - d * (Uxx - u1xx);
    };
    return integrate(f, t0, {u1_0}, t1, opt);
}

CornerReport lax_cross_corner(const Field& u, cplx lambda, double x0, double t0, double dx, double dt, cplx u1_0,
                              const Options& opt) {
    CornerReport r;
    auto a = integrate_riccati_x(u, lambda, t0, x0, u1_0, x0 + dx, opt);
    auto b = integrate_riccati_t(u, lambda, x0, t0, u1_0, t0 + dt, opt);
    r.singular = a.singular || b.singular;
    if (r.singular) return r;
    auto a2 = integrate_riccati_t(u, lambda, x0 + dx, t0, a.values().back()[0], t0 + dt, opt);
    auto b2 = integrate_riccati_x(u, lambda, t0 + dt, x0, b.values().back()[0], x0 + dx, opt);
    r.singular = a2.singular || b2.singular;
    r.via_x_then_t = a2.values().back()[0];
    r.via_t_then_x = b2.values().back()[0];
    r.difference = std::abs(r.via_x_then_t - r.via_t_then_x);
    return r;
}

// ---------------------------------------------------------------- F0 / F1

void FlowState::validate() const {
    if (q.empty()) throw UsageError("flow state needs N >= 1");
    if (p.size() != q.size() || c.size() != q.size() || lambda.size() != q.size())
        throw UsageError("flow state arrays q, p, c, lambda must have equal length");
}

State pack(const FlowState& s) {
    s.validate();
    State y(s.q);
    y.insert(y.end(), s.p.begin(), s.p.end());
    return y;
}

FlowState unpack(const FlowState& shape, const State& y) {
    FlowState s = shape;
    const std::size_t n = shape.size();
    std::copy(y.begin(), y.begin() + n, s.q.begin());
    std::copy(y.begin() + n, y.begin() + 2 * n, s.p.begin());
    return s;
}

cplx omega_of(const FlowState& shape, const State& y) {
    cplx w = 0.0;
    for (std::size_t m = 0; m < shape.size(); ++m) w += shape.c[m] * y[m] * y[m];
    return w;
}

namespace {

Rhs f0_rhs(const FlowState& s) {
    return [c = s.c, l = s.lambda](double, const State& y, State& dy) {
        const std::size_t n = c.size();
        cplx w = 0.0;
        for (std::size_t m = 0; m < n; ++m) w += c[m] * y[m] * y[m];
        for (std::size_t m = 0; m < n; ++m) {
            dy[m] = y[n + m];
            dy[n + m] = (w + l[m]) * y[m];
        }
    };
}

Rhs f1_rhs(const FlowState& s) {
    return [c = s.c, l = s.lambda](double, const State& y, State& dy) {
        const std::size_t n = c.size();
        cplx Sq = 0.0, Spq = 0.0, Spp = 0.0, Slq = 0.0;
        for (std::size_t m = 0; m < n; ++m) {
            cplx q = y[m], p = y[n + m];
            Sq += c[m] * q * q;
            Spq += c[m] * p * q;
            Spp += c[m] * p * p;
            Slq += c[m] * l[m] * q * q;
        }
        for (std::size_t m = 0; m < n; ++m) {
            cplx q = y[m], p = y[n + m], L = l[m];
            dy[m] = -2.0 * Spq * q + 2.0 * Sq * p - 4.0 * L * p;
            dy[n + m] = 2.0 * Spq * p - 2.0 * Spp * q - 4.0 * L * L * q - 2.0 * L * Sq * q - 2.0 * Slq * q;
        }
    };
}

}  // namespace

ODESolution integrate_F0(const FlowState& s, double x0, double x1, const Options& opt) {
    return integrate(f0_rhs(s), x0, pack(s), x1, opt);
}

ODESolution integrate_F1(const FlowState& s, double t0, double t1, const Options& opt) {
    return integrate(f1_rhs(s), t0, pack(s), t1, opt);
}

namespace {

std::vector<double> linspace(double a, double b, int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = n == 1 ? a : a + (b - a) * i / (n - 1);
    return v;
}

}  // namespace

ReconReport reconstruct_and_check_kdv(const FlowState& data, const GridSpec& g, const Options& opt) {
    data.validate();
    if (g.nx < 7 || g.nt < 5) throw UsageError("grid needs at least 7 x-nodes and 5 t-nodes");
    if (g.x0 > 0 || g.x1 < 0) throw UsageError("x-grid must contain the data line x = 0");
    ReconReport r;
    r.grid = g;
    r.xs = linspace(g.x0, g.x1, g.nx);
    r.ts = linspace(g.t0, g.t1, g.nt);
    auto tsol = integrate_F1(data, g.t0, g.t1, opt);
    if (tsol.singular) {
        r.singular = true;
        return r;
    }
    r.omega.assign(g.nt, std::vector<cplx>(g.nx));
    std::vector<std::future<bool>> jobs;
    for (int it = 0; it < g.nt; ++it) {
        jobs.push_back(std::async(std::launch::async, [&, it] {
            FlowState s = unpack(data, tsol.at(r.ts[it]));
            auto right = integrate_F0(s, 0.0, g.x1, opt);
            auto left = integrate_F0(s, 0.0, g.x0, opt);
            if (right.singular || left.singular) return false;
            for (int ix = 0; ix < g.nx; ++ix) {
                double x = r.xs[ix];
                r.omega[it][ix] = omega_of(data, x >= 0 ? right.at(x) : left.at(x));
            }
            return true;
        }));
    }
    for (auto& j : jobs) r.singular = !j.get() || r.singular;
    if (r.singular) return r;
    const double hx = r.xs[1] - r.xs[0], ht = r.ts[1] - r.ts[0];
    const auto& w = r.omega;
    for (int it = 2; it + 2 < g.nt; ++it)
        for (int ix = 3; ix + 3 < g.nx; ++ix) {
            cplx wt = (w[it - 2][ix] - 8.0 * w[it - 1][ix] + 8.0 * w[it + 1][ix] - w[it + 2][ix]) / (12 * ht);
            const auto& row = w[it];
            cplx wx = (row[ix - 2] - 8.0 * row[ix - 1] + 8.0 * row[ix + 1] - row[ix + 2]) / (12 * hx);
            cplx wxxx = (row[ix - 3] - 8.0 * row[ix - 2] + 13.0 * row[ix - 1] - 13.0 * row[ix + 1] +
                         8.0 * row[ix + 2] - row[ix + 3]) /
                        (8 * hx * hx * hx);
            cplx nl = 6.0 * row[ix] * wx;
            cplx res = wt + wxxx - nl;
            r.max_abs = std::max(r.max_abs, std::abs(res));
            r.max_rel = std::max(r.max_rel, residual::relative(res, {wt, wxxx, nl}));
        }
    return r;
}

std::string grid_csv(const ReconReport& r) {
    std::ostringstream os;
    os.precision(17);
    os << "x,t,omega_re,omega_im\r\n";
    for (std::size_t it = 0; it < r.omega.size(); ++it)
        for (std::size_t ix = 0; ix < r.xs.size(); ++ix)
            os << r.xs[ix] << ',' << r.ts[it] << ',' << r.omega[it][ix].real() << ',' << r.omega[it][ix].imag()
               << "\r\n";
    return os.str();
}

std::string trajectory_csv(const ODESolution& sol, const FlowState& shape, const std::vector<double>& at,
                           const std::string& var) {
    std::ostringstream os;
    os.precision(17);
    const std::size_t n = shape.size();
    os << var;
    for (std::size_t m = 0; m < n; ++m) os << ",q" << m + 1 << "_re,q" << m + 1 << "_im";
    for (std::size_t m = 0; m < n; ++m) os << ",p" << m + 1 << "_re,p" << m + 1 << "_im";
    os << ",omega_re,omega_im\r\n";
    for (double s : at) {
        State y = sol.at(s);
        os << s;
        for (auto v : y) os << ',' << v.real() << ',' << v.imag();
        cplx w = omega_of(shape, y);
        os << ',' << w.real() << ',' << w.imag() << "\r\n";
    }
    return os.str();
}

CommuteReport cross_consistency(const FlowState& s, double dx, double dt, const Options& opt) {
    auto a = integrate_F0(s, 0.0, dx, opt);
    auto a2 = integrate_F1(unpack(s, a.values().back()), 0.0, dt, opt);
    auto b = integrate_F1(s, 0.0, dt, opt);
    auto b2 = integrate_F0(unpack(s, b.values().back()), 0.0, dx, opt);
    if (a.singular || a2.singular || b.singular || b2.singular)
        throw DomainError("flow hit a movable singularity inside the box");
    CommuteReport r;
    const State &ya = a2.values().back(), &yb = b2.values().back();
    for (std::size_t i = 0; i < ya.size(); ++i) r.difference = std::max(r.difference, std::abs(ya[i] - yb[i]));
    return r;
}

// ---------------------------------------------------------------- PII and reductions

PiiSolution integrate_PII(double alpha, cplx P0, cplx dP0, double xi0, double xi1, const Options& opt) {
    Rhs f = [alpha](double xi, const State& y, State& dy) {
        dy[0] = y[1];
        dy[1] = 2.0 * y[0] * y[0] * y[0] + xi * y[0] + alpha;
    };
    PiiSolution r;
    r.alpha = alpha;
    r.sol = integrate(f, xi0, {P0, dP0}, xi1, opt);
    if (r.sol.singular) {
        r.pole = true;
        const State& y = r.sol.values().back();
        // Near a simple pole P ~ +-1/(xi - xi*), so xi* = xi + P/P'.
        r.pole_estimate = r.sol.end() + (y[0] / y[1]).real();
    }
    return r;
}

Series pii_series(cplx alpha, cplx xi0, cplx P0, cplx dP0, int order) {
    std::vector<cplx> c(std::max(order, 1) + 1, 0.0);
    c[0] = P0;
    c[1] = dP0;
    for (int k = 0; k + 2 <= order; ++k) {
        cplx cube = 0.0;
        for (int i = 0; i <= k; ++i)
            for (int j = 0; i + j <= k; ++j) cube += c[i] * c[j] * c[k - i - j];
        cplx rhs = 2.0 * cube + xi0 * c[k] + (k >= 1 ? c[k - 1] : 0.0) + (k == 0 ? alpha : 0.0);
        c[k + 2] = rhs / double((k + 1) * (k + 2));
    }
    c.resize(order + 1);
    return Series::from(c);
}

Field pii_field(const PiiSolution& s, const std::string& name) {
    auto sol = std::make_shared<ODESolution>(s.sol);
    double alpha = s.alpha;
    return Field(name, {{"alpha", alpha}}, [sol, alpha](const Point& p, const Orders& o) {
        if (std::abs(p.x.imag()) > 1e-12) throw DomainError("trajectory field is real-line only");
        State y = sol->at(p.x.real());
        return Jet::univariate(pii_series(alpha, p.x, y[0], y[1], o.x), Axis::x, p, o);
    });
}

HMapReport integrate_H_and_map(const Field& P, cplx a4, cplx a7, double xi0, double xi1, int count,
                               const Field* G_closed) {
    if (count < 2) throw UsageError("need at least two sample points");
    Field H = catalog::pii_H(P, a7);
    auto eq = residual::Registry::builtin().get("REDUCED_H");
    Params prm{{"a4", a4}, {"a7", a7}};
    std::vector<Point> pts;
    for (double xi : linspace(xi0, xi1, count)) pts.push_back({xi, 0.0, 0.0});
    auto rep = residual::check_points(eq, {{"H", H}}, prm, pts, 1.0);
    HMapReport r;
    r.reduced_h_max_rel = rep.max_rel;
    r.points = rep.points.size();
    Field G = G_closed ? quadrature_G(P, xi0, xi1, xi0) : Field();
    for (const auto& pt : rep.points) {
        Jet h = H.jet(pt.point, {2, 0, 0});
        cplx Hv = h.value(), Hx = h.coeff(1, 0);
        if (std::abs(Hv) < kSingEps) throw SingularPoint("H vanishes", pt.point.x, 0.0);
        cplx U1 = a7 * Hx * Hx / Hv - 4.0 * a7 * a7 * Hv * Hv + 2.0 * a7 * pt.point.x * Hv -
                  pt.point.x * pt.point.x / 4.0 - a4 * a4 / (16.0 * a7 * Hv);
        cplx U = U1 - Hx / Hv;
        r.u_minus_u1_max = std::max(r.u_minus_u1_max, std::abs((U - U1) + Hx / Hv));
        if (G_closed) {
            cplx ref = G_closed->value(pt.point.x) - G_closed->value(xi0);
            r.g_quadrature_max = std::max(r.g_quadrature_max, std::abs(G.value(pt.point.x) - ref));
        }
    }
    return r;
}

WCheck elliptic_W_check(const catalog::CnoidalParams& p, cplx a5, cplx a7, const std::vector<double>& zs,
                        double tolerance) {
    double n = p.n.real();
    if (std::abs(p.n.imag()) > 0 || !(n > 0 && n < 1)) throw DomainError("modulus must lie in (0,1)");
    Params prm{{"a2", p.a2}, {"a3", p.a3}, {"n", p.n}};
    Field W = catalog::Catalog::builtin().make("cnoidal.W", prm);
    prm["a5"] = a5;
    prm["a7"] = a7;
    std::vector<Point> pts;
    for (double z : zs) pts.push_back({z, 0.0, 0.0});
    auto eq = residual::Registry::builtin().get("ELLIPTIC_W");
    WCheck r{residual::check_points(eq, {{"W", W}}, prm, pts, tolerance), a5, a7};
    return r;
}

Field quadrature_G(const Field& P, double a, double b, double anchor) {
    const double lo = std::min({a, b, anchor}), hi = std::max({a, b, anchor});
    constexpr int kScan = 400;
    cplx prev = 0.0;
    for (int i = 0; i <= kScan; ++i) {
        double xi = lo + (hi - lo) * i / kScan;
        Jet j = P.jet({xi, 0.0, 0.0}, {1, 0, 0});
        cplx F = 2.0 * j.coeff(1, 0) + 2.0 * j.value() * j.value() + xi;
        bool sign_change = i > 0 && std::abs(F.imag()) < 1e-12 && std::abs(prev.imag()) < 1e-12 &&
                           F.real() * prev.real() < 0;
        if (std::abs(F) < kSingEps || sign_change)
            throw SingularPoint("integrand 1/(2P' + 2P^2 + xi) has a pole near xi = " + format_complex(xi), xi,
                                0.0);
        prev = F;
    }
    return catalog::pii_G_quadrature(P, anchor);
}

}  // namespace intlab::flow
