#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "intlab/catalog.hpp"
#include "intlab/field.hpp"
#include "intlab/residual.hpp"

namespace intlab::flow {

using State = std::vector<cplx>;
using Rhs = std::function<void(double s, const State& y, State& dy)>;

struct Options {
    double rtol = 1e-10;
    double atol = 1e-12;
    double h_min = 1e-10;    // step collapse below this marks a movable singularity
    double blowup = 1e12;    // |y| above this marks a movable singularity
    long max_steps = 200000;
};

class ODESolution;
ODESolution integrate(const Rhs& f, double s0, const State& y0, double s1, const Options& opt = {});

// Dormand-Prince 5(4) trajectory with continuous output.
class ODESolution {
public:
    double start() const { return s_.front(); }
    double end() const { return s_.back(); }
    State at(double s) const;  // dense output; s must lie in the integrated range
    const std::vector<double>& nodes() const { return s_; }
    const std::vector<State>& values() const { return y_; }

    bool singular = false;      // integration stopped at a movable singularity
    std::string note;
    long accepted = 0, rejected = 0;

private:
    friend ODESolution integrate(const Rhs&, double, const State&, double, const Options&);
    std::vector<double> s_;
    std::vector<State> y_;
    std::vector<std::array<State, 5>> cont_;  // per-step interpolation coefficients
};

// ---------------------------------------------------------------- Riccati pair

// u1 along x at fixed t from the x-part of the nonlinear Lax pair.
ODESolution integrate_riccati_x(const Field& u, cplx lambda, double t, double x0, cplx u1_0, double x1,
                                const Options& opt = {});
// u1 along t at fixed x; u1_x and u1_xx are eliminated through the x-part.
ODESolution integrate_riccati_t(const Field& u, cplx lambda, double x, double t0, cplx u1_0, double t1,
                                const Options& opt = {});

struct CornerReport {
    cplx via_x_then_t, via_t_then_x;
    double difference = 0.0;
    bool singular = false;
};
CornerReport lax_cross_corner(const Field& u, cplx lambda, double x0, double t0, double dx, double dt, cplx u1_0,
                              const Options& opt = {});

// ---------------------------------------------------------------- F0 / F1

struct FlowState {
    std::vector<cplx> q, p, c, lambda;
    std::size_t size() const { return q.size(); }
    void validate() const;
};

State pack(const FlowState& s);
FlowState unpack(const FlowState& shape, const State& y);

ODESolution integrate_F0(const FlowState& s, double x0, double x1, const Options& opt = {});
ODESolution integrate_F1(const FlowState& s, double t0, double t1, const Options& opt = {});

// omega = sum c_m q_m^2.
cplx omega_of(const FlowState& shape, const State& y);

struct GridSpec {
    double x0 = -4, x1 = 4, t0 = 0, t1 = 0.2;
    int nx = 161, nt = 41;
};

struct ReconReport {
    GridSpec grid;
    std::vector<double> xs, ts;
    std::vector<std::vector<cplx>> omega;  // [it][ix]
    double max_abs = 0.0;                  // interior FD KdV residual
    double max_rel = 0.0;
    bool singular = false;
};

// Data are given at x = 0; F1 carries them in t, F0 fans out in x.
ReconReport reconstruct_and_check_kdv(const FlowState& data, const GridSpec& g, const Options& opt = {});
std::string grid_csv(const ReconReport& r);
std::string trajectory_csv(const ODESolution& sol, const FlowState& shape, const std::vector<double>& at,
                           const std::string& var);

struct CommuteReport {
    double difference = 0.0;
};
// F0 over dx then F1 over dt, against the opposite order.
CommuteReport cross_consistency(const FlowState& s, double dx, double dt, const Options& opt = {});

// ---------------------------------------------------------------- PII and reductions

struct PiiSolution {
    ODESolution sol;
    double alpha = 0.0;
    bool pole = false;
    double pole_estimate = 0.0;  // xi + P/P' at the last accepted node
};

PiiSolution integrate_PII(double alpha, cplx P0, cplx dP0, double xi0, double xi1, const Options& opt = {});

// Taylor series of a PII solution from (P, P') at xi0 by the ODE recurrence.
Series pii_series(cplx alpha, cplx xi0, cplx P0, cplx dP0, int order);

// Univariate field backed by a PII trajectory.
Field pii_field(const PiiSolution& s, const std::string& name = "P");

struct HMapReport {
    double reduced_h_max_rel = 0.0;     // H of the P-map against the reduced ODE
    double u_minus_u1_max = 0.0;        // |(U - U1) + H'/H|
    double g_quadrature_max = 0.0;      // quadrature G' = 1/(4 a7 H) against closed form, when given
    std::size_t points = 0;
};

HMapReport integrate_H_and_map(const Field& P, cplx a4, cplx a7, double xi0, double xi1, int count,
                               const Field* G_closed = nullptr);

struct WCheck {
    residual::Report report;
    cplx a5, a7;
};
// W of the cnoidal ansatz against the quartic reduction with the given constraint values.
WCheck elliptic_W_check(const catalog::CnoidalParams& p, cplx a5, cplx a7, const std::vector<double>& zs,
                        double tolerance = 1e-9);

// G(xi) = integral 1/(2P' + 2P^2 + xi) with G(anchor) = 0; rejects an
// interval on which the integrand has a pole.
Field quadrature_G(const Field& P, double a, double b, double anchor);

}  // namespace intlab::flow
