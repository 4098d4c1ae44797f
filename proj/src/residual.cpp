#include "intlab/residual.hpp"

#include "intlab/quadrature.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <sstream>

namespace intlab::residual {

namespace {

std::string canonical_tag(std::string tag) {
    for (auto& ch : tag) ch = ch == '-' ? '_' : char(std::toupper(static_cast<unsigned char>(ch)));
    return tag;
}

struct Spec {
    const char* tag;
    const char* text;
    std::vector<std::string> roles;
    const char* about;
};

const std::vector<Spec>& specs() {
    static const std::vector<Spec> s = {
        {"KDV", "w_t + w_xxx - 6*w*w_x", {"w"}, "KdV equation"},
        {"PKDV", "u_t + u_xxx - 3*u_x^2", {"u"}, "potential KdV equation"},
        {"BT_X", "u_x + u1_x + 2*lambda - (u - u1)^2/2", {"u", "u1"}, "Baecklund transformation, x-part"},
        {"BT_T", "u_t + u1_t - 2*u_x^2 - 2*u1_x^2 - 2*u_x*u1_x + (u - u1)*(u_xx - u1_xx)", {"u", "u1"},
         "Baecklund transformation, t-part"},
        {"LAX_X", "u1_x - (-u_x - 2*lambda + (u - u1)^2/2)", {"u", "u1"}, "nonlinear Lax pair, x-flow of u1"},
        {"LAX_T", "u1_t - (-u_t + 2*u_x^2 + 2*u1_x^2 + 2*u_x*u1_x - (u - u1)*(u_xx - u1_xx))", {"u", "u1"},
         "nonlinear Lax pair, t-flow of u1"},
        {"SYM_PKDV", "sigma_t + sigma_xxx - 6*u_x*sigma_x", {"sigma", "u"}, "linearized pKdV (symmetry equation)"},
        {"PROLONG.1", "v_x - (u - u1)", {"u", "u1", "v"}, "prolongation, v_x"},
        {"PROLONG.2", "v_t - 2*(u - u1)*(u_x - 2*lambda) + 2*u_xx", {"u", "u1", "v"}, "prolongation, v_t"},
        {"PROLONG.3", "g_x - exp(v)", {"v", "g"}, "prolongation, g_x"},
        {"PROLONG.4", "g_t + exp(v)*(2*u_x + 8*lambda - (u - u1)^2)", {"u", "u1", "v", "g"}, "prolongation, g_t"},
        {"SKDV", "g_t + g_xxx - 3*g_xx^2/(2*g_x) + 6*lambda*g_x", {"g"}, "Schwarzian KdV"},
        {"SKDV_REVERSED", "g_t - g_xxx + 3*g_xx^2/(2*g_x) - 6*lambda*g_x", {"g"},
         "Schwarzian KdV with the opposite sign of the Schwarzian term"},
        {"NEG1", "2*u_xxt*u_t - 4*u_x*u_t^2 - u_xt^2 - 4*lambda1*u_t^2", {"u"}, "first negative pKdV flow"},
        {"BETA_FORM",
         "beta_x + beta_xxt/(2*beta) - beta_xx*beta_t/(2*beta^2) - beta_x*beta_xt/(2*beta^2) + "
         "beta_x^2*beta_t/(2*beta^3)",
         {"beta"}, "negative flow in beta = -u_t"},
        {"BETA_INT", "beta_xt - beta_x*beta_t/beta + beta^2 - beta0", {"beta"}, "negative flow integrated once in x"},
        {"SINE_GORDON", "eta_xt - sin(eta)", {"eta"}, "sine-Gordon"},
        {"LIOUVILLE", "eta_xt - exp(eta)", {"eta"}, "Liouville"},
        {"LINEARIZED.1", "S_t + S_xxx - 6*u_x*S_x", {"S", "u"}, "linearized pKdV"},
        {"LINEARIZED.2", "S1_x + S_x - (S - S1)*(u - u1)", {"S", "S1", "u", "u1"}, "linearized BT, x-part"},
        {"LINEARIZED.3",
         "S1_t - S_xxx + 2*(u - u1)*S_xx + 2*(S - S1)*u_xx - (4*lambda + (u - u1)^2 - 2*u_x)*S_x + "
         "2*(S - S1)*(u - u1)*(2*lambda - u_x)",
         {"S", "S1", "u", "u1"}, "linearized BT, t-part"},
        {"LINEARIZED.4", "S2_x - S + S1", {"S", "S1", "S2"}, "linearized prolongation, v_x"},
        {"LINEARIZED.5", "S2_t + 2*S_xx + 2*(u1 - u)*S_x + 2*(S1 - S)*(u_x - 2*lambda)", {"S", "S1", "S2", "u", "u1"},
         "linearized prolongation, v_t"},
        {"LINEARIZED.6", "S3_x - exp(v)*S2", {"S2", "S3", "v"}, "linearized prolongation, g_x"},
        {"LINEARIZED.7",
         "S3_t + 2*exp(v)*(S_x + (u1 - u)*(S - S1) - (u - u1)^2/2*S2 + (4*lambda + u_x)*S2)",
         {"S", "S1", "S2", "S3", "u", "u1", "v"}, "linearized prolongation, g_t"},
        {"REDUCED_H", "H_xx - H_x^2/(2*H) - 4*a7*H^2 + x*H + a4^2/(32*a7^2*H)", {"H"},
         "reduced ODE for H(xi), xi written as x"},
        {"PII", "P_xx - 2*P^3 - x*P - alpha", {"P"}, "second Painleve equation, xi written as x"},
        {"ELLIPTIC_W", "W_x^2 - a2^2*W^4 - a3*W^3 + a5*W^2 - a7*W", {"W"},
         "quartic reduction for W(z), z written as x"},
    };
    return s;
}

}  // namespace

Equation make_equation(const std::string& tag, const std::string& text, const std::vector<std::string>& roles,
                       const std::string& about) {
    Equation eq;
    eq.tag = tag;
    eq.about = about;
    eq.roles = roles;
    eq.expression = expr::parse(text);
    eq.terms = expr::terms(eq.expression);
    eq.orders = expr::derivative_markers(eq.expression);
    std::set<std::string> role_set(roles.begin(), roles.end());
    for (const auto& [f, o] : eq.orders)
        if (!role_set.count(f)) throw UsageError(tag + ": derivative of undeclared field '" + f + "'");
    for (const auto& r : roles) eq.orders.emplace(r, std::pair{0, 0});
    for (const auto& s : expr::free_symbols(eq.expression))
        if (!role_set.count(s) && s != "x" && s != "t") eq.params.push_back(s);
    return eq;
}

const Registry& Registry::builtin() {
    static const Registry r = [] {
        Registry reg;
        for (const auto& s : specs()) {
            reg.index_[s.tag] = reg.eqs_.size();
            reg.eqs_.push_back(make_equation(s.tag, s.text, s.roles, s.about));
            std::string t = s.tag;
            auto dot = t.find('.');
            if (dot != std::string::npos) reg.groups_[t.substr(0, dot)].push_back(t);
        }
        return reg;
    }();
    return r;
}

bool Registry::contains(const std::string& tag) const {
    auto c = canonical_tag(tag);
    return index_.count(c) || groups_.count(c);
}

Equation Registry::get(const std::string& tag, const Params& params) const {
    if (tag.rfind("expr:", 0) == 0) {
        auto e = expr::parse(tag.substr(5));
        std::vector<std::string> roles;
        for (const auto& [f, o] : expr::derivative_markers(e)) roles.push_back(f);
        for (const auto& s : expr::free_symbols(e))
            if (!params.count(s) && s != "x" && s != "t" && std::find(roles.begin(), roles.end(), s) == roles.end())
                roles.push_back(s);
        return make_equation(tag, tag.substr(5), roles, "custom residual");
    }
    auto it = index_.find(canonical_tag(tag));
    if (it == index_.end()) throw UsageError("unknown equation tag '" + tag + "'");
    return eqs_[it->second];
}

std::vector<std::string> Registry::expand(const std::string& tag) const {
    auto c = canonical_tag(tag);
    auto g = groups_.find(c);
    if (g != groups_.end()) return g->second;
    get(tag);
    return {tag.rfind("expr:", 0) == 0 ? tag : c};
}

std::vector<std::string> Registry::tags() const {
    std::vector<std::string> out;
    for (const auto& e : eqs_) out.push_back(e.tag);
    return out;
}

// ---------------------------------------------------------------- evaluation

double relative(cplx raw, const std::vector<cplx>& terms) {
    double scale = 1.0;
    for (const auto& t : terms) scale += std::abs(t);
    return std::abs(raw) / scale;
}

Residual residual_at(const Equation& eq, const FieldMap& fields, const Params& params, const Point& p) {
    std::map<std::string, Jet> jets;
    for (const auto& r : eq.roles) {
        auto it = fields.find(r);
        if (it == fields.end()) throw UsageError(eq.tag + ": missing field for role '" + r + "'");
        if (it->second.near_locus(p, 0.0))
            throw SingularPoint(eq.tag + ": point on a singular locus of " + it->second.name(), p.x, p.t);
        auto [nx, nt] = eq.orders.at(r);
        jets.emplace(r, it->second.jet(p, Orders{nx, nt, 0}));
    }
    expr::Bindings b;
    for (const auto& k : eq.params) {
        auto it = params.find(k);
        if (it == params.end()) throw UsageError(eq.tag + ": missing parameter '" + k + "'");
        b.values[k] = it->second;
    }
    b.values["x"] = p.x;
    b.values["t"] = p.t;
    for (const auto& [r, j] : jets) b.values[r] = j.value();
    b.derivative = [&jets](const std::string& f, int nx, int nt) { return jets.at(f).derivative(nx, nt); };

    Residual out;
    for (const auto& t : eq.terms) {
        out.term_values.push_back(expr::evaluate(t, b));
        out.raw += out.term_values.back();
    }
    out.rel = relative(out.raw, out.term_values);
    return out;
}

bool admissible(const FieldMap& fields, const Point& p, double margin) {
    for (const auto& [r, f] : fields)
        if (f.near_locus(p, margin)) return false;
    return true;
}

void Report::finish() {
    max_rel = 0.0;
    bool finite = !points.empty();
    for (const auto& pr : points) {
        if (!std::isfinite(pr.rel)) finite = false;
        else max_rel = std::max(max_rel, pr.rel);
    }
    if (!finite && !points.empty()) max_rel = std::numeric_limits<double>::infinity();
    pass = finite && max_rel < tolerance;
}

namespace {

nlohmann::ordered_json complex_json(cplx z) {
    if (z.imag() == 0.0) return z.real();
    return nlohmann::ordered_json{{"re", z.real()}, {"im", z.imag()}};
}

Report base_report(const Equation& eq, const FieldMap& fields, const Params& params, double tol) {
    Report r;
    r.equation = eq.tag;
    for (const auto& role : eq.roles) {
        auto it = fields.find(role);
        r.fields[role] = it == fields.end() ? "" : it->second.name();
    }
    for (const auto& k : eq.params) r.params[k] = param_or(params, k, 0.0);
    r.tolerance = tol;
    return r;
}

}  // namespace

nlohmann::ordered_json Report::to_json() const {
    nlohmann::ordered_json j;
    j["equation"] = equation;
    j["fields"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : fields) j["fields"][k] = v;
    j["params"] = nlohmann::ordered_json::object();
    for (const auto& [k, v] : params) j["params"][k] = complex_json(v);
    j["tolerance"] = tolerance;
    j["points"] = nlohmann::ordered_json::array();
    for (const auto& p : points)
        j["points"].push_back({{"x", p.point.x.real()},
                               {"t", p.point.t.real()},
                               {"raw_re", p.raw.real()},
                               {"raw_im", p.raw.imag()},
                               {"rel", p.rel}});
    j["max_rel"] = max_rel;
    j["rejected"] = rejected;
    j["pass"] = pass;
    return j;
}

std::string Report::to_csv() const {
    std::ostringstream o;
    o.precision(17);
    o << "index,x,t,raw_re,raw_im,rel\r\n";
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto& p = points[i];
        o << i << ',' << p.point.x.real() << ',' << p.point.t.real() << ',' << p.raw.real() << ','
          << p.raw.imag() << ',' << p.rel << "\r\n";
    }
    return o.str();
}

Report scan(const Equation& eq, const FieldMap& fields, const Params& params, const Region& region,
            std::size_t count, double tolerance) {
    if (count == 0) throw UsageError("scan needs count >= 1");
    Report r = base_report(eq, fields, params, tolerance);
    std::atomic<std::size_t> rejected{0};
    std::function<std::optional<Residual>(const Point&)> probe = [&](const Point& p) -> std::optional<Residual> {
        if (!admissible(fields, p)) {
            ++rejected;
            return std::nullopt;
        }
        try {
            return residual_at(eq, fields, params, p);
        } catch (const DomainError&) {
            ++rejected;
            return std::nullopt;
        }
    };
    for (auto& [p, res] : sample_admissible<Residual>(region, count, probe))
        r.points.push_back(PointResult{p, res.raw, res.rel});
    r.rejected = rejected;
    r.finish();
    return r;
}

Report check_points(const Equation& eq, const FieldMap& fields, const Params& params,
                    const std::vector<Point>& points, double tolerance) {
    Report r = base_report(eq, fields, params, tolerance);
    for (const auto& p : points) {
        try {
            if (!admissible(fields, p)) throw SingularPoint("near locus", p.x, p.t);
            auto res = residual_at(eq, fields, params, p);
            r.points.push_back(PointResult{p, res.raw, res.rel});
        } catch (const DomainError&) {
            ++r.rejected;
        }
    }
    r.finish();
    return r;
}

// ---------------------------------------------------------------- symmetries

Field nonlocal_symmetry_sigma(const catalog::Tuple& t) {
    Field v = t.v;
    return Field("exp(" + v.name() + ")", v.params(), [v](const Point& p, const Orders& o) { return exp(v.jet(p, o)); },
                 v.loci());
}

Field nonlocal_symmetry_sigma(const Field& u, const Field& u1, cplx lambda, cplx x_ref, cplx t_ref) {
    // Distinct BT branches are required; v = integral (u - u1) is otherwise constant.
    bool distinct = false;
    for (double x : {0.0, 0.37, -0.61, 1.13})
        try {
            distinct |= std::abs(u.value(x_ref + x, t_ref) - u1.value(x_ref + x, t_ref)) > 1e-12;
        } catch (const DomainError&) {
        }
    if (!distinct) throw DomainError("nonlocal symmetry needs distinct branches u != u1");
    // v_x = u - u1 and v_t = 2(u - u1)(u_x - 2 lambda) - 2 u_xx fix every jet
    // coefficient locally except v itself, which is integrated along
    // (x_ref, t_ref) -> (x_ref, t) -> (x, t).
    auto vt = [u, u1, lambda](const Point& p, const Orders& o) {
        Orders w{o.x + 2, o.t, o.p};
        Jet U = u.jet(p, w);
        Jet D = (U - u1.jet(p, w)).truncate(o);
        Jet Ux = U.diff(Axis::x);
        Jet Uxx = Ux.diff(Axis::x).truncate(o);
        return 2.0 * D * (Ux.truncate(o) - 2.0 * lambda) - 2.0 * Uxx;
    };
    auto eval = [u, u1, vt, x_ref, t_ref](const Point& p, const Orders& o) {
        if (o.p > 0) throw DomainError("quadrature sigma has no parameter axis");
        auto leg_t = [&](cplx t) { return vt(Point{x_ref, t, 0.0}, Orders{0, 0, 0}).value(); };
        auto leg_x = [&](cplx x) {
            Point q{x, p.t, 0.0};
            return u.jet(q, Orders{0, 0, 0}).value() - u1.jet(q, Orders{0, 0, 0}).value();
        };
        cplx v0;
        try {
            v0 = quad::gauss_kronrod(leg_t, t_ref, p.t) + quad::gauss_kronrod(leg_x, x_ref, p.x);
        } catch (const ConvergenceError& e) {
            throw SingularPoint(std::string("quadrature path: ") + e.what(), p.x, p.t);
        }
        Jet D = u.jet(p, o) - u1.jet(p, o);
        Jet T = vt(p, o);
        Jet v(p, o);
        v.coeff(0, 0) = v0;
        for (int i = 0; i <= o.x; ++i)
            for (int j = 0; j <= o.t; ++j) {
                if (i > 0) v.coeff(i, j) = D.coeff(i - 1, j) / double(i);
                else if (j > 0) v.coeff(0, j) = T.coeff(0, j - 1) / double(j);
            }
        return exp(v);
    };
    return Field("exp(int(u-u1))", {}, eval, u.with_loci(u1.loci()).loci());
}

Field bilinear_symmetry_sigma_psi(const Field& psi, const Field& psi1, cplx x_ref) {
    Field ratio("psi1^2/psi^2", {}, [psi, psi1](const Point& p, const Orders& o) {
        Jet a = psi1.jet(p, o) / psi.jet(p, o);
        return a * a;
    });
    Field I = antiderivative_x(ratio, x_ref);
    return Field("sigma_psi", {}, [psi, I](const Point& p, const Orders& o) { return -0.5 * psi.jet(p, o) * I.jet(p, o); },
                 psi.loci());
}

Field sigma_from_sigma_psi(const Field& psi, const Field& sp) {
    return Field("sigma(sigma_psi)", {}, [psi, sp](const Point& p, const Orders& o) {
        Orders up = o;
        ++up.x;
        Jet a = psi.jet(p, up), s = sp.jet(p, up);
        Jet a0 = a.truncate(o), s0 = s.truncate(o);
        return 2.0 * a.diff(Axis::x) * s0 / (a0 * a0) - 2.0 * s.diff(Axis::x) / a0;
    });
}

namespace {

struct Grad {
    Jet f, fx, ft;
};

Grad grad(const Field& f, const Point& p, const Orders& o) {
    Jet j = f.jet(p, Orders{o.x + 1, o.t + 1, o.p});
    return Grad{j.truncate(o), j.diff(Axis::x).truncate(o), j.diff(Axis::t).truncate(o)};
}

}  // namespace

PointSymmetry point_symmetry_fields(const catalog::Tuple& tp, const std::array<cplx, 7>& c) {
    const cplx lam = tp.lambda;
    auto X = [=](const Point& p, const Orders& o) {
        return c[0] * (Jet::lift(Axis::x, p, o) + 12.0 * lam * Jet::lift(Axis::t, p, o)) + c[4];
    };
    auto T = [=](const Point& p, const Orders& o) { return 3.0 * c[0] * Jet::lift(Axis::t, p, o) + c[1]; };
    auto x2l = [=](const Point& p, const Orders& o) { return 2.0 * lam * Jet::lift(Axis::x, p, o); };
    Field u = tp.u, u1 = tp.u1, v = tp.v, g = tp.g;
    std::vector<Locus> loci = u.with_loci(u1.loci()).with_loci(v.loci()).with_loci(g.loci()).loci();
    PointSymmetry s;
    s.sigma = Field("sigma", {}, [=](const Point& p, const Orders& o) {
        Grad a = grad(u, p, o);
        Jet R = -c[0] * (x2l(p, o) + a.f) + 2.0 * c[3] * exp(v.jet(p, o)) + c[2];
        return X(p, o) * a.fx + T(p, o) * a.ft - R;
    }, loci);
    s.sigma1 = Field("sigma1", {}, [=](const Point& p, const Orders& o) {
        Grad a = grad(u1, p, o);
        Jet R = -c[0] * (x2l(p, o) + a.f) + c[2];
        return X(p, o) * a.fx + T(p, o) * a.ft - R;
    }, loci);
    s.sigma2 = Field("sigma2", {}, [=](const Point& p, const Orders& o) {
        Grad a = grad(v, p, o);
        Jet R = -c[0] + 2.0 * c[3] * g.jet(p, o) + c[5];
        return X(p, o) * a.fx + T(p, o) * a.ft - R;
    }, loci);
    s.sigma3 = Field("sigma3", {}, [=](const Point& p, const Orders& o) {
        Grad a = grad(g, p, o);
        Jet R = c[3] * a.f * a.f + c[5] * a.f + c[6];
        return X(p, o) * a.fx + T(p, o) * a.ft - R;
    }, loci);
    return s;
}

MiuraReport miura_identity_check(const Field& beta, const std::vector<Point>& points) {
    MiuraReport r;
    for (const auto& p : points) {
        Jet b = beta.jet(p, Orders{2, 0, 0});
        cplx b0 = b.value(), bx = b.derivative(1, 0), bxx = b.derivative(2, 0);
        if (std::abs(b0) < kDivEps) throw SingularPoint("beta vanishes", p.x, p.t);
        cplx A = -bxx / (2.0 * b0) + bx * bx / (4.0 * b0 * b0);
        Jet theta = b.diff(Axis::x) / (2.0 * b.truncate(Orders{1, 0, 0}));
        cplx th = theta.value();
        cplx miura = -theta.derivative(1, 0) - th * th;
        r.max_abs = std::max(r.max_abs, std::abs(A - miura) / (1.0 + std::abs(A)));
        ++r.points;
    }
    return r;
}

}  // namespace intlab::residual
