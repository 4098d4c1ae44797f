#include "intlab/field.hpp"

#include "intlab/expr.hpp"
#include "intlab/quadrature.hpp"

namespace intlab {

Field::Field(std::string name, Params params, Evaluator eval, std::vector<Locus> loci)
    : name_(std::move(name)), params_(std::move(params)), eval_(std::move(eval)), loci_(std::move(loci)) {}

Jet Field::jet(const Point& p, const Orders& o) const {
    if (!eval_) throw Error("field '" + name_ + "' has no evaluator");
    return eval_(p, o);
}

cplx Field::value(cplx x, cplx t) const { return jet(Point{x, t, 0.0}, Orders{0, 0, 0}).value(); }

bool Field::near_locus(const Point& p, double margin) const {
    constexpr int kGrid = 5;
    for (const auto& L : loci_) {
        cplx centre = L.f(p.x, p.t);
        if (std::abs(centre) < kSingEps) return true;
        // A real-valued denominator vanishing inside the box shows up as a
        // sign change among the grid samples.
        bool real = std::abs(centre.imag()) <= 1e-12 * std::abs(centre);
        bool pos = false, neg = false;
        for (int i = 0; i < kGrid && real; ++i)
            for (int j = 0; j < kGrid; ++j) {
                double dx = margin * (2.0 * i / (kGrid - 1) - 1.0), dt = margin * (2.0 * j / (kGrid - 1) - 1.0);
                cplx v = L.f(p.x + dx, p.t + dt);
                if (!std::isfinite(v.real()) || std::abs(v) < kSingEps) return true;
                if (std::abs(v.imag()) > 1e-12 * std::abs(v)) {
                    real = false;
                    break;
                }
                (v.real() > 0 ? pos : neg) = true;
            }
        if (real && pos && neg) return true;
    }
    return false;
}

Field Field::renamed(std::string name) const {
    Field f = *this;
    f.name_ = std::move(name);
    return f;
}

Field Field::with_loci(std::vector<Locus> extra) const {
    Field f = *this;
    f.loci_.insert(f.loci_.end(), extra.begin(), extra.end());
    return f;
}

Field expression_field(const std::string& name, const std::string& text, const Params& params,
                       const std::vector<std::string>& singular, const FieldVars& vars) {
    std::vector<expr::Expression> loci;
    for (const auto& s : singular) loci.push_back(expr::parse(s));
    return expression_field(name, expr::parse(text), params, loci, vars);
}

Field expression_field(const std::string& name, const expr::Expression& e, const Params& params,
                       const std::vector<expr::Expression>& singular, const FieldVars& vars) {
    for (const auto& s : expr::free_symbols(e))
        if (s != vars.x && s != vars.t && s != vars.p && !params.count(s))
            throw UsageError("field '" + name + "': unbound symbol '" + s + "'");
    if (!expr::derivative_markers(e).empty())
        throw UsageError("field '" + name + "': derivative markers are not allowed in a field expression");

    Evaluator eval = [e, params, vars](const Point& p, const Orders& o) {
        std::map<std::string, Jet> jets;
        jets.emplace(vars.x, Jet::lift(Axis::x, p, o));
        if (!vars.t.empty()) jets.emplace(vars.t, Jet::lift(Axis::t, p, o));
        Params consts = params;
        if (!vars.p.empty()) {
            jets.insert_or_assign(vars.p, Jet::lift(Axis::p, p, o));
            consts.erase(vars.p);
        }
        return expr::evaluate_jet(e, jets, consts, p, o);
    };

    std::vector<Locus> loci;
    for (const auto& le : singular) {
        loci.push_back(Locus{expr::print(le), [le, params, vars](cplx x, cplx t) {
                                 expr::Bindings b;
                                 b.values = params;
                                 b.values[vars.x] = x;
                                 if (!vars.t.empty()) b.values[vars.t] = t;
                                 try {
                                     return expr::evaluate(le, b);
                                 } catch (const DomainError&) {
                                     return cplx(0.0);
                                 }
                             }});
    }
    return Field(name, params, std::move(eval), std::move(loci));
}

Field constant_field(const std::string& name, cplx value) {
    return Field(name, {}, [value](const Point& p, const Orders& o) { return Jet::constant(value, p, o); });
}

Field derivative(const Field& f, Axis axis, int n) {
    if (n < 0) throw UsageError("negative derivative order");
    if (n == 0) return f;
    static const char* names[] = {"x", "t", "p"};
    Evaluator eval = [f, axis, n](const Point& p, const Orders& o) {
        Orders up = o;
        (axis == Axis::x ? up.x : axis == Axis::t ? up.t : up.p) += n;
        Jet j = f.jet(p, up);
        for (int k = 0; k < n; ++k) j = j.diff(axis);
        return j;
    };
    return Field(f.name() + "_" + std::string(std::size_t(n), names[int(axis)][0]), f.params(), std::move(eval),
                 f.loci());
}

Jet compose_univariate(const Field& f, const Jet& arg) {
    int n = arg.orders().total();
    Jet j = f.jet(Point{arg.value(), 0.0, 0.0}, Orders{n, 0, 0});
    Series s(n);
    for (int i = 0; i <= n; ++i) s[i] = j.coeff(i, 0, 0);
    return compose(s, arg);
}

Field antiderivative_x(const Field& f, cplx anchor, const std::string& name) {
    Evaluator eval = [f, anchor](const Point& p, const Orders& o) {
        Orders slice{0, o.t, o.p};
        const int width = (o.t + 1) * (o.p + 1);
        auto integrand = [&](cplx s) {
            Jet j = f.jet(Point{s, p.t, p.p}, slice);
            std::vector<cplx> v(width);
            for (int jt = 0; jt <= o.t; ++jt)
                for (int k = 0; k <= o.p; ++k) v[jt * (o.p + 1) + k] = j.coeff(0, jt, k);
            return v;
        };
        quad::Result q;
        try {
            q = quad::gauss_kronrod(integrand, anchor, p.x, 1e-13, 1e-15);
        } catch (const SingularPoint&) {
            throw SingularPoint("quadrature path crosses a pole of " + f.name(), p.x, p.t);
        } catch (const ConvergenceError&) {
            throw SingularPoint("quadrature of " + f.name() + " did not converge (pole on the path?)", p.x, p.t);
        }
        Jet out(p, o);
        for (int jt = 0; jt <= o.t; ++jt)
            for (int k = 0; k <= o.p; ++k) out.coeff(0, jt, k) = q.value[jt * (o.p + 1) + k];
        if (o.x > 0) {
            Jet d = f.jet(p, Orders{o.x - 1, o.t, o.p});
            for (int i = 1; i <= o.x; ++i)
                for (int jt = 0; jt <= o.t; ++jt)
                    for (int k = 0; k <= o.p; ++k) out.coeff(i, jt, k) = d.coeff(i - 1, jt, k) / double(i);
        }
        return out;
    };
    return Field(name.empty() ? "int(" + f.name() + ")" : name, f.params(), std::move(eval), f.loci());
}

}  // namespace intlab
