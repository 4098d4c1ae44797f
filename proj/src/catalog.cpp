#include "intlab/catalog.hpp"

#include <fstream>
#include <sstream>

#include "intlab/expr.hpp"

namespace intlab::catalog {

namespace detail {
extern const char kManifest[];
}

namespace {

std::string trim(std::string_view s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return std::string(s.substr(a, b - a));
}

std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= s.size(); ++i)
        if (i == s.size() || s[i] == sep) {
            auto piece = trim(s.substr(start, i - start));
            if (!piece.empty()) out.push_back(piece);
            start = i + 1;
        }
    return out;
}

cplx constant_value(const std::string& text) {
    auto e = expr::parse(text);
    if (!expr::free_symbols(e).empty()) throw UsageError("parameter value '" + text + "' is not a constant");
    return expr::evaluate(e, {});
}

FieldVars parse_vars(const std::string& text) {
    FieldVars v;
    bool first = true;
    for (const auto& part : split(text, ',')) {
        if (part.rfind("p:", 0) == 0) {
            v.p = trim(part.substr(2));
        } else if (first) {
            v.x = part;
            if (part != "x") v.t.clear();
            first = false;
        } else {
            throw UsageError("vars: unexpected '" + part + "'");
        }
    }
    return v;
}

// Replaces where-symbols until none remain; cycles are a manifest error.
expr::Expression expand(const std::string& text, const std::map<std::string, std::string>& where) {
    auto e = expr::parse(text);
    if (where.empty()) return e;
    std::map<std::string, expr::Expression> repl;
    for (const auto& [k, v] : where) repl.emplace(k, expr::parse(v));
    for (std::size_t pass = 0; pass <= where.size(); ++pass) {
        bool pending = false;
        for (const auto& s : expr::free_symbols(e)) pending |= repl.count(s) > 0;
        if (!pending) return e;
        e = expr::substitute(e, repl);
    }
    throw UsageError("where-definitions are cyclic");
}

Jet x_lift(const Point& p, const Orders& o) { return Jet::lift(Axis::x, p, o); }
Jet t_lift(const Point& p, const Orders& o) { return Jet::lift(Axis::t, p, o); }

Orders bump_x(Orders o, int n = 1) {
    o.x += n;
    return o;
}

}  // namespace

// ---------------------------------------------------------------- manifest

Params parse_params(std::string_view text) {
    Params p;
    for (const auto& item : split(text, ',')) {
        auto eq = item.find('=');
        if (eq == std::string::npos) throw UsageError("parameter '" + item + "' lacks '='");
        p[trim(item.substr(0, eq))] = constant_value(trim(item.substr(eq + 1)));
    }
    return p;
}

Catalog Catalog::parse(std::string_view text) {
    Catalog c;
    std::istringstream in{std::string(text)};
    std::string raw;
    int line = 0;
    Entry* cur = nullptr;
    auto fail = [&](const std::string& msg) { throw UsageError("catalog line " + std::to_string(line) + ": " + msg); };
    while (std::getline(in, raw)) {
        ++line;
        std::string s = trim(raw);
        if (s.empty() || s[0] == '#') continue;
        if (s.front() == '[') {
            if (s.back() != ']') fail("unterminated section header");
            std::string name = trim(s.substr(1, s.size() - 2));
            if (name.empty()) fail("empty entry name");
            if (c.index_.count(name)) fail("duplicate entry '" + name + "'");
            c.index_[name] = c.entries_.size();
            c.entries_.push_back(Entry{});
            cur = &c.entries_.back();
            cur->name = name;
            cur->line = line;
            continue;
        }
        if (!cur) fail("key outside of an entry");
        auto eq = s.find('=');
        if (eq == std::string::npos) fail("expected 'key = value'");
        std::string key = trim(s.substr(0, eq)), val = trim(s.substr(eq + 1));
        try {
            if (key == "params") cur->params = parse_params(val);
            else if (key == "expr") cur->expr = (expr::parse(val), val);
            else if (key == "builtin") cur->builtin = val;
            else if (key == "vars") cur->vars = parse_vars(val);
            else if (key == "singular") {
                cur->singular = split(val, ';');
                for (const auto& d : cur->singular) expr::parse(d);
            }
            else if (key == "solves") cur->solves = split(val, ',');
            else if (key == "tier") cur->tier = std::stod(val);
            else if (key == "informational") cur->informational = (val == "true");
            else if (key.rfind("where.", 0) == 0) cur->where[key.substr(6)] = (expr::parse(val), val);
            else cur->options[key] = val;
        } catch (const UsageError& e) {
            fail(e.what());
        } catch (const Error& e) {
            fail(e.what());
        } catch (const std::invalid_argument&) {
            fail("bad number '" + val + "'");
        }
    }
    for (const auto& e : c.entries_) {
        line = e.line;
        if (e.expr.empty() == e.builtin.empty()) fail("entry '" + e.name + "' needs exactly one of expr, builtin");
    }
    return c;
}

Catalog Catalog::load(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw UsageError("cannot read catalog '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return parse(ss.str());
}

std::string_view Catalog::builtin_text() { return detail::kManifest; }

const Catalog& Catalog::builtin() {
    static const Catalog c = parse(detail::kManifest);
    return c;
}

const Entry& Catalog::entry(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) throw UsageError("unknown catalog entry '" + name + "'");
    return entries_[it->second];
}

std::vector<std::string> Catalog::names() const {
    std::vector<std::string> out;
    for (const auto& e : entries_) out.push_back(e.name);
    return out;
}

Params Catalog::merged(const std::string& name, const Params& overrides) const {
    Params p = entry(name).params;
    for (auto& [k, v] : p) {
        auto it = overrides.find(k);
        if (it != overrides.end()) v = it->second;
    }
    return p;
}

Field Catalog::make(const std::string& name, const Params& overrides) const {
    const Entry& e = entry(name);
    Params p = merged(name, overrides);
    if (!e.expr.empty()) {
        std::vector<expr::Expression> loci;
        for (const auto& s : e.singular) loci.push_back(expand(s, e.where));
        return expression_field(name, expand(e.expr, e.where), p, loci, e.vars);
    }
    auto opt = [&](const std::string& k) {
        auto it = e.options.find(k);
        if (it == e.options.end()) throw UsageError("entry '" + name + "' lacks option '" + k + "'");
        return it->second;
    };
    auto sub = [&](const std::string& k) { return make(opt(k), p); };
    const std::string& b = e.builtin;
    Field f;
    if (b == "dx") {
        f = kdv_from_pkdv(sub("of"));
    } else if (b == "cole-hopf") {
        f = cole_hopf(sub("of"));
    } else if (b == "nonlocal-sigma") {
        Field v = make(opt("tuple") + ".v", p);
        f = Field(name, p, [v](const Point& pt, const Orders& o) { return exp(v.jet(pt, o)); }, v.loci());
    } else if (b == "levi.u" || b == "levi.v" || b == "levi.g") {
        Tuple t = levi_apply(seed_family(param(p, "lambda"), param(p, "c"), param(p, "c0")), param(p, "eps"));
        f = b == "levi.u" ? t.u : b == "levi.v" ? t.v : t.g;
    } else if (b == "pii.H") {
        f = pii_H(sub("P"), param(p, "a7"));
    } else if (b.rfind("pii.", 0) == 0) {
        Field P = sub("P");
        Field G = opt("G") == "quadrature" ? pii_G_quadrature(P, param(p, "xi0")) : sub("G");
        auto r = pii_reconstruct(P, G, PiiSetup::from(p));
        if (b == "pii.omega1") f = r.omega1;
        else if (b == "pii.omega2") f = r.omega2;
        else if (b == "pii.omega2-closed") f = r.omega2_closed;
        else if (b == "pii.omega2-printed") f = r.omega2_printed;
        else if (b == "pii.u") f = r.tuple.u;
        else if (b == "pii.u1") f = r.tuple.u1;
        else if (b == "pii.v") f = r.tuple.v;
        else if (b == "pii.g") f = r.tuple.g;
        else throw UsageError("unknown builtin '" + b + "'");
    } else if (b == "cnoidal.omega4") {
        f = cnoidal_omega4(CnoidalParams::from(p));
    } else {
        throw UsageError("unknown builtin '" + b + "'");
    }
    std::vector<Locus> extra;
    for (const auto& s : e.singular) {
        auto le = expand(s, e.where);
        extra.push_back(Locus{s, [le, p](cplx x, cplx t) {
                                  expr::Bindings bind;
                                  bind.values = p;
                                  bind.values["x"] = x;
                                  bind.values["t"] = t;
                                  return expr::evaluate(le, bind);
                              }});
    }
    return Field(name, p, [f](const Point& pt, const Orders& o) { return f.jet(pt, o); }, f.loci())
        .with_loci(std::move(extra));
}

std::vector<Field> Catalog::term_fields(const std::string& name, const Params& overrides) const {
    const Entry& e = entry(name);
    if (e.expr.empty()) throw UsageError("entry '" + name + "' is not a closed form");
    Params p = merged(name, overrides);
    std::vector<Field> out;
    int k = 0;
    for (const auto& term : expr::terms(expand(e.expr, e.where)))
        out.push_back(expression_field(name + ".term" + std::to_string(++k), term, p, {}, e.vars));
    return out;
}

// ---------------------------------------------------------------- maps

Tuple seed_family(cplx lambda, cplx c, cplx c0) {
    if (lambda == 0.0) throw DomainError("seed family needs lambda != 0");
    const auto& cat = Catalog::builtin();
    Params p{{"lambda", lambda}, {"c", c}, {"c0", c0}};
    return Tuple{cat.make("seed.u", p), cat.make("seed.u1", p), cat.make("seed.v", p), cat.make("seed.g", p), lambda};
}

Tuple levi_apply(const Tuple& s, cplx eps) {
    Field g = s.g;
    auto den = [g, eps](const Point& p, const Orders& o) { return 2.0 - eps * g.jet(p, o); };
    std::vector<Locus> pole{{"2 - eps*g", [g, eps](cplx x, cplx t) { return 2.0 - eps * g.value(x, t); }}};
    Params prm = s.u.params();
    prm["eps"] = eps;
    Field u = s.u, v = s.v;
    Tuple out;
    out.lambda = s.lambda;
    out.u1 = s.u1;
    out.u = Field("levi.u", prm,
                  [u, v, den, eps](const Point& p, const Orders& o) {
                      return u.jet(p, o) + 2.0 * eps * exp(v.jet(p, o)) / den(p, o);
                  },
                  pole)
                .with_loci(u.loci());
    out.v = Field("levi.v", prm,
                  [v, den](const Point& p, const Orders& o) { return v.jet(p, o) + 2.0 * log(2.0 / den(p, o)); }, pole)
                .with_loci(v.loci());
    out.g = Field("levi.g", prm, [g, den](const Point& p, const Orders& o) { return 2.0 * g.jet(p, o) / den(p, o); },
                  pole)
                .with_loci(g.loci());
    return out;
}

Field kdv_from_pkdv(const Field& u) { return derivative(u, Axis::x).renamed(u.name() + "_x"); }

Field cole_hopf(const Field& psi) {
    std::vector<Locus> loci = psi.loci();
    loci.push_back(Locus{"psi", [psi](cplx x, cplx t) { return psi.value(x, t); }});
    return Field("-2*" + psi.name() + "_x/" + psi.name(), psi.params(),
                 [psi](const Point& p, const Orders& o) {
                     Jet j = psi.jet(p, bump_x(o));
                     return -2.0 * j.diff(Axis::x) / j.truncate(o);
                 },
                 loci);
}

// ---------------------------------------------------------------- PII reduction

PiiSetup PiiSetup::from(const Params& p) {
    PiiSetup s;
    s.a4 = param(p, "a4");
    s.lambda = param_or(p, "lambda", 1.0);
    s.c2 = param_or(p, "c2", 0.0);
    s.c5 = param_or(p, "c5", 0.0);
    s.c3 = param_or(p, "c3", 0.0);
    s.c6 = param_or(p, "c6", 0.0);
    s.a7 = param_or(p, "a7", 1.0);
    return s;
}

Field pii_H(const Field& P, cplx a7) {
    Field Pd = derivative(P, Axis::x);
    std::vector<Locus> loci = P.loci();
    return Field("H", {{"a7", a7}},
                 [P, Pd, a7](const Point& p, const Orders& o) {
                     Jet xi = x_lift(p, o), Pj = P.jet(p, o);
                     return (Pd.jet(p, o) + Pj * Pj + xi / 2.0) / (2.0 * a7);
                 },
                 loci);
}

Field pii_G_quadrature(const Field& P, cplx anchor) {
    Field Pd = derivative(P, Axis::x);
    Field integrand("1/F", {},
                    [P, Pd](const Point& p, const Orders& o) {
                        Jet Pj = P.jet(p, o);
                        return 1.0 / (2.0 * Pd.jet(p, o) + 2.0 * Pj * Pj + x_lift(p, o));
                    },
                    P.loci());
    return antiderivative_x(integrand, anchor, "G");
}

namespace {

struct PiiJets {
    Jet s, sm13, xi, P, Pd, Pdd, G, F;
};

PiiJets pii_jets(const Field& P, const Field& Pd, const Field& Pdd, const Field& G, const PiiSetup& c,
                 const Point& p, const Orders& o) {
    PiiJets j;
    Jet X = x_lift(p, o), T = t_lift(p, o);
    j.s = 3.0 * T + c.c2;
    j.sm13 = pow(j.s, -1.0 / 3.0);
    j.xi = (X - 6.0 * c.lambda * T + c.c5 - 6.0 * c.c2 * c.lambda) * j.sm13;
    j.P = compose_univariate(P, j.xi);
    j.Pd = compose_univariate(Pd, j.xi);
    j.Pdd = compose_univariate(Pdd, j.xi);
    j.G = compose_univariate(G, j.xi);
    j.F = 2.0 * j.Pd + 2.0 * j.P * j.P + j.xi;
    return j;
}

}  // namespace

PiiReconstruction pii_reconstruct(const Field& P, const Field& G, const PiiSetup& c) {
    if (c.a4 == 0.0 || c.a7 == 0.0) throw DomainError("PII reduction needs a4 != 0 and a7 != 0");
    Field Pd = derivative(P, Axis::x), Pdd = derivative(P, Axis::x, 2);
    Params prm{{"a4", c.a4}, {"lambda", c.lambda}, {"c2", c.c2}, {"c5", c.c5},
               {"c3", c.c3}, {"c6", c.c6}, {"a7", c.a7}};

    auto xi_of = [c](cplx x, cplx t) {
        cplx s = 3.0 * t + c.c2;
        return (x - 6.0 * c.lambda * t + c.c5 - 6.0 * c.c2 * c.lambda) * std::pow(s, -1.0 / 3.0);
    };
    std::vector<Locus> loci{{"3*t + c2", [c](cplx, cplx t) { return 3.0 * t + c.c2; }},
                            {"2*P' + 2*P^2 + xi", [=](cplx x, cplx t) {
                                 cplx xi = xi_of(x, t);
                                 Jet j = P.jet(Point{xi, 0.0, 0.0}, Orders{1, 0, 0});
                                 return 2.0 * j.derivative(1, 0) + 2.0 * j.value() * j.value() + xi;
                             }}};
    for (const auto& L : P.loci())
        loci.push_back(Locus{"P: " + L.label, [=](cplx x, cplx t) { return L.f(xi_of(x, t), 0.0); }});

    // Potentials of the reduction; the tanh/log pieces carry B.
    auto base = [c](const Point& p, const Orders& o) {
        Jet X = x_lift(p, o), T = t_lift(p, o);
        return -c.lambda * X + 3.0 * c.lambda * c.lambda * T + c.c3 + c.c5 * c.lambda -
               3.0 * c.c2 * c.lambda * c.lambda;
    };
    struct Reduced {
        Jet sm13, H, U, U1, B, s;
    };
    auto reduced = [=](const Point& p, const Orders& o) {
        PiiJets j = pii_jets(P, Pd, Pdd, G, c, p, o);
        Jet H = (j.Pd + j.P * j.P + j.xi / 2.0) / (2.0 * c.a7);
        Jet Hx = (j.Pdd + 2.0 * j.P * j.Pd + 0.5) / (2.0 * c.a7);
        Jet U1 = c.a7 * Hx * Hx / H - 4.0 * c.a7 * c.a7 * H * H + 2.0 * c.a7 * j.xi * H - j.xi * j.xi / 4.0 -
                 c.a4 * c.a4 / (16.0 * c.a7 * H);
        Jet U = U1 - Hx / H;
        Jet B = c.a4 * (log(j.s) + 3.0 * j.G) / 6.0;
        return Reduced{j.sm13, H, U, U1, B, j.s};
    };

    PiiReconstruction r;
    r.tuple.lambda = c.lambda;
    r.tuple.u = Field("pii.u", prm,
                      [=](const Point& p, const Orders& o) {
                          Reduced q = reduced(p, o);
                          return base(p, o) + q.sm13 * (q.U - c.a4 / (4.0 * c.a7) * tanh(q.B) / q.H);
                      },
                      loci);
    r.tuple.u1 = Field("pii.u1", prm,
                       [=](const Point& p, const Orders& o) {
                           Reduced q = reduced(p, o);
                           return base(p, o) + q.sm13 * q.U1;
                       },
                       loci);
    r.tuple.v = Field("pii.v", prm,
                      [=](const Point& p, const Orders& o) {
                          Reduced q = reduced(p, o);
                          return -log(q.s) / 3.0 - log(q.H) - 2.0 * log(cosh(q.B));
                      },
                      loci);
    r.tuple.g = Field("pii.g", prm,
                      [=](const Point& p, const Orders& o) {
                          Reduced q = reduced(p, o);
                          return 8.0 * c.a7 / c.a4 * (tanh(q.B) + c.c6 / c.a4);
                      },
                      loci);
    r.omega1 = kdv_from_pkdv(r.tuple.u1).renamed("pii.omega1");
    r.omega2 = kdv_from_pkdv(r.tuple.u).renamed("pii.omega2");

    auto closed = [=](bool printed) {
        return [=](const Point& p, const Orders& o) {
            PiiJets j = pii_jets(P, Pd, Pdd, G, c, p, o);
            Jet B = c.a4 * (log(j.s) + 3.0 * j.G) / 6.0;
            Jet th = tanh(B), sech2 = 1.0 - th * th;
            Jet a4P_F = c.a4 * j.P / j.F, a4F2 = c.a4 * c.a4 / (j.F * j.F);
            Jet core = -0.5 * a4F2 * sech2 + (2.0 * a4P_F - a4F2) * th;
            Jet s23 = j.sm13 * j.sm13;
            if (printed) return s23 * (core + 2.0 * a4P_F + j.Pd - j.P * j.P) + c.lambda;
            return s23 * (core - 2.0 * a4P_F + a4F2 - j.Pd + j.P * j.P) - c.lambda;
        };
    };
    r.omega2_closed = Field("pii.omega2-closed", prm, closed(false), loci);
    r.omega2_printed = Field("pii.omega2-printed", prm, closed(true), loci);
    return r;
}

// ---------------------------------------------------------------- cnoidal reduction

CnoidalParams CnoidalParams::from(const Params& p) {
    CnoidalParams c;
    c.a2 = param_or(p, "a2", c.a2);
    c.a3 = param_or(p, "a3", c.a3);
    c.a6 = param_or(p, "a6", c.a6);
    c.lambda = param_or(p, "lambda", c.lambda);
    c.n = param_or(p, "n", c.n);
    return c;
}

cplx CnoidalParams::a5() const { return a3 * a3 * (1.0 - 5.0 * n * n) / (16.0 * n * n * a2 * a2); }
cplx CnoidalParams::a7_stated() const { return a3 * a3 * (n * n - 1.0) / (32.0 * n * n * std::pow(a2, 4)); }
cplx CnoidalParams::a7_consistent() const { return a3 * a3 * a3 * (n * n - 1.0) / (32.0 * n * n * std::pow(a2, 4)); }

Field cnoidal_omega4(const CnoidalParams& c) {
    const cplx a5 = c.a5(), a7 = c.a7_consistent(), lam = c.lambda;
    const cplx k = (a5 + 12.0 * lam) / 2.0;
    const cplx K = 3.0 * lam * lam + lam * a5 / 2.0 - a5 * a5 / 16.0 + c.a3 * a7 / 4.0;
    const cplx c3c2 = (k * k + 48.0 * lam * lam - 16.0 * k * lam - c.a3 * a7) / 4.0;
    Params p{{"a2", c.a2}, {"a3", c.a3}, {"a6", c.a6}, {"lambda", lam}, {"n", c.n}, {"a5", a5},
             {"a7", a7},   {"k", k},     {"KK", K + c3c2}, {"A", c.a3 / (4.0 * c.a2 * c.a2)},
             {"kappa", c.a3 / (4.0 * c.a2 * c.n)}};
    std::map<std::string, std::string> where{
        {"z", "x - k*t"},
        {"S", "jacobi_sn(kappa*z, n)"},
        {"Cn", "jacobi_cn(kappa*z, n)"},
        {"Dn", "jacobi_dn(kappa*z, n)"},
        {"W", "A*(S - 1)"},
        {"Wz", "A*kappa*Cn*Dn"},
        {"Wzz", "-A*kappa^2*S*(Dn^2 + n^2*Cn^2)"},
        {"G", "A/a7*(log(Dn - n*Cn)/(kappa*n) - z)"},
        {"B", "a2*a7*(t + a6 + G)/2"},
    };
    auto e = expand("a7/(2*W) - lambda - a5/4 + Wzz/W - Wz^2/W^2 + KK*W/a7 - a2*Wz*tanh(B) - a2^2*W^2/(2*cosh(B)^2)",
                    where);
    return expression_field("cnoidal-omega4", e, p, {expand("S - 1", where)});
}

// ---------------------------------------------------------------- families

NamedFields rational_family(cplx lambda, cplx c2, cplx c5) {
    const auto& cat = Catalog::builtin();
    Params p{{"lambda", lambda}, {"c2", c2}, {"c5", c5}};
    return NamedFields{{{"omega1", cat.make("rational-omega1", p)},
                        {"omega2", cat.make("rational-omega2-printed")},
                        {"omega2-constructive", cat.make("rational-omega2", p)}}};
}

NamedFields bessel_family() {
    const auto& cat = Catalog::builtin();
    return NamedFields{{{"omega1", cat.make("bessel-omega1")},
                        {"omega2", cat.make("bessel-omega2-printed")},
                        {"omega2-constructive", cat.make("bessel-omega2")}}};
}

NamedFields cnoidal_family(const CnoidalParams& c) {
    const auto& cat = Catalog::builtin();
    Params p{{"a2", c.a2}, {"a3", c.a3}, {"a6", c.a6}, {"lambda", c.lambda}, {"n", c.n}};
    return NamedFields{{{"omega3", cat.make("cnoidal-omega3", p)},
                        {"omega4", cat.make("cnoidal-omega4-printed", p)},
                        {"omega4-constructive", cnoidal_omega4(c)}}};
}

NamedFields negative_flow_solutions() {
    const auto& cat = Catalog::builtin();
    return NamedFields{{{"u_neg", cat.make("neg.u")},
                        {"beta", cat.make("neg.beta")},
                        {"eta_liouville", cat.make("neg.liouville")},
                        {"eta_sg", cat.make("neg.sine-gordon")}}};
}

}  // namespace intlab::catalog
