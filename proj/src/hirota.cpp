#include "intlab/hirota.hpp"

#include <atomic>
#include <cctype>

namespace intlab::hirota {

namespace {

double binom(int n, int k) {
    double r = 1.0;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

cplx D(int m, int n, const Jet& a, const Jet& b) { return hirota_D(m, n, a, b); }

const Jet& role(const std::map<std::string, Jet>& j, const std::string& r) { return j.at(r); }

std::string canonical(std::string tag) {
    for (auto& ch : tag) ch = ch == '-' ? '_' : char(std::toupper(static_cast<unsigned char>(ch)));
    return tag;
}

}  // namespace

cplx hirota_D(int m, int n, const Jet& a, const Jet& b) {
    if (m > a.orders().x || n > a.orders().t || m > b.orders().x || n > b.orders().t)
        throw Error("hirota_D: order (" + std::to_string(m) + "," + std::to_string(n) + ") exceeds jet truncation");
    cplx sum = 0.0;
    for (int i = 0; i <= m; ++i)
        for (int j = 0; j <= n; ++j) {
            double sign = ((m - i) + (n - j)) % 2 ? -1.0 : 1.0;
            sum += sign * binom(m, i) * binom(n, j) * a.derivative(i, j) * b.derivative(m - i, n - j);
        }
    return sum;
}

cplx hirota_D(int m, int n, const Field& a, const Field& b, const Point& p) {
    Orders o{m, n, 0};
    return hirota_D(m, n, a.jet(p, o), b.jet(p, o));
}

BilinearEquation neg_flow(int N) {
    BilinearEquation e;
    e.tag = N == 1 ? "BILIN_NEG_FLOW" : "BILIN_NEG_FLOW." + std::to_string(N);
    e.about = "D_x D_t psi.psi = sum psi_i^2";
    e.roles = {"psi"};
    for (int i = 1; i <= N; ++i) e.roles.push_back("psi" + std::to_string(i));
    e.orders = Orders{1, 1, 0};
    e.terms = [N](const std::map<std::string, Jet>& j, const Params&) {
        std::vector<cplx> t{D(1, 1, role(j, "psi"), role(j, "psi"))};
        for (int i = 1; i <= N; ++i) {
            cplx v = role(j, "psi" + std::to_string(i)).value();
            t.push_back(-v * v);
        }
        return t;
    };
    return e;
}

BilinearEquation second_flow(int N) {
    BilinearEquation e;
    e.tag = "BILIN_2ND_FLOW." + std::to_string(N);
    e.about = "D_x D_t psi.psi = sum psibar_k psibar_{N-k}";
    e.roles = {"psi"};
    for (int k = 0; k <= N; ++k) e.roles.push_back("psibar" + std::to_string(k));
    e.orders = Orders{1, 1, 0};
    e.terms = [N](const std::map<std::string, Jet>& j, const Params&) {
        std::vector<cplx> t{D(1, 1, role(j, "psi"), role(j, "psi"))};
        for (int k = 0; k <= N; ++k)
            t.push_back(-role(j, "psibar" + std::to_string(k)).value() *
                        role(j, "psibar" + std::to_string(N - k)).value());
        return t;
    };
    return e;
}

BilinearEquation second_chain(int k) {
    BilinearEquation e;
    e.tag = "BILIN_2ND_CHAIN." + std::to_string(k);
    e.about = "D_x^2 psi.psibar_k = psi psibar_{k-1}";
    e.roles = {"psi", "psibar_k"};
    if (k > 0) e.roles.push_back("psibar_km1");
    e.orders = Orders{2, 0, 0};
    e.terms = [k](const std::map<std::string, Jet>& j, const Params&) {
        std::vector<cplx> t{D(2, 0, role(j, "psi"), role(j, "psibar_k"))};
        if (k > 0) t.push_back(-role(j, "psi").value() * role(j, "psibar_km1").value());
        return t;
    };
    return e;
}

const BilinearRegistry& BilinearRegistry::builtin() {
    static const BilinearRegistry r = [] {
        BilinearRegistry reg;
        auto add = [&](BilinearEquation e) {
            reg.index_[e.tag] = reg.eqs_.size();
            reg.eqs_.push_back(std::move(e));
        };
        add({"BILIN_PKDV", "(D_x^4 + D_x D_t) psi.psi", {"psi"}, {}, Orders{4, 1, 0},
             [](const std::map<std::string, Jet>& j, const Params&) {
                 const Jet& a = role(j, "psi");
                 return std::vector<cplx>{D(4, 0, a, a), D(1, 1, a, a)};
             }});
        add({"BILIN_BT_X", "(D_x^2 - lambda) psi.psi1", {"psi", "psi1"}, {"lambda"}, Orders{2, 0, 0},
             [](const std::map<std::string, Jet>& j, const Params& p) {
                 const Jet &a = role(j, "psi"), &b = role(j, "psi1");
                 return std::vector<cplx>{D(2, 0, a, b), -param(p, "lambda") * a.value() * b.value()};
             }});
        add({"BILIN_BT_T", "(D_t + D_x^3 + 3 lambda D_x) psi.psi1", {"psi", "psi1"}, {"lambda"}, Orders{3, 1, 0},
             [](const std::map<std::string, Jet>& j, const Params& p) {
                 const Jet &a = role(j, "psi"), &b = role(j, "psi1");
                 return std::vector<cplx>{D(0, 1, a, b), D(3, 0, a, b), 3.0 * param(p, "lambda") * D(1, 0, a, b)};
             }});
        add({"BILIN_SYM", "(D_x^4 + D_x D_t) sigma_psi.psi", {"sigma_psi", "psi"}, {}, Orders{4, 1, 0},
             [](const std::map<std::string, Jet>& j, const Params&) {
                 const Jet &s = role(j, "sigma_psi"), &a = role(j, "psi");
                 return std::vector<cplx>{D(4, 0, s, a), D(1, 1, s, a)};
             }});
        add(neg_flow(1));
        add({"BILIN_NEG_CONSTRAINT", "(D_x^2 - lambda1) psi.psi1", {"psi", "psi1"}, {"lambda1"}, Orders{2, 0, 0},
             [](const std::map<std::string, Jet>& j, const Params& p) {
                 const Jet &a = role(j, "psi"), &b = role(j, "psi1");
                 return std::vector<cplx>{D(2, 0, a, b), -param(p, "lambda1") * a.value() * b.value()};
             }});
        add(second_flow(0));
        add(second_flow(1));
        add(second_chain(0));
        add(second_chain(1));
        add(second_chain(2));
        return reg;
    }();
    return r;
}

const BilinearEquation& BilinearRegistry::get(const std::string& tag) const {
    auto it = index_.find(canonical(tag));
    if (it == index_.end()) throw UsageError("unknown bilinear equation '" + tag + "'");
    return eqs_[it->second];
}

bool BilinearRegistry::contains(const std::string& tag) const { return index_.count(canonical(tag)) > 0; }

std::vector<std::string> BilinearRegistry::tags() const {
    std::vector<std::string> out;
    for (const auto& e : eqs_) out.push_back(e.tag);
    return out;
}

residual::Residual bilinear_residual(const BilinearEquation& eq, const residual::FieldMap& fields,
                                     const Params& params, const Point& p) {
    std::map<std::string, Jet> jets;
    for (const auto& r : eq.roles) {
        auto it = fields.find(r);
        if (it == fields.end()) throw UsageError(eq.tag + ": missing field for role '" + r + "'");
        if (it->second.near_locus(p, 0.0))
            throw SingularPoint(eq.tag + ": point on a singular locus of " + it->second.name(), p.x, p.t);
        jets.emplace(r, it->second.jet(p, eq.orders));
    }
    for (const auto& k : eq.params)
        if (!params.count(k)) throw UsageError(eq.tag + ": missing parameter '" + k + "'");
    residual::Residual out;
    out.term_values = eq.terms(jets, params);
    for (const auto& t : out.term_values) out.raw += t;
    out.rel = residual::relative(out.raw, out.term_values);
    return out;
}

namespace {

residual::Report base(const BilinearEquation& eq, const residual::FieldMap& fields, const Params& params, double tol) {
    residual::Report r;
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

residual::Report bilinear_scan(const BilinearEquation& eq, const residual::FieldMap& fields, const Params& params,
                               const Region& region, std::size_t count, double tolerance) {
    residual::Report r = base(eq, fields, params, tolerance);
    std::atomic<std::size_t> rejected{0};
    std::function<std::optional<residual::Residual>(const Point&)> probe =
        [&](const Point& p) -> std::optional<residual::Residual> {
        if (!residual::admissible(fields, p)) {
            ++rejected;
            return std::nullopt;
        }
        try {
            return bilinear_residual(eq, fields, params, p);
        } catch (const DomainError&) {
            ++rejected;
            return std::nullopt;
        }
    };
    for (auto& [p, res] : sample_admissible<residual::Residual>(region, count, probe))
        r.points.push_back(residual::PointResult{p, res.raw, res.rel});
    r.rejected = rejected;
    r.finish();
    return r;
}

residual::Report bilinear_check_points(const BilinearEquation& eq, const residual::FieldMap& fields,
                                       const Params& params, const std::vector<Point>& points, double tolerance) {
    residual::Report r = base(eq, fields, params, tolerance);
    for (const auto& p : points) {
        try {
            auto res = bilinear_residual(eq, fields, params, p);
            r.points.push_back(residual::PointResult{p, res.raw, res.rel});
        } catch (const DomainError&) {
            ++r.rejected;
        }
    }
    r.finish();
    return r;
}

ChainReport second_hierarchy_chain_check(const Field& psi, const Field& psi1, int K, const std::vector<Point>& points) {
    ChainReport rep;
    rep.K = K;
    rep.max_rel.assign(K + 1, 0.0);
    const Orders o{2, 0, K};
    for (const auto& pt : points) {
        Point p{pt.x, pt.t, 0.0};  // lambda expansion point
        Jet lam_jet;
        try {
            lam_jet = psi1.jet(p, o);
        } catch (const DomainError& e) {
            throw DomainError(std::string("psi1 is not liftable at lambda = 0: ") + e.what());
        }
        Jet a = psi.jet(p, Orders{2, 0, 0});
        for (int k = 0; k <= K; ++k) {
            Jet bk = lam_jet.p_slice(k);
            std::vector<cplx> terms{hirota_D(2, 0, a, bk)};
            if (k > 0) terms.push_back(-a.value() * lam_jet.p_slice(k - 1).value());
            cplx raw = terms[0] + (k > 0 ? terms[1] : 0.0);
            rep.max_rel[k] = std::max(rep.max_rel[k], residual::relative(raw, terms));
        }
        ++rep.points;
    }
    for (double v : rep.max_rel) rep.worst = std::max(rep.worst, v);
    return rep;
}

}  // namespace intlab::hirota
