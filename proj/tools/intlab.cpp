// intlab: command-line front end. Exit codes: 0 pass, 1 check failure or
// tool error, 2 usage or config error.
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "intlab/catalog.hpp"
#include "intlab/flow.hpp"
#include "intlab/residual.hpp"
#include "intlab/suites.hpp"

extern char** environ;

using namespace intlab;
using nlohmann::ordered_json;

namespace {

struct Opts {
    // suite
    std::string suite_name, out;
    std::vector<std::string> sets;
    // residual
    std::string eq, sol, grid, region, format = "json";
    std::vector<std::string> roles;
    double tol = 1e-9;
    bool tol_given = false;
    std::size_t count = 30;
    // flow
    int n = 1;
    std::string q0 = "0", p0 = "0", c = "-2", lambda = "1", csv;
    double x0 = 0, x1 = 1, t0 = 0, t1 = 1, phi = 0.3, dx = 0.5, dt = 0.5;
    int samples = 21;
    bool soliton = false, from_rational = false;
    std::string recon_grid = "x=-4:4:161,t=0:0.2:41";
    double alpha = 1, xi0 = 1, xi1 = 3;
    std::string P0 = "-1", dP0 = "1", u1_0 = "0.2", background = "seed.u1", bt_lambda = "0.3";
    // catalog
    std::string entry, file;
    std::string config;
};

void emit(const std::string& text, const std::string& path) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw UsageError("cannot write '" + path + "'");
    f << text;
    if (!f) throw UsageError("cannot write '" + path + "'");
}

cplx parse_value(const std::string& key, const std::string& text) {
    auto p = catalog::parse_params(key + "=" + text);
    return p.at(key);
}

std::vector<cplx> parse_list(const std::string& key, const std::string& text, int n) {
    std::vector<cplx> v;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ',')) v.push_back(parse_value(key, part));
    if (v.size() == 1 && n > 1) v.assign(n, v[0]);
    if (int(v.size()) != n) throw UsageError("--" + key + " needs 1 or " + std::to_string(n) + " values");
    return v;
}

// key = value lines; '#' starts a comment.
std::vector<std::pair<std::string, std::string>> read_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw UsageError("cannot read config '" + path + "'");
    std::vector<std::pair<std::string, std::string>> kv;
    std::string line;
    int no = 0;
    auto trim = [](std::string s) {
        s.erase(0, s.find_first_not_of(" \t\r"));
        s.erase(s.find_last_not_of(" \t\r") + 1);
        return s;
    };
    while (std::getline(f, line)) {
        ++no;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) throw UsageError("config line " + std::to_string(no) + ": expected key = value");
        kv.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    return kv;
}

void build(CLI::App& app, Opts& o) {
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    app.require_subcommand(1);
    app.add_option("--config", o.config, "key = value file; flags override it, INTLAB_* variables override both");
    app.name("intlab");
    app.set_version_flag("--version", suites::kVersion);

    auto* suite = app.add_subcommand("suite", "named verification suites");
    suite->require_subcommand(1);
    suite->add_subcommand("list", "list suites");
    auto* run = suite->add_subcommand("run", "run a suite and write its JSON report");
    run->add_option("--name", o.suite_name, "suite name")->required();
    run->add_option("--out", o.out, "report path (default stdout)");
    run->add_option("--set", o.sets, "catalog parameter override name=value")
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);

    auto* res = app.add_subcommand("residual", "residual of one equation on catalog fields; extra --<param> <value> "
                                               "flags set parameters");
    res->allow_extras();
    res->add_option("--eq", o.eq, "equation tag or expr:<text>")->required();
    res->add_option("--sol", o.sol, "catalog entry or family prefix")->required();
    res->add_option("--role", o.roles, "explicit role=entry binding")
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
    res->add_option("--grid", o.grid, "\"x=a:b:n,t=a:b:n\"");
    res->add_option("--region", o.region, "\"x=a:b,t=c:d\" for a Halton scan");
    res->add_option("--count", o.count, "scan points")->check(CLI::PositiveNumber);
    res->add_option_function<double>("--tol", [&o](double v) { o.tol = v, o.tol_given = true; }, "tolerance");
    res->add_option("--format", o.format)->check(CLI::IsMember({"json", "csv"}));
    res->add_option("--out", o.out, "output path (default stdout)");

    app.add_subcommand("equations", "list registered equations");

    auto* fl = app.add_subcommand("flow", "ODE flows: f0, f1, recon, pii, riccati");
    fl->require_subcommand(1);
    auto state_opts = [&o](CLI::App* s) {
        s->add_option("--n", o.n, "number of (q, p) pairs")->check(CLI::Range(1, 8));
        s->add_option("--q0", o.q0, "comma list");
        s->add_option("--p0", o.p0, "comma list");
        s->add_option("--c", o.c, "comma list");
        s->add_option("--lambda", o.lambda, "comma list");
        s->add_option("--out", o.out, "JSON summary path (default stdout)");
        s->add_option("--csv", o.csv, "CSV data path");
    };
    auto* f0 = fl->add_subcommand("f0", "x-flow F0");
    state_opts(f0);
    f0->add_option("--x1", o.x1, "end of the x-interval, starting at 0");
    f0->add_option("--samples", o.samples)->check(CLI::Range(2, 100000));
    auto* f1 = fl->add_subcommand("f1", "t-flow F1");
    state_opts(f1);
    f1->add_option("--t1", o.t1, "end of the t-interval, starting at 0");
    f1->add_option("--samples", o.samples)->check(CLI::Range(2, 100000));
    auto* rc = fl->add_subcommand("recon", "KdV reconstruction from F0/F1 data at x = 0");
    state_opts(rc);
    rc->add_option("--grid", o.recon_grid, "\"x=a:b:n,t=a:b:n\"; x must contain 0");
    rc->add_flag("--soliton", o.soliton, "one-soliton data q = sech(phi), p = -tanh(phi) sech(phi)");
    rc->add_option("--phi", o.phi, "soliton phase");
    rc->add_option_function<double>("--tol", [&o](double v) { o.tol = v, o.tol_given = true; },
                                    "relative FD residual tolerance (default 1e-3)");
    auto* pii = fl->add_subcommand("pii", "second Painleve equation");
    pii->add_option("--alpha", o.alpha);
    pii->add_option("--xi0", o.xi0);
    pii->add_option("--xi1", o.xi1);
    pii->add_option("--P0", o.P0);
    pii->add_option("--dP0", o.dP0);
    pii->add_flag("--from-rational", o.from_rational, "alpha = 1 with -1/xi data; compares against -1/xi");
    pii->add_option("--samples", o.samples)->check(CLI::Range(2, 100000));
    pii->add_option("--out", o.out);
    pii->add_option("--csv", o.csv);
    auto* ric = fl->add_subcommand("riccati", "nonlinear Lax pair around a rectangle");
    ric->add_option("--background", o.background, "catalog entry for u");
    ric->add_option("--lambda", o.bt_lambda, "BT parameter");
    ric->add_option("--x0", o.x0);
    ric->add_option("--t0", o.t0);
    ric->add_option("--dx", o.dx);
    ric->add_option("--dt", o.dt);
    ric->add_option("--u1-0", o.u1_0, "u1 at (x0, t0)");
    ric->add_option_function<double>("--tol", [&o](double v) { o.tol = v, o.tol_given = true; },
                                     "corner agreement tolerance (default 1e-7)");
    ric->add_option("--out", o.out);

    auto* cat = app.add_subcommand("catalog", "solution catalog");
    cat->require_subcommand(1);
    cat->add_subcommand("list", "entry names and the tags they solve");
    cat->add_subcommand("show", "one entry as JSON")->add_option("name", o.entry)->required();
    cat->add_subcommand("dump", "the built-in manifest text");
    cat->add_subcommand("check", "parse a manifest file")->add_option("file", o.file)->required();
}

// Names of the subcommand chain at the front of args.
std::vector<std::string> chain_of(CLI::App& app, const std::vector<std::string>& args) {
    std::vector<std::string> c;
    CLI::App* cur = &app;
    for (const auto& a : args) {
        if (a.empty() || a[0] == '-') break;
        CLI::App* next = nullptr;
        for (auto* s : cur->get_subcommands({}))
            if (s->get_name() == a) next = s;
        if (!next) break;
        c.push_back(a);
        cur = next;
    }
    return c;
}

CLI::App* leaf_of(CLI::App& app, const std::vector<std::string>& chain) {
    CLI::App* cur = &app;
    for (const auto& n : chain) cur = cur->get_subcommand(n);
    return cur;
}

bool has_option(CLI::App* a, const std::string& key) {
    for (const auto* o : a->get_options())
        for (const auto& l : o->get_lnames())
            if (l == key) return true;
    return false;
}

// ------------------------------------------------------------------ commands

int cmd_suite_list() {
    for (const auto& n : suites::suite_names()) std::cout << n << "\t" << suites::suite_about(n) << "\n";
    return 0;
}

int cmd_suite_run(const Opts& o) {
    Params ov;
    for (const auto& s : o.sets)
        for (const auto& [k, v] : catalog::parse_params(s)) ov[k] = v;
    auto report = suites::run_suite(suites::make_suite(o.suite_name, ov));
    emit(report.to_json().dump(2) + "\n", o.out);
    std::size_t failed = 0, informational = 0;
    for (const auto& c : report.cases) {
        if (c.informational) ++informational;
        else if (!c.pass) ++failed;
    }
    std::cerr << o.suite_name << ": " << (report.pass ? "PASS" : "FAIL") << " (" << report.cases.size()
              << " cases, " << failed << " failed, " << informational << " informational)\n";
    return report.pass ? 0 : 1;
}

Params extras_to_params(const std::vector<std::string>& extras) {
    Params p;
    for (std::size_t i = 0; i < extras.size(); ++i) {
        std::string a = extras[i];
        if (a.rfind("--", 0) != 0) throw UsageError("unexpected argument '" + a + "'");
        a = a.substr(2);
        std::string key, val;
        auto eq = a.find('=');
        if (eq != std::string::npos) {
            key = a.substr(0, eq);
            val = a.substr(eq + 1);
        } else {
            if (i + 1 >= extras.size()) throw UsageError("parameter --" + a + " lacks a value");
            key = a;
            val = extras[++i];
        }
        p[key] = parse_value(key, val);
    }
    return p;
}

int cmd_residual(const Opts& o, const Params& overrides) {
    const auto& cat = catalog::Catalog::builtin();
    const auto& reg = residual::Registry::builtin();
    // Fields first: their catalog defaults seed the equation parameters.
    std::map<std::string, std::string> binding;
    for (const auto& r : o.roles) {
        auto eq = r.find('=');
        if (eq == std::string::npos) throw UsageError("--role needs role=entry");
        binding[r.substr(0, eq)] = r.substr(eq + 1);
    }
    Params probe = overrides;
    auto roles_of = [&](const Params& p) { return reg.get(o.eq, p).roles; };
    std::vector<std::string> roles = roles_of(probe);
    for (const auto& r : roles) {
        if (binding.count(r)) continue;
        if (cat.contains(o.sol + "." + r)) binding[r] = o.sol + "." + r;
    }
    if (cat.contains(o.sol) && !binding.count(roles[0]) &&
        std::none_of(binding.begin(), binding.end(), [&](const auto& b) { return b.second == o.sol; })) {
        binding[roles[0]] = o.sol;
        const auto& e = cat.entry(o.sol);
        for (const auto& r : roles) {
            auto it = e.options.find("with." + r);
            if (!binding.count(r) && it != e.options.end()) binding[r] = it->second;
        }
    }
    Params params;
    for (const auto& [r, name] : binding) {
        if (!cat.contains(name)) throw UsageError("unknown catalog entry '" + name + "'");
        for (const auto& [k, v] : cat.merged(name, overrides)) params.emplace(k, v);
    }
    for (const auto& [k, v] : overrides) params[k] = v;
    auto eq = reg.get(o.eq, params);
    residual::FieldMap fields;
    for (const auto& r : eq.roles) {
        if (!binding.count(r))
            throw UsageError("no field for role '" + r + "' of " + eq.tag + "; use --role " + r + "=<entry>");
        fields[r] = cat.make(binding[r], overrides);
    }
    const catalog::Entry* main = cat.contains(binding[eq.roles[0]]) ? &cat.entry(binding[eq.roles[0]]) : nullptr;
    double tol = o.tol_given ? o.tol : (main ? main->tier : o.tol);
    residual::Report rep;
    if (!o.grid.empty()) {
        rep = residual::check_points(eq, fields, params, suites::parse_grid(o.grid), tol);
        if (rep.points.empty()) throw DomainError("singular region: every grid point was rejected");
    } else {
        Region region{-3.0, 3.0, 0.1, 1.0};
        if (!o.region.empty()) region = suites::parse_region(o.region);
        else if (main && main->options.count("region")) region = suites::parse_region(main->options.at("region"));
        else if (main && main->vars.t.empty()) region = {0.6, 3.0, 0.0, 0.0};
        rep = residual::scan(eq, fields, params, region, o.count, tol);
    }
    emit(o.format == "csv" ? rep.to_csv() : rep.to_json().dump(2) + "\n", o.out);
    return rep.pass ? 0 : 1;
}

flow::FlowState flow_state(const Opts& o) {
    flow::FlowState s;
    s.q = parse_list("q0", o.q0, o.n);
    s.p = parse_list("p0", o.p0, o.n);
    s.c = parse_list("c", o.c, o.n);
    s.lambda = parse_list("lambda", o.lambda, o.n);
    return s;
}

ordered_json state_json(const flow::FlowState& shape, const flow::State& y) {
    ordered_json q = ordered_json::array(), p = ordered_json::array();
    for (std::size_t m = 0; m < shape.size(); ++m) {
        q.push_back(format_complex(y[m]));
        p.push_back(format_complex(y[shape.size() + m]));
    }
    return {{"q", q}, {"p", p}, {"omega", format_complex(flow::omega_of(shape, y))}};
}

int cmd_flow_line(const Opts& o, bool is_f0) {
    auto s = flow_state(o);
    double end = is_f0 ? o.x1 : o.t1;
    auto sol = is_f0 ? flow::integrate_F0(s, 0.0, end) : flow::integrate_F1(s, 0.0, end);
    double reach = sol.end();
    std::vector<double> at;
    for (int i = 0; i < o.samples; ++i) at.push_back(reach * i / (o.samples - 1));
    if (!o.csv.empty()) emit(flow::trajectory_csv(sol, s, at, is_f0 ? "x" : "t"), o.csv);
    ordered_json j{{"flow", is_f0 ? "F0" : "F1"},
                   {"n", o.n},
                   {"start", state_json(s, flow::pack(s))},
                   {"end_at", reach},
                   {"end", state_json(s, sol.values().back())},
                   {"singular", sol.singular},
                   {"note", sol.note},
                   {"steps", sol.accepted},
                   {"rejected_steps", sol.rejected}};
    emit(j.dump(2) + "\n", o.out);
    return 0;
}

flow::GridSpec grid_spec(const std::string& text) {
    auto pts = suites::parse_grid(text);
    std::set<double> xs, ts;
    for (const auto& p : pts) {
        xs.insert(p.x.real());
        ts.insert(p.t.real());
    }
    if (ts.size() < 2) throw UsageError("recon grid needs a t axis");
    return {*xs.begin(), *xs.rbegin(), *ts.begin(), *ts.rbegin(), int(xs.size()), int(ts.size())};
}

int cmd_flow_recon(const Opts& o) {
    flow::FlowState s;
    if (o.soliton) {
        if (o.n != 1) throw UsageError("--soliton needs --n 1");
        auto c = parse_list("c", o.c, 1)[0], l = parse_list("lambda", o.lambda, 1)[0];
        if (c != -2.0 || l != 1.0) throw UsageError("--soliton data are for c = -2, lambda = 1");
        s = {{1.0 / std::cosh(o.phi)}, {-std::tanh(o.phi) / std::cosh(o.phi)}, {-2.0}, {1.0}};
    } else {
        s = flow_state(o);
    }
    auto g = grid_spec(o.recon_grid);
    auto r = flow::reconstruct_and_check_kdv(s, g);
    double tol = o.tol_given ? o.tol : (o.soliton ? 1e-4 : 1e-3);
    ordered_json j{{"grid", {{"x0", g.x0}, {"x1", g.x1}, {"nx", g.nx}, {"t0", g.t0}, {"t1", g.t1}, {"nt", g.nt}}},
                   {"singular", r.singular},
                   {"fd_max_abs", r.max_abs},
                   {"fd_max_rel", r.max_rel},
                   {"tolerance", tol}};
    bool pass = !r.singular && r.max_rel < tol;
    if (o.soliton && !r.singular) {
        double m = 0.0;
        for (std::size_t it = 0; it < r.ts.size(); ++it)
            for (std::size_t ix = 0; ix < r.xs.size(); ++ix) {
                double sc = 1.0 / std::cosh(r.xs[ix] - 4 * r.ts[it] + o.phi);
                m = std::max(m, std::abs(r.omega[it][ix] + 2 * sc * sc));
            }
        j["soliton_max_error"] = m;
        pass = pass && m < 1e-6;
    }
    j["pass"] = pass;
    if (!o.csv.empty() && !r.singular) emit(flow::grid_csv(r), o.csv);
    emit(j.dump(2) + "\n", o.out);
    return pass ? 0 : 1;
}

int cmd_flow_pii(const Opts& o) {
    double alpha = o.alpha;
    cplx P0 = parse_value("P0", o.P0), dP0 = parse_value("dP0", o.dP0);
    if (o.from_rational) {
        if (o.xi0 == 0.0) throw UsageError("-1/xi data need xi0 != 0");
        alpha = 1.0;
        P0 = -1.0 / o.xi0;
        dP0 = 1.0 / (o.xi0 * o.xi0);
    }
    auto r = flow::integrate_PII(alpha, P0, dP0, o.xi0, o.xi1);
    double reach = r.sol.end();
    ordered_json j{{"alpha", alpha},
                   {"xi0", o.xi0},
                   {"xi1", o.xi1},
                   {"reached", reach},
                   {"pole", r.pole},
                   {"steps", r.sol.accepted}};
    if (r.pole) j["pole_estimate"] = r.pole_estimate;
    std::ostringstream csv;
    csv.precision(17);
    csv << "xi,P_re,P_im,dP_re,dP_im\r\n";
    double m = 0.0;
    for (int i = 0; i < o.samples; ++i) {
        double xi = o.xi0 + (reach - o.xi0) * i / (o.samples - 1);
        auto y = r.sol.at(xi);
        csv << xi << ',' << y[0].real() << ',' << y[0].imag() << ',' << y[1].real() << ',' << y[1].imag() << "\r\n";
        if (o.from_rational) m = std::max(m, std::abs(y[0] + 1.0 / xi));
    }
    bool pass = true;
    if (o.from_rational) {
        j["rational_max_error"] = m;
        pass = m < 1e-9;
        j["pass"] = pass;
    }
    if (!o.csv.empty()) emit(csv.str(), o.csv);
    emit(j.dump(2) + "\n", o.out);
    return pass ? 0 : 1;
}

int cmd_flow_riccati(const Opts& o) {
    Field u = catalog::Catalog::builtin().make(o.background);
    cplx lambda = parse_value("lambda", o.bt_lambda);
    auto r = flow::lax_cross_corner(u, lambda, o.x0, o.t0, o.dx, o.dt, parse_value("u1_0", o.u1_0));
    double tol = o.tol_given ? o.tol : 1e-7;
    bool pass = !r.singular && r.difference < tol;
    ordered_json j{{"background", o.background},
                   {"lambda", format_complex(lambda)},
                   {"box", {o.x0, o.t0, o.dx, o.dt}},
                   {"x_then_t", format_complex(r.via_x_then_t)},
                   {"t_then_x", format_complex(r.via_t_then_x)},
                   {"difference", r.difference},
                   {"singular", r.singular},
                   {"tolerance", tol},
                   {"pass", pass}};
    emit(j.dump(2) + "\n", o.out);
    return pass ? 0 : 1;
}

ordered_json entry_json(const catalog::Entry& e) {
    ordered_json j;
    j["name"] = e.name;
    ordered_json p = ordered_json::object();
    for (const auto& [k, v] : e.params) p[k] = format_complex(v);
    j["params"] = p;
    if (!e.expr.empty()) j["expr"] = e.expr;
    if (!e.where.empty()) j["where"] = e.where;
    if (!e.builtin.empty()) j["builtin"] = e.builtin;
    j["vars"] = {{"x", e.vars.x}, {"t", e.vars.t}, {"p", e.vars.p}};
    j["singular"] = e.singular;
    j["solves"] = e.solves;
    j["tier"] = e.tier;
    j["informational"] = e.informational;
    if (!e.options.empty()) j["options"] = e.options;
    return j;
}

int cmd_catalog(const std::string& sub, const Opts& o) {
    const auto& cat = catalog::Catalog::builtin();
    if (sub == "list") {
        for (const auto& n : cat.names()) {
            const auto& e = cat.entry(n);
            std::cout << n;
            for (std::size_t i = 0; i < e.solves.size(); ++i) std::cout << (i ? "," : "\t") << e.solves[i];
            if (e.informational) std::cout << "\t(informational)";
            std::cout << "\n";
        }
    } else if (sub == "show") {
        std::cout << entry_json(cat.entry(o.entry)).dump(2) << "\n";
    } else if (sub == "dump") {
        std::cout << catalog::Catalog::builtin_text();
    } else {
        auto c = catalog::Catalog::load(o.file);
        std::cout << o.file << ": " << c.names().size() << " entries\n";
    }
    return 0;
}

int cmd_equations() {
    const auto& reg = residual::Registry::builtin();
    for (const auto& t : reg.tags()) {
        auto e = reg.get(t, {});
        std::cout << t << "\t" << e.about << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    Opts o;
    CLI::App app{"intlab: residual checks for the KdV Baecklund-transformation laboratory"};
    build(app, o);
    std::vector<std::string> user(argv + 1, argv + argc);
    try {
        // --config is consumed here so it can precede the subcommand.
        std::string config;
        for (std::size_t i = 0; i < user.size();) {
            if (user[i] == "--config") {
                if (i + 1 >= user.size()) throw UsageError("--config needs a path");
                config = user[i + 1];
                user.erase(user.begin() + long(i), user.begin() + long(i) + 2);
            } else if (user[i].rfind("--config=", 0) == 0) {
                config = user[i].substr(9);
                user.erase(user.begin() + long(i));
            } else {
                ++i;
            }
        }
        if (const char* e = std::getenv("INTLAB_CONFIG")) config = e;
        auto chain = chain_of(app, user);
        CLI::App* leaf = leaf_of(app, chain);
        const bool extras_ok = !chain.empty() && chain[0] == "residual";
        std::vector<std::string> front, back;
        if (!config.empty())
            for (const auto& [k, v] : read_config(config)) {
                if (!has_option(leaf, k) && !extras_ok) throw UsageError("config key '" + k + "' is not a flag of this command");
                front.push_back("--" + k + "=" + v);
            }
        // INTLAB_<FLAG> overrides flags; INTLAB_PARAM_<NAME> sets a residual parameter.
        std::vector<std::pair<std::string, std::string>> env;
        for (char** e = environ; *e; ++e) {
            std::string s = *e;
            if (s.rfind("INTLAB_", 0) != 0) continue;
            auto eq = s.find('=');
            std::string k = s.substr(7, eq - 7), v = s.substr(eq + 1);
            if (k == "CONFIG") continue;
            env.emplace_back(k, v);
        }
        std::sort(env.begin(), env.end());
        for (auto [k, v] : env) {
            bool param = k.rfind("PARAM_", 0) == 0;
            if (param) k = k.substr(6);
            std::string key;
            for (char ch : k) key += ch == '_' ? '-' : char(std::tolower(static_cast<unsigned char>(ch)));
            if (param ? extras_ok : has_option(leaf, key)) back.push_back("--" + key + "=" + v);
        }
        std::vector<std::string> args(user.begin(), user.begin() + long(chain.size()));
        args.insert(args.end(), front.begin(), front.end());
        args.insert(args.end(), user.begin() + long(chain.size()), user.end());
        args.insert(args.end(), back.begin(), back.end());
        std::reverse(args.begin(), args.end());  // CLI11 takes the vector in reverse order
        try {
            app.parse(args);
        } catch (const CLI::ParseError& e) {
            int code = app.exit(e);
            return code == 0 ? 0 : 2;
        }
        if (chain.empty()) throw UsageError("missing command");
        const std::string& top = chain[0];
        if (top == "suite") return chain.at(1) == "list" ? cmd_suite_list() : cmd_suite_run(o);
        if (top == "residual") return cmd_residual(o, extras_to_params(app.get_subcommand("residual")->remaining()));
        if (top == "equations") return cmd_equations();
        if (top == "catalog") return cmd_catalog(chain.at(1), o);
        if (top == "flow") {
            const std::string& sub = chain.at(1);
            if (sub == "f0" || sub == "f1") return cmd_flow_line(o, sub == "f0");
            if (sub == "recon") return cmd_flow_recon(o);
            if (sub == "pii") return cmd_flow_pii(o);
            return cmd_flow_riccati(o);
        }
        throw UsageError("unknown command '" + top + "'");
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
