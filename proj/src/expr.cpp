#include "intlab/expr.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstring>

#include "intlab/special.hpp"

namespace intlab::expr {

struct Node {
    Kind kind = Kind::constant;
    cplx value = 0.0;
    std::string name;
    int nx = 0, nt = 0;
    Func func = Func::exp;
    std::vector<Expression> children;
};

namespace {

struct FuncInfo {
    Func f;
    const char* name;
    int arity;
};

const FuncInfo kFuncs[] = {
    {Func::exp, "exp", 1},          {Func::log, "log", 1},
    {Func::sin, "sin", 1},          {Func::cos, "cos", 1},
    {Func::tan, "tan", 1},          {Func::sinh, "sinh", 1},
    {Func::cosh, "cosh", 1},        {Func::tanh, "tanh", 1},
    {Func::sqrt, "sqrt", 1},        {Func::arctan, "arctan", 1},
    {Func::jacobi_sn, "jacobi_sn", 2}, {Func::jacobi_cn, "jacobi_cn", 2},
    {Func::jacobi_dn, "jacobi_dn", 2}, {Func::bessel_j, "bessel_j", 2},
    {Func::airy_ai, "airy_ai", 1},  {Func::airy_bi, "airy_bi", 1},
    {Func::airy_aip, "airy_aip", 1}, {Func::airy_bip, "airy_bip", 1},
    {Func::elliptic_f, "elliptic_f", 2}, {Func::cosh_sqrt, "cosh_sqrt", 1},
};

const FuncInfo& info(Func f) {
    for (const auto& i : kFuncs)
        if (i.f == f) return i;
    throw Error("unknown function tag");
}

}  // namespace

const char* func_name(Func f) { return info(f).name; }
int func_arity(Func f) { return info(f).arity; }

bool func_from_name(std::string_view name, Func& out) {
    for (const auto& i : kFuncs)
        if (name == i.name) {
            out = i.f;
            return true;
        }
    return false;
}

// ---------------------------------------------------------------- construction

Expression::Expression() : n_(std::make_shared<Node>()) {}

Expression Expression::constant(cplx v) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::constant;
    n->value = v;
    return Expression(n);
}

Expression Expression::symbol(std::string name) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::symbol;
    n->name = std::move(name);
    return Expression(n);
}

Expression Expression::derivative(std::string field, int nx, int nt) {
    if (nx == 0 && nt == 0) return symbol(std::move(field));
    auto n = std::make_shared<Node>();
    n->kind = Kind::derivative;
    n->name = std::move(field);
    n->nx = nx;
    n->nt = nt;
    return Expression(n);
}

Expression Expression::sum(std::vector<Expression> terms) {
    std::vector<Expression> flat;
    for (auto& t : terms) {
        if (t.kind() == Kind::sum) flat.insert(flat.end(), t.children().begin(), t.children().end());
        else flat.push_back(t);
    }
    if (flat.empty()) return constant(0.0);
    if (flat.size() == 1) return flat[0];
    auto n = std::make_shared<Node>();
    n->kind = Kind::sum;
    n->children = std::move(flat);
    return Expression(n);
}

Expression Expression::product(std::vector<Expression> factors) {
    std::vector<Expression> flat;
    for (auto& f : factors) {
        if (f.kind() == Kind::product) flat.insert(flat.end(), f.children().begin(), f.children().end());
        else flat.push_back(f);
    }
    if (flat.empty()) return constant(1.0);
    if (flat.size() == 1) return flat[0];
    auto n = std::make_shared<Node>();
    n->kind = Kind::product;
    n->children = std::move(flat);
    return Expression(n);
}

Expression Expression::power(Expression base, Expression exponent) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::power;
    n->children = {std::move(base), std::move(exponent)};
    return Expression(n);
}

Expression Expression::quotient(Expression num, Expression den) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::quotient;
    n->children = {std::move(num), std::move(den)};
    return Expression(n);
}

Expression Expression::apply(Func f, std::vector<Expression> args) {
    if (int(args.size()) != func_arity(f))
        throw Error(std::string(func_name(f)) + " expects " + std::to_string(func_arity(f)) + " argument(s)");
    auto n = std::make_shared<Node>();
    n->kind = Kind::apply;
    n->func = f;
    n->children = std::move(args);
    return Expression(n);
}

Kind Expression::kind() const { return n_->kind; }
cplx Expression::value() const { return n_->value; }
const std::string& Expression::name() const { return n_->name; }
int Expression::nx() const { return n_->nx; }
int Expression::nt() const { return n_->nt; }
Func Expression::func() const { return n_->func; }
const std::vector<Expression>& Expression::children() const { return n_->children; }
bool Expression::is_constant(cplx v) const { return kind() == Kind::constant && value() == v; }
std::string Expression::str() const { return print(*this); }

Expression operator+(const Expression& a, const Expression& b) { return Expression::sum({a, b}); }
Expression operator-(const Expression& a, const Expression& b) { return Expression::sum({a, negate(b)}); }
Expression operator*(const Expression& a, const Expression& b) { return Expression::product({a, b}); }
Expression operator/(const Expression& a, const Expression& b) { return Expression::quotient(a, b); }

// Negation folds into literals and leading product constants so that the
// printed form "-e" parses back to the same tree.
Expression negate(const Expression& a) {
    if (a.kind() == Kind::constant) return Expression::constant(-a.value());
    if (a.kind() == Kind::product && a.children()[0].kind() == Kind::constant) {
        std::vector<Expression> f = a.children();
        cplx c = -f[0].value();
        if (c == 1.0) f.erase(f.begin());
        else f[0] = Expression::constant(c);
        return Expression::product(std::move(f));
    }
    return Expression::product({Expression::constant(-1.0), a});
}

bool structurally_equal(const Expression& a, const Expression& b) {
    if (a.kind() != b.kind()) return false;
    switch (a.kind()) {
    case Kind::constant: return a.value() == b.value();
    case Kind::symbol: return a.name() == b.name();
    case Kind::derivative: return a.name() == b.name() && a.nx() == b.nx() && a.nt() == b.nt();
    case Kind::apply:
        if (a.func() != b.func()) return false;
        break;
    default: break;
    }
    if (a.children().size() != b.children().size()) return false;
    for (std::size_t i = 0; i < a.children().size(); ++i)
        if (!structurally_equal(a.children()[i], b.children()[i])) return false;
    return true;
}

// ---------------------------------------------------------------- parser

SyntaxError::SyntaxError(std::size_t offset, std::vector<std::string> expected, const std::string& detail)
    : Error([&] {
          std::string m = "syntax error at offset " + std::to_string(offset);
          if (!expected.empty()) {
              m += ", expected ";
              for (std::size_t i = 0; i < expected.size(); ++i) m += (i ? " or " : "") + expected[i];
          }
          if (!detail.empty()) m += ": " + detail;
          return m;
      }()),
      offset(offset), expected(std::move(expected)) {}

namespace {

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)); }
bool is_ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

// Length of an unsigned decimal literal at s[pos], or 0.
std::size_t scan_number(std::string_view s, std::size_t pos) {
    std::size_t i = pos, digits = 0;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i, ++digits;
    if (i < s.size() && s[i] == '.') {
        ++i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i, ++digits;
    }
    if (digits == 0) return 0;
    if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
        std::size_t j = i + 1;
        if (j < s.size() && (s[j] == '+' || s[j] == '-')) ++j;
        std::size_t k = j;
        while (k < s.size() && std::isdigit(static_cast<unsigned char>(s[k]))) ++k;
        if (k > j) i = k;
    }
    return i - pos;
}

double to_double(std::string_view s) {
    double v = 0.0;
    auto r = std::from_chars(s.data(), s.data() + s.size(), v);
    if (r.ec != std::errc()) throw Error("bad numeric literal '" + std::string(s) + "'");
    return v;
}

class Parser {
public:
    explicit Parser(std::string_view s) : s_(s) {}

    Expression run() {
        Expression e = expr();
        skip();
        if (pos_ < s_.size()) fail(pos_, {"operator", "end of input"}, "unexpected '" + std::string(1, s_[pos_]) + "'");
        return e;
    }

private:
    [[noreturn]] void fail(std::size_t at, std::vector<std::string> expected, const std::string& detail = "") {
        // End of input inside an open group is attributed to the group.
        if (at >= s_.size() && !open_.empty()) at = open_.back();
        throw SyntaxError(at, std::move(expected), detail);
    }

    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    Expression expr() {
        std::vector<Expression> t{term()};
        for (;;) {
            if (accept('+')) t.push_back(term());
            else if (accept('-')) t.push_back(negate(term()));
            else break;
        }
        return Expression::sum(std::move(t));
    }

    Expression term() {
        Expression acc = unary();
        std::vector<Expression> factors{acc};
        for (;;) {
            if (accept('*')) {
                factors.push_back(unary());
            } else if (accept('/')) {
                Expression num = Expression::product(factors);
                factors = {Expression::quotient(num, unary())};
            } else {
                break;
            }
        }
        return Expression::product(std::move(factors));
    }

    Expression unary() {
        if (accept('-')) return negate(unary());
        if (accept('+')) return unary();
        return power();
    }

    Expression power() {
        Expression base = primary();
        if (accept('^')) return Expression::power(base, unary());
        return base;
    }

    // "(a+bi)" written without blanks is a single complex literal.
    bool complex_literal(Expression& out) {
        std::size_t i = pos_ + 1;
        bool neg = false;
        if (i < s_.size() && s_[i] == '-') neg = true, ++i;
        std::size_t n1 = scan_number(s_, i);
        if (!n1) return false;
        std::size_t j = i + n1;
        if (j >= s_.size() || (s_[j] != '+' && s_[j] != '-')) return false;
        bool neg_im = s_[j] == '-';
        std::size_t n2 = scan_number(s_, j + 1);
        if (!n2) return false;
        std::size_t k = j + 1 + n2;
        if (k >= s_.size() || s_[k] != 'i' || k + 1 >= s_.size() || s_[k + 1] != ')') return false;
        double re = to_double(s_.substr(i, n1)), im = to_double(s_.substr(j + 1, n2));
        out = Expression::constant(cplx(neg ? -re : re, neg_im ? -im : im));
        pos_ = k + 2;
        return true;
    }

    Expression primary() {
        skip();
        if (pos_ >= s_.size()) fail(pos_, {"expression"});
        char c = s_[pos_];
        if (c == '(') {
            Expression lit;
            if (complex_literal(lit)) return lit;
            open_.push_back(pos_);
            ++pos_;
            Expression e = expr();
            if (!accept(')')) fail(pos_, {"')'"});
            open_.pop_back();
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
            std::size_t n = scan_number(s_, pos_);
            if (!n) fail(pos_, {"expression"});
            double v = to_double(s_.substr(pos_, n));
            pos_ += n;
            if (pos_ < s_.size() && s_[pos_] == 'i' && !(pos_ + 1 < s_.size() && is_ident_char(s_[pos_ + 1]))) {
                ++pos_;
                return Expression::constant(cplx(0.0, v));
            }
            if (pos_ < s_.size() && is_ident_start(s_[pos_])) fail(pos_, {"operator"}, "identifier directly after number");
            return Expression::constant(v);
        }
        if (is_ident_start(c)) return identifier();
        fail(pos_, {"expression"}, "unexpected '" + std::string(1, c) + "'");
    }

    Expression identifier() {
        std::size_t start = pos_;
        while (pos_ < s_.size() && is_ident_char(s_[pos_])) ++pos_;
        std::string name(s_.substr(start, pos_ - start));
        std::size_t after = pos_;
        skip();
        if (pos_ < s_.size() && s_[pos_] == '(') {
            Func f;
            if (!func_from_name(name, f)) throw SyntaxError(start, {}, "unknown function '" + name + "'");
            open_.push_back(pos_);
            ++pos_;
            std::vector<Expression> args{expr()};
            while (accept(',')) args.push_back(expr());
            if (!accept(')')) fail(pos_, {"','", "')'"});
            open_.pop_back();
            if (int(args.size()) != func_arity(f))
                throw SyntaxError(start, {}, name + " expects " + std::to_string(func_arity(f)) + " argument(s)");
            return Expression::apply(f, std::move(args));
        }
        pos_ = after;
        if (name == "pi") return Expression::constant(M_PI);
        auto us = name.find('_');
        if (us == std::string::npos) return Expression::symbol(name);
        std::string base = name.substr(0, us), suffix = name.substr(us + 1);
        if (suffix.empty() || suffix.find_first_not_of("xt") != std::string::npos)
            throw SyntaxError(start, {}, "'" + name + "' is not a derivative marker (suffix must use x and t only)");
        int nx = int(std::count(suffix.begin(), suffix.end(), 'x'));
        int nt = int(suffix.size()) - nx;
        return Expression::derivative(base, nx, nt);
    }

    std::string_view s_;
    std::size_t pos_ = 0;
    std::vector<std::size_t> open_;
};

}  // namespace

Expression parse(std::string_view text) { return Parser(text).run(); }

// ---------------------------------------------------------------- printer

namespace {

std::string fmt_real(double v) {
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

bool negative_real(const Expression& e) {
    return e.kind() == Kind::constant && e.value().imag() == 0.0 && std::signbit(e.value().real()) &&
           e.value().real() != 0.0;
}

bool negative_looking(const Expression& e) {
    if (negative_real(e)) return true;
    if (e.kind() == Kind::constant && e.value().real() == 0.0 && e.value().imag() < 0.0) return true;
    return e.kind() == Kind::product && negative_real(e.children()[0]);
}

std::string fmt_constant(cplx v) {
    if (v.imag() == 0.0) return fmt_real(v.real());
    if (v.real() == 0.0) return v.imag() < 0.0 ? "(-" + fmt_real(-v.imag()) + "i)" : fmt_real(v.imag()) + "i";
    std::string s = "(" + fmt_real(v.real());
    s += v.imag() < 0.0 ? "-" + fmt_real(-v.imag()) : "+" + fmt_real(v.imag());
    return s + "i)";
}

bool atomic(const Expression& e) {
    switch (e.kind()) {
    case Kind::symbol:
    case Kind::derivative:
    case Kind::apply: return true;
    case Kind::constant: {
        cplx v = e.value();
        if (v.imag() == 0.0) return !std::signbit(v.real());
        return true;  // complex literals carry their own parentheses
    }
    default: return false;
    }
}

std::string paren(const std::string& s) { return "(" + s + ")"; }

std::string print_factor(const Expression& e) {
    if (e.kind() == Kind::sum || e.kind() == Kind::quotient || negative_real(e)) return paren(print(e));
    return print(e);
}

}  // namespace

std::string print(const Expression& e) {
    switch (e.kind()) {
    case Kind::constant: return fmt_constant(e.value());
    case Kind::symbol: return e.name();
    case Kind::derivative: return e.name() + "_" + std::string(e.nx(), 'x') + std::string(e.nt(), 't');
    case Kind::apply: {
        std::string s = std::string(func_name(e.func())) + "(";
        for (std::size_t i = 0; i < e.children().size(); ++i) s += (i ? ", " : "") + print(e.children()[i]);
        return s + ")";
    }
    case Kind::sum: {
        std::string s;
        for (std::size_t i = 0; i < e.children().size(); ++i) {
            const Expression& c = e.children()[i];
            if (negative_looking(c)) s += (i ? " - " : "-") + print_factor(negate(c));
            else s += (i ? " + " : "") + print(c);
        }
        return s;
    }
    case Kind::product: {
        const auto& f = e.children();
        std::string s;
        std::size_t start = 0;
        if (negative_real(f[0])) {
            double c = f[0].value().real();
            s = "-";
            if (c != -1.0) s += fmt_real(-c) + "*";
            start = 1;
        }
        for (std::size_t i = start; i < f.size(); ++i) s += (i > start ? "*" : "") + print_factor(f[i]);
        return s;
    }
    case Kind::quotient: {
        const Expression& n = e.children()[0];
        const Expression& d = e.children()[1];
        std::string ns = n.kind() == Kind::sum ? paren(print(n)) : print(n);
        bool dp = d.kind() == Kind::sum || d.kind() == Kind::product || d.kind() == Kind::quotient || negative_real(d);
        return ns + "/" + (dp ? paren(print(d)) : print(d));
    }
    case Kind::power: {
        const Expression& b = e.children()[0];
        const Expression& x = e.children()[1];
        return (atomic(b) ? print(b) : paren(print(b))) + "^" + (atomic(x) ? print(x) : paren(print(x)));
    }
    }
    return "";
}

// ---------------------------------------------------------------- differentiation

namespace {

Expression C(cplx v) { return Expression::constant(v); }

bool depends_on(const Expression& e, const std::string& s, const SymbolTable* table) {
    switch (e.kind()) {
    case Kind::constant: return false;
    case Kind::symbol:
        if (e.name() == s) return true;
        return table && table->fields.count(e.name()) && (s == "x" || s == "t");
    case Kind::derivative: return s == "x" || s == "t";
    default:
        for (const auto& c : e.children())
            if (depends_on(c, s, table)) return true;
        return false;
    }
}

Expression d1(const Expression& e, const std::string& s, const SymbolTable* table);

Expression chain(const Expression& outer, const Expression& arg, const std::string& s, const SymbolTable* table) {
    return outer * d1(arg, s, table);
}

Expression d_apply(const Expression& e, const std::string& s, const SymbolTable* table) {
    const auto& a = e.children();
    auto A = [&](Func f, std::vector<Expression> args) { return Expression::apply(f, std::move(args)); };
    auto require_const = [&](const Expression& m, const char* what) {
        if (depends_on(m, s, table))
            throw DomainError(std::string("differentiation with respect to a ") + what + " is not supported");
    };
    switch (e.func()) {
    case Func::exp: return chain(e, a[0], s, table);
    case Func::log: return d1(a[0], s, table) / a[0];
    case Func::sin: return chain(A(Func::cos, {a[0]}), a[0], s, table);
    case Func::cos: return chain(negate(A(Func::sin, {a[0]})), a[0], s, table);
    case Func::tan: return chain(C(1.0) + Expression::power(e, C(2.0)), a[0], s, table);
    case Func::sinh: return chain(A(Func::cosh, {a[0]}), a[0], s, table);
    case Func::cosh: return chain(A(Func::sinh, {a[0]}), a[0], s, table);
    case Func::tanh: return chain(C(1.0) - Expression::power(e, C(2.0)), a[0], s, table);
    case Func::sqrt: return d1(a[0], s, table) / (C(2.0) * e);
    case Func::arctan: return d1(a[0], s, table) / (C(1.0) + Expression::power(a[0], C(2.0)));
    case Func::jacobi_sn:
        require_const(a[1], "Jacobi modulus");
        return chain(A(Func::jacobi_cn, a) * A(Func::jacobi_dn, a), a[0], s, table);
    case Func::jacobi_cn:
        require_const(a[1], "Jacobi modulus");
        return chain(negate(A(Func::jacobi_sn, a) * A(Func::jacobi_dn, a)), a[0], s, table);
    case Func::jacobi_dn:
        require_const(a[1], "Jacobi modulus");
        return chain(negate(Expression::power(a[1], C(2.0)) * A(Func::jacobi_sn, a) * A(Func::jacobi_cn, a)),
                     a[0], s, table);
    case Func::bessel_j: {
        require_const(a[0], "Bessel order");
        Expression lo = A(Func::bessel_j, {a[0] - C(1.0), a[1]});
        Expression hi = A(Func::bessel_j, {a[0] + C(1.0), a[1]});
        return chain((lo - hi) / C(2.0), a[1], s, table);
    }
    case Func::airy_ai: return chain(A(Func::airy_aip, a), a[0], s, table);
    case Func::airy_bi: return chain(A(Func::airy_bip, a), a[0], s, table);
    case Func::airy_aip: return chain(a[0] * A(Func::airy_ai, a), a[0], s, table);
    case Func::airy_bip: return chain(a[0] * A(Func::airy_bi, a), a[0], s, table);
    case Func::elliptic_f: {
        require_const(a[1], "elliptic modulus");
        Expression y2 = Expression::power(a[0], C(2.0));
        Expression r1 = A(Func::sqrt, {C(1.0) - y2});
        Expression r2 = A(Func::sqrt, {C(1.0) - Expression::power(a[1], C(2.0)) * y2});
        return d1(a[0], s, table) / (r1 * r2);
    }
    case Func::cosh_sqrt: {
        Expression r = A(Func::sqrt, {a[0]});
        return chain(A(Func::sinh, {r}) / (C(2.0) * r), a[0], s, table);
    }
    }
    throw Error("unhandled function in differentiate");
}

Expression d1(const Expression& e, const std::string& s, const SymbolTable* table) {
    if (!depends_on(e, s, table)) return C(0.0);
    switch (e.kind()) {
    case Kind::constant: return C(0.0);
    case Kind::symbol:
        if (e.name() == s) return C(1.0);
        return Expression::derivative(e.name(), s == "x" ? 1 : 0, s == "t" ? 1 : 0);
    case Kind::derivative:
        return Expression::derivative(e.name(), e.nx() + (s == "x"), e.nt() + (s == "t"));
    case Kind::sum: {
        std::vector<Expression> t;
        for (const auto& c : e.children()) t.push_back(d1(c, s, table));
        return Expression::sum(std::move(t));
    }
    case Kind::product: {
        std::vector<Expression> t;
        const auto& f = e.children();
        for (std::size_t i = 0; i < f.size(); ++i) {
            if (!depends_on(f[i], s, table)) continue;
            std::vector<Expression> g = f;
            g[i] = d1(f[i], s, table);
            t.push_back(Expression::product(std::move(g)));
        }
        return Expression::sum(std::move(t));
    }
    case Kind::quotient: {
        const Expression& n = e.children()[0];
        const Expression& d = e.children()[1];
        if (!depends_on(d, s, table)) return d1(n, s, table) / d;
        return (d1(n, s, table) * d - n * d1(d, s, table)) / Expression::power(d, C(2.0));
    }
    case Kind::power: {
        const Expression& b = e.children()[0];
        const Expression& x = e.children()[1];
        if (!depends_on(x, s, table))
            return x * Expression::power(b, x - C(1.0)) * d1(b, s, table);
        return e * (d1(x, s, table) * Expression::apply(Func::log, {b}) + x * d1(b, s, table) / b);
    }
    case Kind::apply: return d_apply(e, s, table);
    }
    throw Error("unhandled node in differentiate");
}

}  // namespace

Expression differentiate(const Expression& e, const std::string& s, int order, const SymbolTable* table) {
    if (order < 0) throw Error("differentiation order must be non-negative");
    if (table && !table->symbols.count(s) && !table->fields.count(s))
        throw UnboundSymbol(s);
    Expression r = e;
    for (int k = 0; k < order; ++k) r = simplify_basic(d1(r, s, table));
    return r;
}

// ---------------------------------------------------------------- simplify

namespace {

// Split a term into (numeric coefficient, remaining factors).
std::pair<cplx, Expression> split_coefficient(const Expression& t) {
    if (t.kind() == Kind::constant) return {t.value(), C(1.0)};
    if (t.kind() == Kind::product && t.children()[0].kind() == Kind::constant) {
        std::vector<Expression> rest(t.children().begin() + 1, t.children().end());
        return {t.children()[0].value(), Expression::product(std::move(rest))};
    }
    return {1.0, t};
}

Expression with_coefficient(cplx c, const Expression& rest) {
    if (rest.is_constant(1.0)) return C(c);
    if (c == 1.0) return rest;
    return Expression::product({C(c), rest});
}

}  // namespace

Expression simplify_basic(const Expression& e) {
    switch (e.kind()) {
    case Kind::constant:
    case Kind::symbol:
    case Kind::derivative: return e;
    case Kind::apply: {
        std::vector<Expression> a;
        for (const auto& c : e.children()) a.push_back(simplify_basic(c));
        return Expression::apply(e.func(), std::move(a));
    }
    case Kind::sum: {
        std::vector<Expression> flat;
        for (const auto& c : e.children()) {
            Expression s = simplify_basic(c);
            if (s.kind() == Kind::sum) flat.insert(flat.end(), s.children().begin(), s.children().end());
            else flat.push_back(s);
        }
        cplx constant = 0.0;
        std::size_t constant_pos = std::string::npos;
        std::vector<std::pair<cplx, Expression>> groups;
        std::vector<std::string> keys;
        for (const auto& t : flat) {
            if (t.kind() == Kind::constant) {
                if (constant_pos == std::string::npos) constant_pos = groups.size();
                constant += t.value();
                continue;
            }
            auto [c, rest] = split_coefficient(t);
            std::string key = print(rest);
            auto it = std::find(keys.begin(), keys.end(), key);
            if (it == keys.end()) {
                keys.push_back(key);
                groups.emplace_back(c, rest);
            } else {
                groups[std::size_t(it - keys.begin())].first += c;
            }
        }
        std::vector<Expression> out;
        for (std::size_t i = 0; i <= groups.size(); ++i) {
            if (i == constant_pos && constant != 0.0) out.push_back(C(constant));
            if (i < groups.size() && groups[i].first != 0.0) out.push_back(with_coefficient(groups[i].first, groups[i].second));
        }
        return Expression::sum(std::move(out));
    }
    case Kind::product: {
        std::vector<Expression> flat;
        for (const auto& c : e.children()) {
            Expression s = simplify_basic(c);
            if (s.kind() == Kind::product) flat.insert(flat.end(), s.children().begin(), s.children().end());
            else flat.push_back(s);
        }
        cplx constant = 1.0;
        std::vector<Expression> rest;
        for (const auto& f : flat) {
            if (f.kind() == Kind::constant) constant *= f.value();
            else rest.push_back(f);
        }
        if (constant == 0.0) return C(0.0);
        return with_coefficient(constant, Expression::product(std::move(rest)));
    }
    case Kind::quotient: {
        Expression n = simplify_basic(e.children()[0]);
        Expression d = simplify_basic(e.children()[1]);
        if (n.is_constant(0.0)) return C(0.0);
        if (d.is_constant(1.0)) return n;
        if (n.kind() == Kind::constant && d.kind() == Kind::constant && d.value() != 0.0)
            return C(n.value() / d.value());
        return Expression::quotient(n, d);
    }
    case Kind::power: {
        Expression b = simplify_basic(e.children()[0]);
        Expression x = simplify_basic(e.children()[1]);
        if (x.is_constant(0.0)) return C(1.0);
        if (x.is_constant(1.0)) return b;
        if (b.is_constant(1.0)) return C(1.0);
        if (b.kind() == Kind::constant && x.kind() == Kind::constant) {
            Expression p = Expression::power(b, x);
            try {
                return C(evaluate(p, {}));
            } catch (const Error&) {
                return p;
            }
        }
        return Expression::power(b, x);
    }
    }
    return e;
}

// ---------------------------------------------------------------- evaluation

namespace {

cplx ipow(cplx b, long n) {
    if (n < 0) return 1.0 / ipow(b, -n);
    cplx r = 1.0;
    while (n > 0) {
        if (n & 1) r *= b;
        n >>= 1;
        if (n) b *= b;
    }
    return r;
}

bool integer_valued(cplx v) {
    return v.imag() == 0.0 && v.real() == std::round(v.real()) && std::abs(v.real()) < 1e9;
}

cplx power_value(cplx b, cplx x) {
    if (integer_valued(x)) {
        if (b == 0.0 && x.real() < 0.0) throw DomainError("zero raised to a negative power");
        return ipow(b, long(x.real()));
    }
    if (b == 0.0) {
        if (x.real() > 0.0) return 0.0;
        throw DomainError("zero raised to a non-positive power");
    }
    return std::pow(b, x);
}

}  // namespace

cplx apply_function(Func f, const std::vector<cplx>& a) {
    using namespace special;
    switch (f) {
    case Func::exp: return std::exp(a[0]);
    case Func::log:
        if (a[0] == 0.0) throw DomainError("log of zero");
        return std::log(a[0]);
    case Func::sin: return std::sin(a[0]);
    case Func::cos: return std::cos(a[0]);
    case Func::tan: return std::tan(a[0]);
    case Func::sinh: return std::sinh(a[0]);
    case Func::cosh: return std::cosh(a[0]);
    case Func::tanh: return std::tanh(a[0]);
    case Func::sqrt: return std::sqrt(a[0]);
    case Func::arctan:
        if (a[0] == cplx(0.0, 1.0) || a[0] == cplx(0.0, -1.0)) throw DomainError("arctan branch point");
        return std::atan(a[0]);
    case Func::jacobi_sn: return jacobi_elliptic(JacobiKind::sn, a[0], a[1]);
    case Func::jacobi_cn: return jacobi_elliptic(JacobiKind::cn, a[0], a[1]);
    case Func::jacobi_dn: return jacobi_elliptic(JacobiKind::dn, a[0], a[1]);
    case Func::bessel_j: return bessel_j(a[0], a[1]);
    case Func::airy_ai: return airy(AiryKind::ai, a[0]);
    case Func::airy_bi: return airy(AiryKind::bi, a[0]);
    case Func::airy_aip: return airy(AiryKind::aip, a[0]);
    case Func::airy_bip: return airy(AiryKind::bip, a[0]);
    case Func::elliptic_f: return elliptic_f(a[0], a[1]);
    case Func::cosh_sqrt: return cosh_sqrt(a[0]);
    }
    throw Error("unhandled function");
}

Jet apply_function(Func f, const std::vector<Jet>& a) {
    using namespace special;
    const Jet& g = a[0];
    int n = g.orders().total();
    auto constant_arg = [&](const Jet& j, const char* what) {
        if (!j.is_constant()) throw DomainError(std::string(what) + " must not vary across the jet");
        return j.value();
    };
    switch (f) {
    case Func::exp: return intlab::exp(g);
    case Func::log: return intlab::log(g);
    case Func::sin: return intlab::sin(g);
    case Func::cos: return intlab::cos(g);
    case Func::tan: return intlab::tan(g);
    case Func::sinh: return intlab::sinh(g);
    case Func::cosh: return intlab::cosh(g);
    case Func::tanh: return intlab::tanh(g);
    case Func::sqrt: return intlab::sqrt(g);
    case Func::arctan: return intlab::atan(g);
    case Func::jacobi_sn:
        return compose(jacobi_series(JacobiKind::sn, g.value(), constant_arg(a[1], "Jacobi modulus"), n), g);
    case Func::jacobi_cn:
        return compose(jacobi_series(JacobiKind::cn, g.value(), constant_arg(a[1], "Jacobi modulus"), n), g);
    case Func::jacobi_dn:
        return compose(jacobi_series(JacobiKind::dn, g.value(), constant_arg(a[1], "Jacobi modulus"), n), g);
    case Func::bessel_j: {
        cplx nu = constant_arg(a[0], "Bessel order");
        return compose(bessel_series(nu, a[1].value(), n), a[1]);
    }
    case Func::airy_ai: return compose(airy_series(AiryKind::ai, g.value(), n), g);
    case Func::airy_bi: return compose(airy_series(AiryKind::bi, g.value(), n), g);
    case Func::airy_aip: return compose(airy_series(AiryKind::aip, g.value(), n), g);
    case Func::airy_bip: return compose(airy_series(AiryKind::bip, g.value(), n), g);
    case Func::elliptic_f:
        return compose(elliptic_f_series(g.value(), constant_arg(a[1], "elliptic modulus"), n), g);
    case Func::cosh_sqrt: return compose(cosh_sqrt_series(g.value(), n), g);
    }
    throw Error("unhandled function");
}

cplx evaluate(const Expression& e, const Bindings& b) {
    switch (e.kind()) {
    case Kind::constant: return e.value();
    case Kind::symbol: {
        auto it = b.values.find(e.name());
        if (it == b.values.end()) throw UnboundSymbol(e.name());
        return it->second;
    }
    case Kind::derivative: {
        if (b.derivative) return b.derivative(e.name(), e.nx(), e.nt());
        auto it = b.values.find(print(e));
        if (it == b.values.end()) throw UnboundSymbol(print(e));
        return it->second;
    }
    case Kind::sum: {
        cplx s = 0.0;
        for (const auto& c : e.children()) s += evaluate(c, b);
        return s;
    }
    case Kind::product: {
        cplx p = 1.0;
        for (const auto& c : e.children()) p *= evaluate(c, b);
        return p;
    }
    case Kind::quotient: {
        cplx n = evaluate(e.children()[0], b);
        cplx d = evaluate(e.children()[1], b);
        if (d == 0.0) throw DomainError("division by zero");
        return n / d;
    }
    case Kind::power: return power_value(evaluate(e.children()[0], b), evaluate(e.children()[1], b));
    case Kind::apply: {
        std::vector<cplx> a;
        for (const auto& c : e.children()) a.push_back(evaluate(c, b));
        return apply_function(e.func(), a);
    }
    }
    throw Error("unhandled node in evaluate");
}

Jet evaluate_jet(const Expression& e, const std::map<std::string, Jet>& jets, const Params& constants,
                 const Point& base, const Orders& orders) {
    auto rec = [&](const Expression& x) { return evaluate_jet(x, jets, constants, base, orders); };
    switch (e.kind()) {
    case Kind::constant: return Jet::constant(e.value(), base, orders);
    case Kind::symbol: {
        auto it = jets.find(e.name());
        if (it != jets.end()) return it->second;
        auto c = constants.find(e.name());
        if (c != constants.end()) return Jet::constant(c->second, base, orders);
        throw UnboundSymbol(e.name());
    }
    case Kind::derivative: throw Error("derivative markers cannot be evaluated as jets: " + print(e));
    case Kind::sum: {
        Jet s(base, orders);
        for (const auto& c : e.children()) s += rec(c);
        return s;
    }
    case Kind::product: {
        Jet p = rec(e.children()[0]);
        for (std::size_t i = 1; i < e.children().size(); ++i) {
            const Expression& c = e.children()[i];
            if (c.kind() == Kind::constant) p *= c.value();
            else p = p * rec(c);
        }
        return p;
    }
    case Kind::quotient: {
        Jet n = rec(e.children()[0]);
        const Expression& d = e.children()[1];
        if (d.kind() == Kind::constant) {
            if (d.value() == 0.0) throw DomainError("division by zero");
            return n / d.value();
        }
        return n / rec(d);
    }
    case Kind::power: {
        Jet b = rec(e.children()[0]);
        const Expression& x = e.children()[1];
        if (free_symbols(x).empty() && derivative_markers(x).empty()) return pow(b, evaluate(x, {}));
        return pow(b, rec(x));
    }
    case Kind::apply: {
        std::vector<Jet> a;
        for (const auto& c : e.children()) a.push_back(rec(c));
        return apply_function(e.func(), a);
    }
    }
    throw Error("unhandled node in evaluate_jet");
}

// ---------------------------------------------------------------- queries

namespace {

void collect(const Expression& e, std::set<std::string>& syms, std::map<std::string, std::pair<int, int>>& marks) {
    if (e.kind() == Kind::symbol) syms.insert(e.name());
    if (e.kind() == Kind::derivative) {
        auto& m = marks[e.name()];
        m.first = std::max(m.first, e.nx());
        m.second = std::max(m.second, e.nt());
    }
    for (const auto& c : e.children()) collect(c, syms, marks);
}

}  // namespace

std::set<std::string> free_symbols(const Expression& e) {
    std::set<std::string> s;
    std::map<std::string, std::pair<int, int>> m;
    collect(e, s, m);
    return s;
}

std::map<std::string, std::pair<int, int>> derivative_markers(const Expression& e) {
    std::set<std::string> s;
    std::map<std::string, std::pair<int, int>> m;
    collect(e, s, m);
    return m;
}

std::vector<Expression> terms(const Expression& e) {
    if (e.kind() == Kind::sum) return e.children();
    return {e};
}

}  // namespace intlab::expr

namespace intlab::expr {

Expression substitute(const Expression& e, const std::map<std::string, Expression>& repl) {
    switch (e.kind()) {
    case Kind::constant:
    case Kind::derivative:
        return e;
    case Kind::symbol: {
        auto it = repl.find(e.name());
        return it == repl.end() ? e : it->second;
    }
    default:
        break;
    }
    std::vector<Expression> kids;
    kids.reserve(e.children().size());
    for (const auto& c : e.children()) kids.push_back(substitute(c, repl));
    switch (e.kind()) {
    case Kind::sum: return Expression::sum(std::move(kids));
    case Kind::product: return Expression::product(std::move(kids));
    case Kind::power: return Expression::power(kids[0], kids[1]);
    case Kind::quotient: return Expression::quotient(kids[0], kids[1]);
    default: return Expression::apply(e.func(), std::move(kids));
    }
}

}  // namespace intlab::expr
