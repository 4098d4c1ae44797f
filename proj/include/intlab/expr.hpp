#pragma once

#include <functional>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "intlab/common.hpp"
#include "intlab/jet.hpp"

namespace intlab::expr {

enum class Kind { constant, symbol, sum, product, power, quotient, apply, derivative };

enum class Func {
    exp, log, sin, cos, tan, sinh, cosh, tanh, sqrt, arctan,
    jacobi_sn, jacobi_cn, jacobi_dn, bessel_j,
    airy_ai, airy_bi, airy_aip, airy_bip,
    elliptic_f, cosh_sqrt
};

const char* func_name(Func f);
int func_arity(Func f);
bool func_from_name(std::string_view name, Func& out);

struct Node;

// Immutable expression tree. Copies share structure.
class Expression {
public:
    Expression();  // constant 0

    static Expression constant(cplx v);
    static Expression symbol(std::string name);
    // Derivative marker `field_x...t...`: x-order first, then t-order.
    static Expression derivative(std::string field, int nx, int nt);
    static Expression sum(std::vector<Expression> terms);       // flattens nested sums
    static Expression product(std::vector<Expression> factors); // flattens nested products
    static Expression power(Expression base, Expression exponent);
    static Expression quotient(Expression num, Expression den);
    static Expression apply(Func f, std::vector<Expression> args);

    Kind kind() const;
    cplx value() const;              // constant
    const std::string& name() const; // symbol or derivative field
    int nx() const;                  // derivative marker orders
    int nt() const;
    Func func() const;
    const std::vector<Expression>& children() const;

    bool is_constant(cplx v) const;
    std::string str() const;

private:
    explicit Expression(std::shared_ptr<const Node> n) : n_(std::move(n)) {}
    std::shared_ptr<const Node> n_;
};

Expression operator+(const Expression& a, const Expression& b);
Expression operator-(const Expression& a, const Expression& b);
Expression operator*(const Expression& a, const Expression& b);
Expression operator/(const Expression& a, const Expression& b);
Expression negate(const Expression& a);

bool structurally_equal(const Expression& a, const Expression& b);

class SyntaxError : public Error {
public:
    SyntaxError(std::size_t offset, std::vector<std::string> expected, const std::string& detail);
    std::size_t offset;
    std::vector<std::string> expected;
};

class UnboundSymbol : public Error {
public:
    explicit UnboundSymbol(const std::string& name) : Error("unbound symbol '" + name + "'"), symbol(name) {}
    std::string symbol;
};

Expression parse(std::string_view text);
std::string print(const Expression& e);

// Declared symbols; names in `fields` are functions of (x, t) whose
// derivatives become markers.
struct SymbolTable {
    std::set<std::string> symbols;
    std::set<std::string> fields;
};

Expression differentiate(const Expression& e, const std::string& s, int order = 1,
                         const SymbolTable* table = nullptr);
Expression simplify_basic(const Expression& e);

struct Bindings {
    std::map<std::string, cplx> values;
    // Resolves derivative markers; nx = ny = 0 is never requested.
    std::function<cplx(const std::string& field, int nx, int nt)> derivative;
};

cplx evaluate(const Expression& e, const Bindings& b);

// Jet evaluation: symbols found in `jets` are used as-is, symbols in
// `constants` become constant jets. Derivative markers are rejected.
Jet evaluate_jet(const Expression& e, const std::map<std::string, Jet>& jets, const Params& constants,
                 const Point& base, const Orders& orders);

std::set<std::string> free_symbols(const Expression& e);  // excludes derivative markers
// Highest derivative orders requested per marker field.
std::map<std::string, std::pair<int, int>> derivative_markers(const Expression& e);

// Replaces free symbols (not derivative markers) by expressions.
Expression substitute(const Expression& e, const std::map<std::string, Expression>& repl);

// Top-level additive terms (a single term when e is not a sum).
std::vector<Expression> terms(const Expression& e);

// Numeric values of special functions used by the complex evaluator.
cplx apply_function(Func f, const std::vector<cplx>& args);
Jet apply_function(Func f, const std::vector<Jet>& args);

}  // namespace intlab::expr
