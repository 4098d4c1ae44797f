#pragma once

#include <functional>
#include <string>
#include <vector>

#include "intlab/common.hpp"
#include "intlab/expr.hpp"
#include "intlab/jet.hpp"

namespace intlab {

using Evaluator = std::function<Jet(const Point&, const Orders&)>;

// Denominator whose zero set is a pole of the owning field.
struct Locus {
    std::string label;
    std::function<cplx(cplx x, cplx t)> f;
};

constexpr double kSingEps = 1e-6;
constexpr double kLocusMargin = 0.05;

// Named, parameterized complex field of (x, t), optionally with a parameter
// axis p. Univariate fields (in xi or z) use the x axis.
class Field {
public:
    Field() = default;
    Field(std::string name, Params params, Evaluator eval, std::vector<Locus> loci = {});

    const std::string& name() const { return name_; }
    const Params& params() const { return params_; }
    const std::vector<Locus>& loci() const { return loci_; }
    bool valid() const { return bool(eval_); }

    Jet jet(const Point& p, const Orders& o) const;
    cplx value(cplx x, cplx t = 0.0) const;

    // True when a declared locus passes within `margin` of p in each
    // coordinate, or is smaller than kSingEps at p.
    bool near_locus(const Point& p, double margin = kLocusMargin) const;

    Field renamed(std::string name) const;
    Field with_loci(std::vector<Locus> extra) const;

private:
    std::string name_;
    Params params_;
    Evaluator eval_;
    std::vector<Locus> loci_;
};

// Which expression symbols map to the jet axes.
struct FieldVars {
    std::string x = "x";
    std::string t = "t";      // empty for univariate fields
    std::string p;            // optional parameter-axis symbol, e.g. "lambda"
};

// Closed-form field from expression text; remaining free symbols must be in
// params. Singular loci are given as expression texts in the same variables.
Field expression_field(const std::string& name, const std::string& text, const Params& params,
                       const std::vector<std::string>& singular = {}, const FieldVars& vars = {});

Field expression_field(const std::string& name, const expr::Expression& e, const Params& params,
                       const std::vector<expr::Expression>& singular = {}, const FieldVars& vars = {});

Field constant_field(const std::string& name, cplx value);

// n-th partial derivative along an axis.
Field derivative(const Field& f, Axis axis, int n = 1);

// f(arg) for a univariate field f (in x) and an (x, t, p) jet argument.
Jet compose_univariate(const Field& f, const Jet& arg);

// G(x) = integral from anchor to x of f along the straight segment, with
// t and p coefficients integrated by adaptive Gauss-Kronrod quadrature.
Field antiderivative_x(const Field& f, cplx anchor, const std::string& name = "");

}  // namespace intlab
