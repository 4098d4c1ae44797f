#pragma once

#include <map>
#include <string>
#include <vector>

#include "json.hpp"

#include "intlab/catalog.hpp"
#include "intlab/expr.hpp"
#include "intlab/field.hpp"
#include "intlab/sampling.hpp"

namespace intlab::residual {

using FieldMap = std::map<std::string, Field>;

// Residual written in the expression grammar over role fields and
// parameters. Univariate equations use x for their independent variable.
struct Equation {
    std::string tag;
    std::string about;
    std::vector<std::string> roles;
    std::vector<std::string> params;
    expr::Expression expression;
    std::vector<expr::Expression> terms;
    std::map<std::string, std::pair<int, int>> orders;  // per role
};

Equation make_equation(const std::string& tag, const std::string& text, const std::vector<std::string>& roles,
                       const std::string& about = "");

class Registry {
public:
    static const Registry& builtin();
    // Accepts tags case-insensitively, plus "expr:<text>" custom entries whose
    // roles are the derivative-marker fields and plain symbols not bound as params.
    Equation get(const std::string& tag, const Params& params = {}) const;
    bool contains(const std::string& tag) const;
    // Group tags (PROLONG, LINEARIZED) expand to their members.
    std::vector<std::string> expand(const std::string& tag) const;
    std::vector<std::string> tags() const;

private:
    std::vector<Equation> eqs_;
    std::map<std::string, std::size_t> index_;
    std::map<std::string, std::vector<std::string>> groups_;
};

struct Residual {
    cplx raw = 0.0;
    double rel = 0.0;
    std::vector<cplx> term_values;
};

// |raw| / (1 + sum |term|).
double relative(cplx raw, const std::vector<cplx>& terms);

// Throws UsageError on a missing role or parameter, SingularPoint when a
// field's declared locus vanishes at the point.
Residual residual_at(const Equation& eq, const FieldMap& fields, const Params& params, const Point& p);

struct PointResult {
    Point point;
    cplx raw;
    double rel;
};

struct Report {
    std::string equation;
    std::map<std::string, std::string> fields;  // role -> field name
    Params params;
    double tolerance = 0.0;
    std::vector<PointResult> points;
    double max_rel = 0.0;
    bool pass = false;
    std::size_t rejected = 0;  // candidates dropped as singular

    void finish();
    nlohmann::ordered_json to_json() const;
    std::string to_csv() const;
};

Report scan(const Equation& eq, const FieldMap& fields, const Params& params, const Region& region,
            std::size_t count, double tolerance);
// Explicit points; singular points are skipped and counted.
Report check_points(const Equation& eq, const FieldMap& fields, const Params& params,
                    const std::vector<Point>& points, double tolerance);

// Near-locus test over every field of the map.
bool admissible(const FieldMap& fields, const Point& p, double margin = kLocusMargin);

// sigma = e^v for a tuple carrying v.
Field nonlocal_symmetry_sigma(const catalog::Tuple& t);
// sigma = e^v with v integrated from (x_ref, t_ref) through the prolongation
// relations for v_x and v_t; rejects u == u1.
Field nonlocal_symmetry_sigma(const Field& u, const Field& u1, cplx lambda, cplx x_ref = 0.0, cplx t_ref = 0.0);

// sigma_psi = -(psi/2) integral psi1^2/psi^2 dx with a fixed basepoint.
Field bilinear_symmetry_sigma_psi(const Field& psi, const Field& psi1, cplx x_ref = 0.0);
// sigma = 2 psi_x sigma_psi/psi^2 - 2 sigma_psi_x/psi.
Field sigma_from_sigma_psi(const Field& psi, const Field& sigma_psi);

struct PointSymmetry {
    Field sigma, sigma1, sigma2, sigma3;
};
// sigma_f = X f_x + T f_t - R_f with the infinitesimals of the 7-parameter group.
PointSymmetry point_symmetry_fields(const catalog::Tuple& t, const std::array<cplx, 7>& c);

struct MiuraReport {
    double max_abs = 0.0;
    std::size_t points = 0;
};
// A = -beta_xx/(2 beta) + beta_x^2/(4 beta^2) against -theta_x - theta^2.
MiuraReport miura_identity_check(const Field& beta, const std::vector<Point>& points);

}  // namespace intlab::residual
