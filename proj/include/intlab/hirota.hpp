#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "intlab/residual.hpp"

namespace intlab::hirota {

// D_x^m D_t^n a.b from jets of a and b at the same point; the jets must
// carry orders (m, n).
cplx hirota_D(int m, int n, const Jet& a, const Jet& b);
cplx hirota_D(int m, int n, const Field& a, const Field& b, const Point& p);

// Residual terms from the role jets (orders at least those declared).
using BilinearFn = std::function<std::vector<cplx>(const std::map<std::string, Jet>&, const Params&)>;

struct BilinearEquation {
    std::string tag;
    std::string about;
    std::vector<std::string> roles;
    std::vector<std::string> params;
    Orders orders;
    BilinearFn terms;
};

class BilinearRegistry {
public:
    static const BilinearRegistry& builtin();
    const BilinearEquation& get(const std::string& tag) const;
    bool contains(const std::string& tag) const;
    std::vector<std::string> tags() const;

private:
    std::vector<BilinearEquation> eqs_;
    std::map<std::string, std::size_t> index_;
};

// N-field variants: roles psi, psi1..psiN.
BilinearEquation neg_flow(int N);
// roles psi, psibar0..psibarN.
BilinearEquation second_flow(int N);
// roles psi, psibar_k, psibar_km1 (omitted for k = 0).
BilinearEquation second_chain(int k);

residual::Residual bilinear_residual(const BilinearEquation& eq, const residual::FieldMap& fields,
                                     const Params& params, const Point& p);

residual::Report bilinear_scan(const BilinearEquation& eq, const residual::FieldMap& fields, const Params& params,
                               const Region& region, std::size_t count, double tolerance);
residual::Report bilinear_check_points(const BilinearEquation& eq, const residual::FieldMap& fields,
                                       const Params& params, const std::vector<Point>& points, double tolerance);

struct ChainReport {
    int K = 0;
    std::vector<double> max_rel;  // per k = 0..K
    double worst = 0.0;
    std::size_t points = 0;
};

// psibar_k are the lambda-Taylor coefficients of psi1 at lambda = 0, read
// from p-axis jets; checks D_x^2 psi.psibar_k = psi psibar_{k-1}.
ChainReport second_hierarchy_chain_check(const Field& psi, const Field& psi1_of_lambda, int K,
                                         const std::vector<Point>& points);

}  // namespace intlab::hirota
