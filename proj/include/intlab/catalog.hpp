#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "intlab/field.hpp"

namespace intlab::catalog {

struct Entry {
    std::string name;
    Params params;                      // defaults
    std::string expr;                   // closed form, or empty
    std::map<std::string, std::string> where;  // auxiliary symbols substituted into expr
    std::string builtin;                // constructor name, or empty
    FieldVars vars;
    std::vector<std::string> singular;
    std::vector<std::string> solves;
    double tier = 1e-10;
    bool informational = false;
    std::map<std::string, std::string> options;  // builtin arguments
    int line = 0;
};

class Catalog {
public:
    // Parses manifest text; UsageError carries the offending line number.
    static Catalog parse(std::string_view text);
    static Catalog load(const std::string& path);
    // The manifest compiled into the library.
    static const Catalog& builtin();
    static std::string_view builtin_text();

    bool contains(const std::string& name) const { return index_.count(name) > 0; }
    const Entry& entry(const std::string& name) const;
    std::vector<std::string> names() const;

    // Overrides replace defaults for keys the entry declares; others are ignored.
    Field make(const std::string& name, const Params& overrides = {}) const;
    Params merged(const std::string& name, const Params& overrides) const;

    // Additive terms of a closed-form entry as separate fields.
    std::vector<Field> term_fields(const std::string& name, const Params& overrides = {}) const;

private:
    std::vector<Entry> entries_;
    std::map<std::string, std::size_t> index_;
};

// Parameter list "a=1, b=-0.5, c=1i" with values in the expression grammar.
Params parse_params(std::string_view text);

// Prolonged tuple (u, u1, v, g) of the pKdV/BT system with its auxiliaries.
struct Tuple {
    Field u, u1, v, g;
    cplx lambda = 1.0;
};

Tuple seed_family(cplx lambda, cplx c, cplx c0);
// Finite transformation generated by (e^v, 0, g, g^2/2).
Tuple levi_apply(const Tuple& s, cplx eps);
Field kdv_from_pkdv(const Field& u);
// u = -2 psi_x / psi.
Field cole_hopf(const Field& psi);

struct PiiSetup {
    cplx a4 = -3.0, lambda = 1.0, c2 = 0.0, c5 = 0.0, c3 = 0.0, c6 = 0.0, a7 = 1.0;
    static PiiSetup from(const Params& p);
};

struct PiiReconstruction {
    Tuple tuple;
    Field omega1, omega2;       // x-derivatives of u1 and u
    Field omega2_closed;        // closed form of u_x
    Field omega2_printed;       // the printed closed form, kept for comparison
};

// Builds (u, u1, v, g) from a PII solution P(xi) and G(xi) with
// G' = 1/(2P' + 2P^2 + xi); P and G are univariate fields in x.
PiiReconstruction pii_reconstruct(const Field& P, const Field& G, const PiiSetup& s);

// H = (P' + P^2 + xi/2)/(2 a7).
Field pii_H(const Field& P, cplx a7);
// G by quadrature of 1/(2P' + 2P^2 + xi) from an anchor.
Field pii_G_quadrature(const Field& P, cplx anchor);

struct CnoidalParams {
    cplx a2 = 1.0, a3 = 2.0, a6 = 0.0, lambda = 1.0, n = 0.8;
    static CnoidalParams from(const Params& p);
    cplx a5() const;
    cplx a7_stated() const;      // a3^2 (n^2-1)/(32 n^2 a2^4)
    cplx a7_consistent() const;  // a3^3 (n^2-1)/(32 n^2 a2^4)
};

// KdV solution assembled from the reduction u(t, z) with W of the cnoidal
// ansatz and G = integral W / a7 in closed form.
Field cnoidal_omega4(const CnoidalParams& p);

struct NamedFields {
    std::map<std::string, Field> fields;
    const Field& operator[](const std::string& k) const { return fields.at(k); }
};

NamedFields rational_family(cplx lambda = 1.0, cplx c2 = 0.0, cplx c5 = 0.0);
NamedFields bessel_family();
NamedFields cnoidal_family(const CnoidalParams& p);
NamedFields negative_flow_solutions();

}  // namespace intlab::catalog
