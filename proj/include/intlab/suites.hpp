#pragma once

#include <functional>
#include <string>
#include <vector>

#include "json.hpp"

#include "intlab/common.hpp"
#include "intlab/jet.hpp"
#include "intlab/sampling.hpp"

namespace intlab::suites {

inline constexpr const char* kVersion = "0.1.0";

struct CaseResult {
    std::string name;
    bool informational = false;
    bool pass = false;
    double metric = 0.0;     // worst residual or discrepancy of the case
    double tolerance = 0.0;
    nlohmann::ordered_json detail;
    std::string error;       // set when the case threw
};

struct Case {
    std::string name;
    bool informational = false;
    std::function<CaseResult()> run;
};

struct Suite {
    std::string name;
    std::string about;
    std::vector<Case> cases;
};

struct RunReport {
    std::string suite;
    std::vector<CaseResult> cases;  // in case order
    bool pass = false;              // every non-informational case passed
    double wall_seconds = 0.0;
    nlohmann::ordered_json to_json() const;
};

std::vector<std::string> suite_names();
std::string suite_about(const std::string& name);
// Overrides reach the catalog-driven cases only. Unknown names are a UsageError.
Suite make_suite(const std::string& name, const Params& overrides = {});
// Cases run concurrently; the report keeps case order.
RunReport run_suite(const Suite& s);

// "x=a:b,t=c:d"; t may be omitted (then t = 0).
Region parse_region(const std::string& text);
// "x=a:b:n,t=a:b:n"; t may be omitted for univariate equations. A degenerate
// axis (n < 2 or a >= b) is a UsageError.
std::vector<Point> parse_grid(const std::string& text);

}  // namespace intlab::suites
