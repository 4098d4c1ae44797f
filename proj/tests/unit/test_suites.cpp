#include "doctest.h"

#include "intlab/suites.hpp"

using namespace intlab;
using namespace intlab::suites;

namespace {

nlohmann::ordered_json without_clock(nlohmann::ordered_json j) {
    j.erase("wall_clock_seconds");
    return j;
}

}  // namespace

TEST_CASE("suite registry") {
    auto names = suite_names();
    CHECK(names == std::vector<std::string>{"bt-core", "symmetry", "bilinear", "reductions-pii",
                                            "reductions-elliptic", "negative-flow", "f0f1"});
    for (const auto& n : names) CHECK(!suite_about(n).empty());
    CHECK_THROWS_AS(make_suite("no-such-suite"), UsageError);
}

TEST_CASE("region and grid parsing") {
    Region r = parse_region("x=-1:2,t=0.5:1");
    CHECK(r.x0 == -1.0);
    CHECK(r.x1 == 2.0);
    CHECK(r.t0 == 0.5);
    CHECK(r.t1 == 1.0);
    CHECK(parse_grid("x=0:1:3,t=0:1:2").size() == 6);
    CHECK(parse_grid("x=0:1:5").size() == 5);
    CHECK_THROWS_AS(parse_grid("x=0:0:1"), UsageError);
    CHECK_THROWS_AS(parse_grid("x=1:0:4"), UsageError);
    CHECK_THROWS_AS(parse_region("x=0:1,y=0:1"), UsageError);
    CHECK_THROWS_AS(parse_region("x=a:1"), UsageError);
}

TEST_CASE("suite output is deterministic apart from the wall clock") {
    auto a = run_suite(make_suite("negative-flow")).to_json();
    auto b = run_suite(make_suite("negative-flow")).to_json();
    CHECK(without_clock(a).dump() == without_clock(b).dump());
    CHECK(a["suite"] == "negative-flow");
    CHECK(a["version"] == kVersion);
    CHECK(a.contains("wall_clock_seconds"));
}

TEST_CASE("informational cases never decide a suite") {
    Suite s{"synthetic", "", {}};
    s.cases.push_back({"ok", false, [] { return CaseResult{"ok", false, true, 0.0, 1.0, {}, ""}; }});
    s.cases.push_back({"as printed", true, [] { return CaseResult{"as printed", true, false, 1.0, 1e-9, {}, ""}; }});
    auto r = run_suite(s);
    CHECK(r.pass);
    s.cases.push_back({"throws", false, []() -> CaseResult { throw DomainError("boom"); }});
    r = run_suite(s);
    CHECK(!r.pass);
    CHECK(r.cases[2].error == "boom");
    CHECK(r.cases.size() == 3);
}

TEST_CASE("every builtin suite passes") {
    for (const auto& n : suite_names()) {
        auto r = run_suite(make_suite(n));
        for (const auto& c : r.cases)
            if (!c.informational) CHECK_MESSAGE(c.pass, (n + ": " + c.name + " " + c.error));
        CHECK(r.pass);
    }
}
