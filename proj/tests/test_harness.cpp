#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qosc/harness.hpp"

#include <set>

using namespace qosc;
using namespace qosc::harness;

TEST_CASE("catalogue ids are unique and map to single operations") {
    const auto infos = check_catalogue();
    std::set<std::string> ids;
    for (const auto& info : infos) {
        CHECK(ids.insert(info.id).second);
        CHECK(!info.anchor.empty());
        CHECK(info.module_op.find("::") != std::string::npos);
        // one operation in one module
        CHECK(info.module_op.find("::") == info.module_op.rfind("::"));
    }
    CHECK(infos.size() >= 20);
}

TEST_CASE("scenario validation") {
    Scenario s;
    s.q_text = "not-a-number";
    CHECK_THROWS_AS(validate(s), std::invalid_argument);
    s = Scenario{};
    s.d = 1;
    CHECK_THROWS_AS(validate(s), std::invalid_argument);
    s = Scenario{};
    s.checks = {"no_such_check"};
    CHECK_THROWS_AS(validate(s), std::invalid_argument);
    s = Scenario{};
    s.d_sub = 30; // exceeds d
    CHECK_THROWS_AS(validate(s), std::invalid_argument);
    CHECK_NOTHROW(validate(Scenario{}));
}

TEST_CASE("full exact scenario at q = 1/2 passes everything") {
    Scenario s;
    s.q_text = "1/2";
    s.d = 16;
    const auto report = run_scenario(s);
    CHECK(report.all_passed());
    CHECK(exit_code(report) == 0);
    for (const auto& r : report.records) {
        CHECK((r.verdict == "pass" || r.verdict == "skipped"));
        CHECK(!r.anchor.empty());
    }
}

TEST_CASE("single-check scenario produces a single record") {
    Scenario s;
    s.q_text = "2";
    s.mode = ArithmeticMode::Float;
    s.d = 16;
    s.checks = {"oq_residual"};
    const auto report = run_scenario(s);
    REQUIRE(report.records.size() == 1);
    CHECK(report.records[0].id == "oq_residual");
    CHECK(report.records[0].verdict == "pass");
    CHECK(!report.records[0].exact);
    CHECK(report.records[0].residual < 1e-12);
}

TEST_CASE("precondition failures become error records with nonzero exit") {
    Scenario s;
    s.q_text = "1/2";
    s.d = 2;
    s.d_sub = 1;
    s.depth = 1;
    s.checks = {"x5_expansion"};
    const auto report = run_scenario(s);
    REQUIRE(report.records.size() == 1);
    CHECK(report.records[0].verdict == "error");
    CHECK(report.records[0].detail.find("interior exhausted") != std::string::npos);
    CHECK(exit_code(report) == 1);
}

TEST_CASE("skipped checks report the reason and do not fail the run") {
    Scenario s;
    s.q_text = "-1/2";
    s.d = 16;
    s.checks = {"extension_normality", "oq_residual"};
    const auto report = run_scenario(s);
    REQUIRE(report.records.size() == 2);
    const auto& ext = report.records[0].id == "extension_normality" ? report.records[0]
                                                                    : report.records[1];
    CHECK(ext.verdict == "skipped");
    CHECK(!ext.detail.empty());
    CHECK(exit_code(report) == 0);
}

TEST_CASE("reports are deterministic modulo timestamp and timings") {
    Scenario s;
    s.q_text = "1/2";
    s.d = 12;
    s.seed = 777;
    const auto a = normalized_for_comparison(to_json(run_scenario(s)));
    const auto b = normalized_for_comparison(to_json(run_scenario(s)));
    CHECK(a.dump() == b.dump());
}

TEST_CASE("the default battery passes and is deterministic") {
    const auto a = run_default_battery(123);
    CHECK(a.all_passed());
    const auto b = run_default_battery(123);
    CHECK(normalized_for_comparison(to_json(a)).dump() ==
          normalized_for_comparison(to_json(b)).dump());

    // battery covers the full q grid
    std::set<std::string> qs;
    for (const auto& r : a.records) {
        qs.insert(r.inputs.value("q", ""));
    }
    CHECK(qs == std::set<std::string>{"-1/2", "0/1", "1/2", "1/1", "2/1"});
}

TEST_CASE("float-mode scenarios pass across all regimes") {
    for (const char* qt : {"0.3", "-0.7", "0.95", "2.0", "3.5"}) {
        Scenario s;
        s.q_text = qt;
        s.mode = ArithmeticMode::Float;
        const auto report = run_scenario(s);
        for (const auto& r : report.records) {
            INFO("q=", qt, " check=", r.id, " detail=", r.detail);
            CHECK((r.verdict == "pass" || r.verdict == "skipped"));
        }
    }
}

TEST_CASE("csv flattening has one line per record plus header") {
    Scenario s;
    s.q_text = "1/2";
    s.d = 12;
    s.checks = {"oq_residual", "poly_ccr"};
    const auto report = run_scenario(s);
    const std::string csv = report_csv(report);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
    CHECK(csv.rfind("id,q,mode,verdict", 0) == 0);
}
