#pragma once

#include "qosc/qparam.hpp"
#include "qosc/shiftops.hpp"

#include <json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace qosc::harness {

/// One run configuration: the deformation parameter, arithmetic mode, the
/// truncation dimensions, the seed, and an optional subset of checks (empty
/// selects every applicable check).
struct Scenario {
    std::string q_text = "1/2";
    ArithmeticMode mode = ArithmeticMode::Exact;
    double tol = 1e-12;
    int d = 24;      // truncation dimension of shift operators
    int blocks = 6;  // M of the block extension
    int n_max = 8;   // polynomial/moment degree cap
    int depth = 2;   // p of the positivity form and the norm identity
    int d_sub = 6;   // basis vectors entering the positivity form
    std::uint64_t seed = shiftops::kDefaultSeed;
    std::vector<std::string> checks;
};

/// Throws std::invalid_argument naming the offending field.
void validate(const Scenario& s);

struct CheckRecord {
    std::string id;
    std::string anchor; // the identity the check verifies, or "plumbing"
    nlohmann::json inputs;
    double residual = 0.0;
    bool exact = false;
    std::string verdict; // "pass" | "fail" | "skipped" | "error"
    std::string detail;
    double elapsed_ms = 0.0;
};

struct Report {
    nlohmann::json metadata;
    std::vector<CheckRecord> records;

    bool all_passed() const; // no "fail" and no "error" records
};

struct CheckInfo {
    std::string id;
    std::string anchor;
    std::string module_op; // the single module operation behind the check
};

/// Static catalogue of every registered check.
std::vector<CheckInfo> check_catalogue();

/// Runs the selected checks; per-check errors become "error" records instead
/// of aborting the run.
Report run_scenario(const Scenario& s);

/// The default battery: every applicable check over q in
/// {-1/2, 0, 1/2, 1, 2} in exact mode with the default dimensions.
Report run_default_battery(std::uint64_t seed = shiftops::kDefaultSeed);

nlohmann::json to_json(const Report& report);

/// Record table with a header row, one line per record.
std::string report_csv(const Report& report);

/// Strips the timestamp and the per-record timings, the only fields allowed
/// to differ between reruns of an identical scenario.
nlohmann::json normalized_for_comparison(nlohmann::json report_json);

/// 0 when everything passed or was skipped, 1 otherwise.
int exit_code(const Report& report);

} // namespace qosc::harness
