#include "qosc/harness.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>

namespace {

const std::map<std::string, std::vector<std::string>> kSubcommandChecks = {
    {"qcalc", {"basic_complement", "pascal_recurrence", "factorial_pochhammer", "qexp_duality"}},
    {"shift",
     {"oq_residual", "qcomm_left", "qcomm_right", "selfcommutator_diagonal", "hyponormality",
      "norm_bound", "bilateral_admissibility", "normal_solution"}},
    {"identity", {"x5_expansion", "x8_norm_identity", "pd_form"}},
    {"extend", {"extension_normality", "extension_consistency"}},
    {"classify", {"schmudgen_roundtrip", "schmudgen_reduction"}},
    {"moments",
     {"hankel_positivity", "quadrature_match", "radial_lift", "poly_ccr", "adjointness",
      "kernel_coefficients"}},
    {"suite", {}},
};

void print_report(const qosc::harness::Report& report) {
    for (const auto& r : report.records) {
        std::cout << "[" << r.verdict << "] " << r.id << " (q=" << r.inputs.value("q", "?")
                  << ", " << (r.exact ? "exact" : "float") << ") residual="
                  << qosc::format_double(r.residual);
        if (!r.detail.empty()) {
            std::cout << "  -- " << r.detail;
        }
        std::cout << '\n';
    }
    int pass = 0, fail = 0, skipped = 0, error = 0;
    for (const auto& r : report.records) {
        if (r.verdict == "pass") ++pass;
        else if (r.verdict == "fail") ++fail;
        else if (r.verdict == "skipped") ++skipped;
        else ++error;
    }
    std::cout << pass << " passed, " << fail << " failed, " << error << " errored, " << skipped
              << " skipped\n";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"verification lab for the deformed shift relation S*S - qSS* = I"};
    app.require_subcommand(1);

    std::string q_text;
    std::string mode_text = "exact";
    double tol = 1e-12;
    int dim = 24;
    int blocks = 6;
    std::uint64_t seed = qosc::shiftops::kDefaultSeed;
    std::string out_path;
    std::string csv_dir;

    for (const auto& [name, checks] : kSubcommandChecks) {
        auto* sub = app.add_subcommand(
            name, name == "suite" ? "run the full check battery" : "run the " + name + " checks");
        sub->add_option("--q", q_text, "deformation parameter, p/q or decimal");
        sub->add_option("--mode", mode_text, "exact|float")
            ->check(CLI::IsMember({"exact", "float"}));
        sub->add_option("--tol", tol, "float-mode tolerance");
        sub->add_option("--dim", dim, "truncation dimension d");
        sub->add_option("--blocks", blocks, "block count M of the extension");
        sub->add_option("--seed", seed, "seed for randomized checks");
        sub->add_option("--out", out_path, "write the JSON report here");
        sub->add_option("--csv", csv_dir, "write a CSV flattening into this directory");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    const std::string sub = app.get_subcommands().front()->get_name();

    qosc::harness::Report report;
    try {
        if (sub == "suite" && q_text.empty()) {
            report = qosc::harness::run_default_battery(seed);
        } else {
            qosc::harness::Scenario s;
            s.q_text = q_text.empty() ? "1/2" : q_text;
            s.mode = mode_text == "float" ? qosc::ArithmeticMode::Float
                                          : qosc::ArithmeticMode::Exact;
            s.tol = tol;
            s.d = dim;
            s.blocks = blocks;
            s.seed = seed;
            s.checks = kSubcommandChecks.at(sub);
            report = qosc::harness::run_scenario(s);
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }

    print_report(report);

    if (!out_path.empty()) {
        std::ofstream os(out_path);
        if (!os) {
            std::cerr << "invalid input: cannot open " << out_path << '\n';
            return 2;
        }
        os << qosc::harness::to_json(report).dump(2) << '\n';
    }
    if (!csv_dir.empty()) {
        std::filesystem::create_directories(csv_dir);
        std::ofstream os(std::filesystem::path(csv_dir) / "report.csv");
        if (!os) {
            std::cerr << "invalid input: cannot open " << csv_dir << "/report.csv\n";
            return 2;
        }
        os << qosc::harness::report_csv(report);
    }

    return qosc::harness::exit_code(report);
}
