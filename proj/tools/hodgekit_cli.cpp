// hodgekit: batch front-end for the deformation / period-map / lattice
// toolkit. Scenarios are JSON documents; reports are JSON (or CSV for
// continuation paths). Exit codes: 0 all checks pass, 1 a check failed,
// 2 malformed input or configuration.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "hodgekit/parallel.hpp"
#include "hodgekit/scenario.hpp"

namespace {

using json = nlohmann::ordered_json;

constexpr int kExitPass = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitInputError = 2;

// Line/column of a byte offset, for parse diagnostics.
std::pair<std::size_t, std::size_t> line_col(const std::string& text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

json parse_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw hodgekit::ScenarioInputError("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    std::string text = buf.str();
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        auto [line, col] = line_col(text, e.byte > 0 ? e.byte - 1 : 0);
        std::ostringstream msg;
        msg << path << ":" << line << ":" << col << ": malformed JSON: " << e.what();
        throw hodgekit::ScenarioInputError(msg.str());
    }
}

struct RunOptions {
    std::string scenario_file;
    std::string out_path;
    std::optional<std::uint64_t> seed;
    std::optional<double> tol;
    std::optional<int> degree;
    std::string expected_kind; // empty: any
};

int do_run(const RunOptions& opt) {
    json doc = parse_file(opt.scenario_file);
    if (!opt.expected_kind.empty()) {
        std::string kind = doc.is_object() ? doc.value("kind", "") : "";
        if (kind != opt.expected_kind)
            throw hodgekit::ScenarioInputError("scenario kind '" + kind +
                                               "' does not match subcommand '" +
                                               opt.expected_kind + "'");
    }

    hodgekit::ScenarioOverrides ov;
    ov.seed = opt.seed;
    ov.tol = opt.tol;
    ov.degree = opt.degree;
    hodgekit::ScenarioOutcome outcome = hodgekit::run_scenario(doc, ov);

    if (opt.out_path.empty()) {
        std::cout << outcome.report.dump(2) << "\n";
    } else {
        std::ofstream out(opt.out_path, std::ios::binary);
        if (!out) throw hodgekit::ScenarioInputError("cannot write '" + opt.out_path + "'");
        if (opt.out_path.size() >= 4 &&
            opt.out_path.compare(opt.out_path.size() - 4, 4, ".csv") == 0) {
            out << hodgekit::path_samples_csv(outcome.report);
        } else {
            out << outcome.report.dump(2) << "\n";
        }
        std::cout << (outcome.pass ? "PASS" : "FAIL") << " "
                  << outcome.report["scenario"].value("name", opt.scenario_file) << " ("
                  << outcome.report["checks"].size() << " checks) -> " << opt.out_path << "\n";
    }
    return outcome.pass ? kExitPass : kExitCheckFailed;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"hodgekit: deformation series, period maps and lattice arithmetic"};
    app.set_version_flag("--version", std::string(HODGEKIT_VERSION));
    app.require_subcommand(1);
    app.footer("Environment: HODGEKIT_THREADS caps internal parallelism; "
               "HODGEKIT_SCENARIO_DIR overrides the shipped scenario directory.");

    std::string dir = hodgekit::default_scenario_dir();

    RunOptions opt;
    std::uint64_t seed_val = 0;
    double tol_val = 0.0;
    int degree_val = 0;

    auto add_run_flags = [&](CLI::App* cmd) {
        cmd->add_option("--scenario", opt.scenario_file, "Scenario JSON file")
            ->required();
        cmd->add_option("--out", opt.out_path,
                        "Report path (.json, or .csv for a continuation path)");
        auto* s = cmd->add_option("--seed", seed_val, "Override the scenario seed");
        auto* t = cmd->add_option("--tol", tol_val, "Override the scenario eq_tol");
        auto* d = cmd->add_option("--degree", degree_val, "Override the truncation degree");
        cmd->callback([&, s, t, d] {
            if (s->count()) opt.seed = seed_val;
            if (t->count()) opt.tol = tol_val;
            if (d->count()) opt.degree = degree_val;
        });
    };

    CLI::App* run = app.add_subcommand("run", "Execute a scenario of any kind");
    add_run_flags(run);
    for (const char* kind :
         {"torus-deform", "dgla-solve", "period-map", "kahler-continue", "lattice"}) {
        CLI::App* sub = app.add_subcommand(kind, std::string("Execute a ") + kind + " scenario");
        add_run_flags(sub);
        sub->parse_complete_callback([&opt, kind] { opt.expected_kind = kind; });
    }

    CLI::App* list = app.add_subcommand("list-scenarios", "List shipped scenarios");
    list->add_option("--dir", dir, "Scenario directory");

    std::string describe_name;
    CLI::App* describe = app.add_subcommand("describe", "Describe a shipped scenario");
    describe->add_option("name", describe_name, "Scenario name")->required();
    describe->add_option("--dir", dir, "Scenario directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitInputError;
    }

    (void)hodgekit::max_threads(); // resolve the thread cap once, up front

    try {
        if (list->parsed()) {
            for (const auto& name : hodgekit::list_scenarios(dir))
                std::cout << hodgekit::describe_scenario(dir, name);
            return kExitPass;
        }
        if (describe->parsed()) {
            std::cout << hodgekit::describe_scenario(dir, describe_name);
            return kExitPass;
        }
        return do_run(opt);
    } catch (const hodgekit::ScenarioInputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInputError;
    }
}
