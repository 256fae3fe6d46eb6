#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include <hodgekit/dgla.hpp>

namespace hodgekit {

// Problems with the scenario document itself (schema, types, invalid
// configuration). The CLI maps these to exit code 2; failed numeric checks
// are not errors and map to exit code 1 through the report's pass flag.
struct ScenarioInputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ScenarioOverrides {
    std::optional<std::uint64_t> seed;
    std::optional<double> tol;    // replaces the scenario's eq_tol
    std::optional<int> degree;    // replaces the truncation degree where one applies
};

struct ScenarioOutcome {
    nlohmann::ordered_json report;
    bool pass = false;
};

// Execute a parsed scenario document. The report echoes the effective
// scenario (after overrides), stores every computed quantity, and lists the
// checks with individual pass flags; `pass` is their conjunction. Timing is
// recorded in a trailing "wall_time_ms" field, the only non-reproducible one.
ScenarioOutcome run_scenario(const nlohmann::ordered_json& doc, const ScenarioOverrides& overrides);

// Build DGLA defining data from a JSON document with fields "dims" (four
// nonnegative integers), "D" (three differentials, D[q]: V^q -> V^{q+1}),
// "gram" (four Hermitian positive definite matrices), and "bracket" (one
// n1 x n1 symmetric matrix per degree-2 coordinate). Dense matrices are
// written row-major as arrays of rows of [re, im] pairs; matrices with a
// zero extent may be written as []. Shape mismatches throw
// ScenarioInputError. Scenario documents of kind "dgla-solve" accept the
// same object under "backend": {"data": {...}} in place of a named
// built-in instance.
DglaData dgla_data_from_json(const nlohmann::ordered_json& doc);

// Scenario directory resolution: HODGEKIT_SCENARIO_DIR if set, else the
// directory configured at build time.
std::string default_scenario_dir();

// Sorted scenario names (file stems) found in the directory.
std::vector<std::string> list_scenarios(const std::string& dir);

// Full path of a named scenario; throws ScenarioInputError with the list of
// valid names when it does not exist.
std::string scenario_path(const std::string& dir, const std::string& name);

// Human-readable summary (name, kind, description, checks) of a shipped
// scenario.
std::string describe_scenario(const std::string& dir, const std::string& name);

// CSV rendering of a continuation path ("samples" array in a
// kahler-continue report): one row per path sample. Throws
// ScenarioInputError when the report carries no path samples.
std::string path_samples_csv(const nlohmann::ordered_json& report);

} // namespace hodgekit
