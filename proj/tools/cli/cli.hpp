#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hwcount/model.hpp"
#include "json.hpp"

namespace hwcount::cli {

enum class Command { constants, coeffs, exact, cumulants, compare, sample, peak };
enum class Output { json, csv };

struct RunConfig {
    Command command = Command::constants;
    ModelParams params;
    std::string regime = "none";
    std::vector<double> t, s, radii, u;
    std::optional<double> r;
    std::optional<double> tol;
    std::vector<long> n_grid;
    long replicates = 1000;
    std::uint64_t seed = 42;
    Output output = Output::json;
    std::optional<std::string> out_path;
    std::optional<int> threads;
};

using Report = nlohmann::ordered_json;

/// Builds the radii spec selected by config.regime (u defaults to zeros).
RadiiSpec radii_spec(const RunConfig& config);

/// Runs one command. Library errors propagate; the caller maps them to exit
/// codes. runtime_ms is filled in by the caller.
Report run(const RunConfig& config);

/// JSON with every double printed to 17 significant digits; non-finite
/// numbers become null.
std::string to_json(const Report& report);

/// One row per leaf: path,value with RFC-4180 quoting.
std::string to_csv(const Report& report);

/// Parses argv, runs, writes the report to `out` (or --out) and diagnostics
/// to `err`. Returns 0, 2 (validation) or 3 (numerical failure).
int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hwcount::cli
