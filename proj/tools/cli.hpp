#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "ptwell/constraints.hpp"

namespace ptwell::cli {

enum class Command { pattern, spectrum, critical, verify, metric };
enum class Format { table, csv, json };

/// Exit codes of the ptwell tool.
enum ExitCode : int {
    kOk = 0,
    kInvalidInput = 2,
    kBrokenSymmetry = 3,
    kNumericalFailure = 4,
};

struct RunConfig {
    Command command = Command::pattern;
    std::optional<int> k;
    std::optional<int> l;
    ParameterMap params;
    double s_max = 20.0;
    double tol = 1e-12;
    int grid_n = 800;
    int levels = 5;
    bool unconstrained = false;
    bool convergence = false;
    bool full_oracle = false;
    Format format = Format::table;
    std::string output_path;
};

/// Parse argv into a config. Returns std::nullopt after printing help; throws
/// InvalidInput on malformed arguments.
std::optional<RunConfig> parse_args(int argc, const char* const* argv, std::ostream& out);

/// Check the config against the preconditions of the operations it will call.
void validate(const RunConfig& config);

/// Validate and execute; the result goes to `out` (or the output file) and
/// diagnostics to `err`. Returns an ExitCode.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

/// parse_args + run with error-to-exit-code mapping.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ptwell::cli
