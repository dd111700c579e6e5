#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "eigenbound/measures.hpp"

namespace eigenbound {

enum class OutputFormat { json, csv };

// One fully resolved run. Coefficients come either from a preset or from a and b.
struct RunConfig {
    // [problem]
    std::string preset;
    std::string a;
    std::string b;
    double D = 1.0;
    BoundaryCase boundary = BoundaryCase::ND;
    // [numerics]
    int N = 2000;
    double eps_q = Tolerances{}.quadrature;
    double eps_b = Tolerances{}.bound;
    double eps_o = Tolerances{}.oracle;
    std::vector<double> schedule = default_truncation_schedule();
    // [run]
    int n_max = 3;
    int grid = 32;
    bool renormalize = true;
    OutputFormat format = OutputFormat::json;
    std::string out;

    bool operator==(const RunConfig&) const = default;
};

// Raw settings keyed "section.key", in the order they were given.
using Settings = std::vector<std::pair<std::string, std::string>>;

// key = value lines under [problem], [numerics], [run]; '#' starts a comment.
// Throws ConfigError naming the line on malformed input or unknown keys.
Settings parse_config_text(const std::string& text, const std::string& origin = "config");
Settings read_config_file(const std::string& path);

// Layers: defaults < file < EIGENBOUND_TOLERANCE < inline. Comma lists in
// problem.D and problem.preset expand to one config per combination, in input order.
// All validation problems are collected into one ConfigError.
std::vector<RunConfig> resolve_config(const Settings& file, const Settings& inline_flags,
                                      std::optional<std::string> env_tolerance);

// Reads EIGENBOUND_TOLERANCE from the environment.
std::vector<RunConfig> resolve_config(const Settings& file, const Settings& inline_flags);

// Text that resolves back to the same RunConfig.
std::string echo_config(const RunConfig& c);

ProblemSpec to_problem(const RunConfig& c);

std::string format_number(double v);

}  // namespace eigenbound
