#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

#include "eigenbound/config.hpp"

namespace eigenbound {

inline constexpr const char* version = "0.1.0";

enum ExitCode : int {
    exit_ok = 0,
    exit_config = 2,
    exit_hypothesis = 3,
    exit_degeneration = 4,
    exit_bracketing = 5,
};

struct CommandResult {
    nlohmann::json report;
    int exit_code = exit_ok;
};

CommandResult cmd_bounds(const RunConfig& c);
CommandResult cmd_iterate(const RunConfig& c);
CommandResult cmd_oracle(const RunConfig& c);
// Everything above plus the verdict table; exit 5 when any verdict fails.
CommandResult cmd_verify(const RunConfig& c);

// Dispatch by name; library errors become an "error" object with the mapped exit code.
CommandResult run_command(std::string_view command, const RunConfig& c);

// Exit code for an exception thrown by the library.
int exit_code_for(const std::exception& e);
nlohmann::json error_object(const std::exception& e);

// quantity,value rows; arrays become one row per element with an index suffix.
std::string to_csv(const nlohmann::json& report);

}  // namespace eigenbound
