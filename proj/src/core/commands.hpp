#pragma once

// The five commands behind the CLI and the C API. Each returns a JSON report
// (schema "coiso-report/1") and an exit code: 0 all verdicts pass, 1 some
// verdict fails, 2 input error. Input errors are reported, not thrown.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "rational.hpp"

namespace coiso {

inline constexpr const char* kToolVersion = "0.1.0";
inline constexpr const char* kReportSchema = "coiso-report/1";

struct CommandOptions {
  bool timing = false;
  // moser-verify
  int steps = 1000;
  double tolerance = 1e-6;
  Rational box = Rational(1, 10);
  int samples = 20;
  std::uint64_t seed = 1;
};

struct CommandResult {
  nlohmann::json report;
  std::string artifact;  // thickened chart file, thicken only
  int exit_code = 0;
};

CommandResult cmd_check(std::string_view text, const CommandOptions& opts = {});
CommandResult cmd_thicken(std::string_view text, const CommandOptions& opts = {});
CommandResult cmd_nijenhuis(std::string_view text, const CommandOptions& opts = {});
CommandResult cmd_reeb(std::string_view text, const CommandOptions& opts = {});
CommandResult cmd_moser(std::string_view text1, std::string_view text2, const CommandOptions& opts = {});

// Report for an input error (exit code 2).
CommandResult error_result(const std::string& command, const std::string& code, const std::string& message);

// 64-bit FNV-1a as 16 hex digits.
std::string fnv1a_hex(std::string_view data);

}  // namespace coiso
