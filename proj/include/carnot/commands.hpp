#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>

namespace carnot {

struct CommandOptions {
  bool strict_stratified = false;
  std::optional<int> coeff_degree;
  std::optional<std::pair<int, int>> degrees;  // rumin: k range, inclusive
  std::optional<int> page;
  int max_degree = 8;  // CARNOT_MAX_DEGREE
};

struct CommandResult {
  int exit_code = 0;  // 0 ok, 1 mathematical failure, 2 input error
  std::string text;
  std::string json;  // pretty-printed, keys in emission order
};

// cmd is one of check, rumin, pansu, commute, extend, lift.
CommandResult run_command(const std::string& cmd, const std::filesystem::path& input,
                          const CommandOptions& opt);

// "a..b" or a single "k".
std::pair<int, int> parse_degree_range(const std::string& text);

int max_degree_from_env();

}  // namespace carnot
