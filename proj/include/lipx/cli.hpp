#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "lipx/check.hpp"

namespace lipx::cli {

/// Outcome of one command: exact results, invariant checks and the files
/// written. `seconds` is the only field that varies between runs.
struct Report {
  std::string command;
  std::vector<std::pair<std::string, std::string>> results;
  std::vector<Check> checks;
  std::vector<std::string> columns;  // optional result table
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> artifacts;
  double seconds = 0;

  std::string toJson(bool withTiming = true) const;
  std::string toText(bool withTiming = true) const;
};

/// Runs `lipx <args...>`; args excludes the program name. Returns the exit
/// status: 0 success, 1 failed invariant, 2 contract or parse error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lipx::cli
