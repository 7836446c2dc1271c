#pragma once

#include <string>
#include <vector>

namespace lipx {

/// One named invariant evaluated on a finished build.
struct Check {
  std::string name;
  bool pass = false;
  std::string detail;  // exact residual or first counterexample
};

inline bool allPass(const std::vector<Check>& checks) {
  for (const auto& c : checks) {
    if (!c.pass) return false;
  }
  return true;
}

}  // namespace lipx
