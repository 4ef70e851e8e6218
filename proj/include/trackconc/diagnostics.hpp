#pragma once

#include <string>
#include <utility>
#include <vector>

namespace trackconc {

// Collects non-fatal warnings (skipped hosts, unknown KB fields, ...).
// Operations accept an optional Diagnostics*; passing nullptr drops warnings.
struct Diagnostics {
  std::vector<std::string> warnings;

  void warn(std::string message) { warnings.push_back(std::move(message)); }
  std::size_t count() const { return warnings.size(); }
};

inline void warn(Diagnostics* diag, std::string message) {
  if (diag != nullptr) diag->warn(std::move(message));
}

}  // namespace trackconc
