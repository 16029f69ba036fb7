#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "specflow/common.hpp"

namespace specflow {

struct SelftestEntry {
  std::string group;
  std::string name;
  std::string system;
  bool pass = true;
  std::string detail;
};

struct SelftestReport {
  std::vector<SelftestEntry> entries;
  bool pass = true;
};

// Runs the preset invariant suite plus seeded randomized property checks.
SelftestReport run_selftest(std::uint64_t seed, const NumericConfig& cfg = {});

}  // namespace specflow
