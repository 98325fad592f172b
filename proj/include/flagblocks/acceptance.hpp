// The acceptance battery: one entry per criterion, each pinned to its
// tolerance and oracle, shared by the standalone runner and the `suite`
// subcommand.

#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "flagblocks/records.hpp"

namespace flagblocks::acceptance {

struct CriterionResult {
  int number = 0;
  std::string name;
  bool pass = false;
  double wall_s = 0.0;
  double limit_s = 0.0;  // stated runtime budget (0 = none)
  std::string note;
  Json detail;
};

// profile: "smoke" (fast subset), "desk" (every criterion), "extended"
// (desk plus the P_3(5) weight sweep)
std::vector<CriterionResult> run_acceptance(const std::string& profile, std::uint64_t seed);

Json results_json(const std::vector<CriterionResult>& results);
bool all_pass(const std::vector<CriterionResult>& results);

}  // namespace flagblocks::acceptance
