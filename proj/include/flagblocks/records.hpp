// Machine-readable verification records.  Every probabilistic pass carries a
// numeric failure bound; every failure carries a concrete witness.

#pragma once

#include <cstdint>
#include <string>

#include "json.hpp"

#include "flagblocks/symalg.hpp"

namespace flagblocks {

using Json = nlohmann::ordered_json;

struct VerificationRecord {
  std::string claim;  // stable claim identifier
  Json params = Json::object();
  bool pass = false;
  std::uint64_t seed = 0;
  double failure_bound = 0.0;  // 0 means the check was exact
  Json witness;                // null unless the check failed (or nonzero was certified)
  Json detail;                 // free-form extras (signs, notes, measured values)
  double wall_ms = 0.0;

  Json to_json() const;

  // Folds one randomized zero-test into this record: pass only if all folded
  // tests were zero; failure bounds accumulate by union bound.
  void fold(const symalg::ZeroTestResult& r, const std::string& what);
};

Json witness_json(const std::map<symalg::VarId, std::uint64_t>& point);

}  // namespace flagblocks
