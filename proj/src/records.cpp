#include "flagblocks/records.hpp"

namespace flagblocks {

Json VerificationRecord::to_json() const {
  Json j;
  j["claim"] = claim;
  j["params"] = params;
  j["result"] = pass ? "pass" : "fail";
  j["seed"] = seed;
  j["failure_bound"] = failure_bound;
  j["witness"] = witness.is_null() ? Json() : witness;
  j["detail"] = detail.is_null() ? Json() : detail;
  j["wall_ms"] = wall_ms;
  return j;
}

void VerificationRecord::fold(const symalg::ZeroTestResult& r, const std::string& what) {
  if (r.is_zero) {
    failure_bound += r.failure_bound;
  } else {
    pass = false;
    if (witness.is_null()) {
      witness = Json::object();
      witness["where"] = what;
      witness["prime"] = r.prime;
      witness["value"] = r.witness_value;
      if (r.witness) witness["point"] = witness_json(*r.witness);
    }
  }
}

Json witness_json(const std::map<symalg::VarId, std::uint64_t>& point) {
  Json j = Json::object();
  for (const auto& [v, x] : point) j[v.name()] = x;
  return j;
}

}  // namespace flagblocks
