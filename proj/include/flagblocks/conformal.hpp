// The tensor space V = Vbar^{otimes N} over the rational-function field:
// gl(m) and current actions on coloring-indexed components, the canonical
// section p_lambda(z), its R-function presentation, and the verification
// suite for its singular-vector / conformal-block / KZ properties.

#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "flagblocks/combinatorics.hpp"
#include "flagblocks/records.hpp"
#include "flagblocks/symalg.hpp"

namespace flagblocks::cb {

using combi::ColoringMap;
using combi::WeightComposition;
using symalg::Rat;
using symalg::RatExpr;

// A V_lambda-valued rational function of z, stored sparsely on the coloring
// basis: absent keys are zero components.
struct TensorRatVector {
  WeightComposition weight;
  std::map<ColoringMap, RatExpr> components;

  bool structurally_zero() const;
  TensorRatVector operator+(const TensorRatVector& o) const;
  TensorRatVector operator-(const TensorRatVector& o) const;
  TensorRatVector scaled(const RatExpr& f) const;
  void set(const ColoringMap& w, RatExpr e);
  RatExpr component(const ColoringMap& w) const;  // zero if absent
};

// e_{ab} acting on the tensor factor at `site` (1-based): sends a coloring
// with color b at the site to the one recolored a, kills it otherwise.
TensorRatVector act_generator(int a, int b, int site, const TensorRatVector& v);

// e_{ab} acting on all of V (coproduct sum over sites).
TensorRatVector act_gl(int a, int b, const TensorRatVector& v);

// e_{ab} t^j = sum_i e_{ab}^{(i)} z_i^j
TensorRatVector act_current(int a, int b, int j, const TensorRatVector& v);

// p_lambda(z) = sum_w y^w / e_w
TensorRatVector canonical_p(const WeightComposition& lambda);

// P_z(lambda) = sum_I v_I / R(z_{I_1}|...|z_{I_m}),
// R = prod_{i<j} prod_{a in I_i, b in I_j} (z_b - z_a)
TensorRatVector rv_element(const WeightComposition& lambda);

// Asserts e_{ij} v = 0 for all 1 <= i < j <= m.
VerificationRecord singular_check(const TensorRatVector& v, unsigned trials = 3,
                                  std::uint64_t seed = 0);

// e(z) = sum_i z_i e_{1m}^{(i)}
TensorRatVector e_z_apply(int m, const TensorRatVector& v);

// For a partition lambda: if lambda_1 > lambda_m asserts e(z) v = 0; if
// lambda_1 = lambda_m asserts e(z)^2 v = 0 and reports whether e(z) v = 0.
VerificationRecord e_z_nilpotency_check(const TensorRatVector& v, const WeightComposition& lambda,
                                        unsigned trials = 3, std::uint64_t seed = 0);

struct KZConnection {
  enum class Mode { GL, SL };  // Omega = pi, or pi - (1/m) Id

  Rat coupling = 0;  // the 1/kappa front factor
  Mode mode = Mode::GL;
  std::vector<std::vector<Rat>> scalar_shift;  // symmetric NxN, zero diagonal

  static KZConnection make(const Rat& coupling, Mode mode, int N, const Rat& uniform_shift);
};

// Residual of the KZ system at site i:
//   d_i v - coupling * sum_{j != i} (Omega_{ij} + c_{ij} Id)/(z_i - z_j) v
TensorRatVector kz_residual(const KZConnection& conn, const TensorRatVector& v, int site, int m);

// Shifts the scalar part: gauge-equivalent connections differ by symmetric
// zero-diagonal c'.
KZConnection gauge_transform(const KZConnection& conn,
                             const std::vector<std::vector<Rat>>& c_prime);

// Transposition of tensor factors i and j.
TensorRatVector apply_pi(const TensorRatVector& v, int i, int j);

// Randomized zero test over all components, folded into one record.
symalg::ZeroTestResult vector_is_zero(const TensorRatVector& v, unsigned trials,
                                      std::uint64_t seed);

// Theorem "p coincides with P_z" verifier: equality up to one global sign per
// lambda; the sign is solved for and reported in detail["sign"].
VerificationRecord check_p_equals_rv(const WeightComposition& lambda, unsigned trials = 3,
                                     std::uint64_t seed = 0);

// KZ check for the canonical section at every site, with the connection of
// the theorem: coupling 1/(m+1), gl Casimir, scalar shift -m.
VerificationRecord check_kz_canonical(const WeightComposition& lambda, unsigned trials = 3,
                                      std::uint64_t seed = 0);

}  // namespace flagblocks::cb
