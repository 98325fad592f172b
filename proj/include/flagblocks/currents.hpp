// Geometric raising/lowering operators on localized equivariant cohomology:
// pull back along one forgetful map of a one-step-refined flag variety,
// multiply by the Euler class of Hom(S,Q) (and a power of the moved line's
// Chern root), push forward along the other.  The transferred action is
// verified against the current operators sum_i x^{(i)} z_i^j on the tensor
// side.

#pragma once

#include <cstdint>

#include "flagblocks/conformal.hpp"
#include "flagblocks/localization.hpp"
#include "flagblocks/records.hpp"

namespace flagblocks::cur {

using combi::ColoringMap;
using combi::WeightComposition;
using loc::LocalizedClass;
using loc::MergeMap;
using symalg::RatExpr;

enum class Direction { Raising, Lowering };  // e_{a,a+1} / e_{a+1,a}

struct WeightMove {
  WeightComposition base;
  int a = 0;  // 1 <= a < m
  Direction direction = Direction::Raising;
  int power = 0;  // j >= 0

  bool defined() const;
  WeightComposition target() const;  // e_{a,a+1} lambda or e_{a+1,a} lambda
};

// The refined weight in P_{m+1}(N) and the two color merges recovering the
// source and target weights.
struct Correspondence {
  WeightComposition refined;  // mu'(lambda,a) or mu''(lambda,a)
  MergeMap to_source;         // pi_1: merges the singleton back into lambda
  MergeMap to_target;         // pi_2: merges the singleton into the moved weight
  int singleton_color = 0;    // the rank-1 step, color a+1 of the refined weight
};

WeightComposition refined_weight(const WeightComposition& lambda, int a, Direction dir);
Correspondence correspondence(const WeightComposition& lambda, int a, Direction dir);

// rho(e_{a,a+1} t^j) and rho(e_{a+1,a} t^j) in restriction coordinates.
LocalizedClass rho_apply(const WeightMove& move, const LocalizedClass& x);

// Diagonal completion: multiplication by the power sum of the Chern roots of
// the a-th quotient, sum_{i: color(i)=a} z_i^j.
LocalizedClass cartan_apply(int a, int j, const LocalizedClass& x);

// Basis identification y_w <-> y^w: component at w is the restriction x|_w.
cb::TensorRatVector transfer(const LocalizedClass& x);
LocalizedClass untransfer(const cb::TensorRatVector& v);

// Identification y'_w <-> y^w (components x|_w / e_w); this is the
// normalization under which the transferred rho equals sum_i x^{(i)} z_i^j.
cb::TensorRatVector transfer_normalized(const LocalizedClass& x);

// Applies the tensor-side current e_{ab} t^j matching a geometric move.
cb::TensorRatVector tensor_current(const WeightMove& move, const cb::TensorRatVector& v);

// Checks transfer_normalized(rho(x)) = +- act_current(transfer_normalized(x))
// for one move and one basis class, solving for the sign.
VerificationRecord check_move_on_class(const WeightMove& move, const ColoringMap& w,
                                       unsigned trials = 3, std::uint64_t seed = 0);

// Full desk-scale verification: every move, every indicator class, plus
// bracket closure of the transferred operators.
VerificationRecord verify_current_action(int m, int N, int jmax, unsigned trials = 3,
                                      std::uint64_t seed = 0);

}  // namespace flagblocks::cur
