// Torus fixed-point data of partial flag varieties: Euler classes, the
// y'-classes, restriction to fixed points, the localization integral, and
// pushforward/pullback along color-merging maps.  All classes live in
// restriction coordinates: a class is its tuple of fixed-point restrictions.

#pragma once

#include <map>
#include <vector>

#include "flagblocks/combinatorics.hpp"
#include "flagblocks/symalg.hpp"

namespace flagblocks::loc {

using combi::ColoringMap;
using combi::WeightComposition;
using symalg::RatExpr;

// Fixed points of X_lambda are exactly the coloring maps of lambda.
using FixedPoint = ColoringMap;

// An expression in Chern roots g_{i,a} and the equivariant parameters z_n.
using ChernRootExpr = RatExpr;

struct LocalizedClass {
  WeightComposition weight;
  std::map<FixedPoint, RatExpr> restrictions;  // keys exactly Pi(lambda)

  LocalizedClass() = default;
  explicit LocalizedClass(WeightComposition lambda);

  const RatExpr& at(const FixedPoint& w) const;
  LocalizedClass operator+(const LocalizedClass& o) const;
  LocalizedClass operator-(const LocalizedClass& o) const;
  LocalizedClass operator*(const LocalizedClass& o) const;  // pointwise (cup) product
  LocalizedClass scaled(const RatExpr& f) const;            // R'-module structure
};

// e_w = prod_{i>j} prod_{a in pi^-1(i), b in pi^-1(j)} (z_a - z_b), a single
// factored term of exactly d_lambda linear factors.
RatExpr euler_class(const FixedPoint& w);

// y'_w = prod_{i>j} prod_{a=1..lambda_i} prod_{b in pi_w^-1(j)} (g_{ia} - z_b)
ChernRootExpr y_prime_class(const WeightComposition& lambda, const FixedPoint& w);

// Restriction i_w^*: g_{i,a} -> z_{k_a} where pi_w^{-1}(i) = {k_1 < k_2 < ...}.
RatExpr restrict_at(const ChernRootExpr& c, const FixedPoint& w);

// The class y_w = y'_w / e_w: restriction 1 at w and 0 elsewhere.
LocalizedClass indicator_basis(const WeightComposition& lambda, const FixedPoint& w);

LocalizedClass unit_class(const WeightComposition& lambda);

// Localization integral: sum_w x|_w / e_w.
RatExpr integrate(const LocalizedClass& x);

// A color-merging map [m_src] -> [m_tgt]; sends X_{lambda_src} fixed points
// onto X_{lambda_tgt} fixed points by relabeling colors.
struct MergeMap {
  int m_src = 0;
  int m_tgt = 0;
  std::vector<int> target_of;  // size m_src, values in [m_tgt]

  static MergeMap identity(int m);
  static MergeMap to_point(int m);

  WeightComposition push_weight(const WeightComposition& src) const;
  ColoringMap apply(const ColoringMap& u) const;
};

// (f_* x)|_v = e(T_v Y) * sum_{u: f(u)=v} x|_u / e(T_u X)
LocalizedClass pushforward(const MergeMap& f, const LocalizedClass& x);

// (f^* y)|_u = y|_{f(u)}
LocalizedClass pullback(const MergeMap& f, const WeightComposition& lambda_src,
                        const LocalizedClass& y);

}  // namespace flagblocks::loc
