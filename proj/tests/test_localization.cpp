#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "flagblocks/localization.hpp"

using namespace flagblocks;
using namespace flagblocks::loc;
using symalg::LinearFactor;
using symalg::Rat;
using symalg::RatExpr;
using symalg::VarId;

namespace {

RatExpr z_diff(int a, int b) {
  return RatExpr::factor_power(LinearFactor::diff(VarId::z(a), VarId::z(b)), 1);
}

bool expr_zero(const RatExpr& e, std::uint64_t seed = 1) { return e.is_zero(3, seed).is_zero; }

std::vector<WeightComposition> delta_suite() {
  std::vector<WeightComposition> lams;
  for (const auto& l : combi::enumerate_compositions(2, 3)) lams.push_back(l);
  for (const auto& l : combi::enumerate_compositions(3, 3)) lams.push_back(l);
  return lams;
}

}  // namespace

TEST_CASE("euler_class examples") {
  ColoringMap w12{{1, 2}};
  CHECK((euler_class(w12) - z_diff(2, 1)).structurally_zero());

  // lambda = (m-1,1) on P^{m-1}: e_i = prod_{j != i} (z_i - z_j), here m=3, i=2
  ColoringMap w{{1, 2, 1}};
  CHECK((euler_class(w) - z_diff(2, 1) * z_diff(2, 3)).structurally_zero());

  ColoringMap w123{{1, 2, 3}};
  RatExpr expect = z_diff(2, 1) * z_diff(3, 1) * z_diff(3, 2);
  CHECK((euler_class(w123) - expect).structurally_zero());
}

TEST_CASE("euler_class has exactly d_lambda factors at every fixed point") {
  for (const auto& lam : delta_suite()) {
    for (const auto& w : combi::enumerate_colorings(lam)) {
      RatExpr e = euler_class(w);
      REQUIRE(e.term_count() == 1);
      long nfac = 0;
      for (const auto& [f, ex] : e.terms()[0].factors) nfac += ex;
      CHECK(nfac == lam.dimension());
    }
  }
}

TEST_CASE("y_prime_class on the projective line and plane") {
  // lambda=(1,1), w=(1,2): y' = (g_{2,1} - z_1)
  WeightComposition lam({1, 1});
  ColoringMap w{{1, 2}};
  RatExpr expect = RatExpr::factor_power(LinearFactor::diff(VarId::gamma(2, 1), VarId::z(1)), 1);
  CHECK((y_prime_class(lam, w) - expect).structurally_zero());

  // P^{m-1} with lambda=(m-1,1): y'_i = prod_{j != i}(x - z_j), x = g_{2,1}
  WeightComposition l21({2, 1});
  ColoringMap wi{{1, 2, 1}};  // color-2 site is i=2
  RatExpr y = y_prime_class(l21, wi);
  RatExpr ex = RatExpr::factor_power(LinearFactor::diff(VarId::gamma(2, 1), VarId::z(1)), 1) *
               RatExpr::factor_power(LinearFactor::diff(VarId::gamma(2, 1), VarId::z(3)), 1);
  CHECK((y - ex).structurally_zero());

  // degree = d_lambda factors
  REQUIRE(y.term_count() == 1);
  CHECK(static_cast<long>(y.terms()[0].factors.size()) == l21.dimension());
}

TEST_CASE("restrict: Chern roots to z's") {
  ColoringMap w{{1, 2}};
  RatExpr g = RatExpr::var(VarId::gamma(1, 1));
  CHECK((restrict_at(g, w) - RatExpr::var(VarId::z(1))).structurally_zero());
}

TEST_CASE("delta property i_w^* y'_{w'} = e_w delta_{ww'} (P_2(3) and P_3(3))") {
  for (const auto& lam : delta_suite()) {
    auto points = combi::enumerate_colorings(lam);
    for (const auto& wp : points) {
      ChernRootExpr y = y_prime_class(lam, wp);
      for (const auto& w : points) {
        RatExpr r = restrict_at(y, w);
        if (w == wp)
          CHECK((r - euler_class(w)).structurally_zero());
        else
          CHECK(r.structurally_zero());
      }
    }
  }
}

TEST_CASE("restriction of the tautological relation: prod_i c_T(M_i) = prod_n (1+z_n t)") {
  // Compare coefficient lists of the t-polynomial at each fixed point,
  // writing elementary symmetric functions of the fiber z's directly.
  WeightComposition lam({2, 1});
  for (const auto& w : combi::enumerate_colorings(lam)) {
    // lhs: product over colors of (1 + sum_j sigma_j(fiber z's) t^j)
    std::vector<RatExpr> lhs{RatExpr::constant(1)};
    for (int i = 1; i <= lam.m(); ++i) {
      auto fib = w.fiber(i);
      std::vector<RatExpr> factor_poly{RatExpr::constant(1)};  // in t
      for (int site : fib) {
        // multiply by (1 + z_site t)
        std::vector<RatExpr> next(factor_poly.size() + 1, RatExpr::zero());
        for (std::size_t d = 0; d < factor_poly.size(); ++d) {
          next[d] += factor_poly[d];
          next[d + 1] += factor_poly[d] * RatExpr::var(VarId::z(site));
        }
        factor_poly = std::move(next);
      }
      std::vector<RatExpr> acc(lhs.size() + factor_poly.size() - 1, RatExpr::zero());
      for (std::size_t x = 0; x < lhs.size(); ++x)
        for (std::size_t y = 0; y < factor_poly.size(); ++y) acc[x + y] += lhs[x] * factor_poly[y];
      lhs = std::move(acc);
    }
    // rhs: prod_n (1 + z_n t)
    std::vector<RatExpr> rhs{RatExpr::constant(1)};
    for (int n = 1; n <= lam.N(); ++n) {
      std::vector<RatExpr> next(rhs.size() + 1, RatExpr::zero());
      for (std::size_t d = 0; d < rhs.size(); ++d) {
        next[d] += rhs[d];
        next[d + 1] += rhs[d] * RatExpr::var(VarId::z(n));
      }
      rhs = std::move(next);
    }
    REQUIRE(lhs.size() == rhs.size());
    for (std::size_t d = 0; d < lhs.size(); ++d) CHECK(expr_zero(lhs[d] - rhs[d], 11 + d));
  }
}

TEST_CASE("indicator basis") {
  WeightComposition lam({1, 1});
  auto pts = combi::enumerate_colorings(lam);
  // orthogonality and partition of unity
  LocalizedClass sum(lam);
  for (const auto& w : pts) {
    LocalizedClass yw = indicator_basis(lam, w);
    CHECK((yw * yw).at(w).to_json() == yw.at(w).to_json());
    for (const auto& v : pts)
      if (v != w) CHECK((yw * indicator_basis(lam, v)).at(v).structurally_zero());
    sum = sum + yw;
  }
  for (const auto& w : pts) CHECK((sum.at(w) - RatExpr::constant(1)).structurally_zero());

  // y_w as Lagrange interpolation data on P^1: restriction of y'_w / e_w
  ColoringMap w{{1, 2}};
  RatExpr lagrange = restrict_at(y_prime_class(lam, w), w) * euler_class(w).term_power(-1);
  CHECK((lagrange - RatExpr::constant(1)).structurally_zero());
}

TEST_CASE("integrate") {
  WeightComposition lam({2, 1});
  for (const auto& w : combi::enumerate_colorings(lam)) {
    // int y'_w = 1
    LocalizedClass cls(lam);
    for (const auto& v : combi::enumerate_colorings(lam))
      cls.restrictions.at(v) = restrict_at(y_prime_class(lam, w), v);
    CHECK(expr_zero(integrate(cls) - RatExpr::constant(1)));
  }

  // integrate(unit) on P^1 is 0: 1/(z1-z2) + 1/(z2-z1)
  WeightComposition p1({1, 1});
  CHECK(integrate(unit_class(p1)).structurally_zero());

  // linearity over e_w-weighted deltas
  ColoringMap w{{2, 1, 1}};
  LocalizedClass d = indicator_basis(lam, w).scaled(euler_class(w));
  CHECK(expr_zero(integrate(d) - RatExpr::constant(1)));
}

TEST_CASE("integrate(unit) = 0 whenever d_lambda > 0") {
  for (const auto& lam : delta_suite())
    if (lam.dimension() > 0) CHECK(expr_zero(integrate(unit_class(lam)), 3));
}

TEST_CASE("pushforward and pullback") {
  WeightComposition lam({1, 1, 1});
  MergeMap id = MergeMap::identity(3);
  LocalizedClass x = indicator_basis(lam, ColoringMap{{1, 2, 3}});
  LocalizedClass fx = pushforward(id, x);
  for (const auto& [w, e] : fx.restrictions) CHECK(expr_zero(e - x.at(w)));

  MergeMap pt = MergeMap::to_point(3);
  LocalizedClass to_pt = pushforward(pt, x);
  CHECK(expr_zero(to_pt.restrictions.begin()->second - integrate(x)));

  // pullback of unit is unit; pullback is a ring map
  LocalizedClass unit_tgt = unit_class(pt.push_weight(lam));
  LocalizedClass pu = pullback(pt, lam, unit_tgt);
  for (const auto& [w, e] : pu.restrictions) CHECK(expr_zero(e - RatExpr::constant(1)));
}

TEST_CASE("projection formula f_*(f^* y . x) = y . f_* x on a P_2(3) instance") {
  WeightComposition lam({2, 1});
  MergeMap f = MergeMap::to_point(2);
  WeightComposition tgt = f.push_weight(lam);

  LocalizedClass y(tgt);
  y.restrictions.begin()->second = RatExpr::var(VarId::z(1)) + RatExpr::var(VarId::z(3)).scaled(Rat(2));

  std::mt19937_64 rng(17);
  for (const auto& w : combi::enumerate_colorings(lam)) {
    LocalizedClass x = indicator_basis(lam, w).scaled(RatExpr::var(VarId::z(2)));
    LocalizedClass lhs = pushforward(f, pullback(f, lam, y) * x);
    LocalizedClass rhs = y * pushforward(f, x);
    for (const auto& [v, e] : lhs.restrictions) CHECK(expr_zero(e - rhs.at(v), rng()));
  }
}

TEST_CASE("pushforward-pullback composite equals multiplication by f_*(1)") {
  WeightComposition lam({1, 1});
  MergeMap f = MergeMap::to_point(2);
  LocalizedClass y(f.push_weight(lam));
  y.restrictions.begin()->second = RatExpr::var(VarId::z(2));
  LocalizedClass lhs = pushforward(f, pullback(f, lam, y));
  LocalizedClass rhs = y * pushforward(f, unit_class(lam));
  for (const auto& [v, e] : lhs.restrictions) CHECK(expr_zero(e - rhs.at(v)));
}

TEST_CASE("free-module rank: indicator classes are C_lambda many, delta-independent") {
  WeightComposition lam({2, 2});
  auto pts = combi::enumerate_colorings(lam);
  CHECK(combi::Int(pts.size()) == combi::multinomial(lam));
  for (const auto& w : pts) {
    LocalizedClass yw = indicator_basis(lam, w);
    for (const auto& v : pts) {
      if (v == w)
        CHECK((yw.at(v) - RatExpr::constant(1)).structurally_zero());
      else
        CHECK(yw.at(v).structurally_zero());
    }
  }
}

TEST_CASE("pushforward is functorial: (g of f)_* = g_* f_*") {
  // merge 3 colors -> 2 -> 1 versus straight to the point
  WeightComposition lam({1, 1, 1});
  MergeMap f{3, 2, {1, 1, 2}};
  MergeMap g{2, 1, {1, 1}};
  MergeMap gf = MergeMap::to_point(3);
  for (const auto& w : combi::enumerate_colorings(lam)) {
    LocalizedClass x = indicator_basis(lam, w).scaled(RatExpr::var(VarId::z(2)));
    LocalizedClass two_step = pushforward(g, pushforward(f, x));
    LocalizedClass one_step = pushforward(gf, x);
    for (const auto& [v, e] : two_step.restrictions) CHECK(expr_zero(e - one_step.at(v), 53));
  }
}

TEST_CASE("error paths") {
  MergeMap f = MergeMap::to_point(2);
  LocalizedClass y(WeightComposition({1, 1}));
  CHECK_THROWS_AS(pushforward(MergeMap{3, 1, {1, 1, 1}}, y), std::invalid_argument);
  CHECK_THROWS_AS(pullback(f, WeightComposition({1, 1, 1}), y), std::invalid_argument);
}
