#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "flagblocks/currents.hpp"

using namespace flagblocks;
using namespace flagblocks::cur;
using cb::TensorRatVector;
using combi::ColoringMap;
using combi::WeightComposition;
using symalg::LinearFactor;
using symalg::Rat;
using symalg::RatExpr;
using symalg::VarId;

namespace {

bool vec_zero(const TensorRatVector& v, std::uint64_t seed = 11) {
  return cb::vector_is_zero(v, 3, seed).is_zero;
}

bool expr_zero(const RatExpr& e, std::uint64_t seed = 11) { return e.is_zero(3, seed).is_zero; }

}  // namespace

TEST_CASE("refined weights") {
  WeightComposition lam({1, 1});
  CHECK(refined_weight(lam, 1, Direction::Raising).parts == std::vector<int>{1, 1, 0});
  CHECK(refined_weight(lam, 1, Direction::Lowering).parts == std::vector<int>{0, 1, 1});
  WeightComposition big({2, 3, 1});
  for (auto dir : {Direction::Raising, Direction::Lowering})
    for (int a = 1; a <= 2; ++a)
      CHECK(refined_weight(big, a, dir).N() == big.N());
}

TEST_CASE("undefined moves are rejected") {
  WeightMove bad{WeightComposition({2, 0}), 1, Direction::Raising, 0};
  CHECK_FALSE(bad.defined());
  CHECK_THROWS_AS(rho_apply(bad, loc::unit_class(bad.base)), std::invalid_argument);

  WeightMove bad2{WeightComposition({0, 2}), 1, Direction::Lowering, 0};
  CHECK_FALSE(bad2.defined());
}

TEST_CASE("transfer and untransfer") {
  WeightComposition lam({2, 1});
  ColoringMap w{{1, 2, 1}};
  TensorRatVector t = transfer(loc::indicator_basis(lam, w));
  REQUIRE(t.components.size() == 1);
  CHECK((t.component(w) - RatExpr::constant(1)).structurally_zero());

  // the class with restrictions 1/e_w transfers to the canonical section
  loc::LocalizedClass cls(lam);
  for (auto& [u, e] : cls.restrictions) e = loc::euler_class(u).term_power(-1);
  TensorRatVector p = transfer(cls);
  CHECK(vec_zero(p - cb::canonical_p(lam)));

  // round trip
  loc::LocalizedClass back = untransfer(p);
  for (const auto& [u, e] : back.restrictions) CHECK(expr_zero(e - cls.at(u)));
}

TEST_CASE("raising on P^1: indicator transfers to the tensor action") {
  WeightMove move{WeightComposition({1, 1}), 1, Direction::Raising, 0};
  auto rec = check_move_on_class(move, ColoringMap{{1, 2}}, 3, 5);
  CHECK(rec.pass);
  CHECK(rec.detail["sign"] == 1);
}

TEST_CASE("raising the unit class of X_{(0,N)} gives the summed generator action") {
  for (int N : {2, 3}) {
    WeightComposition lam({0, N});
    WeightMove move{lam, 1, Direction::Raising, 0};
    loc::LocalizedClass unit = loc::unit_class(lam);
    TensorRatVector lhs = transfer_normalized(rho_apply(move, unit));
    TensorRatVector rhs = cb::act_current(1, 2, 0, transfer_normalized(unit));
    CHECK(vec_zero(lhs - rhs));
  }
}

TEST_CASE("cartan operators") {
  WeightComposition lam({2, 1});
  loc::LocalizedClass x = loc::indicator_basis(lam, ColoringMap{{1, 2, 1}});

  // j = 0: multiplication by lambda_a
  loc::LocalizedClass c0 = cartan_apply(1, 0, x);
  for (const auto& [w, e] : c0.restrictions)
    CHECK(expr_zero(e - x.at(w).scaled(Rat(lam.parts[0]))));

  // transferred action equals sum_i e_{aa}^{(i)} z_i^j
  for (int a = 1; a <= 2; ++a) {
    for (int j = 0; j <= 2; ++j) {
      TensorRatVector lhs = transfer_normalized(cartan_apply(a, j, x));
      TensorRatVector rhs = cb::act_current(a, a, j, transfer_normalized(x));
      CHECK(vec_zero(lhs - rhs));
    }
  }

  // diagonal operators commute
  loc::LocalizedClass ab = cartan_apply(1, 1, cartan_apply(2, 2, x));
  loc::LocalizedClass ba = cartan_apply(2, 2, cartan_apply(1, 1, x));
  for (const auto& [w, e] : ab.restrictions) CHECK(expr_zero(e - ba.at(w)));
}

TEST_CASE("rho is linear over H_T(pt): polynomial scalars pass through") {
  WeightComposition lam({1, 2});
  WeightMove move{lam, 1, Direction::Raising, 1};
  RatExpr q = RatExpr::var(VarId::z(1)) + RatExpr::var(VarId::z(3)).scaled(Rat(2)) +
              RatExpr::constant(5);
  for (const auto& w : combi::enumerate_colorings(lam)) {
    loc::LocalizedClass x = loc::indicator_basis(lam, w);
    loc::LocalizedClass lhs = rho_apply(move, x.scaled(q));
    loc::LocalizedClass rhs = rho_apply(move, x).scaled(q);
    for (const auto& [v, e] : lhs.restrictions) CHECK(expr_zero(e - rhs.at(v), 23));
  }
}

TEST_CASE("weight bookkeeping: raising then lowering returns to lambda") {
  WeightComposition lam({2, 1});
  WeightMove up{lam, 1, Direction::Raising, 0};
  WeightComposition mid = up.target();
  CHECK(mid.parts == std::vector<int>{3, 0});
  WeightMove down{mid, 1, Direction::Lowering, 1};
  CHECK(down.target() == lam);
  loc::LocalizedClass x = loc::indicator_basis(lam, ColoringMap{{1, 1, 2}});
  loc::LocalizedClass roundtrip = rho_apply(down, rho_apply(up, x));
  CHECK(roundtrip.weight == lam);
}

TEST_CASE("pairing against the correspondence: both transfers agree with the kernel form") {
  // <rho'(x), y>_target = sum_{w'} x|_{pi1(w')} y|_{pi2(w')} E(w') / e_{w'}
  WeightComposition lam({1, 1});
  WeightMove move{lam, 1, Direction::Raising, 0};
  Correspondence corr = correspondence(lam, 1, Direction::Raising);
  loc::LocalizedClass x = loc::indicator_basis(lam, ColoringMap{{1, 2}});
  loc::LocalizedClass y(move.target());
  for (auto& [v, e] : y.restrictions) e = RatExpr::var(VarId::z(1));

  RatExpr lhs = loc::integrate(rho_apply(move, x) * y);
  RatExpr rhs;
  for (const auto& wp : combi::enumerate_colorings(corr.refined)) {
    int s = wp.fiber(corr.singleton_color).front();
    RatExpr E = RatExpr::constant(1);
    for (int q : wp.fiber(corr.singleton_color + 1))
      E = E * RatExpr::factor_power(LinearFactor::diff(VarId::z(q), VarId::z(s)), 1);
    rhs += x.at(corr.to_source.apply(wp)) * y.at(corr.to_target.apply(wp)) * E *
           loc::euler_class(wp).term_power(-1);
  }
  CHECK(expr_zero(lhs - rhs, 31));
}

TEST_CASE("bracket [e12 t^0, e21 t^1] = (e11 - e22) t^1 on both sides") {
  WeightComposition lam({1, 1});
  for (const auto& w : combi::enumerate_colorings(lam)) {
    loc::LocalizedClass x = loc::indicator_basis(lam, w);
    WeightMove up0{lam, 1, Direction::Raising, 0};
    WeightMove down1{lam, 1, Direction::Lowering, 1};
    loc::LocalizedClass t1 =
        up0.defined() && WeightMove{down1.target(), 1, Direction::Raising, 0}.defined()
            ? rho_apply(WeightMove{down1.target(), 1, Direction::Raising, 0},
                        rho_apply(down1, x))
            : loc::LocalizedClass(lam);
    loc::LocalizedClass t2 =
        rho_apply(WeightMove{up0.target(), 1, Direction::Lowering, 1}, rho_apply(up0, x));
    TensorRatVector lhs = transfer_normalized(t1) - transfer_normalized(t2);
    TensorRatVector base = transfer_normalized(x);
    TensorRatVector rhs =
        cb::act_current(1, 1, 1, base) - cb::act_current(2, 2, 1, base);
    CHECK(vec_zero(lhs - rhs, 41));
  }
}

TEST_CASE("Serre-type nesting: [e12 t^i, [e12 t^j, e21 t^k]] = -2 e12 t^{i+j+k} (m=2)") {
  WeightComposition lam({1, 1});
  auto geo_raise = [&](int j, const loc::LocalizedClass& x) -> loc::LocalizedClass {
    WeightMove mv{x.weight, 1, Direction::Raising, j};
    if (!mv.defined()) return loc::LocalizedClass(x.weight);
    return rho_apply(mv, x);
  };
  auto geo_lower = [&](int j, const loc::LocalizedClass& x) -> loc::LocalizedClass {
    WeightMove mv{x.weight, 1, Direction::Lowering, j};
    if (!mv.defined()) return loc::LocalizedClass(x.weight);
    return rho_apply(mv, x);
  };
  for (int i = 0; i <= 2; ++i) {
    for (int j = 0; i + j <= 2; ++j) {
      for (int k = 0; i + j + k <= 2; ++k) {
        for (const auto& w : combi::enumerate_colorings(lam)) {
          loc::LocalizedClass x = loc::indicator_basis(lam, w);
          auto inner = [&](const loc::LocalizedClass& v) {
            // [e12 t^j, e21 t^k] v
            auto p = geo_raise(j, geo_lower(k, v));
            auto q = geo_lower(k, geo_raise(j, v));
            return std::make_pair(p, q);
          };
          auto [p1, q1] = inner(x);
          // [e12 t^i, inner] x = e12^i (p1 - q1) - inner(e12^i x)
          loc::LocalizedClass up = geo_raise(i, x);
          auto [p2, q2] = inner(up);
          TensorRatVector lhs = (transfer_normalized(geo_raise(i, p1)) -
                                 transfer_normalized(geo_raise(i, q1))) -
                                (transfer_normalized(p2) - transfer_normalized(q2));
          TensorRatVector rhs =
              cb::act_current(1, 2, i + j + k, transfer_normalized(x)).scaled(
                  RatExpr::constant(-2));
          CHECK(vec_zero(lhs - rhs, 100 + 10 * i + j + k));
        }
      }
    }
  }
}

TEST_CASE("theorem verification at m=2, N=2, j<=1: exhaustive pass") {
  auto rec = verify_current_action(2, 2, 1, 3, 99);
  CHECK(rec.pass);
  CHECK(rec.failure_bound < 1e-12);
  // every identity carries sign +1 under the normalized identification
  for (const auto& ident : rec.detail["identities"]) {
    CHECK(ident["equal"] == true);
    CHECK(ident["sign"] == 1);
  }
}

TEST_CASE("j=0 subalgebra reproduces the plain gl action") {
  WeightComposition lam({1, 1, 1});
  for (const auto& w : combi::enumerate_colorings(lam)) {
    loc::LocalizedClass x = loc::indicator_basis(lam, w);
    for (int a = 1; a <= 2; ++a) {
      WeightMove mv{lam, a, Direction::Raising, 0};
      TensorRatVector lhs = transfer_normalized(rho_apply(mv, x));
      TensorRatVector rhs = cb::act_gl(a, a + 1, transfer_normalized(x));
      CHECK(vec_zero(lhs - rhs, 7 * a));
    }
  }
}
