#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "flagblocks/conformal.hpp"
#include "flagblocks/localization.hpp"

using namespace flagblocks;
using namespace flagblocks::cb;
using combi::enumerate_colorings;
using combi::enumerate_compositions;
using combi::Int;
using symalg::LinearFactor;
using symalg::Rat;
using symalg::RatExpr;
using symalg::VarId;

namespace {

RatExpr z_diff(int a, int b) {
  return RatExpr::factor_power(LinearFactor::diff(VarId::z(a), VarId::z(b)), 1);
}

TensorRatVector basis_vector(const WeightComposition& lam, const ColoringMap& w) {
  TensorRatVector v;
  v.weight = lam;
  v.set(w, RatExpr::constant(1));
  return v;
}

bool vec_zero(const TensorRatVector& v, std::uint64_t seed = 5) {
  return vector_is_zero(v, 3, seed).is_zero;
}

int perm_sign(const ColoringMap& w) {
  int s = 1;
  for (int i = 0; i < w.N(); ++i)
    for (int j = i + 1; j < w.N(); ++j)
      if (w.colors[i] > w.colors[j]) s = -s;
  return s;
}

}  // namespace

TEST_CASE("act_generator on basis colorings") {
  WeightComposition lam({1, 1});
  // e_{12} at site 1 sends y_2 (x) y_1 to y_1 (x) y_1
  TensorRatVector v = basis_vector(lam, ColoringMap{{2, 1}});
  TensorRatVector u = act_generator(1, 2, 1, v);
  CHECK(u.weight.parts == std::vector<int>{2, 0});
  CHECK((u.component(ColoringMap{{1, 1}}) - RatExpr::constant(1)).structurally_zero());

  // e_{12} at site 1 kills y_1 (x) y_1
  TensorRatVector w = basis_vector(WeightComposition({2, 0}), ColoringMap{{1, 1}});
  CHECK(act_generator(1, 2, 1, w).structurally_zero());

  // weight bookkeeping: e_{ab} lambda
  TensorRatVector t = basis_vector(WeightComposition({1, 2}), ColoringMap{{2, 1, 2}});
  CHECK(act_generator(1, 2, 3, t).weight.parts == std::vector<int>{2, 1});
}

TEST_CASE("act_current") {
  WeightComposition lam({1, 1});
  TensorRatVector v = basis_vector(lam, ColoringMap{{1, 2}});

  // j = 0 reduces to the plain coproduct action
  TensorRatVector c0 = act_current(1, 2, 0, v);
  TensorRatVector gl = act_gl(1, 2, v);
  CHECK(vec_zero(c0 - gl));

  // e_{11} t^1 on y_1 (x) y_2 multiplies by z_1
  TensorRatVector d = act_current(1, 1, 1, v);
  CHECK(vec_zero(d - v.scaled(RatExpr::var(VarId::z(1)))));

  // linearity
  TensorRatVector w = basis_vector(lam, ColoringMap{{2, 1}});
  TensorRatVector sum = v + w.scaled(RatExpr::constant(3));
  CHECK(vec_zero(act_current(2, 1, 1, sum) -
                 (act_current(2, 1, 1, v) + act_current(2, 1, 1, w).scaled(RatExpr::constant(3)))));
}

TEST_CASE("canonical_p") {
  WeightComposition lam({1, 1});
  TensorRatVector p = canonical_p(lam);
  CHECK((p.component(ColoringMap{{1, 2}}) - z_diff(2, 1).term_power(-1)).structurally_zero());
  CHECK((p.component(ColoringMap{{2, 1}}) + z_diff(2, 1).term_power(-1)).structurally_zero());

  // m = 1: single component 1 (empty Euler product)
  TensorRatVector p1 = canonical_p(WeightComposition({3}));
  REQUIRE(p1.components.size() == 1);
  CHECK((p1.components.begin()->second - RatExpr::constant(1)).structurally_zero());

  // component count = C_lambda
  WeightComposition l21({2, 1});
  CHECK(Int(canonical_p(l21).components.size()) == combi::multinomial(l21));
}

TEST_CASE("rv_element and theorem: p = P_z with one global sign per lambda") {
  WeightComposition lam({1, 1});
  TensorRatVector q = rv_element(lam);
  CHECK((q.component(ColoringMap{{1, 2}}) - z_diff(2, 1).term_power(-1)).structurally_zero());
  CHECK((q.component(ColoringMap{{2, 1}}) - z_diff(1, 2).term_power(-1)).structurally_zero());

  for (const auto& l : enumerate_compositions(2, 4)) {
    auto rec = check_p_equals_rv(l, 3, 7);
    CHECK(rec.pass);
    CHECK(rec.failure_bound < 1e-15);
  }
  for (const auto& l : enumerate_compositions(3, 3)) CHECK(check_p_equals_rv(l, 3, 7).pass);
}

TEST_CASE("singular_check") {
  CHECK(singular_check(canonical_p(WeightComposition({1, 1})), 3, 1).pass);
  CHECK(singular_check(canonical_p(WeightComposition({2, 1})), 3, 1).pass);

  auto bad = singular_check(basis_vector(WeightComposition({1, 1}), ColoringMap{{1, 2}}), 3, 1);
  CHECK_FALSE(bad.pass);
  CHECK(!bad.witness.is_null());
}

TEST_CASE("e(z) nilpotency") {
  auto r21 = e_z_nilpotency_check(canonical_p(WeightComposition({2, 1})), WeightComposition({2, 1}));
  CHECK(r21.pass);

  auto r11 = e_z_nilpotency_check(canonical_p(WeightComposition({1, 1})), WeightComposition({1, 1}));
  CHECK(r11.pass);
  CHECK(r11.detail["e_z_v_already_zero"] == false);

  auto r22 = e_z_nilpotency_check(canonical_p(WeightComposition({2, 2})), WeightComposition({2, 2}));
  CHECK(r22.pass);
}

TEST_CASE("KZ residual") {
  // hand case lambda=(1,1): residual of p is zero for coupling 1/3, pi - 2 Id
  WeightComposition lam({1, 1});
  TensorRatVector p = canonical_p(lam);
  KZConnection conn = KZConnection::make(Rat(1, 3), KZConnection::Mode::GL, 2, Rat(-2));
  for (int i = 1; i <= 2; ++i) CHECK(vec_zero(kz_residual(conn, p, i, 2)));

  // lambda=(1,1,1), coupling 1/4, pi - 3 Id
  WeightComposition l111({1, 1, 1});
  TensorRatVector p3 = canonical_p(l111);
  KZConnection c3 = KZConnection::make(Rat(1, 4), KZConnection::Mode::GL, 3, Rat(-3));
  for (int i = 1; i <= 3; ++i) CHECK(vec_zero(kz_residual(c3, p3, i, 3)));

  // a non-solution has a nonzero residual with witness
  TensorRatVector unit = basis_vector(lam, ColoringMap{{1, 2}});
  auto r = vector_is_zero(kz_residual(conn, unit, 1, 2), 3, 9);
  CHECK_FALSE(r.is_zero);
  CHECK(r.witness.has_value());

  CHECK(check_kz_canonical(WeightComposition({2, 2}), 3, 3).pass);
}

TEST_CASE("gauge transforms") {
  KZConnection conn = KZConnection::make(Rat(1, 3), KZConnection::Mode::GL, 2, Rat(-1));
  std::vector<std::vector<Rat>> zero(2, std::vector<Rat>(2, Rat(0)));
  KZConnection same = gauge_transform(conn, zero);
  CHECK(same.scalar_shift == conn.scalar_shift);

  // shifting (pi - Id)/kappa to (pi - m Id)/kappa changes the residual by the
  // predicted scalar multiple of v
  WeightComposition lam({1, 1});
  TensorRatVector p = canonical_p(lam);
  std::vector<std::vector<Rat>> shift(2, std::vector<Rat>(2, Rat(0)));
  shift[0][1] = shift[1][0] = Rat(-1);  // -1 -> -2
  KZConnection shifted = gauge_transform(conn, shift);
  for (int i = 1; i <= 2; ++i) {
    TensorRatVector diff = kz_residual(conn, p, i, 2) - kz_residual(shifted, p, i, 2);
    int j = (i == 1) ? 2 : 1;
    RatExpr inv = RatExpr::factor_power(LinearFactor::diff(VarId::z(i), VarId::z(j)), -1);
    TensorRatVector predicted = p.scaled(inv).scaled(RatExpr::constant(Rat(-1, 3)));
    CHECK(vec_zero(diff - predicted));
  }

  // double shift composes additively
  KZConnection twice = gauge_transform(gauge_transform(conn, shift), shift);
  CHECK(twice.scalar_shift[0][1] == Rat(-3));

  // asymmetric shift rejected
  std::vector<std::vector<Rat>> asym(2, std::vector<Rat>(2, Rat(0)));
  asym[0][1] = Rat(1);
  CHECK_THROWS_AS(gauge_transform(conn, asym), std::invalid_argument);
}

TEST_CASE("sl-mode Casimir is the gl-mode one shifted by -1/m") {
  WeightComposition lam({1, 1});
  TensorRatVector p = canonical_p(lam);
  // gl mode with shift c and sl mode with shift c + 1/m give equal residuals
  KZConnection gl = KZConnection::make(Rat(1, 3), KZConnection::Mode::GL, 2, Rat(-2));
  KZConnection sl = KZConnection::make(Rat(1, 3), KZConnection::Mode::SL, 2, Rat(-2) + Rat(1, 2));
  for (int i = 1; i <= 2; ++i)
    CHECK(vec_zero(kz_residual(gl, p, i, 2) - kz_residual(sl, p, i, 2), 61));
}

TEST_CASE("weight decomposition: sum of dims = m^N for m,N <= (3,5)") {
  for (int m = 1; m <= 3; ++m) {
    for (int N = 0; N <= 5; ++N) {
      Int total = 0;
      for (const auto& lam : enumerate_compositions(m, N)) total += combi::multinomial(lam);
      Int expect = 1;
      for (int k = 0; k < N; ++k) expect *= m;
      CHECK(total == expect);
    }
  }
}

TEST_CASE("gl(m) commutation relations on all basis vectors, m <= 3, N <= 3") {
  for (int m = 2; m <= 3; ++m) {
    for (int N = 1; N <= 3; ++N) {
      for (const auto& lam : enumerate_compositions(m, N)) {
        for (const auto& w : enumerate_colorings(lam)) {
          TensorRatVector v = basis_vector(lam, w);
          for (int a = 1; a <= m; ++a)
            for (int b = 1; b <= m; ++b)
              for (int c = 1; c <= m; ++c)
                for (int d = 1; d <= m; ++d) {
                  TensorRatVector lhs = act_gl(a, b, act_gl(c, d, v)) - act_gl(c, d, act_gl(a, b, v));
                  TensorRatVector rhs;
                  rhs.weight = lhs.weight;
                  if (b == c) {
                    TensorRatVector t = act_gl(a, d, v);
                    rhs.weight = t.weight;
                    rhs = rhs + t;
                  }
                  if (d == a) {
                    TensorRatVector t = act_gl(c, b, v).scaled(RatExpr::constant(-1));
                    rhs.weight = t.weight;
                    rhs = rhs + t;
                  }
                  if (rhs.components.empty()) rhs.weight = lhs.weight;
                  CHECK(vec_zero(lhs - rhs, 31 * a + 7 * b + 3 * c + d));
                }
        }
      }
    }
  }
}

TEST_CASE("current bracket [x t^i, y t^j] = [x,y] t^{i+j} for i+j <= 3") {
  WeightComposition lam({1, 1});
  const int m = 2;
  for (const auto& w : enumerate_colorings(lam)) {
    TensorRatVector v = basis_vector(lam, w);
    for (int a = 1; a <= m; ++a)
      for (int b = 1; b <= m; ++b)
        for (int c = 1; c <= m; ++c)
          for (int d = 1; d <= m; ++d)
            for (int i = 0; i <= 3; ++i)
              for (int j = 0; i + j <= 3; ++j) {
                TensorRatVector lhs =
                    act_current(a, b, i, act_current(c, d, j, v)) -
                    act_current(c, d, j, act_current(a, b, i, v));
                TensorRatVector rhs;
                rhs.weight = lam;
                if (b == c) rhs = rhs + act_current(a, d, i + j, v);
                if (d == a) rhs = rhs - act_current(c, b, i + j, v);
                CHECK(vec_zero(lhs - rhs, 100 + 10 * i + j));
              }
  }
}

TEST_CASE("KZ holds iff lambda_1 - lambda_m <= 1 (desk partitions)") {
  CHECK(check_kz_canonical(WeightComposition({1, 1, 1})).pass);
  CHECK(check_kz_canonical(WeightComposition({2, 1, 1})).pass);
  CHECK_FALSE(check_kz_canonical(WeightComposition({3, 1})).pass);
}

TEST_CASE("antisymmetry for lambda = (1,..,1)") {
  WeightComposition lam({1, 1, 1});
  TensorRatVector p = canonical_p(lam);
  RatExpr vand = z_diff(2, 1) * z_diff(3, 1) * z_diff(3, 2);  // prod_{i<j}(z_j - z_i)
  for (const auto& [w, comp] : p.components) {
    RatExpr scaled = comp * vand;
    CHECK((scaled - RatExpr::constant(perm_sign(w))).is_zero(3, 77).is_zero);
  }
}
