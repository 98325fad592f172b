#include "flagblocks/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>

#include "flagblocks/combinatorics.hpp"
#include "flagblocks/conformal.hpp"
#include "flagblocks/currents.hpp"
#include "flagblocks/hypergeom.hpp"
#include "flagblocks/localization.hpp"

namespace flagblocks::acceptance {

using combi::ColoringMap;
using combi::Int;
using combi::WeightComposition;
using symalg::Rat;
using symalg::RatExpr;

namespace {

double now_s() {
  return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

std::vector<WeightComposition> concat(std::initializer_list<std::pair<int, int>> ranges) {
  std::vector<WeightComposition> out;
  for (auto [m, N] : ranges)
    for (const auto& lam : combi::enumerate_compositions(m, N)) out.push_back(lam);
  return out;
}

std::vector<WeightComposition> partitions_of(std::initializer_list<std::pair<int, int>> ranges) {
  std::vector<WeightComposition> out;
  for (const auto& lam : concat(ranges))
    if (lam.is_partition()) out.push_back(lam);
  return out;
}

int perm_sign(const ColoringMap& w) {
  int s = 1;
  for (int i = 0; i < w.N(); ++i)
    for (int j = i + 1; j < w.N(); ++j)
      if (w.colors[i] > w.colors[j]) s = -s;
  return s;
}

double rel_err(double got, double want) {
  return std::fabs(got - want) / std::max(1e-300, std::fabs(want));
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3g", v);
  return buf;
}

// --------------------------------------------------------------------------
// criteria

CriterionResult c1_q_limit() {
  CriterionResult r{1, "q->1 limit and degree of the Gaussian multinomial", true, 0, 1.0, "", {}};
  int checked = 0;
  for (const auto& lam : concat({{2, 6}, {3, 4}, {4, 4}})) {
    auto q = combi::q_multinomial(lam);
    Int at_one = 0;
    for (const Int& c : q) at_one += c;
    if (at_one != combi::multinomial(lam)) r.pass = false;
    if (static_cast<long>(q.size()) - 1 != lam.dimension()) r.pass = false;
    ++checked;
  }
  r.note = std::to_string(checked) + " weights, exact";
  return r;
}

CriterionResult c2_delta() {
  CriterionResult r{2, "delta property of the y'-classes at all fixed-point pairs", true, 0, 30.0,
                    "", {}};
  long pairs = 0;
  for (const auto& lam : concat({{2, 4}, {3, 3}})) {
    auto pts = combi::enumerate_colorings(lam);
    for (const auto& wp : pts) {
      loc::ChernRootExpr y = loc::y_prime_class(lam, wp);
      for (const auto& w : pts) {
        ++pairs;
        RatExpr got = loc::restrict_at(y, w);
        if (w == wp) {
          if (!(got - loc::euler_class(w)).structurally_zero()) r.pass = false;
        } else {
          if (!got.structurally_zero()) r.pass = false;
        }
      }
    }
  }
  r.note = std::to_string(pairs) + " pairs, exact symbolic";
  return r;
}

CriterionResult c3_integral_one() {
  CriterionResult r{3, "localization integral of every y'-class equals 1", true, 0, 0, "", {}};
  long classes = 0;
  for (const auto& lam : concat({{2, 4}, {3, 3}})) {
    auto pts = combi::enumerate_colorings(lam);
    for (const auto& wp : pts) {
      ++classes;
      loc::LocalizedClass cls(lam);
      for (const auto& w : pts)
        cls.restrictions.at(w) = loc::restrict_at(loc::y_prime_class(lam, wp), w);
      RatExpr diff = loc::integrate(cls) - RatExpr::constant(1);
      if (!diff.structurally_zero()) r.pass = false;
    }
  }
  r.note = std::to_string(classes) + " classes, exact";
  return r;
}

CriterionResult c4_p_equals_rv(std::uint64_t seed) {
  CriterionResult r{4, "canonical section equals its R-function form (one sign per weight)",
                    true, 0, 120.0, "", {}};
  double bound = 0.0;
  int n = 0;
  r.detail["signs"] = Json::object();
  for (const auto& lam : concat({{2, 4}, {3, 3}, {3, 4}})) {
    auto rec = cb::check_p_equals_rv(lam, 3, seed + n);
    ++n;
    bound += rec.failure_bound;
    if (!rec.pass) r.pass = false;
    else r.detail["signs"][lam.str()] = rec.detail["sign"];
  }
  if (bound >= 1e-15) r.pass = false;
  r.detail["failure_bound"] = bound;
  r.note = std::to_string(n) + " weights, bound " + sci(bound);
  return r;
}

CriterionResult c5_singular_blocks_kz(std::uint64_t seed) {
  CriterionResult r{5, "singular vectors, e(z)-nilpotency, and the KZ boundary", true, 0, 300.0,
                    "", {}};
  double bound = 0.0;
  int checked = 0;
  for (const auto& lam : partitions_of({{2, 4}, {3, 3}, {3, 4}})) {
    cb::TensorRatVector p = cb::canonical_p(lam);
    // the section must be certifiably nonzero for the rank-1 membership tests
    if (cb::vector_is_zero(p, 1, seed).is_zero) r.pass = false;
    auto sa = cb::singular_check(p, 3, seed + checked);
    auto sb = cb::e_z_nilpotency_check(p, lam, 3, seed + 100 + checked);
    bound += sa.failure_bound + sb.failure_bound;
    if (!sa.pass || !sb.pass) r.pass = false;
    if (lam.parts.front() - lam.parts.back() <= 1) {
      auto sc = cb::check_kz_canonical(lam, 3, seed + 200 + checked);
      bound += sc.failure_bound;
      if (!sc.pass) r.pass = false;
    }
    ++checked;
  }
  // a genuine non-solution: lambda = (3,1) must give a nonzero KZ residual
  {
    WeightComposition bad({3, 1});
    cb::TensorRatVector p = cb::canonical_p(bad);
    cb::KZConnection conn = cb::KZConnection::make(Rat(1, 3), cb::KZConnection::Mode::GL,
                                                   bad.N(), Rat(-2));
    bool witnessed = false;
    for (int i = 1; i <= bad.N() && !witnessed; ++i) {
      auto zt = cb::vector_is_zero(cb::kz_residual(conn, p, i, 2), 3, seed + 999);
      if (!zt.is_zero && zt.witness) {
        witnessed = true;
        r.detail["kz_nonzero_witness"] = witness_json(*zt.witness);
        r.detail["kz_nonzero_lambda"] = bad.str();
      }
    }
    if (!witnessed) r.pass = false;
  }
  r.detail["failure_bound"] = bound;
  r.note = std::to_string(checked) + " partitions, bound " + sci(bound);
  return r;
}

CriterionResult c6_selberg_m2() {
  CriterionResult r{6, "Selberg integral m=2 at kappa=-2 against the Beta/Gamma constant", true,
                    0, 5.0, "", {}};
  const double kappa = -2.0;
  hg::SelbergResult s = hg::selberg_numeric(2, {0.0, 1.0}, kappa);
  // independent oracle: the one-dimensional Beta integral
  const double beta_oracle = quad::beta_fn(1.0 - 1.0 / kappa, -1.0 / kappa);  // pi/2
  const double c2 = hg::c_m_constant(2, kappa).value;                        // -pi/2
  r.detail["c2"] = c2;
  r.detail["beta_oracle"] = beta_oracle;
  if (rel_err(-c2, beta_oracle) > 1e-13) r.pass = false;
  double worst = 0.0;
  for (std::size_t c = 0; c < s.index.size(); ++c) {
    double want = c2 * perm_sign(s.index[c]);  // psi(z) = 1 at z = (0,1)
    worst = std::max(worst, rel_err(s.components[c], want));
  }
  r.detail["worst_rel_err"] = worst;
  if (worst > 1e-8) r.pass = false;
  r.note = "worst component error " + sci(worst) + "; closed form evaluates to -pi/2";
  return r;
}

CriterionResult c7_selberg_m3() {
  CriterionResult r{7, "Selberg integral m=3 at kappa=-2 against the Gamma constant", true, 0,
                    600.0, "", {}};
  const double kappa = -2.0;
  std::vector<double> z{0.0, 1.0, 2.0};
  hg::QuadConfig cfg;
  cfg.nodes = 24;
  cfg.refinements = 2;
  hg::SelbergResult s = hg::selberg_numeric(3, z, kappa, cfg);
  double psi_z = 1.0;
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) psi_z *= std::pow(z[j] - z[i], -2.0 / kappa);
  hg::GammaConstant c3 = hg::c_m_constant(3, kappa);
  double worst = 0.0;
  double ratio_printed = 0.0;
  for (std::size_t c = 0; c < s.index.size(); ++c) {
    double want = c3.value_normalized * psi_z * perm_sign(s.index[c]);
    worst = std::max(worst, rel_err(s.components[c], want));
    ratio_printed = s.components[c] / (c3.value * psi_z * perm_sign(s.index[c]));
  }
  if (worst > 1e-5) r.pass = false;
  r.detail["worst_rel_err"] = worst;
  r.detail["constant_used"] = c3.value_normalized;
  r.detail["literal_formula_value"] = c3.value;
  r.detail["integral_over_literal_formula"] = ratio_printed;
  r.detail["empirical_sign"] = s.components.back() * perm_sign(s.index.back()) < 0 ? -1 : 1;
  r.note = "cell-normalized constant matched to " + sci(worst) +
           "; literal closed form differs by the factor kappa (reported, not corrected)";
  return r;
}

CriterionResult c8_gamma_crosscheck() {
  CriterionResult r{8, "m=2 constant two ways: closed form vs Gamma recurrence", true, 0, 0, "",
                    {}};
  double worst = 0.0;
  for (double kappa : {-0.5, -1.25, -2.0, -3.0, -7.5}) {
    double a = hg::c_m_constant(2, kappa).value;
    // Gamma(-1/k) = Gamma(1-1/k)/(-1/k) turns the Beta-integral constant into
    // the closed form, up to the overall orientation sign
    double b = -std::exp(std::lgamma(1.0 - 1.0 / kappa) + std::lgamma(-1.0 / kappa) -
                         std::lgamma(1.0 - 2.0 / kappa));
    worst = std::max(worst, rel_err(a, b));
  }
  if (worst > 1e-12) r.pass = false;
  r.detail["worst_rel_err"] = worst;
  r.note = "5 sampled kappa, worst " + sci(worst);
  return r;
}

CriterionResult c9_psi_omega(std::uint64_t seed) {
  CriterionResult r{9, "psi-function projection equals the weight functions (m=2,3)", true, 0, 0,
                    "", {}};
  for (int m : {2, 3}) {
    WeightComposition lam(std::vector<int>(m, 1));
    std::vector<int> nbar(m - 1);
    for (int i = 1; i <= m - 1; ++i) nbar[i - 1] = m - i;
    std::map<ColoringMap, RatExpr> projected;
    for (const auto& mon : hg::enumerate_monomials(m - 1, m, nbar)) {
      auto w = hg::project_vector_rep(mon, m);
      if (!w) continue;
      auto it = projected.find(*w);
      if (it == projected.end())
        projected[*w] = hg::psi(mon);
      else
        it->second += hg::psi(mon);
    }
    for (const auto& I : combi::enumerate_colorings(lam)) {
      if (!projected.count(I)) {
        r.pass = false;
        continue;
      }
      auto zt = (projected.at(I) - hg::weight_function(lam, I)).is_zero(3, seed + m);
      if (!zt.is_zero) r.pass = false;
    }
  }
  r.note = "exact zero tests over the t,z field";
  return r;
}

CriterionResult c10_currents(std::uint64_t seed) {
  CriterionResult r{10, "current operators transfer to sum_i x^(i) z_i^j, with bracket closure",
                    true, 0, 600.0, "", {}};
  double bound = 0.0;
  long idents = 0;
  for (auto [m, N] : std::vector<std::pair<int, int>>{{2, 2}, {2, 3}, {3, 3}}) {
    auto rec = cur::verify_current_action(m, N, 2, 3, seed + m * 10 + N);
    bound += rec.failure_bound;
    idents += static_cast<long>(rec.detail["identities"].size());
    if (!rec.pass) {
      r.pass = false;
      r.detail["witness"] = rec.witness;
    }
  }
  if (bound >= 1e-15) r.pass = false;
  r.detail["identities"] = idents;
  r.detail["failure_bound"] = bound;
  r.note = std::to_string(idents) + " identities, bound " + sci(bound);
  return r;
}

CriterionResult c11_level1_kz() {
  CriterionResult r{11, "level-one integral: finite-difference KZ residual under refinement",
                    true, 0, 0, "", {}};
  WeightComposition lam({2, 1});
  hg::QuadConfig cfg;
  cfg.nodes = 8;
  cfg.refinements = 2;
  hg::KZResidualReport rep = hg::level1_kz_residual(lam, {0.0, 1.0, 2.0}, -2.0, cfg, 1e-4);
  r.detail["node_counts"] = rep.node_counts;
  r.detail["residuals"] = rep.residuals;
  if (rep.residuals.back() >= 1e-4) r.pass = false;
  if (rep.residuals.back() > rep.residuals.front() * 2.0 + 1e-12) r.pass = false;
  r.note = "final residual " + sci(rep.residuals.back());
  return r;
}

CriterionResult extended_p3_5(std::uint64_t seed) {
  CriterionResult r{12, "extended sweep over P_3(5): section identity and block membership",
                    true, 0, 0, "", {}};
  double bound = 0.0;
  int n = 0;
  for (const auto& lam : combi::enumerate_compositions(3, 5)) {
    auto rec = cb::check_p_equals_rv(lam, 3, seed + n++);
    bound += rec.failure_bound;
    if (!rec.pass) r.pass = false;
    if (lam.is_partition()) {
      cb::TensorRatVector p = cb::canonical_p(lam);
      auto sa = cb::singular_check(p, 3, seed + 500 + n);
      auto sb = cb::e_z_nilpotency_check(p, lam, 3, seed + 600 + n);
      bound += sa.failure_bound + sb.failure_bound;
      if (!sa.pass || !sb.pass) r.pass = false;
    }
  }
  r.detail["failure_bound"] = bound;
  r.note = "21 weights, bound " + sci(bound);
  return r;
}

CriterionResult timed(CriterionResult (*fn)()) {
  double t0 = now_s();
  CriterionResult r = fn();
  r.wall_s = now_s() - t0;
  if (r.limit_s > 0 && r.wall_s > r.limit_s) {
    r.pass = false;
    r.note += " [over the stated runtime budget]";
  }
  return r;
}

CriterionResult timed_seeded(CriterionResult (*fn)(std::uint64_t), std::uint64_t seed) {
  double t0 = now_s();
  CriterionResult r = fn(seed);
  r.wall_s = now_s() - t0;
  if (r.limit_s > 0 && r.wall_s > r.limit_s) {
    r.pass = false;
    r.note += " [over the stated runtime budget]";
  }
  return r;
}

}  // namespace

std::vector<CriterionResult> run_acceptance(const std::string& profile, std::uint64_t seed) {
  std::vector<CriterionResult> out;
  const bool desk = profile == "desk" || profile == "extended";
  if (profile != "smoke" && !desk) throw std::invalid_argument("unknown profile: " + profile);

  out.push_back(timed(c1_q_limit));
  if (desk) {
    out.push_back(timed(c2_delta));
    out.push_back(timed(c3_integral_one));
    out.push_back(timed_seeded(c4_p_equals_rv, seed));
    out.push_back(timed_seeded(c5_singular_blocks_kz, seed));
  } else {
    // smoke: the same checks on the smallest instances
    double t0 = now_s();
    CriterionResult r{2, "delta property (smoke subset)", true, 0, 10.0, "", {}};
    WeightComposition lam({1, 1});
    for (const auto& wp : combi::enumerate_colorings(lam))
      for (const auto& w : combi::enumerate_colorings(lam)) {
        RatExpr got = loc::restrict_at(loc::y_prime_class(lam, wp), w);
        RatExpr want = (w == wp) ? loc::euler_class(w) : RatExpr::zero();
        if (!(got - want).structurally_zero()) r.pass = false;
      }
    auto rec = cb::check_p_equals_rv(WeightComposition({2, 1}), 3, seed);
    if (!rec.pass) r.pass = false;
    r.wall_s = now_s() - t0;
    out.push_back(r);
  }
  out.push_back(timed(c6_selberg_m2));
  if (desk) out.push_back(timed(c7_selberg_m3));
  out.push_back(timed(c8_gamma_crosscheck));
  out.push_back(timed_seeded(c9_psi_omega, seed));
  if (desk) {
    out.push_back(timed_seeded(c10_currents, seed));
    out.push_back(timed(c11_level1_kz));
  } else {
    double t0 = now_s();
    auto rec = cur::verify_current_action(2, 2, 1, 3, seed);
    CriterionResult r{10, "current operators (smoke subset)", rec.pass, 0, 10.0, "", {}};
    r.wall_s = now_s() - t0;
    out.push_back(r);
  }
  if (profile == "extended") out.push_back(timed_seeded(extended_p3_5, seed));
  return out;
}

Json results_json(const std::vector<CriterionResult>& results) {
  Json arr = Json::array();
  for (const auto& r : results) {
    Json j;
    j["criterion"] = r.number;
    j["name"] = r.name;
    j["result"] = r.pass ? "pass" : "fail";
    j["wall_s"] = r.wall_s;
    j["note"] = r.note;
    if (!r.detail.is_null()) j["detail"] = r.detail;
    arr.push_back(std::move(j));
  }
  return arr;
}

bool all_pass(const std::vector<CriterionResult>& results) {
  for (const auto& r : results)
    if (!r.pass) return false;
  return true;
}

}  // namespace flagblocks::acceptance
