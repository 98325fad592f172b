#include "flagblocks/hypergeom.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace flagblocks::hg {

using symalg::LinearFactor;

// ---------------------------------------------------------------------------
// Cartan data / master functions

CartanData CartanData::sl_vector(int m, int N, const Rat& zz) {
  if (m < 2) throw std::invalid_argument("sl(m) needs m >= 2");
  CartanData c;
  c.r = m - 1;
  c.N = N;
  c.gram.assign(c.r, std::vector<Rat>(c.r, Rat(0)));
  for (int i = 0; i < c.r; ++i) {
    c.gram[i][i] = Rat(2);
    if (i + 1 < c.r) c.gram[i][i + 1] = c.gram[i + 1][i] = Rat(-1);
  }
  c.weight_pairings.assign(c.r, std::vector<Rat>(N, Rat(0)));
  for (int j = 0; j < N; ++j) c.weight_pairings[0][j] = Rat(1);  // (alpha_i, omega_1) = delta_i1
  c.weight_gram.assign(N, std::vector<Rat>(N, Rat(0)));
  for (int j = 0; j < N; ++j)
    for (int k = 0; k < N; ++k)
      if (j != k) c.weight_gram[j][k] = zz;
  return c;
}

namespace {
std::pair<VarId, VarId> pair_key(VarId x, VarId y) {
  return x < y ? std::make_pair(x, y) : std::make_pair(y, x);
}
}  // namespace

Rat MasterFunction::exponent(VarId x, VarId y) const {
  auto it = exponents.find(pair_key(x, y));
  return it == exponents.end() ? Rat(0) : it->second;
}

MasterFunction build_master(const CartanData& cartan, const std::vector<int>& nbar) {
  if (static_cast<int>(nbar.size()) != cartan.r)
    throw std::invalid_argument("nbar length must equal the rank");
  MasterFunction mf;
  mf.nbar = nbar;
  mf.N = cartan.N;
  auto put = [&mf](VarId x, VarId y, const Rat& e) {
    if (e != 0) mf.exponents[pair_key(x, y)] = e;
  };
  for (int i = 1; i <= cartan.r; ++i) {
    for (int a = 1; a <= nbar[i - 1]; ++a) {
      // same color, a < b
      for (int b = a + 1; b <= nbar[i - 1]; ++b)
        put(VarId::t(i, a), VarId::t(i, b), cartan.gram[i - 1][i - 1]);
      // distinct colors i < j
      for (int j = i + 1; j <= cartan.r; ++j)
        for (int b = 1; b <= nbar[j - 1]; ++b)
          put(VarId::t(i, a), VarId::t(j, b), cartan.gram[i - 1][j - 1]);
      // t-z
      for (int j = 1; j <= cartan.N; ++j)
        put(VarId::t(i, a), VarId::z(j), Rat(-cartan.weight_pairings[i - 1][j - 1]));
    }
  }
  for (int j = 1; j <= cartan.N; ++j)
    for (int k = j + 1; k <= cartan.N; ++k)
      put(VarId::z(j), VarId::z(k), cartan.weight_gram[j - 1][k - 1]);
  return mf;
}

// ---------------------------------------------------------------------------
// psi functions

std::vector<int> UMonomial::content() const {
  std::vector<int> n(r, 0);
  for (const auto& word : words)
    for (int l : word) {
      if (l < 1 || l > r) throw std::invalid_argument("letter out of range");
      ++n[l - 1];
    }
  return n;
}

RatExpr psi_tilde(const UMonomial& mon) {
  std::vector<int> counts = mon.content();
  std::vector<std::pair<LinearFactor, int>> factors;
  for (int site = mon.N(); site >= 1; --site) {
    const auto& word = mon.words[site - 1];
    for (std::size_t idx = 0; idx < word.size(); ++idx) {
      int l = word[idx];
      VarId v = VarId::t(l, counts[l - 1]);
      --counts[l - 1];
      VarId partner;
      if (idx + 1 < word.size()) {
        int l2 = word[idx + 1];
        partner = VarId::t(l2, counts[l2 - 1]);
      } else {
        partner = VarId::z(site);
      }
      factors.push_back({LinearFactor::diff(v, partner), -1});
    }
  }
  return RatExpr::product_of_factors(factors);
}

namespace {

void foreach_color_permutations(const std::vector<int>& nbar, int color,
                                std::map<VarId, VarId>& repl,
                                const std::function<void(const std::map<VarId, VarId>&)>& fn) {
  if (color > static_cast<int>(nbar.size())) {
    fn(repl);
    return;
  }
  int n = nbar[color - 1];
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 1);
  do {
    for (int a = 1; a <= n; ++a) repl[VarId::t(color, a)] = VarId::t(color, perm[a - 1]);
    foreach_color_permutations(nbar, color + 1, repl, fn);
  } while (std::next_permutation(perm.begin(), perm.end()));
}

}  // namespace

RatExpr psi(const UMonomial& mon) {
  RatExpr base = psi_tilde(mon);
  std::vector<int> nbar = mon.content();
  RatExpr sum;
  std::map<VarId, VarId> repl;
  foreach_color_permutations(nbar, 1, repl, [&](const std::map<VarId, VarId>& r) {
    sum += base.substitute(r);
  });
  return sum;
}

std::vector<UMonomial> enumerate_monomials(int r, int N, const std::vector<int>& nbar) {
  std::vector<UMonomial> out;
  UMonomial cur;
  cur.r = r;
  cur.words.assign(N, {});
  std::vector<int> remaining = nbar;
  // grow the word at `site` letter by letter, then move on
  auto rec = [&](auto&& self, int site) -> void {
    if (site > N) {
      if (std::all_of(remaining.begin(), remaining.end(), [](int x) { return x == 0; }))
        out.push_back(cur);
      return;
    }
    self(self, site + 1);  // leave this site's word as is
    for (int l = 1; l <= r; ++l) {
      if (remaining[l - 1] == 0) continue;
      --remaining[l - 1];
      cur.words[site - 1].push_back(l);
      self(self, site);
      cur.words[site - 1].pop_back();
      ++remaining[l - 1];
    }
  };
  rec(rec, 1);
  return out;
}

std::optional<ColoringMap> project_vector_rep(const UMonomial& mon, int m) {
  ColoringMap w;
  w.colors.assign(mon.N(), 0);
  for (int site = 1; site <= mon.N(); ++site) {
    const auto& word = mon.words[site - 1];
    const int k = static_cast<int>(word.size());
    for (int idx = 0; idx < k; ++idx)
      if (word[idx] != k - idx) return std::nullopt;  // must be f~_k f~_{k-1} ... f~_1
    if (k + 1 > m) return std::nullopt;
    w.colors[site - 1] = k + 1;
  }
  return w;
}

// ---------------------------------------------------------------------------
// Weight functions

std::vector<int> level_sizes(const WeightComposition& lambda) {
  const int m = lambda.m();
  std::vector<int> mu(m - 1, 0);
  for (int i = 1; i <= m - 1; ++i)
    for (int k = i + 1; k <= m; ++k) mu[i - 1] += lambda.parts[k - 1];
  return mu;
}

NuFamily canonical_nu(const WeightComposition& lambda, const ColoringMap& I) {
  const int m = lambda.m();
  NuFamily nu;
  for (int lev = 1; lev <= m - 1; ++lev) {
    std::vector<int> list;
    for (int c = m; c >= lev + 1; --c)
      for (int s : I.fiber(c)) list.push_back(s);
    nu.nu.push_back(std::move(list));
  }
  return nu;
}

namespace {

void validate_nu(const WeightComposition& lambda, const ColoringMap& I, const NuFamily& nu) {
  const int m = lambda.m();
  const std::vector<int> mu = level_sizes(lambda);
  if (static_cast<int>(nu.nu.size()) != m - 1)
    throw std::invalid_argument("nu family needs one bijection per level");
  for (int lev = 1; lev <= m - 1; ++lev) {
    const auto& list = nu.nu[lev - 1];
    if (static_cast<int>(list.size()) != mu[lev - 1])
      throw std::invalid_argument("nu_" + std::to_string(lev) + " has the wrong size");
    // block rule: the first lambda_m entries lie in I_m, the next lambda_{m-1}
    // in I_{m-1}, ..., the last lambda_{lev+1} in I_{lev+1}
    std::size_t pos = 0;
    for (int c = m; c >= lev + 1; --c) {
      std::vector<int> fib = I.fiber(c);
      std::vector<int> got(list.begin() + pos, list.begin() + pos + fib.size());
      std::sort(got.begin(), got.end());
      if (got != fib)
        throw std::invalid_argument("nu_" + std::to_string(lev) +
                                    " violates the block-order rule");
      pos += fib.size();
    }
  }
}

}  // namespace

RatExpr weight_function(const WeightComposition& lambda, const ColoringMap& I,
                        const NuFamily& nu) {
  if (!I.matches(lambda)) throw std::invalid_argument("partition does not match lambda");
  validate_nu(lambda, I, nu);
  const int m = lambda.m();
  const std::vector<int> mu = level_sizes(lambda);

  std::vector<std::pair<LinearFactor, int>> factors;
  for (int lev = 1; lev <= m - 1; ++lev) {
    for (int c = 1; c <= mu[lev - 1]; ++c) {
      int site = nu.nu[lev - 1][c - 1];
      VarId tv = VarId::t(lev, c);
      VarId partner;
      if (lev == 1) {
        partner = VarId::z(site);
      } else {
        const auto& prev = nu.nu[lev - 2];
        auto it = std::find(prev.begin(), prev.end(), site);
        if (it == prev.end()) throw std::invalid_argument("nu levels are not nested");
        partner = VarId::t(lev - 1, static_cast<int>(it - prev.begin()) + 1);
      }
      factors.push_back({LinearFactor::diff(tv, partner), -1});
    }
  }
  RatExpr g = RatExpr::product_of_factors(factors);

  RatExpr sum;
  std::map<VarId, VarId> repl;
  std::vector<int> nbar(mu.begin(), mu.end());
  foreach_color_permutations(nbar, 1, repl, [&](const std::map<VarId, VarId>& r) {
    sum += g.substitute(r);
  });
  return sum;
}

RatExpr weight_function(const WeightComposition& lambda, const ColoringMap& I) {
  return weight_function(lambda, I, canonical_nu(lambda, I));
}

// ---------------------------------------------------------------------------
// Cells

bool is_level1_shape(const WeightComposition& lambda, int* a_out, int* mprime_out) {
  const int m = lambda.m();
  if (!lambda.is_partition()) return false;
  int a = lambda.parts[m - 1];
  int mprime = 0;
  for (int i = 0; i < m; ++i) {
    if (lambda.parts[i] == a + 1)
      ++mprime;
    else if (lambda.parts[i] != a)
      return false;
  }
  if (mprime >= m) return false;  // by convention (a+1,...,a+1) reads as a' = a+1, m' = 0
  if (a_out) *a_out = a;
  if (mprime_out) *mprime_out = mprime;
  return true;
}

namespace {

// One flag-type cell gamma_mm over anchors z_{zoff+1..zoff+mm}, with the
// level-i variables t^{(i)}_{toff_i+1..toff_i+mm-i}.
void append_gamma_cell(GZCell& cell, int mm, int zoff, const std::vector<int>& toff) {
  if (mm <= 1) return;
  // integration plan, outermost level first
  for (int lev = 1; lev <= mm - 1; ++lev) {
    for (int i = 1; i <= mm - lev; ++i) {
      CellVar v;
      v.var = VarId::t(lev, toff[lev - 1] + i);
      if (lev == 1) {
        v.lo = CellPoint::anchor(zoff + i);
        v.hi = CellPoint::anchor(zoff + i + 1);
      } else {
        v.lo = CellPoint::variable(VarId::t(lev - 1, toff[lev - 2] + i));
        v.hi = CellPoint::variable(VarId::t(lev - 1, toff[lev - 2] + i + 1));
      }
      cell.vars.push_back(v);
    }
  }
  // printed inequality chains, top line (level mm-1) down to the z-line
  for (int lev = mm - 1; lev >= 2; --lev) {
    for (int i = 1; i <= mm - lev; ++i) {
      CellPoint lo = CellPoint::variable(VarId::t(lev - 1, toff[lev - 2] + i));
      CellPoint mid = CellPoint::variable(VarId::t(lev, toff[lev - 1] + i));
      CellPoint hi = CellPoint::variable(VarId::t(lev - 1, toff[lev - 2] + i + 1));
      cell.constraints.push_back({lo, mid});
      cell.constraints.push_back({mid, hi});
    }
  }
  for (int i = 1; i <= mm - 1; ++i) {
    cell.constraints.push_back(
        {CellPoint::anchor(zoff + i), CellPoint::variable(VarId::t(1, toff[0] + i))});
    cell.constraints.push_back(
        {CellPoint::variable(VarId::t(1, toff[0] + i)), CellPoint::anchor(zoff + i + 1)});
  }
}

void require_increasing(const std::vector<double>& z) {
  for (std::size_t i = 1; i < z.size(); ++i)
    if (!(z[i - 1] < z[i])) throw std::invalid_argument("z must be strictly increasing");
}

}  // namespace

GZCell gz_cell(int m, const std::vector<double>& z) {
  if (static_cast<int>(z.size()) != m) throw std::invalid_argument("need m anchor values");
  require_increasing(z);
  GZCell cell;
  cell.notes = "final interleaving chain read as ... < z_m (printed upper bound z_1)";
  std::vector<int> toff(std::max(0, m - 1), 0);
  append_gamma_cell(cell, m, 0, toff);
  return cell;
}

GZCell level1_cell(const WeightComposition& lambda, const std::vector<double>& z) {
  int a = 0, mprime = 0;
  if (!is_level1_shape(lambda, &a, &mprime))
    throw std::invalid_argument("lambda is not of level-one shape");
  const int m = lambda.m();
  const int N = lambda.N();
  if (static_cast<int>(z.size()) != N) throw std::invalid_argument("need N anchor values");
  require_increasing(z);

  GZCell cell;
  cell.notes =
      "t-group sizes per block: m-i for blocks 1..a, max(m'-i,0) for the last block "
      "(printed index formula normalized); final interleaving chains read as ... < z_m";
  // blocks j = 1..a use anchors z_{m(j-1)+1..mj} and consecutive t-indices
  for (int j = 1; j <= a; ++j) {
    std::vector<int> toff(m - 1);
    for (int lev = 1; lev <= m - 1; ++lev) toff[lev - 1] = (m - lev) * (j - 1);
    append_gamma_cell(cell, m, m * (j - 1), toff);
  }
  if (mprime >= 2) {
    std::vector<int> toff(mprime - 1);
    for (int lev = 1; lev <= mprime - 1; ++lev) toff[lev - 1] = (m - lev) * a;
    append_gamma_cell(cell, mprime, m * a, toff);
  }
  return cell;
}

// ---------------------------------------------------------------------------
// Nested quadrature over a cell

namespace {

struct PairFactor {
  CellPoint a, b;  // value = val(a) - val(b)
  double rexp = 0.0;
  long iexp = 0;
  double exponent() const { return rexp + static_cast<double>(iexp); }
};

struct ProductTerm {
  double scale = 1.0;
  std::vector<PairFactor> factors;
};

CellPoint cell_point_of(VarId v) {
  if (v.kind == symalg::VarKind::Z) return CellPoint::anchor(v.i);
  return CellPoint::variable(v);
}

// Converts one factored term of a weight function, merged with the master
// exponent table, into a pure product integrand.
std::vector<ProductTerm> product_terms(const RatExpr& omega, const MasterFunction& master,
                                       double kappa) {
  std::vector<ProductTerm> out;
  for (const auto& term : omega.terms()) {
    std::map<std::pair<VarId, VarId>, std::pair<double, long>> merged;
    for (const auto& [key, mult] : master.exponents)
      merged[key] = {mult.get_d() / kappa, 0};
    for (const auto& [f, e] : term.factors) {
      if (f.coeffs.size() != 2 || f.constant != 0 || f.coeffs[0].second != 1 ||
          f.coeffs[1].second != -1)
        throw std::logic_error("integrand factor is not a variable difference");
      auto key = pair_key(f.coeffs[0].first, f.coeffs[1].first);
      merged[key].second += e;
    }
    ProductTerm pt;
    pt.scale = term.coeff.get_d();
    for (const auto& [key, ex] : merged) {
      PairFactor pf;
      pf.a = cell_point_of(key.first);
      pf.b = cell_point_of(key.second);
      pf.rexp = ex.first;
      pf.iexp = ex.second;
      if (pf.rexp != 0.0 || pf.iexp != 0) pt.factors.push_back(pf);
    }
    out.push_back(std::move(pt));
  }
  return out;
}

class CellIntegrator {
 public:
  CellIntegrator(const GZCell& cell, const std::vector<double>& z) : cell_(cell), z_(z) {
    for (std::size_t d = 0; d < cell.vars.size(); ++d) level_of_[cell.vars[d].var] = d;
    // interior sample point for sign determination, level by level
    sample_.resize(cell.vars.size());
    for (std::size_t d = 0; d < cell.vars.size(); ++d)
      sample_[d] = (resolve(cell.vars[d].lo, sample_) + resolve(cell.vars[d].hi, sample_)) / 2.0;
  }

  double integrate(const ProductTerm& term, int nodes) const {
    Plan plan = make_plan(term);
    if (cell_.vars.empty()) return plan.prefactor;
    std::vector<double> x(cell_.vars.size(), 0.0);
    return plan.prefactor * recurse(plan, 0, nodes, x);
  }

 private:
  struct Plan {
    double prefactor = 1.0;  // scale * signs * constant factors
    std::vector<double> alpha, beta;  // per level
    std::vector<PairFactor> remainder;
  };

  const GZCell& cell_;
  const std::vector<double>& z_;
  std::map<VarId, std::size_t> level_of_;
  std::vector<double> sample_;

  double resolve(const CellPoint& p, const std::vector<double>& x) const {
    if (p.is_var) return x[level_of_.at(p.var)];
    return z_[p.z_index - 1];
  }

  static int sign_pow(double v, long iexp) {
    if (iexp % 2 == 0) return 1;
    return v < 0 ? -1 : 1;
  }

  Plan make_plan(const ProductTerm& term) const {
    Plan plan;
    plan.prefactor = term.scale;
    plan.alpha.assign(cell_.vars.size(), 0.0);
    plan.beta.assign(cell_.vars.size(), 0.0);
    for (const PairFactor& pf : term.factors) {
      if (!pf.a.is_var && !pf.b.is_var) {
        double v = z_[pf.a.z_index - 1] - z_[pf.b.z_index - 1];
        plan.prefactor *= sign_pow(v, pf.iexp) * std::pow(std::fabs(v), pf.exponent());
        continue;
      }
      bool absorbed = false;
      for (std::size_t d = 0; d < cell_.vars.size() && !absorbed; ++d) {
        const CellVar& cv = cell_.vars[d];
        CellPoint self = CellPoint::variable(cv.var);
        if (pf.a == self && pf.b == cv.lo) {
          plan.alpha[d] += pf.exponent();  // (x - lo) > 0 on the cell
          absorbed = true;
        } else if (pf.b == self && pf.a == cv.lo) {
          plan.alpha[d] += pf.exponent();
          plan.prefactor *= sign_pow(-1.0, pf.iexp);  // (lo - x) < 0
          absorbed = true;
        } else if (pf.a == self && pf.b == cv.hi) {
          plan.beta[d] += pf.exponent();
          plan.prefactor *= sign_pow(-1.0, pf.iexp);  // (x - hi) < 0
          absorbed = true;
        } else if (pf.b == self && pf.a == cv.hi) {
          plan.beta[d] += pf.exponent();  // (hi - x) > 0
          absorbed = true;
        }
      }
      if (!absorbed) {
        double v = resolve(pf.a, sample_) - resolve(pf.b, sample_);
        plan.prefactor *= sign_pow(v, pf.iexp);
        plan.remainder.push_back(pf);
      }
    }
    return plan;
  }

  double recurse(const Plan& plan, std::size_t d, int nodes, std::vector<double>& x) const {
    if (d == cell_.vars.size()) {
      double v = 1.0;
      for (const PairFactor& pf : plan.remainder)
        v *= std::pow(std::fabs(resolve(pf.a, x) - resolve(pf.b, x)), pf.exponent());
      return v;
    }
    const double lo = resolve(cell_.vars[d].lo, x);
    const double hi = resolve(cell_.vars[d].hi, x);
    const quad::Rule& rule = quad::jacobi_rule(plan.alpha[d], plan.beta[d], nodes);
    const double len = hi - lo;
    double acc = 0.0;
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
      x[d] = lo + len * rule.nodes[k];
      acc += rule.weights[k] * recurse(plan, d + 1, nodes, x);
    }
    return std::pow(len, plan.alpha[d] + plan.beta[d] + 1.0) * acc;
  }
};

SelbergResult run_selberg(const WeightComposition& lambda, const MasterFunction& master,
                          const GZCell& cell, const std::vector<double>& z, double kappa,
                          const QuadConfig& cfg) {
  SelbergResult res;
  res.index = combi::enumerate_colorings(lambda);
  res.notes = cell.notes;

  CellIntegrator integrator(cell, z);
  std::vector<std::vector<ProductTerm>> terms;
  terms.reserve(res.index.size());
  for (const auto& I : res.index)
    terms.push_back(product_terms(weight_function(lambda, I), master, kappa));

  std::vector<double> prev;
  double rel = 0.0;
  int n = cfg.nodes;
  for (int pass = 0; pass <= cfg.refinements; ++pass, n *= 2) {
    std::vector<double> cur(res.index.size(), 0.0);
    for (std::size_t c = 0; c < terms.size(); ++c)
      for (const ProductTerm& t : terms[c]) cur[c] += integrator.integrate(t, n);
    res.node_counts.push_back(n);
    if (!prev.empty()) {
      res.error_estimates.assign(cur.size(), 0.0);
      rel = 0.0;
      for (std::size_t c = 0; c < cur.size(); ++c) {
        res.error_estimates[c] = std::fabs(cur[c] - prev[c]);
        double scale = std::max(1e-300, std::fabs(cur[c]));
        rel = std::max(rel, res.error_estimates[c] / scale);
      }
      prev = cur;
      if (rel < cfg.rel_tol) break;
    } else {
      prev = cur;
    }
  }
  if (cfg.rel_tol > 0.0 && cfg.refinements > 0 && !(rel < cfg.rel_tol))
    throw std::runtime_error("quadrature refinement did not reach the requested tolerance (last "
                             "relative change " +
                             std::to_string(rel) + ")");
  res.components = prev;
  if (res.error_estimates.empty()) res.error_estimates.assign(prev.size(), 0.0);
  return res;
}

}  // namespace

SelbergResult selberg_numeric(int m, const std::vector<double>& z, double kappa,
                              const QuadConfig& cfg) {
  if (!(1.0 / kappa < 0.0)) throw std::domain_error("requires 1/kappa < 0");
  WeightComposition lambda(std::vector<int>(m, 1));
  std::vector<int> nbar(m - 1);
  for (int i = 1; i <= m - 1; ++i) nbar[i - 1] = m - i;
  MasterFunction master = build_master(CartanData::sl_vector(m, m, Rat(0)), nbar);
  GZCell cell = gz_cell(m, z);
  return run_selberg(lambda, master, cell, z, kappa, cfg);
}

SelbergResult level1_selberg_numeric(const WeightComposition& lambda,
                                     const std::vector<double>& z, double kappa,
                                     const QuadConfig& cfg) {
  if (!(1.0 / kappa < 0.0)) throw std::domain_error("requires 1/kappa < 0");
  const int m = lambda.m();
  MasterFunction master =
      build_master(CartanData::sl_vector(m, lambda.N(), Rat(1 - m)), level_sizes(lambda));
  GZCell cell = level1_cell(lambda, z);
  return run_selberg(lambda, master, cell, z, kappa, cfg);
}

KZResidualReport level1_kz_residual(const WeightComposition& lambda, const std::vector<double>& z,
                                    double kappa, const QuadConfig& cfg, double step) {
  KZResidualReport rep;
  rep.step = step;
  const int m = lambda.m();
  const int N = lambda.N();
  auto colorings = combi::enumerate_colorings(lambda);
  std::map<ColoringMap, std::size_t> index;
  for (std::size_t k = 0; k < colorings.size(); ++k) index[colorings[k]] = k;

  int n = cfg.nodes;
  for (int pass = 0; pass <= cfg.refinements; ++pass, n *= 2) {
    QuadConfig one{n, 0, 0.0};
    auto at = [&](const std::vector<double>& zz) {
      return level1_selberg_numeric(lambda, zz, kappa, one).components;
    };
    std::vector<double> base = at(z);
    double norm = 1e-300;
    for (double v : base) norm = std::max(norm, std::fabs(v));
    double worst = 0.0;
    for (int i = 1; i <= N; ++i) {
      std::vector<double> zp = z, zm = z;
      zp[i - 1] += step;
      zm[i - 1] -= step;
      std::vector<double> Ip = at(zp), Im = at(zm);
      for (std::size_t c = 0; c < colorings.size(); ++c) {
        double lhs = (Ip[c] - Im[c]) / (2.0 * step);
        double rhs = 0.0;
        for (int j = 1; j <= N; ++j) {
          if (j == i) continue;
          ColoringMap swapped = colorings[c];
          std::swap(swapped.colors[i - 1], swapped.colors[j - 1]);
          double pij = base[index.at(swapped)];
          rhs += (pij - m * base[c]) / (z[i - 1] - z[j - 1]);
        }
        rhs /= kappa;
        worst = std::max(worst, std::fabs(lhs - rhs) / norm);
      }
    }
    rep.node_counts.push_back(n);
    rep.residuals.push_back(worst);
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Gamma constants

GammaConstant c_m_constant(int m, double kappa) {
  if (m < 0) throw std::invalid_argument("m >= 0 required");
  GammaConstant g;
  if (m == 0) {
    g.value = g.value_normalized = 1.0;
    g.expression = "1";
    return g;
  }
  const double invk = 1.0 / kappa;
  if (!(invk < 1.0 / m)) throw std::domain_error("requires 1/kappa < 1/m");

  g.sign_exponent = m - 1;
  g.sign_exponent_printed = m - 1;
  for (int j = 4; j <= m; ++j) {
    g.sign_exponent += static_cast<int>(combi::binomial(j - 2, 2).get_si());
    g.sign_exponent_printed += static_cast<int>(combi::binomial(m - 2, 2).get_si());
  }

  double lg = (m * (m + 1) / 2.0) * std::lgamma(1.0 - invk);
  for (int i = 1; i <= m; ++i) lg -= std::lgamma(1.0 - i * invk);

  // literal closed form
  {
    double l = lg - (m - 1) * std::log(std::fabs(invk));
    double sign = (g.sign_exponent % 2 == 0) ? 1.0 : -1.0;
    if (-invk < 0.0 && (m - 1) % 2 == 1) sign = -sign;  // (-1/kappa)^{m-1} < 0
    g.value = sign * std::exp(l);
  }
  // cell-normalized constant kappa^{m(m-1)/2} Gamma^{...} / prod Gamma
  {
    const int d = m * (m - 1) / 2;
    double l = lg + d * std::log(std::fabs(kappa));
    double sign = (kappa < 0.0 && d % 2 == 1) ? -1.0 : 1.0;
    g.value_normalized = sign * std::exp(l);
  }

  std::ostringstream ex;
  ex << "(-1)^" << g.sign_exponent << " * Gamma(1-1/k)^" << m * (m + 1) / 2 << " / ((-1/k)^"
     << (m - 1) << " *";
  for (int i = 1; i <= m; ++i) ex << " Gamma(1-" << i << "/k)";
  ex << "), k = " << kappa << "; cell-normalized variant scales by k^" << m * (m - 1) / 2
     << " instead of (-1)^" << g.sign_exponent << "/(-1/k)^" << (m - 1);
  g.expression = ex.str();
  return g;
}

double level1_constant(const WeightComposition& lambda) {
  int a = 0, mprime = 0;
  if (!is_level1_shape(lambda, &a, &mprime))
    throw std::invalid_argument("lambda is not of level-one shape");
  const int m = lambda.m();
  const double kappa = m + 1;
  double c = c_m_constant(mprime, kappa).value_normalized;
  double cm = c_m_constant(m, kappa).value_normalized;
  for (int k = 0; k < a; ++k) c *= cm;
  return c;
}

}  // namespace flagblocks::hg
