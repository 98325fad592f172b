#include "flagblocks/conformal.hpp"

#include <stdexcept>

#include "flagblocks/localization.hpp"

namespace flagblocks::cb {

using symalg::LinearFactor;
using symalg::VarId;

bool TensorRatVector::structurally_zero() const {
  for (const auto& [w, e] : components)
    if (!e.structurally_zero()) return false;
  return true;
}

TensorRatVector TensorRatVector::operator+(const TensorRatVector& o) const {
  // zero vectors are weight-neutral: annihilated weights do not constrain sums
  if (structurally_zero()) return o;
  if (o.structurally_zero()) return *this;
  if (weight != o.weight) throw std::invalid_argument("weight mismatch in vector sum");
  TensorRatVector r = *this;
  for (const auto& [w, e] : o.components) r.set(w, r.component(w) + e);
  return r;
}

TensorRatVector TensorRatVector::operator-(const TensorRatVector& o) const {
  if (o.structurally_zero()) return *this;
  if (structurally_zero()) return o.scaled(RatExpr::constant(-1));
  if (weight != o.weight) throw std::invalid_argument("weight mismatch in vector difference");
  TensorRatVector r = *this;
  for (const auto& [w, e] : o.components) r.set(w, r.component(w) - e);
  return r;
}

TensorRatVector TensorRatVector::scaled(const RatExpr& f) const {
  TensorRatVector r;
  r.weight = weight;
  for (const auto& [w, e] : components) r.set(w, e * f);
  return r;
}

void TensorRatVector::set(const ColoringMap& w, RatExpr e) {
  if (e.structurally_zero())
    components.erase(w);
  else
    components[w] = std::move(e);
}

RatExpr TensorRatVector::component(const ColoringMap& w) const {
  auto it = components.find(w);
  return it == components.end() ? RatExpr::zero() : it->second;
}

TensorRatVector act_generator(int a, int b, int site, const TensorRatVector& v) {
  TensorRatVector out;
  out.weight = v.weight;
  if (a != b) {
    std::vector<int> parts = v.weight.parts;
    int m = v.weight.m();
    if (a < 1 || a > m || b < 1 || b > m) throw std::invalid_argument("color out of range");
    parts[a - 1] += 1;
    parts[b - 1] -= 1;
    if (parts[b - 1] < 0) {
      // e_{ab} annihilates the whole weight space when lambda_b = 0
      out.weight = v.weight;
      return out;
    }
    out.weight = WeightComposition(parts);
  }
  for (const auto& [w, e] : v.components) {
    if (w.color(site) != b) continue;
    out.set(w.with_color(site, a), out.component(w.with_color(site, a)) + e);
  }
  return out;
}

TensorRatVector act_gl(int a, int b, const TensorRatVector& v) {
  TensorRatVector out = act_generator(a, b, 1, v);
  for (int i = 2; i <= v.weight.N(); ++i) {
    TensorRatVector t = act_generator(a, b, i, v);
    out = out + t;
  }
  return out;
}

TensorRatVector act_current(int a, int b, int j, const TensorRatVector& v) {
  if (j < 0) throw std::invalid_argument("current power must be nonnegative");
  TensorRatVector out;
  out.weight = v.weight;
  bool first = true;
  for (int i = 1; i <= v.weight.N(); ++i) {
    TensorRatVector t = act_generator(a, b, i, v);
    if (j > 0) t = t.scaled(RatExpr::factor_power(LinearFactor::var(VarId::z(i)), j));
    if (first) {
      out = t;
      first = false;
    } else {
      out = out + t;
    }
  }
  return out;
}

TensorRatVector canonical_p(const WeightComposition& lambda) {
  TensorRatVector p;
  p.weight = lambda;
  for (const auto& w : combi::enumerate_colorings(lambda))
    p.set(w, loc::euler_class(w).term_power(-1));
  return p;
}

TensorRatVector rv_element(const WeightComposition& lambda) {
  TensorRatVector p;
  p.weight = lambda;
  for (const auto& w : combi::enumerate_colorings(lambda)) {
    std::vector<std::pair<LinearFactor, int>> factors;
    for (int i = 1; i <= lambda.m(); ++i)
      for (int j = i + 1; j <= lambda.m(); ++j)
        for (int a : w.fiber(i))
          for (int b : w.fiber(j))
            factors.push_back({LinearFactor::diff(VarId::z(b), VarId::z(a)), 1});
    p.set(w, RatExpr::product_of_factors(factors).term_power(-1));
  }
  return p;
}

symalg::ZeroTestResult vector_is_zero(const TensorRatVector& v, unsigned trials,
                                      std::uint64_t seed) {
  symalg::ZeroTestResult agg;
  agg.is_zero = true;
  agg.trials = trials;
  agg.seed = seed;
  std::uint64_t k = 0;
  for (const auto& [w, e] : v.components) {
    symalg::ZeroTestResult r = e.is_zero(trials, seed + k);
    ++k;
    agg.prime = r.prime;
    agg.degree_bound = std::max(agg.degree_bound, r.degree_bound);
    agg.resamples += r.resamples;
    if (!r.is_zero) {
      agg.is_zero = false;
      agg.witness = r.witness;
      agg.witness_value = r.witness_value;
      return agg;
    }
    agg.failure_bound += r.failure_bound;  // union bound over components
  }
  return agg;
}

VerificationRecord singular_check(const TensorRatVector& v, unsigned trials, std::uint64_t seed) {
  VerificationRecord rec;
  rec.claim = "singular-vector: e_{ij} v = 0 for all i<j";
  rec.params["lambda"] = v.weight.str();
  rec.seed = seed;
  rec.pass = true;
  const int m = v.weight.m();
  for (int i = 1; i <= m; ++i) {
    for (int j = i + 1; j <= m; ++j) {
      TensorRatVector u = act_gl(i, j, v);
      auto r = vector_is_zero(u, trials, seed + static_cast<std::uint64_t>(i) * 97 + j);
      rec.fold(r, "e_{" + std::to_string(i) + "," + std::to_string(j) + "} v");
    }
  }
  return rec;
}

TensorRatVector e_z_apply(int m, const TensorRatVector& v) {
  if (m < 2) throw std::invalid_argument("e(z) is degenerate for m = 1");
  return act_current(1, m, 1, v);
}

VerificationRecord e_z_nilpotency_check(const TensorRatVector& v, const WeightComposition& lambda,
                                        unsigned trials, std::uint64_t seed) {
  VerificationRecord rec;
  rec.claim = "conformal-block level 1: e(z)-power kills v";
  rec.params["lambda"] = lambda.str();
  rec.seed = seed;
  if (!lambda.is_partition()) throw std::invalid_argument("lambda must be a partition");
  const int m = lambda.m();
  TensorRatVector ev = e_z_apply(m, v);
  auto r1 = vector_is_zero(ev, trials, seed + 1);
  if (lambda.parts.front() > lambda.parts.back()) {
    rec.pass = true;
    rec.detail["case"] = "lambda_1 > lambda_m: e(z) v = 0";
    rec.fold(r1, "e(z) v");
  } else {
    TensorRatVector eev = e_z_apply(m, ev);
    auto r2 = vector_is_zero(eev, trials, seed + 2);
    rec.pass = true;
    rec.detail["case"] = "lambda_1 = lambda_m: e(z)^2 v = 0";
    rec.detail["e_z_v_already_zero"] = r1.is_zero;
    rec.fold(r2, "e(z)^2 v");
  }
  return rec;
}

KZConnection KZConnection::make(const Rat& coupling, Mode mode, int N, const Rat& uniform_shift) {
  KZConnection c;
  c.coupling = coupling;
  c.mode = mode;
  c.scalar_shift.assign(N, std::vector<Rat>(N, Rat(0)));
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j)
      if (i != j) c.scalar_shift[i][j] = uniform_shift;
  return c;
}

TensorRatVector apply_pi(const TensorRatVector& v, int i, int j) {
  TensorRatVector out;
  out.weight = v.weight;
  for (const auto& [w, e] : v.components) {
    ColoringMap ww = w;
    std::swap(ww.colors[i - 1], ww.colors[j - 1]);
    out.set(ww, out.component(ww) + e);
  }
  return out;
}

TensorRatVector kz_residual(const KZConnection& conn, const TensorRatVector& v, int site, int m) {
  const int N = v.weight.N();
  if (static_cast<int>(conn.scalar_shift.size()) != N)
    throw std::invalid_argument("connection size does not match N");

  TensorRatVector lhs;
  lhs.weight = v.weight;
  for (const auto& [w, e] : v.components) lhs.set(w, e.differentiate(VarId::z(site)));

  TensorRatVector rhs;
  rhs.weight = v.weight;
  for (int j = 1; j <= N; ++j) {
    if (j == site) continue;
    TensorRatVector om = apply_pi(v, site, j);
    Rat scalar = conn.scalar_shift[site - 1][j - 1];
    if (conn.mode == KZConnection::Mode::SL) scalar -= Rat(1, m);
    if (scalar != 0) om = om + v.scaled(RatExpr::constant(scalar));
    RatExpr inv = RatExpr::factor_power(LinearFactor::diff(VarId::z(site), VarId::z(j)), -1);
    rhs = rhs + om.scaled(inv);
  }
  rhs = rhs.scaled(RatExpr::constant(conn.coupling));
  return lhs - rhs;
}

KZConnection gauge_transform(const KZConnection& conn,
                             const std::vector<std::vector<Rat>>& c_prime) {
  const std::size_t N = conn.scalar_shift.size();
  if (c_prime.size() != N) throw std::invalid_argument("gauge shift dimension mismatch");
  for (std::size_t i = 0; i < N; ++i) {
    if (c_prime[i].size() != N) throw std::invalid_argument("gauge shift dimension mismatch");
    if (c_prime[i][i] != 0) throw std::invalid_argument("gauge shift must have zero diagonal");
    for (std::size_t j = 0; j < N; ++j)
      if (c_prime[i][j] != c_prime[j][i])
        throw std::invalid_argument("gauge shift must be symmetric");
  }
  KZConnection out = conn;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j)
      out.scalar_shift[i][j] = Rat(out.scalar_shift[i][j] + c_prime[i][j]);
  return out;
}

VerificationRecord check_p_equals_rv(const WeightComposition& lambda, unsigned trials,
                                     std::uint64_t seed) {
  VerificationRecord rec;
  rec.claim = "canonical section equals its R-function presentation (up to one global sign)";
  rec.params["lambda"] = lambda.str();
  rec.seed = seed;
  TensorRatVector p = canonical_p(lambda);
  TensorRatVector q = rv_element(lambda);
  auto plus = vector_is_zero(p - q, trials, seed);
  if (plus.is_zero) {
    rec.pass = true;
    rec.failure_bound = plus.failure_bound;
    rec.detail["sign"] = 1;
    return rec;
  }
  auto minus = vector_is_zero(p + q, trials, seed);
  if (minus.is_zero) {
    rec.pass = true;
    rec.failure_bound = minus.failure_bound;
    rec.detail["sign"] = -1;
    return rec;
  }
  rec.pass = false;
  rec.fold(plus, "p - P_z");
  return rec;
}

VerificationRecord check_kz_canonical(const WeightComposition& lambda, unsigned trials,
                                      std::uint64_t seed) {
  VerificationRecord rec;
  rec.claim = "KZ system for the canonical section (coupling 1/(m+1), pi - m*Id)";
  rec.params["lambda"] = lambda.str();
  rec.seed = seed;
  rec.pass = true;
  const int m = lambda.m();
  const int N = lambda.N();
  TensorRatVector p = canonical_p(lambda);
  KZConnection conn = KZConnection::make(Rat(1, m + 1), KZConnection::Mode::GL, N, Rat(-m));
  for (int i = 1; i <= N; ++i) {
    TensorRatVector res = kz_residual(conn, p, i, m);
    auto r = vector_is_zero(res, trials, seed + static_cast<std::uint64_t>(i));
    rec.fold(r, "KZ residual at site " + std::to_string(i));
  }
  return rec;
}

}  // namespace flagblocks::cb
