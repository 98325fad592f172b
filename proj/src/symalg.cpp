#include "flagblocks/symalg.hpp"

#include <algorithm>
#include <random>
#include <sstream>

#include "json.hpp"

namespace flagblocks::symalg {

std::string VarId::name() const {
  switch (kind) {
    case VarKind::Z:
      return "z" + std::to_string(i);
    case VarKind::Gamma:
      return "g_" + std::to_string(i) + "_" + std::to_string(a);
    case VarKind::T:
      return "t_" + std::to_string(i) + "_" + std::to_string(a);
    case VarKind::Q:
      return "q";
  }
  return "?";
}

std::uint64_t powmod(std::uint64_t base, std::uint64_t exp, std::uint64_t p) {
  std::uint64_t r = 1;
  base %= p;
  while (exp) {
    if (exp & 1) r = mulmod(r, base, p);
    base = mulmod(base, base, p);
    exp >>= 1;
  }
  return r;
}

std::uint64_t rat_mod(const Rat& q, std::uint64_t p) {
  const mpz_class& num = q.get_num();
  const mpz_class& den = q.get_den();
  mpz_class pz(static_cast<unsigned long>(p));
  mpz_class dm = den % pz;
  if (dm == 0) throw BadPrimeError("prime divides a coefficient denominator");
  mpz_class nm = num % pz;
  if (nm < 0) nm += pz;
  std::uint64_t n = nm.get_ui();
  std::uint64_t d = dm.get_ui();
  return mulmod(n, invmod(d, p), p);
}

Rat rat_pow(const Rat& base, int exp) {
  if (exp == 0) return Rat(1);
  Rat b = base;
  bool inv = exp < 0;
  unsigned long e = inv ? static_cast<unsigned long>(-(long)exp) : static_cast<unsigned long>(exp);
  Rat r(1);
  while (e) {
    if (e & 1) r = Rat(r * b);
    b = Rat(b * b);
    e >>= 1;
  }
  if (inv) {
    if (r == 0) throw PoleError("inverse of zero rational");
    r = Rat(1) / r;
  }
  return r;
}

std::string rat_str(const Rat& q) { return q.get_str(); }

// ---------------------------------------------------------------------------
// LinearFactor

LinearFactor LinearFactor::diff(VarId x, VarId y) {
  LinearFactor f;
  f.coeffs.push_back({x, Rat(1)});
  f.coeffs.push_back({y, Rat(-1)});
  return f;
}

LinearFactor LinearFactor::var_minus_const(VarId v, const Rat& c) {
  LinearFactor f;
  f.constant = Rat(-c);
  f.coeffs.push_back({v, Rat(1)});
  return f;
}

LinearFactor LinearFactor::var(VarId v) {
  LinearFactor f;
  f.coeffs.push_back({v, Rat(1)});
  return f;
}

Rat LinearFactor::eval(const std::map<VarId, Rat>& point) const {
  Rat r = constant;
  for (const auto& [v, c] : coeffs) {
    auto it = point.find(v);
    if (it == point.end())
      throw std::invalid_argument("assignment does not cover variable " + v.name());
    r = Rat(r + c * it->second);
  }
  return r;
}

std::uint64_t LinearFactor::eval_mod(const std::map<VarId, std::uint64_t>& point,
                                     std::uint64_t p) const {
  std::uint64_t r = rat_mod(constant, p);
  for (const auto& [v, c] : coeffs) {
    auto it = point.find(v);
    if (it == point.end())
      throw std::invalid_argument("assignment does not cover variable " + v.name());
    r = (r + mulmod(rat_mod(c, p), it->second % p, p)) % p;
  }
  return r;
}

int LinearFactor::cmp(const LinearFactor& o) const {
  const std::size_t n = std::min(coeffs.size(), o.coeffs.size());
  for (std::size_t k = 0; k < n; ++k) {
    if (coeffs[k].first != o.coeffs[k].first)
      return coeffs[k].first < o.coeffs[k].first ? -1 : 1;
    int c = ::cmp(coeffs[k].second, o.coeffs[k].second);
    if (c != 0) return c;
  }
  if (coeffs.size() != o.coeffs.size()) return coeffs.size() < o.coeffs.size() ? -1 : 1;
  return ::cmp(constant, o.constant);
}

namespace {

// Canonicalizes one raw factor in place.  Returns the extracted scale s with
// raw = s * canonical, or std::nullopt if the factor is constant (the
// constant value is then returned through `const_value`).
std::optional<Rat> canonicalize_factor(LinearFactor& f, Rat& const_value) {
  std::sort(f.coeffs.begin(), f.coeffs.end(),
            [](const auto& x, const auto& y) { return x.first < y.first; });
  std::vector<std::pair<VarId, Rat>> merged;
  for (auto& [v, c] : f.coeffs) {
    if (!merged.empty() && merged.back().first == v)
      merged.back().second = Rat(merged.back().second + c);
    else
      merged.push_back({v, c});
  }
  std::erase_if(merged, [](const auto& pr) { return pr.second == 0; });
  f.coeffs = std::move(merged);
  if (f.coeffs.empty()) {
    const_value = f.constant;
    return std::nullopt;
  }
  Rat lead = f.coeffs.front().second;
  for (auto& [v, c] : f.coeffs) c = Rat(c / lead);
  f.constant = Rat(f.constant / lead);
  return lead;
}

// Canonicalizes a term; returns false if the term vanished (zero factor with
// positive exponent, or zero coefficient).
bool canonicalize_term(FactoredTerm& t) {
  if (t.coeff == 0) return false;
  std::vector<std::pair<LinearFactor, int>> canon;
  for (auto& [f, e] : t.factors) {
    if (e == 0) continue;
    Rat cv;
    auto scale = canonicalize_factor(f, cv);
    if (!scale) {
      if (cv == 0) {
        if (e < 0) throw PoleError("zero linear factor raised to a negative power");
        return false;  // a zero factor annihilates the term
      }
      t.coeff = Rat(t.coeff * rat_pow(cv, e));
      continue;
    }
    t.coeff = Rat(t.coeff * rat_pow(*scale, e));
    canon.push_back({std::move(f), e});
  }
  std::sort(canon.begin(), canon.end(),
            [](const auto& x, const auto& y) { return x.first < y.first; });
  std::vector<std::pair<LinearFactor, int>> merged;
  for (auto& fe : canon) {
    if (!merged.empty() && merged.back().first == fe.first)
      merged.back().second += fe.second;
    else
      merged.push_back(std::move(fe));
  }
  std::erase_if(merged, [](const auto& fe) { return fe.second == 0; });
  t.factors = std::move(merged);
  return t.coeff != 0;
}

int cmp_factor_lists(const std::vector<std::pair<LinearFactor, int>>& x,
                     const std::vector<std::pair<LinearFactor, int>>& y) {
  const std::size_t n = std::min(x.size(), y.size());
  for (std::size_t k = 0; k < n; ++k) {
    int c = x[k].first.cmp(y[k].first);
    if (c != 0) return c;
    if (x[k].second != y[k].second) return x[k].second < y[k].second ? -1 : 1;
  }
  if (x.size() != y.size()) return x.size() < y.size() ? -1 : 1;
  return 0;
}

}  // namespace

RatExpr make_from_raw_terms(std::vector<FactoredTerm>&& raw) {
  std::vector<FactoredTerm> canon;
  canon.reserve(raw.size());
  for (auto& t : raw)
    if (canonicalize_term(t)) canon.push_back(std::move(t));
  std::sort(canon.begin(), canon.end(), [](const FactoredTerm& a, const FactoredTerm& b) {
    return cmp_factor_lists(a.factors, b.factors) < 0;
  });
  std::vector<FactoredTerm> combined;
  for (auto& t : canon) {
    if (!combined.empty() && cmp_factor_lists(combined.back().factors, t.factors) == 0)
      combined.back().coeff = Rat(combined.back().coeff + t.coeff);
    else
      combined.push_back(std::move(t));
  }
  std::erase_if(combined, [](const FactoredTerm& t) { return t.coeff == 0; });
  RatExpr e;
  e.terms_ = std::move(combined);
  return e;
}

// ---------------------------------------------------------------------------
// RatExpr

RatExpr RatExpr::constant(const Rat& c) {
  if (c == 0) return RatExpr();
  FactoredTerm t;
  t.coeff = c;
  std::vector<FactoredTerm> ts{std::move(t)};
  return make_from_raw_terms(std::move(ts));
}

RatExpr RatExpr::var(VarId v) { return factor_power(LinearFactor::var(v), 1); }

RatExpr RatExpr::factor_power(const LinearFactor& f, int exp, const Rat& c) {
  FactoredTerm t;
  t.coeff = c;
  t.factors.push_back({f, exp});
  std::vector<FactoredTerm> ts{std::move(t)};
  return make_from_raw_terms(std::move(ts));
}

RatExpr RatExpr::product_of_factors(const std::vector<std::pair<LinearFactor, int>>& fs,
                                    const Rat& c) {
  FactoredTerm t;
  t.coeff = c;
  t.factors = fs;
  std::vector<FactoredTerm> ts{std::move(t)};
  return make_from_raw_terms(std::move(ts));
}

RatExpr RatExpr::operator+(const RatExpr& o) const {
  std::vector<FactoredTerm> raw = terms_;
  raw.insert(raw.end(), o.terms_.begin(), o.terms_.end());
  return make_from_raw_terms(std::move(raw));
}

RatExpr RatExpr::operator-() const {
  std::vector<FactoredTerm> raw = terms_;
  for (auto& t : raw) t.coeff = Rat(-t.coeff);
  return make_from_raw_terms(std::move(raw));
}

RatExpr RatExpr::operator-(const RatExpr& o) const { return *this + (-o); }

RatExpr RatExpr::operator*(const RatExpr& o) const {
  std::vector<FactoredTerm> raw;
  raw.reserve(terms_.size() * o.terms_.size());
  for (const auto& a : terms_) {
    for (const auto& b : o.terms_) {
      FactoredTerm t;
      t.coeff = Rat(a.coeff * b.coeff);
      t.factors = a.factors;
      t.factors.insert(t.factors.end(), b.factors.begin(), b.factors.end());
      raw.push_back(std::move(t));
    }
  }
  return make_from_raw_terms(std::move(raw));
}

RatExpr RatExpr::scaled(const Rat& c) const {
  std::vector<FactoredTerm> raw = terms_;
  for (auto& t : raw) t.coeff = Rat(t.coeff * c);
  return make_from_raw_terms(std::move(raw));
}

RatExpr RatExpr::term_power(int exp) const {
  if (exp == 0) return constant(1);
  if (terms_.empty()) {
    if (exp < 0) throw PoleError("negative power of the zero expression");
    return RatExpr();
  }
  if (terms_.size() != 1)
    throw std::logic_error("term_power is defined for single-term expressions only");
  FactoredTerm t = terms_.front();
  t.coeff = rat_pow(t.coeff, exp);
  for (auto& [f, e] : t.factors) e *= exp;
  std::vector<FactoredTerm> ts{std::move(t)};
  return make_from_raw_terms(std::move(ts));
}

RatExpr RatExpr::differentiate(VarId v) const {
  std::vector<FactoredTerm> raw;
  for (const auto& t : terms_) {
    for (std::size_t k = 0; k < t.factors.size(); ++k) {
      const auto& [f, e] = t.factors[k];
      Rat dv(0);
      for (const auto& [var, c] : f.coeffs)
        if (var == v) dv = c;
      if (dv == 0) continue;
      FactoredTerm d;
      d.coeff = Rat(t.coeff * e * dv);
      d.factors = t.factors;
      d.factors[k].second -= 1;
      raw.push_back(std::move(d));
    }
  }
  return make_from_raw_terms(std::move(raw));
}

RatExpr RatExpr::substitute(const std::map<VarId, VarId>& repl) const {
  std::vector<FactoredTerm> raw = terms_;
  for (auto& t : raw) {
    for (auto& [f, e] : t.factors) {
      for (auto& [v, c] : f.coeffs) {
        auto it = repl.find(v);
        if (it != repl.end()) v = it->second;
      }
      // canonicalize_term re-sorts and merges colliding coefficients
    }
  }
  return make_from_raw_terms(std::move(raw));
}

Rat RatExpr::eval_exact(const std::map<VarId, Rat>& point) const {
  Rat sum(0);
  for (const auto& t : terms_) {
    Rat prod = t.coeff;
    for (const auto& [f, e] : t.factors) {
      Rat v = f.eval(point);
      if (v == 0) {
        if (e < 0) throw PoleError("pole: factor vanishes at evaluation point");
        prod = 0;
        break;
      }
      prod = Rat(prod * rat_pow(v, e));
    }
    sum = Rat(sum + prod);
  }
  return sum;
}

std::uint64_t RatExpr::eval_mod(const std::map<VarId, std::uint64_t>& point,
                                std::uint64_t p) const {
  std::uint64_t sum = 0;
  for (const auto& t : terms_) {
    std::uint64_t prod = rat_mod(t.coeff, p);
    for (const auto& [f, e] : t.factors) {
      std::uint64_t v = f.eval_mod(point, p);
      if (v == 0) {
        if (e < 0) throw PoleError("pole: factor vanishes at evaluation point (mod p)");
        prod = 0;
        break;
      }
      std::uint64_t pw = powmod(v, static_cast<std::uint64_t>(e < 0 ? -(long)e : e), p);
      if (e < 0) pw = invmod(pw, p);
      prod = mulmod(prod, pw, p);
    }
    sum = (sum + prod) % p;
  }
  return sum;
}

std::vector<VarId> RatExpr::variables() const {
  std::vector<VarId> vs;
  for (const auto& t : terms_)
    for (const auto& [f, e] : t.factors)
      for (const auto& [v, c] : f.coeffs) vs.push_back(v);
  std::sort(vs.begin(), vs.end());
  vs.erase(std::unique(vs.begin(), vs.end()), vs.end());
  return vs;
}

long RatExpr::degree_bound() const {
  long b = 0;
  for (const auto& t : terms_)
    for (const auto& [f, e] : t.factors) b += e < 0 ? -(long)e : e;
  return b;
}

ZeroTestResult RatExpr::is_zero(unsigned trials, std::uint64_t seed) const {
  if (trials < 1) trials = 1;
  ZeroTestResult res;
  res.trials = trials;
  res.seed = seed;
  res.degree_bound = degree_bound();

  const std::vector<VarId> vars = variables();
  if (vars.empty()) {
    Rat v = eval_exact({});
    res.is_zero = (v == 0);
    res.prime = kDefaultPrimes[0];
    res.failure_bound = 0.0;  // exact
    if (!res.is_zero) {
      res.witness = std::map<VarId, std::uint64_t>{};
      res.witness_value = 1;
    }
    return res;
  }

  for (std::uint64_t prime : kDefaultPrimes) {
    try {
      std::mt19937_64 rng(seed);
      std::uniform_int_distribution<std::uint64_t> dist(0, prime - 1);
      res.prime = prime;
      res.resamples = 0;
      for (unsigned k = 0; k < trials; ++k) {
        for (unsigned attempt = 0;; ++attempt) {
          if (attempt > 200)
            throw std::runtime_error("is_zero: could not find a pole-free sample point");
          std::map<VarId, std::uint64_t> point;
          for (VarId v : vars) point[v] = dist(rng);
          try {
            std::uint64_t val = eval_mod(point, prime);
            if (val != 0) {
              res.is_zero = false;
              res.failure_bound = 0.0;  // nonzero verdicts are certain
              res.witness = std::move(point);
              res.witness_value = val;
              return res;
            }
            break;
          } catch (const PoleError&) {
            ++res.resamples;
          }
        }
      }
      res.is_zero = true;
      // per-trial bound B/(p-B): Schwartz-Zippel on the cleared numerator,
      // conditioned on the resampling that discards pole-hitting points
      double B = static_cast<double>(res.degree_bound);
      double per_trial = B / (static_cast<double>(prime) - B);
      if (!(per_trial < 1.0) || per_trial < 0.0) per_trial = 1.0;
      double bound = 1.0;
      for (unsigned k = 0; k < trials; ++k) bound *= per_trial;
      res.failure_bound = bound;
      return res;
    } catch (const BadPrimeError&) {
      continue;  // a coefficient denominator hit this prime; try the next one
    }
  }
  throw BadPrimeError("all candidate primes divide some coefficient denominator");
}

std::string RatExpr::to_json() const {
  nlohmann::ordered_json j;
  j["terms"] = nlohmann::ordered_json::array();
  for (const auto& t : terms_) {
    nlohmann::ordered_json jt;
    jt["coeff"] = rat_str(t.coeff);
    jt["factors"] = nlohmann::ordered_json::array();
    for (const auto& [f, e] : t.factors) {
      nlohmann::ordered_json jf;
      jf["const"] = rat_str(f.constant);
      nlohmann::ordered_json jc;
      for (const auto& [v, c] : f.coeffs) jc[v.name()] = rat_str(c);
      jf["coeffs"] = std::move(jc);
      jf["exp"] = e;
      jt["factors"].push_back(std::move(jf));
    }
    j["terms"].push_back(std::move(jt));
  }
  return j.dump();
}

}  // namespace flagblocks::symalg
