// Exact multivariate rational-expression arithmetic on factored terms.
//
// Expressions are formal sums of terms  c * prod_k f_k^{e_k}  where each f_k
// is an affine-linear form with exact rational coefficients and e_k is a
// (possibly negative) integer.  No multivariate gcd is ever computed: sums
// are kept formal and equality is decided by randomized evaluation over a
// large prime field, with the failure probability reported.

#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace flagblocks::symalg {

using Rat = mpq_class;
using Int = mpz_class;

// ---------------------------------------------------------------------------
// Variables

enum class VarKind : std::uint8_t { Z = 0, Gamma = 1, T = 2, Q = 3 };

// A variable identifier: z_i, Chern root g_{i,a}, integration variable
// t^{(i)}_a, or the formal parameter q.  The member order fixes the global
// deterministic variable order used everywhere (sorting, sampling, JSON).
struct VarId {
  VarKind kind = VarKind::Z;
  int i = 0;
  int a = 0;

  friend auto operator<=>(const VarId&, const VarId&) = default;

  static VarId z(int n) { return {VarKind::Z, n, 0}; }
  static VarId gamma(int color, int slot) { return {VarKind::Gamma, color, slot}; }
  static VarId t(int level, int slot) { return {VarKind::T, level, slot}; }
  static VarId q() { return {VarKind::Q, 0, 0}; }

  std::string name() const;  // "z1", "g_1_2", "t_1_3", "q"
};

struct PoleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct BadPrimeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Prime-field helpers.  All default primes exceed 2^61.

inline constexpr std::uint64_t kDefaultPrimes[3] = {
    9223372036854775783ULL,  // 2^63 - 25
    4611686018427387847ULL,  // 2^62 - 57
    2305843009213693967ULL,  // 2^61 + 15
};

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % p);
}

std::uint64_t powmod(std::uint64_t base, std::uint64_t exp, std::uint64_t p);

inline std::uint64_t invmod(std::uint64_t a, std::uint64_t p) {
  return powmod(a % p, p - 2, p);
}

// Image of an exact rational in F_p.  Throws BadPrimeError if p divides the
// denominator.
std::uint64_t rat_mod(const Rat& q, std::uint64_t p);

// ---------------------------------------------------------------------------
// Factored expressions

// Affine-linear form  constant + sum coeff_v * v.  Canonical form: coeffs
// sorted by VarId, all nonzero, and the first (smallest-variable) coefficient
// equal to 1; the scale extracted during canonicalization is carried by the
// owning term.  A factor always involves at least one variable; pure
// constants are folded into term coefficients.
struct LinearFactor {
  Rat constant = 0;
  std::vector<std::pair<VarId, Rat>> coeffs;

  // Affine difference a - b, not yet canonwith respect to sign.
  static LinearFactor diff(VarId a, VarId b);
  static LinearFactor var_minus_const(VarId v, const Rat& c);
  static LinearFactor var(VarId v);

  Rat eval(const std::map<VarId, Rat>& point) const;
  std::uint64_t eval_mod(const std::map<VarId, std::uint64_t>& point, std::uint64_t p) const;

  int cmp(const LinearFactor& o) const;
  bool operator==(const LinearFactor& o) const { return cmp(o) == 0; }
  bool operator<(const LinearFactor& o) const { return cmp(o) < 0; }
};

struct FactoredTerm {
  Rat coeff = 0;
  std::vector<std::pair<LinearFactor, int>> factors;  // sorted, unique, exp != 0
};

struct ZeroTestResult {
  bool is_zero = false;
  unsigned trials = 0;
  std::uint64_t prime = 0;
  std::uint64_t seed = 0;
  // Upper bound on P[expr != 0] given the zero verdict: (deg_bound/prime)^trials.
  double failure_bound = 0.0;
  long degree_bound = 0;
  unsigned resamples = 0;
  std::optional<std::map<VarId, std::uint64_t>> witness;  // set on nonzero verdict
  std::uint64_t witness_value = 0;
};

class RatExpr {
 public:
  RatExpr() = default;  // the zero expression

  static RatExpr zero() { return RatExpr(); }
  static RatExpr constant(const Rat& c);
  static RatExpr constant(long c) { return constant(Rat(c)); }
  static RatExpr var(VarId v);
  // c * f^exp from a raw (not yet canonical) linear factor.
  static RatExpr factor_power(const LinearFactor& f, int exp, const Rat& c = 1);
  // c * prod f_k^{e_k}
  static RatExpr product_of_factors(const std::vector<std::pair<LinearFactor, int>>& fs,
                                    const Rat& c = 1);

  const std::vector<FactoredTerm>& terms() const { return terms_; }
  bool structurally_zero() const { return terms_.empty(); }

  RatExpr operator+(const RatExpr& o) const;
  RatExpr operator-(const RatExpr& o) const;
  RatExpr operator*(const RatExpr& o) const;
  RatExpr operator-() const;
  RatExpr& operator+=(const RatExpr& o) { return *this = *this + o; }
  RatExpr& operator*=(const RatExpr& o) { return *this = *this * o; }

  RatExpr scaled(const Rat& c) const;
  // Reciprocal / integer powers are defined for single-term expressions only.
  RatExpr term_power(int exp) const;

  RatExpr differentiate(VarId v) const;

  // Substitute variables by variables (e.g. Chern roots by z's).  Colliding
  // coefficients are merged; a factor collapsing to a nonzero constant folds
  // into the coefficient, and one collapsing to zero kills the term (or
  // throws PoleError when its exponent is negative).
  RatExpr substitute(const std::map<VarId, VarId>& repl) const;

  Rat eval_exact(const std::map<VarId, Rat>& point) const;
  std::uint64_t eval_mod(const std::map<VarId, std::uint64_t>& point, std::uint64_t p) const;

  std::vector<VarId> variables() const;
  // Sum over terms and factors of |exponent|; bounds the numerator degree over
  // the common denominator.
  long degree_bound() const;

  ZeroTestResult is_zero(unsigned trials = 3, std::uint64_t seed = 0) const;

  // Canonical JSON form; key order is deterministic.
  std::string to_json() const;

  std::size_t term_count() const { return terms_.size(); }

 private:
  std::vector<FactoredTerm> terms_;

  friend RatExpr make_from_raw_terms(std::vector<FactoredTerm>&& raw);
};

// Rebuilds canonical form from arbitrary term data (merging factors inside
// each term, dropping vanished terms, combining terms with equal factor
// lists).  Exposed for the module's own tests of canonicalization idempotence.
RatExpr make_from_raw_terms(std::vector<FactoredTerm>&& raw);

Rat rat_pow(const Rat& base, int exp);

std::string rat_str(const Rat& q);

}  // namespace flagblocks::symalg
