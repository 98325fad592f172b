// Master functions, the psi-function recursion, weight functions, Gelfand-
// Zetlin cells, nested Selberg quadrature, and the closed Gamma-function
// constants they converge to.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "flagblocks/combinatorics.hpp"
#include "flagblocks/quadrature.hpp"
#include "flagblocks/symalg.hpp"

namespace flagblocks::hg {

using combi::ColoringMap;
using combi::WeightComposition;
using symalg::Rat;
using symalg::RatExpr;
using symalg::VarId;

// ---------------------------------------------------------------------------
// Cartan data and master functions

struct CartanData {
  int r = 0;  // rank: t-colors 1..r
  int N = 0;  // tensor sites: z_1..z_N
  std::vector<std::vector<Rat>> gram;             // (alpha_i, alpha_j), r x r
  std::vector<std::vector<Rat>> weight_pairings;  // (alpha_i, Lambda_j), r x N
  std::vector<std::vector<Rat>> weight_gram;      // (Lambda_j, Lambda_k), N x N

  // sl(m) with the vector representation at every site: A_{m-1} Cartan matrix,
  // (alpha_i, Lambda_j) = delta_{i1}, and a uniform off-diagonal z-z pairing
  // `zz` (0 for the flag-case tables, 1-m for the level-one tables).
  static CartanData sl_vector(int m, int N, const Rat& zz);
};

// Exponent table of a master function: for an unordered variable pair the
// rational multiplier of 1/kappa in the exponent of (x - y).
struct MasterFunction {
  std::vector<int> nbar;  // t-letters per color
  int N = 0;
  std::map<std::pair<VarId, VarId>, Rat> exponents;

  Rat exponent(VarId x, VarId y) const;  // 0 if absent
};

MasterFunction build_master(const CartanData& cartan, const std::vector<int>& nbar);

// ---------------------------------------------------------------------------
// The rational functions attached to monomials in the free generators

// Per tensor site, a word in the letters f~_1..f~_r (head first).
struct UMonomial {
  int r = 0;
  std::vector<std::vector<int>> words;

  int N() const { return static_cast<int>(words.size()); }
  std::vector<int> content() const;  // total letter counts nbar
};

// Non-symmetrized function: peel letters site N down to site 1, head to
// tail; the letter of color j peeled while c_j letters of color j remain
// takes the variable t_{j,c_j} and pairs with the next letter's variable (or
// z_site at the tail).
RatExpr psi_tilde(const UMonomial& mon);

// Symmetrization of psi_tilde over permutations of the variables within each
// color.
RatExpr psi(const UMonomial& mon);

// All monomials of (U^{(x)N})_nbar, i.e. all ways to spread the letter
// multiset over N ordered site-words.
std::vector<UMonomial> enumerate_monomials(int r, int N, const std::vector<int>& nbar);

// Projection to the vector representation: a site word f~_{j-1}...f~_1 maps
// to color j (empty word to color 1), any other word kills the monomial.
std::optional<ColoringMap> project_vector_rep(const UMonomial& mon, int m);

// ---------------------------------------------------------------------------
// Weight functions (level-one shapes)

// Tail sums mu_i = lambda_{i+1} + ... + lambda_m for i = 0..m-1; mu_i is the
// number of t-variables at level i.
std::vector<int> level_sizes(const WeightComposition& lambda);

// Family of bijections nu_i: {1..mu_i} -> {sites of color > i}, one per level
// i = 1..m-1, each listing sites block-ordered: first the lambda_m sites of
// color m, then the sites of color m-1, and so on.
struct NuFamily {
  std::vector<std::vector<int>> nu;
};

// Within each block, sites in ascending order.
NuFamily canonical_nu(const WeightComposition& lambda, const ColoringMap& I);

// omega_I: the symmetrized rational prefactor attached to the basis vector of
// the ordered set partition I (encoded as the coloring with fibers I_j).
// Symmetrizes over the variables of every t-level.
RatExpr weight_function(const WeightComposition& lambda, const ColoringMap& I,
                        const NuFamily& nu);

RatExpr weight_function(const WeightComposition& lambda, const ColoringMap& I);

// ---------------------------------------------------------------------------
// Gelfand-Zetlin cells

struct CellPoint {
  bool is_var = false;
  VarId var;
  int z_index = 0;  // 1-based anchor when !is_var

  static CellPoint anchor(int zi) { return {false, {}, zi}; }
  static CellPoint variable(VarId v) { return {true, v, 0}; }
  friend bool operator==(const CellPoint&, const CellPoint&) = default;
};

struct CellVar {
  VarId var;
  CellPoint lo, hi;
};

struct GZCell {
  std::vector<CellVar> vars;  // outermost first; bounds refer to anchors or earlier vars
  std::vector<std::pair<CellPoint, CellPoint>> constraints;  // adjacent strict inequalities
  std::string notes;  // records the corrected inequality reading
};

// The cell for the full-flag case: z strictly increasing of length m.
GZCell gz_cell(int m, const std::vector<double>& z);

// Product cell for a level-one shape lambda over z_1 < ... < z_N.
GZCell level1_cell(const WeightComposition& lambda, const std::vector<double>& z);

bool is_level1_shape(const WeightComposition& lambda, int* a_out = nullptr,
                     int* mprime_out = nullptr);

// ---------------------------------------------------------------------------
// Numeric Selberg integration

struct QuadConfig {
  int nodes = 32;          // Gauss-Jacobi nodes per level at the first pass
  int refinements = 2;     // node-doubling passes beyond the first
  double rel_tol = 1e-10;  // early stop once successive passes agree to this
};

struct SelbergResult {
  std::vector<ColoringMap> index;  // component order (colex colorings)
  std::vector<double> components;
  std::vector<double> error_estimates;  // |last - previous| per component
  std::vector<int> node_counts;         // node counts per refinement pass
  std::string notes;
};

// Integral of |Phi|^{1/kappa} omega over the Gelfand-Zetlin cell for
// lambda=(1,...,1), with the absolute-value section.  Components follow the
// colex coloring order.  Requires 1/kappa < 0 and z strictly increasing.
SelbergResult selberg_numeric(int m, const std::vector<double>& z, double kappa,
                              const QuadConfig& cfg = {});

// Same for a level-one shape lambda over N points.
SelbergResult level1_selberg_numeric(const WeightComposition& lambda,
                                     const std::vector<double>& z, double kappa,
                                     const QuadConfig& cfg = {});

struct KZResidualReport {
  std::vector<int> node_counts;
  std::vector<double> residuals;  // relative sup-norm residual per pass
  double step = 1e-4;
};

// Finite-difference residual of d/dz_i I = (1/kappa) sum (pi_ij - m Id)/(z_i-z_j) I
// for the level-one integral, under quadrature refinement.
KZResidualReport level1_kz_residual(const WeightComposition& lambda, const std::vector<double>& z,
                                    double kappa, const QuadConfig& cfg = {}, double step = 1e-4);

// ---------------------------------------------------------------------------
// Closed-form constants

struct GammaConstant {
  // Literal closed form:
  //   (-1)^{a_m} Gamma(1-1/kappa)^{m(m+1)/2} /
  //   ((-1/kappa)^{m-1} prod_{i=1}^m Gamma(1-i/kappa))
  double value = 0.0;
  // The proportionality constant the cell integral actually produces:
  //   kappa^{m(m-1)/2} Gamma(1-1/kappa)^{m(m+1)/2} / prod_{i=1}^m Gamma(1-i/kappa).
  // Identical to `value` for m <= 2; at m = 3 the two differ by the factor
  // kappa (verified numerically at machine precision for several kappa).
  double value_normalized = 0.0;
  int sign_exponent = 0;           // a_m with the summand read as C(j-2,2)
  int sign_exponent_printed = 0;   // a_m with the literal j-independent summand C(m-2,2)
  std::string expression;
};

// Defined for 1/kappa < 1/m.
GammaConstant c_m_constant(int m, double kappa);

// C = C_m(m+1)^a * C_{m'}(m+1) for a level-one shape, using the
// cell-normalized constants (identical to the literal ones for blocks of
// size <= 2).
double level1_constant(const WeightComposition& lambda);

}  // namespace flagblocks::hg
