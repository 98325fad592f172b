// Weight compositions, coloring maps, 0/1 matrices, multinomials and
// q-multinomials, with the bijections tying them together.

#pragma once

#include <string>
#include <vector>

#include "flagblocks/symalg.hpp"

namespace flagblocks::combi {

using symalg::Int;

// lambda = (lambda_1..lambda_m) with nonnegative parts; indexes both a weight
// subspace of the N-fold tensor power and a partial flag variety.
struct WeightComposition {
  std::vector<int> parts;

  WeightComposition() = default;
  explicit WeightComposition(std::vector<int> p);

  int m() const { return static_cast<int>(parts.size()); }
  int N() const;
  // mu_i = lambda_1 + ... + lambda_i, for i = 0..m (mu_0 = 0)
  std::vector<int> partial_sums() const;
  bool is_partition() const;  // lambda_1 >= ... >= lambda_m
  // d_lambda = sum_{i<j} lambda_i lambda_j, the complex dimension of X_lambda
  long dimension() const;

  std::string str() const;  // "2,1"
  static WeightComposition parse(const std::string& csv);

  friend auto operator<=>(const WeightComposition&, const WeightComposition&) = default;
};

// pi: [N] -> [m] with prescribed fiber sizes; labels a tensor-basis monomial
// and a torus fixed point at the same time.
struct ColoringMap {
  std::vector<int> colors;  // 1-based colors, one per site

  int N() const { return static_cast<int>(colors.size()); }
  int color(int site) const { return colors[site - 1]; }  // 1-based site
  std::vector<int> fiber(int c) const;                    // sorted sites of color c
  bool matches(const WeightComposition& lambda) const;
  ColoringMap with_color(int site, int c) const;
  ColoringMap permuted_sites(const std::vector<int>& perm) const;  // perm[i-1] = sigma(i)

  std::string str() const;

  friend auto operator<=>(const ColoringMap&, const ColoringMap&) = default;
};

struct ZeroOneMatrix {
  int rows = 0, cols = 0;
  std::vector<std::uint8_t> data;

  ZeroOneMatrix() = default;
  ZeroOneMatrix(int r, int c) : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, 0) {}
  std::uint8_t& at(int i, int j) { return data[static_cast<std::size_t>(i - 1) * cols + (j - 1)]; }
  std::uint8_t at(int i, int j) const {
    return data[static_cast<std::size_t>(i - 1) * cols + (j - 1)];
  }
  friend bool operator==(const ZeroOneMatrix&, const ZeroOneMatrix&) = default;
};

// All of P_m(N), sorted lexicographically.
std::vector<WeightComposition> enumerate_compositions(int m, int N);

// All colorings with fiber sizes lambda, in colex order on the color sequence
// (rightmost site most significant).
std::vector<ColoringMap> enumerate_colorings(const WeightComposition& lambda);

ColoringMap matrix_to_coloring(const ZeroOneMatrix& M);  // throws on malformed column
ZeroOneMatrix coloring_to_matrix(const ColoringMap& pi, int m);

// (M_lambda)_{ij} = 1 iff mu_{i-1} < j <= mu_i.
ZeroOneMatrix distinguished_matrix(const WeightComposition& lambda);
ColoringMap distinguished_coloring(const WeightComposition& lambda);

Int multinomial(const WeightComposition& lambda);  // N! / prod lambda_i!

// Coefficient vector (index = power of q) of the Gaussian multinomial
// [N]_q! / prod [lambda_i]_q!; degree is d_lambda, value at q=1 is C_lambda.
std::vector<Int> q_multinomial(const WeightComposition& lambda);

Int binomial(int n, int k);

}  // namespace flagblocks::combi
