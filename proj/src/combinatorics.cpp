#include "flagblocks/combinatorics.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace flagblocks::combi {

WeightComposition::WeightComposition(std::vector<int> p) : parts(std::move(p)) {
  if (parts.empty()) throw std::invalid_argument("weight composition needs m >= 1");
  for (int x : parts)
    if (x < 0) throw std::invalid_argument("weight composition parts must be nonnegative");
}

int WeightComposition::N() const {
  int n = 0;
  for (int x : parts) n += x;
  return n;
}

std::vector<int> WeightComposition::partial_sums() const {
  std::vector<int> mu(parts.size() + 1, 0);
  for (std::size_t i = 0; i < parts.size(); ++i) mu[i + 1] = mu[i] + parts[i];
  return mu;
}

bool WeightComposition::is_partition() const {
  for (std::size_t i = 1; i < parts.size(); ++i)
    if (parts[i] > parts[i - 1]) return false;
  return true;
}

long WeightComposition::dimension() const {
  long d = 0;
  for (std::size_t i = 0; i < parts.size(); ++i)
    for (std::size_t j = i + 1; j < parts.size(); ++j)
      d += static_cast<long>(parts[i]) * parts[j];
  return d;
}

std::string WeightComposition::str() const {
  std::string s;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(parts[i]);
  }
  return s;
}

WeightComposition WeightComposition::parse(const std::string& csv) {
  std::vector<int> parts;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) parts.push_back(std::stoi(tok));
  return WeightComposition(parts);
}

std::vector<int> ColoringMap::fiber(int c) const {
  std::vector<int> sites;
  for (int i = 0; i < N(); ++i)
    if (colors[i] == c) sites.push_back(i + 1);
  return sites;
}

bool ColoringMap::matches(const WeightComposition& lambda) const {
  std::vector<int> count(lambda.m(), 0);
  for (int c : colors) {
    if (c < 1 || c > lambda.m()) return false;
    ++count[c - 1];
  }
  return count == lambda.parts;
}

ColoringMap ColoringMap::with_color(int site, int c) const {
  ColoringMap out = *this;
  out.colors[site - 1] = c;
  return out;
}

ColoringMap ColoringMap::permuted_sites(const std::vector<int>& perm) const {
  // site i of the result carries the color of site sigma^{-1}(i), i.e. colors
  // travel with the sites: result(sigma(i)) = this(i)
  ColoringMap out = *this;
  for (int i = 1; i <= N(); ++i) out.colors[perm[i - 1] - 1] = colors[i - 1];
  return out;
}

std::string ColoringMap::str() const {
  std::string s;
  for (std::size_t i = 0; i < colors.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(colors[i]);
  }
  return s;
}

std::vector<WeightComposition> enumerate_compositions(int m, int N) {
  if (m < 1) throw std::invalid_argument("m >= 1 required");
  std::vector<WeightComposition> out;
  std::vector<int> cur(m, 0);
  // lexicographic by construction: fill slot k with 0..rest
  auto rec = [&](auto&& self, int k, int rest) -> void {
    if (k == m - 1) {
      cur[k] = rest;
      out.push_back(WeightComposition(cur));
      return;
    }
    for (int v = 0; v <= rest; ++v) {
      cur[k] = v;
      self(self, k + 1, rest - v);
    }
  };
  rec(rec, 0, N);
  std::sort(out.begin(), out.end());
  return out;
}

namespace {
bool colex_less(const ColoringMap& a, const ColoringMap& b) {
  for (int k = a.N() - 1; k >= 0; --k)
    if (a.colors[k] != b.colors[k]) return a.colors[k] < b.colors[k];
  return false;
}
}  // namespace

std::vector<ColoringMap> enumerate_colorings(const WeightComposition& lambda) {
  std::vector<ColoringMap> out;
  const int n = lambda.N();
  std::vector<int> remaining = lambda.parts;
  ColoringMap cur;
  cur.colors.assign(n, 0);
  auto rec = [&](auto&& self, int site) -> void {
    if (site > n) {
      out.push_back(cur);
      return;
    }
    for (int c = 1; c <= lambda.m(); ++c) {
      if (remaining[c - 1] == 0) continue;
      --remaining[c - 1];
      cur.colors[site - 1] = c;
      self(self, site + 1);
      ++remaining[c - 1];
    }
  };
  rec(rec, 1);
  std::sort(out.begin(), out.end(), colex_less);
  return out;
}

ColoringMap matrix_to_coloring(const ZeroOneMatrix& M) {
  ColoringMap pi;
  pi.colors.assign(M.cols, 0);
  for (int j = 1; j <= M.cols; ++j) {
    int ones = 0;
    for (int i = 1; i <= M.rows; ++i) {
      if (M.at(i, j)) {
        ++ones;
        pi.colors[j - 1] = i;
      }
    }
    if (ones != 1)
      throw std::invalid_argument("matrix column " + std::to_string(j) +
                                  " must contain exactly one 1");
  }
  return pi;
}

ZeroOneMatrix coloring_to_matrix(const ColoringMap& pi, int m) {
  ZeroOneMatrix M(m, pi.N());
  for (int j = 1; j <= pi.N(); ++j) {
    int c = pi.color(j);
    if (c < 1 || c > m) throw std::invalid_argument("coloring value out of range");
    M.at(c, j) = 1;
  }
  return M;
}

ZeroOneMatrix distinguished_matrix(const WeightComposition& lambda) {
  ZeroOneMatrix M(lambda.m(), lambda.N());
  const std::vector<int> mu = lambda.partial_sums();
  for (int i = 1; i <= lambda.m(); ++i)
    for (int j = mu[i - 1] + 1; j <= mu[i]; ++j) M.at(i, j) = 1;
  return M;
}

ColoringMap distinguished_coloring(const WeightComposition& lambda) {
  return matrix_to_coloring(distinguished_matrix(lambda));
}

Int multinomial(const WeightComposition& lambda) {
  Int r = 1;
  int seen = 0;
  for (int part : lambda.parts)
    for (int k = 1; k <= part; ++k) {
      ++seen;
      r = r * seen / k;  // running product of binomials stays integral
    }
  return r;
}

Int binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  Int r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return r;
}

namespace {

// Gaussian binomial [n choose k]_q via the q-Pascal recurrence.
std::vector<Int> q_binomial(int n, int k) {
  std::vector<std::vector<Int>> row(static_cast<std::size_t>(k) + 1);
  row[0] = {Int(1)};
  for (int nn = 1; nn <= n; ++nn) {
    for (int kk = std::min(nn, k); kk >= 1; --kk) {
      // [nn,kk] = [nn-1,kk-1] + q^kk [nn-1,kk]
      std::vector<Int> next = row[kk - 1];
      if (kk <= nn - 1) {
        const std::vector<Int>& shift = row[kk];
        if (next.size() < shift.size() + kk) next.resize(shift.size() + kk, Int(0));
        for (std::size_t d = 0; d < shift.size(); ++d) next[d + kk] += shift[d];
      }
      row[kk] = std::move(next);
    }
  }
  return row[k];
}

}  // namespace

std::vector<Int> q_multinomial(const WeightComposition& lambda) {
  // [N]!/prod [lambda_i]! = prod_i [mu_i choose lambda_i]_q, telescoping over
  // the partial sums.
  std::vector<Int> acc{Int(1)};
  const std::vector<int> mu = lambda.partial_sums();
  for (int i = 2; i <= lambda.m(); ++i) {
    std::vector<Int> qb = q_binomial(mu[i], lambda.parts[i - 1]);
    std::vector<Int> prod(acc.size() + qb.size() - 1, Int(0));
    for (std::size_t x = 0; x < acc.size(); ++x)
      for (std::size_t y = 0; y < qb.size(); ++y) prod[x + y] += acc[x] * qb[y];
    acc = std::move(prod);
  }
  return acc;
}

}  // namespace flagblocks::combi
