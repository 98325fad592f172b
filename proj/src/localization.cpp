#include "flagblocks/localization.hpp"

#include <stdexcept>

namespace flagblocks::loc {

using symalg::LinearFactor;
using symalg::VarId;

LocalizedClass::LocalizedClass(WeightComposition lambda) : weight(std::move(lambda)) {
  for (const auto& w : combi::enumerate_colorings(weight)) restrictions[w] = RatExpr::zero();
}

const RatExpr& LocalizedClass::at(const FixedPoint& w) const {
  auto it = restrictions.find(w);
  if (it == restrictions.end()) throw std::invalid_argument("fixed point not in Pi(lambda)");
  return it->second;
}

LocalizedClass LocalizedClass::operator+(const LocalizedClass& o) const {
  if (weight != o.weight) throw std::invalid_argument("weight mismatch in class sum");
  LocalizedClass r = *this;
  for (auto& [w, e] : r.restrictions) e = e + o.at(w);
  return r;
}

LocalizedClass LocalizedClass::operator-(const LocalizedClass& o) const {
  if (weight != o.weight) throw std::invalid_argument("weight mismatch in class difference");
  LocalizedClass r = *this;
  for (auto& [w, e] : r.restrictions) e = e - o.at(w);
  return r;
}

LocalizedClass LocalizedClass::operator*(const LocalizedClass& o) const {
  if (weight != o.weight) throw std::invalid_argument("weight mismatch in class product");
  LocalizedClass r = *this;
  for (auto& [w, e] : r.restrictions) e = e * o.at(w);
  return r;
}

LocalizedClass LocalizedClass::scaled(const RatExpr& f) const {
  LocalizedClass r = *this;
  for (auto& [w, e] : r.restrictions) e = e * f;
  return r;
}

RatExpr euler_class(const FixedPoint& w) {
  int m = 0;
  for (int c : w.colors) m = std::max(m, c);
  std::vector<std::pair<LinearFactor, int>> factors;
  for (int i = 2; i <= m; ++i) {
    for (int j = 1; j < i; ++j) {
      for (int a : w.fiber(i))
        for (int b : w.fiber(j))
          factors.push_back({LinearFactor::diff(VarId::z(a), VarId::z(b)), 1});
    }
  }
  return RatExpr::product_of_factors(factors);
}

ChernRootExpr y_prime_class(const WeightComposition& lambda, const FixedPoint& w) {
  if (!w.matches(lambda)) throw std::invalid_argument("fixed point does not match lambda");
  std::vector<std::pair<LinearFactor, int>> factors;
  for (int i = 2; i <= lambda.m(); ++i) {
    for (int j = 1; j < i; ++j) {
      for (int a = 1; a <= lambda.parts[i - 1]; ++a)
        for (int b : w.fiber(j))
          factors.push_back({LinearFactor::diff(VarId::gamma(i, a), VarId::z(b)), 1});
    }
  }
  return RatExpr::product_of_factors(factors);
}

RatExpr restrict_at(const ChernRootExpr& c, const FixedPoint& w) {
  int m = 0;
  for (int col : w.colors) m = std::max(m, col);
  std::map<VarId, VarId> repl;
  for (int i = 1; i <= m; ++i) {
    const std::vector<int> fib = w.fiber(i);  // sorted ascending
    for (std::size_t a = 0; a < fib.size(); ++a)
      repl[VarId::gamma(i, static_cast<int>(a) + 1)] = VarId::z(fib[a]);
  }
  return c.substitute(repl);
}

LocalizedClass indicator_basis(const WeightComposition& lambda, const FixedPoint& w) {
  LocalizedClass x(lambda);
  x.restrictions.at(w) = RatExpr::constant(1);
  return x;
}

LocalizedClass unit_class(const WeightComposition& lambda) {
  LocalizedClass x(lambda);
  for (auto& [w, e] : x.restrictions) e = RatExpr::constant(1);
  return x;
}

RatExpr integrate(const LocalizedClass& x) {
  RatExpr sum;
  for (const auto& [w, e] : x.restrictions) sum += e * euler_class(w).term_power(-1);
  return sum;
}

MergeMap MergeMap::identity(int m) {
  MergeMap f{m, m, {}};
  for (int c = 1; c <= m; ++c) f.target_of.push_back(c);
  return f;
}

MergeMap MergeMap::to_point(int m) {
  MergeMap f{m, 1, {}};
  f.target_of.assign(m, 1);
  return f;
}

WeightComposition MergeMap::push_weight(const WeightComposition& src) const {
  if (src.m() != m_src) throw std::invalid_argument("merge map source arity mismatch");
  std::vector<int> parts(m_tgt, 0);
  for (int c = 1; c <= m_src; ++c) parts[target_of[c - 1] - 1] += src.parts[c - 1];
  return WeightComposition(parts);
}

ColoringMap MergeMap::apply(const ColoringMap& u) const {
  ColoringMap v = u;
  for (int& c : v.colors) {
    if (c < 1 || c > m_src) throw std::invalid_argument("coloring outside merge map domain");
    c = target_of[c - 1];
  }
  return v;
}

LocalizedClass pushforward(const MergeMap& f, const LocalizedClass& x) {
  const WeightComposition target = f.push_weight(x.weight);
  LocalizedClass y(target);
  for (const auto& [u, xu] : x.restrictions) {
    ColoringMap v = f.apply(u);
    y.restrictions.at(v) += xu * euler_class(u).term_power(-1);
  }
  for (auto& [v, e] : y.restrictions) e = e * euler_class(v);
  return y;
}

LocalizedClass pullback(const MergeMap& f, const WeightComposition& lambda_src,
                        const LocalizedClass& y) {
  if (f.push_weight(lambda_src) != y.weight)
    throw std::invalid_argument("pullback weight mismatch");
  LocalizedClass x(lambda_src);
  for (auto& [u, e] : x.restrictions) e = y.at(f.apply(u));
  return x;
}

}  // namespace flagblocks::loc
