// Gauss-Jacobi rules for integrands with algebraic endpoint singularities
// |x-a|^alpha (b-x)^beta, computed by Golub-Welsch from the Jacobi matrix and
// cached per (alpha, beta, n).

#pragma once

#include <map>
#include <stdexcept>
#include <vector>

namespace flagblocks::quad {

struct DivergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Rule {
  std::vector<double> nodes;    // on (0,1), exclusive
  std::vector<double> weights;  // for weight x^alpha (1-x)^beta
};

// Quadrature rule on [0,1] with weight x^alpha (1-x)^beta:
//   integral_0^1 x^a (1-x)^b g(x) dx ~= sum_k w_k g(x_k),
// exact for polynomial g up to degree 2n-1.  Requires alpha, beta > -1.
const Rule& jacobi_rule(double alpha, double beta, int n);

// log Gamma and Beta conveniences
double log_beta(double a, double b);
double beta_fn(double a, double b);

}  // namespace flagblocks::quad
