#include "flagblocks/quadrature.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <mutex>
#include <tuple>

namespace flagblocks::quad {

double log_beta(double a, double b) { return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b); }

double beta_fn(double a, double b) { return std::exp(log_beta(a, b)); }

namespace {

// Monic Jacobi recurrence coefficients for weight (1-x)^a (1+x)^b on [-1,1].
void jacobi_recurrence(double a, double b, int n, std::vector<double>& diag,
                       std::vector<double>& sub) {
  diag.resize(n);
  sub.assign(n > 1 ? n - 1 : 0, 0.0);
  const double ab = a + b;
  for (int k = 0; k < n; ++k) {
    if (k == 0) {
      diag[k] = (b - a) / (ab + 2.0);
    } else {
      double t = 2.0 * k + ab;
      diag[k] = (b * b - a * a) / (t * (t + 2.0));
    }
  }
  for (int k = 1; k < n; ++k) {
    double t = 2.0 * k + ab;
    // k=1 needs the cancelled form: the general one is 0/0 when a+b = -1
    double bk = (k == 1)
                    ? 4.0 * (1.0 + a) * (1.0 + b) / ((ab + 2.0) * (ab + 2.0) * (ab + 3.0))
                    : 4.0 * k * (k + a) * (k + b) * (k + ab) / (t * t * (t + 1.0) * (t - 1.0));
    sub[k - 1] = std::sqrt(bk);
  }
}

Rule compute_rule(double alpha, double beta, int n) {
  if (!(alpha > -1.0) || !(beta > -1.0))
    throw DivergenceError("endpoint exponent <= -1: integral diverges");
  // weight x^alpha (1-x)^beta on [0,1] corresponds to Jacobi (a,b) = (beta,
  // alpha) on [-1,1] under x = (1+xi)/2
  std::vector<double> diag, sub;
  jacobi_recurrence(beta, alpha, n, diag, sub);

  Eigen::VectorXd d = Eigen::Map<Eigen::VectorXd>(diag.data(), n);
  Eigen::VectorXd e = n > 1 ? Eigen::Map<Eigen::VectorXd>(sub.data(), n - 1) : Eigen::VectorXd();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(d, e, Eigen::ComputeEigenvectors);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("Jacobi matrix eigensolve failed");

  const double mu0 = beta_fn(alpha + 1.0, beta + 1.0);  // integral of the [0,1] weight
  Rule r;
  r.nodes.resize(n);
  r.weights.resize(n);
  for (int k = 0; k < n; ++k) {
    r.nodes[k] = (1.0 + es.eigenvalues()(k)) / 2.0;
    double v0 = es.eigenvectors()(0, k);
    r.weights[k] = mu0 * v0 * v0;
  }
  return r;
}

std::map<std::tuple<double, double, int>, Rule> g_cache;
std::mutex g_cache_mutex;

}  // namespace

const Rule& jacobi_rule(double alpha, double beta, int n) {
  std::lock_guard<std::mutex> lock(g_cache_mutex);
  auto key = std::make_tuple(alpha, beta, n);
  auto it = g_cache.find(key);
  if (it == g_cache.end()) it = g_cache.emplace(key, compute_rule(alpha, beta, n)).first;
  return it->second;
}

}  // namespace flagblocks::quad
