#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <random>

#include "dralloc/costs.hpp"

// Test-side oracles, independent of the library implementations they check.
namespace testsupport {

/// Central-difference gradient of the static part.
inline Eigen::VectorXd fd_gradient(const dra::LocalCost& cost, const Eigen::VectorXd& x,
                                   double h = 1e-5) {
  Eigen::VectorXd g(x.size());
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    Eigen::VectorXd xp = x;
    Eigen::VectorXd xm = x;
    xp(j) += h;
    xm(j) -= h;
    g(j) = (cost.value(xp) - cost.value(xm)) / (2.0 * h);
  }
  return g;
}

/// Worst relative disagreement between the analytic and finite-difference
/// gradients, denominated by 1 + |analytic|.
inline double gradient_fd_rel_error(const dra::LocalCost& cost, const Eigen::VectorXd& x,
                                    double h = 1e-5) {
  const Eigen::VectorXd a = cost.gradient(x);
  const Eigen::VectorXd f = fd_gradient(cost, x, h);
  double worst = 0.0;
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    worst = std::max(worst, std::abs(a(j) - f(j)) / (1.0 + std::abs(a(j))));
  }
  return worst;
}

/// Monotone-gradient probe on random pairs: for strictly convex separable
/// costs, every coordinate of (grad(y) - grad(x)) shares the sign of
/// (y - x). Returns false on the first violation.
inline bool monotone_gradient_probe(const dra::LocalCost& cost, int n_pairs, std::uint64_t seed,
                                    double scale = 3.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-scale, scale);
  for (int k = 0; k < n_pairs; ++k) {
    Eigen::VectorXd x(cost.dim());
    Eigen::VectorXd y(cost.dim());
    for (int j = 0; j < cost.dim(); ++j) {
      x(j) = u(rng);
      do {
        y(j) = u(rng);
      } while (y(j) == x(j));
    }
    const Eigen::VectorXd dg = cost.gradient(y) - cost.gradient(x);
    for (int j = 0; j < cost.dim(); ++j) {
      if (!(dg(j) * (y(j) - x(j)) > 0.0)) return false;
    }
  }
  return true;
}

/// Closed-form KKT solution for scalar quadratics gamma_i x^2 + beta_i x:
/// x_i = (phi a_i - beta_i) / (2 gamma_i) with phi chosen so sum a_i x_i = b.
struct QuadraticKkt {
  double phi;
  Eigen::VectorXd x;
};

inline QuadraticKkt quadratic_kkt(const Eigen::VectorXd& gamma, const Eigen::VectorXd& beta,
                                  const Eigen::VectorXd& a, double b) {
  double denom = 0.0;
  double shift = 0.0;
  for (Eigen::Index i = 0; i < gamma.size(); ++i) {
    denom += a(i) * a(i) / (2.0 * gamma(i));
    shift += a(i) * beta(i) / (2.0 * gamma(i));
  }
  QuadraticKkt sol;
  sol.phi = (b + shift) / denom;
  sol.x.resize(gamma.size());
  for (Eigen::Index i = 0; i < gamma.size(); ++i) {
    sol.x(i) = (sol.phi * a(i) - beta(i)) / (2.0 * gamma(i));
  }
  return sol;
}

}  // namespace testsupport
