#pragma once

#include <Eigen/Dense>

#include <iosfwd>
#include <vector>

#include "dralloc/costs.hpp"
#include "dralloc/dynamics.hpp"

namespace dra {

/// Centralized ground truth for an allocation problem: the unique optimum
/// x_star together with the multiplier phi_star satisfying
/// grad f_i(x*_i) = phi_star * a_i for every agent.
struct KktSolution {
  Eigen::MatrixXd x_star;    // d x n
  Eigen::VectorXd phi_star;  // d
  double residual = 0.0;     // achieved ||x_star a - b||_2
};

/// Solves d f / d x_p (x_p) = target for a coordinate-separable cost whose
/// per-coordinate gradient is strictly increasing. Brackets the root by
/// doubling from [-1, 1] (up to 2^60), bisects, then polishes with a
/// safeguarded Newton step on a numeric derivative. The returned x satisfies
/// |grad_p(x) - target| <= 1e-12 (1 + |target|) unless the bracket collapses
/// first. Throws when the gradient never brackets the target (bounded
/// gradient or degenerate cost).
double invert_gradient(const LocalCost& cost, int coordinate, double target);

/// Per coordinate p, root-finds the multiplier phi_p so that
/// sum_i a_i x_i(phi_p) = b_p with x_i(phi) = gradient inverse at phi a_i;
/// the map is strictly increasing, so bisection converges. Requires every
/// cost to be coordinate-separable. `bracket_seed` sets the initial bracket
/// half-width for the multiplier search (result is independent of it).
KktSolution solve_kkt(const AllocationProblem& problem, double tol = 1e-10,
                      double bracket_seed = 1.0);

/// Sum of static costs at the optimum.
double optimal_static_value(const AllocationProblem& problem, const KktSolution& sol);

/// F*(t_k) = optimal static value + sum_i time parts at t_k. The time parts
/// are state-independent, so they shift the optimal value without moving the
/// optimum.
std::vector<double> optimal_value_trace(const AllocationProblem& problem, const KktSolution& sol,
                                        const std::vector<double>& times);

/// CSV rows "agent,coordinate,x_star", then one "phi,<coordinate>,<value>"
/// line per coordinate.
void write_kkt_csv(std::ostream& os, const KktSolution& sol);

}  // namespace dra
