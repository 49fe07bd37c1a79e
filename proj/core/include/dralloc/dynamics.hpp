#pragma once

#include <Eigen/Dense>

#include <iosfwd>
#include <optional>
#include <vector>

#include "dralloc/actuation.hpp"
#include "dralloc/costs.hpp"
#include "dralloc/graph.hpp"

namespace dra {

/// minimize sum_i f_i(x_i, t)  subject to  X a = b,
/// with X in R^{d x n} (column i is agent i's state), coupling weights a in
/// R^n and resource total b in R^d. Coupling weights must stay away from
/// zero; |a_i| < 1e-6 is rejected.
class AllocationProblem {
 public:
  AllocationProblem(std::vector<CostPtr> costs, Eigen::VectorXd a, Eigen::VectorXd b);

  int n() const { return static_cast<int>(costs_.size()); }
  int d() const { return static_cast<int>(b_.size()); }
  const std::vector<CostPtr>& costs() const { return costs_; }
  const LocalCost& cost(int i) const { return *costs_[static_cast<std::size_t>(i)]; }
  const Eigen::VectorXd& a() const { return a_; }
  const Eigen::VectorXd& b() const { return b_; }

  /// Column i = grad f_i(x_i) / a_i, the per-agent scaled gradient.
  Eigen::MatrixXd scaled_gradients(const Eigen::MatrixXd& X) const;

 private:
  std::vector<CostPtr> costs_;
  Eigen::VectorXd a_;
  Eigen::VectorXd b_;
};

enum class Integrator { euler, rk4 };

enum class StopReason { horizon, consensus, plateau };

/// Fixed-step simulation settings. dt must divide the schedule dwell so that
/// topology switches align with step boundaries.
struct SimConfig {
  explicit SimConfig(GraphSchedule sched) : schedule(std::move(sched)) {}

  GraphSchedule schedule;
  Actuation g = Actuation::identity();
  double dt = 1e-3;
  double horizon = 10.0;
  Integrator integrator = Integrator::euler;
  int record_every = 100;
  bool feasibility_correction = false;

  /// Stop early once the gradient-consensus residual drops below this;
  /// negative disables the check.
  double consensus_tol = 1e-6;

  /// Stop when the best residual has not improved for `plateau_steps` steps;
  /// useful for quantized or sign-based actuation that chatters instead of
  /// settling.
  bool plateau_detection = false;
  int plateau_steps = 1000;

  /// Scale a step down so no state moves more than
  /// rate_clamp_factor * dt * (initial rhs scale); the whole step matrix is
  /// scaled uniformly, which keeps X a invariant.
  bool rate_clamp = true;
  double rate_clamp_factor = 10.0;
};

/// Sampled run with per-sample diagnostics. `lyapunov` is NaN when no optimal
/// static value was supplied to simulate().
struct Trajectory {
  std::vector<double> times;
  std::vector<Eigen::MatrixXd> states;

  std::vector<double> cost;            // F(X, t), time part included
  std::vector<double> lyapunov;        // static cost minus optimal static cost
  std::vector<double> feasibility;     // ||X a - b||_2
  std::vector<double> grad_consensus;  // max pairwise scaled-gradient spread
  std::vector<double> max_rate;        // max_i |xdot_i|_inf at the sample

  long long steps = 0;
  long long clamp_activations = 0;
  StopReason stop_reason = StopReason::horizon;

  std::size_t samples() const { return times.size(); }
  const Eigen::MatrixXd& final_state() const { return states.back(); }
};

/// Protocol right-hand side: column i is
///   -(1/a_i) * sum_j W_ij g(grad f_i(x_i)/a_i - grad f_j(x_j)/a_j).
/// Edge terms are accumulated antisymmetrically, so rhs(X) a vanishes to
/// round-off by W symmetry and g oddness.
Eigen::MatrixXd rhs(const Eigen::MatrixXd& X, const WeightedGraph& graph,
                    const AllocationProblem& problem, const Actuation& g);

/// One explicit step (Euler or classical RK4) of length cfg.dt from time t,
/// with the graph frozen at graph_at(t). Applies the rank-1 feasibility
/// correction afterwards when enabled. Throws IntegrationError when the new
/// state is not finite.
Eigen::MatrixXd step(const Eigen::MatrixXd& X, double t, const SimConfig& cfg,
                     const AllocationProblem& problem);

/// Runs the protocol from a feasible X0 until the horizon, the consensus
/// tolerance, or a plateau. X0 must satisfy ||X0 a - b|| <= 1e-9 (1 + ||b||).
/// Pass the oracle's optimal static value to get Lyapunov diagnostics.
Trajectory simulate(const AllocationProblem& problem, const Eigen::MatrixXd& X0,
                    const SimConfig& cfg, std::optional<double> f_star_static = std::nullopt);

/// ||X a - b||_2.
double feasibility_residual(const Eigen::MatrixXd& X, const AllocationProblem& problem);

/// max over coordinates of (max_i - min_i) of the scaled gradients; zero
/// exactly at gradient consensus.
double gradient_consensus_residual(const Eigen::MatrixXd& X, const AllocationProblem& problem);

/// Sum of static costs at X minus the optimal static value.
double lyapunov_residual(const Eigen::MatrixXd& X, const AllocationProblem& problem,
                         double f_star_static);

/// Residual of the weighted pairing identity
///   sum_i psi_i' sum_j W_ij g(psi_j - psi_i)
///     = -sum_{i,j} (W_ij/2) (psi_j - psi_i)' g(psi_j - psi_i),
/// which holds for symmetric W and odd g. psi holds one d-vector per column.
/// Round-off level for exact inputs.
double sum_identity_gap(const Eigen::MatrixXd& psi, const WeightedGraph& W, const Actuation& g);

/// CSV export: t,F,F_star,lyapunov,feas_residual,grad_consensus,max_rate and
/// optionally one x_{p}_{i} column per state entry. `f_star_trace` must be
/// empty or have one value per sample; when empty the F_star column is nan.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj,
                          const std::vector<double>& f_star_trace,
                          bool include_states = false);

}  // namespace dra
