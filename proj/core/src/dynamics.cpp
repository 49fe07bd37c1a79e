#include "dralloc/dynamics.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <utility>

#include "dralloc/errors.hpp"

namespace dra {

namespace {

constexpr double kCouplingFloor = 1e-6;

Eigen::MatrixXd rhs_from_gradients(const Eigen::MatrixXd& H, const WeightedGraph& graph,
                                   const Eigen::VectorXd& a, const Actuation& g) {
  Eigen::MatrixXd V = Eigen::MatrixXd::Zero(H.rows(), H.cols());
  for (const auto& e : graph.edges()) {
    const Eigen::VectorXd u = g(H.col(e.i) - H.col(e.j));
    V.col(e.i) -= e.w * u;
    V.col(e.j) += e.w * u;
  }
  for (Eigen::Index i = 0; i < V.cols(); ++i) V.col(i) /= a(i);
  return V;
}

// dt * (Euler or RK4 increment) with the graph held fixed.
Eigen::MatrixXd increment(const Eigen::MatrixXd& X, const WeightedGraph& graph,
                          const AllocationProblem& problem, const Actuation& g, double dt,
                          Integrator integ, const Eigen::MatrixXd* k1_hint) {
  const Eigen::MatrixXd k1 =
      k1_hint ? *k1_hint : rhs_from_gradients(problem.scaled_gradients(X), graph, problem.a(), g);
  if (integ == Integrator::euler) return dt * k1;
  const Eigen::VectorXd& a = problem.a();
  const Eigen::MatrixXd k2 =
      rhs_from_gradients(problem.scaled_gradients(X + 0.5 * dt * k1), graph, a, g);
  const Eigen::MatrixXd k3 =
      rhs_from_gradients(problem.scaled_gradients(X + 0.5 * dt * k2), graph, a, g);
  const Eigen::MatrixXd k4 = rhs_from_gradients(problem.scaled_gradients(X + dt * k3), graph, a, g);
  return dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

void project_feasible(Eigen::MatrixXd& X, const AllocationProblem& problem) {
  const Eigen::VectorXd r = X * problem.a() - problem.b();
  X.noalias() -= (r / problem.a().squaredNorm()) * problem.a().transpose();
}

double consensus_from_gradients(const Eigen::MatrixXd& H) {
  if (H.cols() < 2) return 0.0;
  double worst = 0.0;
  for (Eigen::Index p = 0; p < H.rows(); ++p) {
    worst = std::max(worst, H.row(p).maxCoeff() - H.row(p).minCoeff());
  }
  return worst;
}

}  // namespace

AllocationProblem::AllocationProblem(std::vector<CostPtr> costs, Eigen::VectorXd a,
                                     Eigen::VectorXd b)
    : costs_(std::move(costs)), a_(std::move(a)), b_(std::move(b)) {
  if (costs_.empty()) throw std::invalid_argument("problem: needs at least one cost");
  if (a_.size() != static_cast<Eigen::Index>(costs_.size())) {
    throw std::invalid_argument("problem: coupling vector must have one entry per agent");
  }
  if (b_.size() < 1) throw std::invalid_argument("problem: resource vector must be non-empty");
  for (const auto& c : costs_) {
    if (!c) throw std::invalid_argument("problem: null cost");
    if (c->dim() != d()) throw std::invalid_argument("problem: cost dimension mismatch");
  }
  if ((a_.array().abs() < kCouplingFloor).any()) {
    throw std::invalid_argument("problem: coupling weights must stay away from zero (|a_i| >= 1e-6)");
  }
}

Eigen::MatrixXd AllocationProblem::scaled_gradients(const Eigen::MatrixXd& X) const {
  if (X.rows() != d() || X.cols() != n()) {
    throw std::invalid_argument("state matrix must be d x n");
  }
  Eigen::MatrixXd H(d(), n());
  for (int i = 0; i < n(); ++i) {
    H.col(i) = costs_[static_cast<std::size_t>(i)]->gradient(X.col(i)) / a_(i);
  }
  return H;
}

Eigen::MatrixXd rhs(const Eigen::MatrixXd& X, const WeightedGraph& graph,
                    const AllocationProblem& problem, const Actuation& g) {
  if (graph.size() != problem.n()) throw std::invalid_argument("rhs: graph/problem size mismatch");
  return rhs_from_gradients(problem.scaled_gradients(X), graph, problem.a(), g);
}

Eigen::MatrixXd step(const Eigen::MatrixXd& X, double t, const SimConfig& cfg,
                     const AllocationProblem& problem) {
  const WeightedGraph& graph = cfg.schedule.graph_at(t);
  Eigen::MatrixXd next =
      X + increment(X, graph, problem, cfg.g, cfg.dt, cfg.integrator, nullptr);
  if (cfg.feasibility_correction) project_feasible(next, problem);
  if (!next.allFinite()) throw IntegrationError("state diverged", t + cfg.dt);
  return next;
}

Trajectory simulate(const AllocationProblem& problem, const Eigen::MatrixXd& X0,
                    const SimConfig& cfg, std::optional<double> f_star_static) {
  if (!(cfg.dt > 0.0)) throw std::invalid_argument("simulate: dt must be positive");
  if (cfg.dt > cfg.schedule.dwell() * (1.0 + 1e-12)) {
    throw std::invalid_argument("simulate: dt must not exceed the schedule dwell");
  }
  if (cfg.record_every < 1) throw std::invalid_argument("simulate: record_every must be >= 1");
  const double ratio = cfg.schedule.dwell() / cfg.dt;
  const auto steps_per_dwell = static_cast<long long>(std::llround(ratio));
  if (steps_per_dwell < 1 || std::abs(ratio - static_cast<double>(steps_per_dwell)) > 1e-9 * ratio) {
    throw std::invalid_argument("simulate: dt must divide the schedule dwell");
  }
  if (cfg.schedule.size() != problem.n()) {
    throw std::invalid_argument("simulate: schedule/problem size mismatch");
  }
  if (X0.rows() != problem.d() || X0.cols() != problem.n()) {
    throw std::invalid_argument("simulate: X0 must be d x n");
  }

  const double feas0 = feasibility_residual(X0, problem);
  const double feas_gate = 1e-9 * (1.0 + problem.b().norm());
  if (!(feas0 <= feas_gate)) {
    throw std::invalid_argument("simulate: X0 is infeasible, ||X0 a - b|| = " +
                                std::to_string(feas0) + " exceeds " + std::to_string(feas_gate));
  }

  const auto total_steps = static_cast<long long>(std::llround(cfg.horizon / cfg.dt));
  if (total_steps < 1) throw std::invalid_argument("simulate: horizon shorter than one step");

  Trajectory traj;
  Eigen::MatrixXd X = X0;
  double clamp_cap = -1.0;  // set from the initial rhs scale below
  double best_residual = std::numeric_limits<double>::infinity();
  long long best_step = 0;

  auto record = [&](double t, const Eigen::MatrixXd& state, double consensus,
                    const Eigen::MatrixXd& V) {
    traj.times.push_back(t);
    traj.states.push_back(state);
    traj.cost.push_back(eval_total(problem.costs(), state, t));
    traj.lyapunov.push_back(f_star_static
                                ? eval_static_total(problem.costs(), state) - *f_star_static
                                : std::numeric_limits<double>::quiet_NaN());
    traj.feasibility.push_back(feasibility_residual(state, problem));
    traj.grad_consensus.push_back(consensus);
    traj.max_rate.push_back(V.size() == 0 ? 0.0 : V.cwiseAbs().maxCoeff());
  };

  for (long long k = 0;; ++k) {
    const double t = static_cast<double>(k) * cfg.dt;
    const WeightedGraph& graph =
        cfg.schedule.graph_by_index(static_cast<std::size_t>(k / steps_per_dwell));
    const Eigen::MatrixXd H = problem.scaled_gradients(X);
    const Eigen::MatrixXd V = rhs_from_gradients(H, graph, problem.a(), cfg.g);
    const double consensus = consensus_from_gradients(H);

    if (clamp_cap < 0.0) {
      const double r0 = V.size() == 0 ? 0.0 : V.cwiseAbs().maxCoeff();
      clamp_cap = cfg.rate_clamp_factor * cfg.dt * r0;
    }

    const bool done_horizon = k >= total_steps;
    const bool done_consensus = consensus <= cfg.consensus_tol;
    bool done_plateau = false;
    if (cfg.plateau_detection) {
      if (consensus < best_residual) {
        best_residual = consensus;
        best_step = k;
      } else if (k - best_step >= cfg.plateau_steps) {
        done_plateau = true;
      }
    }

    if (k % cfg.record_every == 0 || done_horizon || done_consensus || done_plateau) {
      if (traj.times.empty() || traj.times.back() < t) record(t, X, consensus, V);
    }
    if (done_horizon || done_consensus || done_plateau) {
      traj.steps = k;
      traj.stop_reason = done_consensus ? StopReason::consensus
                                        : (done_plateau ? StopReason::plateau : StopReason::horizon);
      break;
    }

    Eigen::MatrixXd dX = increment(X, graph, problem, cfg.g, cfg.dt, cfg.integrator, &V);
    if (cfg.rate_clamp && clamp_cap > 0.0) {
      const double move = dX.cwiseAbs().maxCoeff();
      if (move > clamp_cap) {
        dX *= clamp_cap / move;
        ++traj.clamp_activations;
      }
    }
    X += dX;
    if (cfg.feasibility_correction) project_feasible(X, problem);
    if (!X.allFinite()) throw IntegrationError("state diverged", t + cfg.dt);
  }

  return traj;
}

double feasibility_residual(const Eigen::MatrixXd& X, const AllocationProblem& problem) {
  return (X * problem.a() - problem.b()).norm();
}

double gradient_consensus_residual(const Eigen::MatrixXd& X, const AllocationProblem& problem) {
  return consensus_from_gradients(problem.scaled_gradients(X));
}

double lyapunov_residual(const Eigen::MatrixXd& X, const AllocationProblem& problem,
                         double f_star_static) {
  return eval_static_total(problem.costs(), X) - f_star_static;
}

double sum_identity_gap(const Eigen::MatrixXd& psi, const WeightedGraph& W, const Actuation& g) {
  const int n = W.size();
  if (psi.cols() != n) throw std::invalid_argument("sum_identity_gap: psi must have n columns");
  double lhs = 0.0;
  double rhs_sym = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double w = W.weight(i, j);
      if (w == 0.0) continue;
      const Eigen::VectorXd diff = psi.col(j) - psi.col(i);
      const Eigen::VectorXd gd = g(diff);
      lhs += w * psi.col(i).dot(gd);
      rhs_sym += 0.5 * w * diff.dot(gd);
    }
  }
  return std::abs(lhs + rhs_sym);
}

void write_trajectory_csv(std::ostream& os, const Trajectory& traj,
                          const std::vector<double>& f_star_trace, bool include_states) {
  if (!f_star_trace.empty() && f_star_trace.size() != traj.samples()) {
    throw std::invalid_argument("trajectory csv: f_star_trace length mismatch");
  }
  os << "t,F,F_star,lyapunov,feas_residual,grad_consensus,max_rate";
  if (include_states && !traj.states.empty()) {
    const auto& X = traj.states.front();
    for (Eigen::Index p = 0; p < X.rows(); ++p) {
      for (Eigen::Index i = 0; i < X.cols(); ++i) os << ",x_" << p << "_" << i;
    }
  }
  os << "\n";
  char buf[32];
  auto put = [&](double v, char sep) {
    std::snprintf(buf, sizeof(buf), "%.17g%c", v, sep);
    os << buf;
  };
  for (std::size_t s = 0; s < traj.samples(); ++s) {
    put(traj.times[s], ',');
    put(traj.cost[s], ',');
    put(f_star_trace.empty() ? std::numeric_limits<double>::quiet_NaN() : f_star_trace[s], ',');
    put(traj.lyapunov[s], ',');
    put(traj.feasibility[s], ',');
    put(traj.grad_consensus[s], ',');
    const bool more = include_states && !traj.states.empty();
    put(traj.max_rate[s], more ? ',' : '\n');
    if (more) {
      const auto& X = traj.states[s];
      const Eigen::Index total = X.size();
      Eigen::Index written = 0;
      for (Eigen::Index p = 0; p < X.rows(); ++p) {
        for (Eigen::Index i = 0; i < X.cols(); ++i) {
          put(X(p, i), ++written == total ? '\n' : ',');
        }
      }
    }
  }
}

}  // namespace dra
