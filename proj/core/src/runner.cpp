#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <stdexcept>

#include "dralloc/errors.hpp"
#include "dralloc/harness.hpp"

namespace dra {

namespace {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  // splitmix64 on seed + salt; keeps sub-generators decorrelated
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (salt + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

const char* stop_reason_name(StopReason r) {
  switch (r) {
    case StopReason::horizon:
      return "horizon";
    case StopReason::consensus:
      return "consensus";
    case StopReason::plateau:
      return "plateau";
  }
  return "horizon";
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

Eigen::MatrixXd init_feasible(const AllocationProblem& problem, InitMode mode, std::uint64_t seed) {
  const int n = problem.n();
  const int d = problem.d();
  if (mode == InitMode::equal_share) {
    const double total = problem.a().sum();
    if (std::abs(total) < 1e-12) {
      throw std::invalid_argument("init_feasible: degenerate coupling, sum(a) is zero");
    }
    Eigen::MatrixXd X(d, n);
    X.colwise() = Eigen::VectorXd(problem.b() / total);
    return X;
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd X(d, n);
  for (int p = 0; p < d; ++p) {
    for (int i = 0; i < n; ++i) X(p, i) = normal(rng);
  }
  const Eigen::VectorXd r = X * problem.a() - problem.b();
  X.noalias() -= (r / problem.a().squaredNorm()) * problem.a().transpose();
  return X;
}

BuiltExperiment build_experiment(const ExperimentConfig& cfg) {
  const std::uint64_t cost_seed = mix_seed(cfg.seed, 1);
  const std::uint64_t a_seed = mix_seed(cfg.seed, 2);
  const std::uint64_t sched_seed = mix_seed(cfg.seed, 3);
  const std::uint64_t init_seed = mix_seed(cfg.seed, 4);

  std::vector<CostPtr> costs;
  if (cfg.cost_kind == "quadratic") {
    if (cfg.d != 1) throw ConfigError("quadratic costs are scalar; set d = 1");
    costs = make_quadratic_costs(cfg.n, cost_seed, cfg.gamma_lo, cfg.gamma_hi, cfg.beta_lo,
                                 cfg.beta_hi, cfg.alpha_lo, cfg.alpha_hi);
  } else if (cfg.cost_kind == "f2") {
    costs = make_f2_costs(cfg.n, cost_seed, cfg.d);
  } else {
    throw ConfigError("unknown cost kind '" + cfg.cost_kind + "'");
  }

  if (cfg.box) {
    const Eigen::VectorXd lower = Eigen::VectorXd::Constant(cfg.d, cfg.box->lower);
    const Eigen::VectorXd upper = Eigen::VectorXd::Constant(cfg.d, cfg.box->upper);
    for (auto& c : costs) c = penalize(c, lower, upper, cfg.box->eps, cfg.box->mu);
  }

  Eigen::VectorXd a;
  if (cfg.a_kind == "ones") {
    a = Eigen::VectorXd::Ones(cfg.n);
  } else if (cfg.a_kind == "uniform") {
    std::mt19937_64 rng(a_seed);
    std::uniform_real_distribution<double> dist(cfg.a_lo, cfg.a_hi);
    a.resize(cfg.n);
    for (int i = 0; i < cfg.n; ++i) a(i) = dist(rng);
  } else if (cfg.a_kind == "explicit") {
    if (cfg.a_explicit.size() != cfg.n) throw ConfigError("'a' must list n entries");
    a = cfg.a_explicit;
  } else {
    throw ConfigError("unknown coupling spec '" + cfg.a_kind + "'");
  }

  AllocationProblem problem(std::move(costs), std::move(a), cfg.b);

  SimConfig sim(cfg.schedule.build(cfg.n, sched_seed));
  sim.g = cfg.actuation.build();
  sim.dt = cfg.dt;
  sim.horizon = cfg.horizon;
  sim.integrator = cfg.integrator == "rk4" ? Integrator::rk4 : Integrator::euler;
  sim.record_every = cfg.record_every;
  sim.feasibility_correction = cfg.feasibility_correction;
  sim.consensus_tol = cfg.consensus_tol;
  sim.plateau_detection = cfg.plateau;
  sim.plateau_steps = cfg.plateau_steps;
  sim.rate_clamp = cfg.rate_clamp;

  Eigen::MatrixXd x0 = init_feasible(problem, cfg.init_mode, init_seed);
  const double gate = 1e-9 * (1.0 + problem.b().norm());
  if (!(feasibility_residual(x0, problem) <= gate)) {
    throw std::logic_error("internal error: generated initial state is infeasible");
  }
  return BuiltExperiment{std::move(problem), std::move(sim), std::move(x0)};
}

bool RunReport::passed() const {
  for (const auto& c : checks) {
    if (!c.pass) return false;
  }
  return true;
}

RunReport run_experiment(const ExperimentConfig& cfg, const std::string& out_dir, bool quiet) {
  BuiltExperiment built = build_experiment(cfg);
  const KktSolution sol = solve_kkt(built.problem, cfg.oracle_tol);
  const double f_star = optimal_static_value(built.problem, sol);

  const auto t_begin = std::chrono::steady_clock::now();
  const Trajectory traj = simulate(built.problem, built.x0, built.sim, f_star);
  const auto t_end = std::chrono::steady_clock::now();

  RunReport report;
  report.name = cfg.name;
  report.scenario = scenario_name(cfg.scenario);
  report.actuation = built.sim.g.describe();
  report.steps = traj.steps;
  report.samples = traj.samples();
  report.stop_reason = traj.stop_reason;
  report.wall_time_s = std::chrono::duration<double>(t_end - t_begin).count();
  report.clamp_activations = traj.clamp_activations;
  report.initial_lyapunov = traj.lyapunov.front();
  report.final_lyapunov = traj.lyapunov.back();
  report.initial_consensus = traj.grad_consensus.front();
  report.final_consensus = traj.grad_consensus.back();
  report.max_feasibility = *std::max_element(traj.feasibility.begin(), traj.feasibility.end());
  report.final_feasibility = traj.feasibility.back();
  report.max_rate = *std::max_element(traj.max_rate.begin(), traj.max_rate.end());

  if (cfg.residual_mark > 0.0) {
    for (std::size_t s = 0; s < traj.samples(); ++s) {
      if (traj.grad_consensus[s] <= cfg.residual_mark) {
        report.time_to_mark = traj.times[s];
        break;
      }
    }
  }

  const double b_norm = built.problem.b().norm();
  for (const auto& [name, value] : cfg.checks) {
    CheckResult r;
    r.name = name;
    if (name == "feasibility_rel") {
      r.measured = report.max_feasibility;
      r.threshold = value * (1.0 + b_norm);
    } else if (name == "feasibility_abs") {
      r.measured = report.max_feasibility;
      r.threshold = value;
    } else if (name == "consensus_final") {
      r.measured = report.final_consensus;
      r.threshold = value;
    } else if (name == "consensus_final_rel") {
      r.measured = report.final_consensus;
      r.threshold = value * report.initial_consensus;
    } else if (name == "lyapunov_final_rel") {
      r.measured = report.final_lyapunov;
      r.threshold = value * report.initial_lyapunov;
    } else if (name == "lyapunov_monotone_slack") {
      double worst_increase = 0.0;
      for (std::size_t s = 1; s < traj.samples(); ++s) {
        worst_increase = std::max(worst_increase, traj.lyapunov[s] - traj.lyapunov[s - 1]);
      }
      r.measured = worst_increase;
      r.threshold = value * traj.lyapunov.front();
    } else if (name == "max_rate") {
      r.measured = report.max_rate;
      r.threshold = value;
      for (double rate : traj.max_rate) {
        if (rate > value) ++report.rate_violations;
      }
    } else if (name == "box_slack") {
      if (!cfg.box) throw ConfigError("check box_slack declared without box bounds");
      const auto& X = traj.final_state();
      double worst = 0.0;
      for (Eigen::Index idx = 0; idx < X.size(); ++idx) {
        const double v = *(X.data() + idx);
        worst = std::max({worst, cfg.box->lower - v, v - cfg.box->upper});
      }
      r.measured = worst;
      r.threshold = value;
    } else if (name == "match_oracle_inf") {
      r.measured = (traj.final_state() - sol.x_star).cwiseAbs().maxCoeff();
      r.threshold = value;
    } else {
      throw ConfigError("unknown check '" + name + "'");
    }
    r.pass = r.measured <= r.threshold;
    report.checks.push_back(std::move(r));
  }

  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  {
    std::ofstream os(fs::path(out_dir) / "trajectory.csv");
    write_trajectory_csv(os, traj, optimal_value_trace(built.problem, sol, traj.times),
                         cfg.states_csv);
  }
  {
    std::ofstream os(fs::path(out_dir) / "oracle.csv");
    write_kkt_csv(os, sol);
  }
  {
    std::ofstream os(fs::path(out_dir) / "report.txt");
    write_report_kv(os, report);
  }

  if (!quiet) {
    std::cout << "[" << report.name << "] " << report.actuation << " steps=" << report.steps
              << " stop=" << stop_reason_name(report.stop_reason) << " wall=" << report.wall_time_s
              << "s\n";
    for (const auto& c : report.checks) {
      std::cout << "  " << c.name << ": " << (c.pass ? "pass" : "FAIL") << " (measured "
                << c.measured << " vs " << c.threshold << ")\n";
    }
    std::cout << "  result: " << (report.passed() ? "PASS" : "FAIL") << "\n";
  }
  return report;
}

int check(const ExperimentConfig& cfg, const RunReport& report) {
  if (report.checks.size() != cfg.checks.size()) {
    throw std::invalid_argument("check: report does not match the declared check list");
  }
  return report.passed() ? 0 : 1;
}

void write_report_kv(std::ostream& os, const RunReport& report) {
  os << "name=" << report.name << "\n";
  os << "scenario=" << report.scenario << "\n";
  os << "actuation=" << report.actuation << "\n";
  os << "steps=" << report.steps << "\n";
  os << "samples=" << report.samples << "\n";
  os << "stop_reason=" << stop_reason_name(report.stop_reason) << "\n";
  os << "wall_time_s=" << fmt(report.wall_time_s) << "\n";
  os << "clamp_activations=" << report.clamp_activations << "\n";
  os << "initial_lyapunov=" << fmt(report.initial_lyapunov) << "\n";
  os << "final_lyapunov=" << fmt(report.final_lyapunov) << "\n";
  os << "max_feasibility=" << fmt(report.max_feasibility) << "\n";
  os << "final_feasibility=" << fmt(report.final_feasibility) << "\n";
  os << "initial_consensus=" << fmt(report.initial_consensus) << "\n";
  os << "final_consensus=" << fmt(report.final_consensus) << "\n";
  os << "max_rate=" << fmt(report.max_rate) << "\n";
  os << "rate_violations=" << report.rate_violations << "\n";
  os << "time_to_mark=" << fmt(report.time_to_mark) << "\n";
  for (const auto& c : report.checks) {
    os << "check." << c.name << "=" << (c.pass ? "pass" : "fail") << " measured=" << fmt(c.measured)
       << " threshold=" << fmt(c.threshold) << "\n";
  }
  os << "result=" << (report.passed() ? "pass" : "fail") << "\n";
}

}  // namespace dra
