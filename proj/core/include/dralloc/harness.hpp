#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dralloc/dynamics.hpp"
#include "dralloc/oracle.hpp"

namespace dra {

/// Flat sectioned key=value config text. '#' and ';' start comments, blank
/// lines are ignored, keys live under the most recent [section] header.
/// Duplicate keys within a section are rejected.
struct ParsedConfig {
  struct Entry {
    std::string value;
    int line = 0;
  };

  std::map<std::string, std::map<std::string, Entry>> sections;

  static ParsedConfig parse(std::istream& is);
  static ParsedConfig parse_file(const std::string& path);
};

enum class Scenario { f2_quantized, f2_saturated, agc, custom };

enum class InitMode { equal_share, random_feasible };

struct ActuationSpec {
  std::string kind = "identity";
  double mu = 1.0;       // power_sign
  double mu1 = 0.7;      // fixed_time
  double mu2 = 1.4;      // fixed_time
  double delta = 1.0;    // quantizers
  double eps = 0.5;      // robust maps
  double d_th = 1.0;     // robust_uniform
  double kappa = 1.0;    // saturation

  Actuation build() const;
};

struct ScheduleSpec {
  std::string kind = "cycle";  // cycle | erdos_renyi
  int count = 1;
  double dwell = 0.1;
  double p = 0.02;  // erdos_renyi link probability
  WeightRange weights{0.5, 1.0};
  double window = -1.0;  // uniform-connectivity window; <0 means one period

  GraphSchedule build(int n, std::uint64_t seed) const;
};

struct BoxSpec {
  double lower = -50.0;
  double upper = 150.0;
  double eps = 10.0;
  double mu = 20.0;
};

/// Fully resolved experiment description. Scenario presets fill every field;
/// config files may override any of them.
struct ExperimentConfig {
  std::string name = "custom";
  Scenario scenario = Scenario::custom;

  // [problem]
  int n = 2;
  int d = 1;
  std::string cost_kind = "quadratic";  // quadratic | f2
  double gamma_lo = 0.02, gamma_hi = 0.10;
  double beta_lo = 15.0, beta_hi = 40.0;
  double alpha_lo = 0.0, alpha_hi = 100.0;
  std::string a_kind = "ones";  // ones | uniform | explicit
  double a_lo = 0.1, a_hi = 1.0;
  Eigen::VectorXd a_explicit;
  Eigen::VectorXd b;
  std::optional<BoxSpec> box;

  // [actuation]
  ActuationSpec actuation;

  // [schedule]
  ScheduleSpec schedule;

  // [sim]
  double dt = 1e-3;
  double horizon = 10.0;
  std::string integrator = "euler";
  int record_every = 100;
  InitMode init_mode = InitMode::equal_share;
  std::uint64_t seed = 1;
  bool feasibility_correction = false;
  double consensus_tol = 1e-6;
  bool plateau = false;
  int plateau_steps = 1000;
  bool rate_clamp = true;
  bool states_csv = false;
  double oracle_tol = 1e-10;

  // [checks]
  std::vector<std::pair<std::string, double>> checks;
  double residual_mark = -1.0;  // records time-to-residual when positive
};

ExperimentConfig scenario_preset(Scenario s);
Scenario scenario_from_name(const std::string& name);
std::string scenario_name(Scenario s);

/// (name, one-line description) for every built-in scenario.
std::vector<std::pair<std::string, std::string>> list_scenarios();

/// Loads a config file: applies the scenario preset named under [problem]
/// (default custom), then every other key as an override. Unknown sections,
/// unknown keys and malformed values raise ConfigError with the line.
ExperimentConfig load_config(const std::string& path);
ExperimentConfig load_config_stream(std::istream& is, const std::string& name);

/// Problem, simulation settings and initial state assembled from a config.
struct BuiltExperiment {
  AllocationProblem problem;
  SimConfig sim;
  Eigen::MatrixXd x0;
};

BuiltExperiment build_experiment(const ExperimentConfig& cfg);

/// equal_share: every agent starts at b / sum(a), which satisfies X a = b
/// exactly. random_feasible: seeded gaussian states projected onto X a = b
/// by the rank-1 affine correction.
Eigen::MatrixXd init_feasible(const AllocationProblem& problem, InitMode mode, std::uint64_t seed);

struct CheckResult {
  std::string name;
  bool pass = false;
  double measured = 0.0;
  double threshold = 0.0;
};

struct RunReport {
  std::string name;
  std::string scenario;
  std::string actuation;

  long long steps = 0;
  std::size_t samples = 0;
  StopReason stop_reason = StopReason::horizon;
  double wall_time_s = 0.0;
  long long clamp_activations = 0;

  double initial_lyapunov = 0.0;
  double final_lyapunov = 0.0;
  double max_feasibility = 0.0;
  double final_feasibility = 0.0;
  double initial_consensus = 0.0;
  double final_consensus = 0.0;
  double max_rate = 0.0;
  long long rate_violations = 0;
  double time_to_mark = -1.0;

  std::vector<CheckResult> checks;

  bool passed() const;
};

/// Runs one experiment end to end: builds the problem, solves the oracle,
/// simulates, writes trajectory.csv / oracle.csv / report.txt under out_dir,
/// and evaluates the declared checks against the recorded diagnostics.
RunReport run_experiment(const ExperimentConfig& cfg, const std::string& out_dir,
                         bool quiet = false);

/// 0 iff every declared check passed; 1 otherwise. The report lists the
/// failing checks by name.
int check(const ExperimentConfig& cfg, const RunReport& report);

/// Machine-readable key=value block.
void write_report_kv(std::ostream& os, const RunReport& report);

}  // namespace dra
