#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <string>
#include <vector>

#include "dralloc/errors.hpp"
#include "dralloc/harness.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitCheckFailure = 1;
constexpr int kExitConfigError = 2;
constexpr int kExitRuntimeError = 3;

dra::ExperimentConfig resolve_config(const std::string& arg) {
  if (std::filesystem::exists(arg)) return dra::load_config(arg);
  // Bare scenario names work without a config file.
  return dra::scenario_preset(dra::scenario_from_name(arg));
}

struct RunOutcome {
  int status = kExitPass;
  std::string message;
};

RunOutcome run_one(const std::string& arg, const std::string& out_root,
                   std::optional<std::uint64_t> seed_override, bool quiet) {
  try {
    dra::ExperimentConfig cfg = resolve_config(arg);
    if (seed_override) cfg.seed = *seed_override;
    const auto out_dir = std::filesystem::path(out_root) / cfg.name;
    const dra::RunReport report = dra::run_experiment(cfg, out_dir.string(), quiet);
    if (dra::check(cfg, report) != 0) {
      std::string failing;
      for (const auto& c : report.checks) {
        if (!c.pass) failing += (failing.empty() ? "" : ", ") + c.name;
      }
      return {kExitCheckFailure, cfg.name + ": failed checks: " + failing};
    }
    return {kExitPass, ""};
  } catch (const dra::ConfigError& e) {
    return {kExitConfigError, std::string("config error: ") + e.what()};
  } catch (const dra::IntegrationError& e) {
    return {kExitRuntimeError, std::string("integration error: ") + e.what()};
  } catch (const std::exception& e) {
    return {kExitRuntimeError, std::string("error: ") + e.what()};
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distributed resource allocation simulator"};
  app.require_subcommand(1);

  std::vector<std::string> configs;
  std::string out_dir = "out";
  std::uint64_t seed = 0;
  bool seed_set = false;
  bool quiet = false;
  unsigned jobs = 1;

  auto* run = app.add_subcommand("run", "Run experiments and evaluate their checks");
  run->add_option("config", configs, "Config files or scenario names")->required();
  run->add_option("--out", out_dir, "Output directory root");
  run->add_option("--seed", seed, "Override the config seed")->each([&](const std::string&) {
    seed_set = true;
  });
  run->add_flag("--quiet", quiet, "Suppress progress output");
  run->add_option("--jobs", jobs, "Run configs concurrently")->check(CLI::Range(1u, 64u));

  auto* oracle = app.add_subcommand("oracle", "Solve the KKT optimum for a config");
  std::string oracle_config;
  oracle->add_option("config", oracle_config, "Config file or scenario name")->required();
  oracle->add_option("--out", out_dir, "Output directory root");
  oracle->add_option("--seed", seed, "Override the config seed")->each([&](const std::string&) {
    seed_set = true;
  });
  oracle->add_flag("--quiet", quiet, "Suppress output");

  auto* conn = app.add_subcommand("check-connectivity",
                                  "Check uniform connectivity of a config's schedule");
  std::string conn_config;
  double window = -1.0;
  conn->add_option("config", conn_config, "Config file or scenario name")->required();
  conn->add_option("--window", window, "Window length (default: one schedule period)");
  conn->add_option("--seed", seed, "Override the config seed")->each([&](const std::string&) {
    seed_set = true;
  });

  auto* list = app.add_subcommand("list-scenarios", "List built-in scenarios");

  CLI11_PARSE(app, argc, argv);

  const std::optional<std::uint64_t> seed_override =
      seed_set ? std::optional<std::uint64_t>(seed) : std::nullopt;

  if (list->parsed()) {
    for (const auto& [name, description] : dra::list_scenarios()) {
      std::cout << name << "  -  " << description << "\n";
    }
    return kExitPass;
  }

  if (run->parsed()) {
    std::vector<RunOutcome> outcomes(configs.size());
    if (jobs <= 1 || configs.size() <= 1) {
      for (std::size_t i = 0; i < configs.size(); ++i) {
        outcomes[i] = run_one(configs[i], out_dir, seed_override, quiet);
      }
    } else {
      std::vector<std::future<RunOutcome>> futures;
      futures.reserve(configs.size());
      // Quiet per-run output when parallel so lines do not interleave.
      for (const auto& cfg : configs) {
        futures.push_back(std::async(std::launch::async, run_one, cfg, out_dir, seed_override,
                                     true));
        if (futures.size() >= jobs) {
          futures.front().wait();
        }
      }
      for (std::size_t i = 0; i < futures.size(); ++i) outcomes[i] = futures[i].get();
    }
    int status = kExitPass;
    for (const auto& o : outcomes) {
      if (!o.message.empty()) std::cerr << o.message << "\n";
      status = std::max(status, o.status);
    }
    return status;
  }

  if (oracle->parsed()) {
    try {
      dra::ExperimentConfig cfg = resolve_config(oracle_config);
      if (seed_override) cfg.seed = *seed_override;
      const dra::BuiltExperiment built = dra::build_experiment(cfg);
      const dra::KktSolution sol = dra::solve_kkt(built.problem, cfg.oracle_tol);
      const auto dir = std::filesystem::path(out_dir) / cfg.name;
      std::filesystem::create_directories(dir);
      std::ofstream os(dir / "oracle.csv");
      dra::write_kkt_csv(os, sol);
      if (!quiet) {
        std::cout << "wrote " << (dir / "oracle.csv").string() << " (residual " << sol.residual
                  << ")\n";
        for (Eigen::Index p = 0; p < sol.phi_star.size(); ++p) {
          std::cout << "phi[" << p << "] = " << sol.phi_star(p) << "\n";
        }
      }
      return kExitPass;
    } catch (const dra::ConfigError& e) {
      std::cerr << "config error: " << e.what() << "\n";
      return kExitConfigError;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kExitRuntimeError;
    }
  }

  if (conn->parsed()) {
    try {
      dra::ExperimentConfig cfg = resolve_config(conn_config);
      if (seed_override) cfg.seed = *seed_override;
      const dra::BuiltExperiment built = dra::build_experiment(cfg);
      const auto& schedule = built.sim.schedule;
      double w = window > 0.0 ? window : cfg.schedule.window;
      if (w <= 0.0) w = schedule.period();
      const bool ok = dra::check_uniform_connectivity(schedule, w);
      std::cout << "uniform connectivity over window " << w << ": " << (ok ? "yes" : "NO") << "\n";
      return ok ? kExitPass : kExitCheckFailure;
    } catch (const dra::ConfigError& e) {
      std::cerr << "config error: " << e.what() << "\n";
      return kExitConfigError;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kExitRuntimeError;
    }
  }

  return kExitPass;
}
