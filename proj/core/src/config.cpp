#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "dralloc/errors.hpp"
#include "dralloc/harness.hpp"

namespace dra {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

const std::set<std::string> kSections = {"problem", "actuation", "schedule", "sim", "checks"};

const std::set<std::string> kCheckNames = {
    "feasibility_rel",       "feasibility_abs",  "consensus_final",
    "consensus_final_rel",   "lyapunov_final_rel", "lyapunov_monotone_slack",
    "max_rate",              "box_slack",        "match_oracle_inf",
};

double parse_double(const ParsedConfig::Entry& e, const std::string& key) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(e.value, &pos);
    if (pos != e.value.size()) throw std::invalid_argument("");
    return v;
  } catch (...) {
    throw ConfigError("expected a number for '" + key + "', got '" + e.value + "'", e.line);
  }
}

int parse_int(const ParsedConfig::Entry& e, const std::string& key) {
  try {
    std::size_t pos = 0;
    const long v = std::stol(e.value, &pos);
    if (pos != e.value.size()) throw std::invalid_argument("");
    return static_cast<int>(v);
  } catch (...) {
    throw ConfigError("expected an integer for '" + key + "', got '" + e.value + "'", e.line);
  }
}

std::uint64_t parse_u64(const ParsedConfig::Entry& e, const std::string& key) {
  try {
    std::size_t pos = 0;
    const unsigned long long v = std::stoull(e.value, &pos);
    if (pos != e.value.size()) throw std::invalid_argument("");
    return v;
  } catch (...) {
    throw ConfigError("expected a nonnegative integer for '" + key + "', got '" + e.value + "'",
                      e.line);
  }
}

bool parse_bool(const ParsedConfig::Entry& e, const std::string& key) {
  if (e.value == "on" || e.value == "true" || e.value == "1") return true;
  if (e.value == "off" || e.value == "false" || e.value == "0") return false;
  throw ConfigError("expected on/off for '" + key + "', got '" + e.value + "'", e.line);
}

std::vector<double> parse_list(const ParsedConfig::Entry& e, const std::string& key) {
  std::vector<double> out;
  std::istringstream is(e.value);
  std::string tok;
  while (is >> tok) {
    try {
      std::size_t pos = 0;
      out.push_back(std::stod(tok, &pos));
      if (pos != tok.size()) throw std::invalid_argument("");
    } catch (...) {
      throw ConfigError("expected numbers for '" + key + "', got '" + tok + "'", e.line);
    }
  }
  if (out.empty()) throw ConfigError("empty value for '" + key + "'", e.line);
  return out;
}

std::pair<double, double> parse_range(const ParsedConfig::Entry& e, const std::string& key) {
  const auto vals = parse_list(e, key);
  if (vals.size() != 2) throw ConfigError("'" + key + "' needs exactly two numbers", e.line);
  return {vals[0], vals[1]};
}

}  // namespace

ParsedConfig ParsedConfig::parse(std::istream& is) {
  ParsedConfig cfg;
  std::string line;
  std::string section;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    const auto comment = line.find_first_of("#;");
    if (comment != std::string::npos) line = line.substr(0, comment);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError("unterminated section header", line_no);
      section = trim(line.substr(1, line.size() - 2));
      if (!kSections.count(section)) throw ConfigError("unknown section [" + section + "]", line_no);
      cfg.sections[section];  // sections may be empty
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("expected key = value", line_no);
    if (section.empty()) throw ConfigError("key outside any [section]", line_no);
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) throw ConfigError("empty key or value", line_no);
    auto [it, inserted] = cfg.sections[section].emplace(key, Entry{value, line_no});
    if (!inserted) throw ConfigError("duplicate key '" + key + "' in [" + section + "]", line_no);
  }
  return cfg;
}

ParsedConfig ParsedConfig::parse_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config file '" + path + "'");
  return parse(is);
}

Actuation ActuationSpec::build() const {
  if (kind == "identity") return Actuation::identity();
  if (kind == "power_sign") return Actuation::power_sign(mu);
  if (kind == "fixed_time") return Actuation::fixed_time(mu1, mu2);
  if (kind == "uniform_quantizer") return Actuation::uniform_quantizer(delta);
  if (kind == "log_quantizer") return Actuation::log_quantizer(delta);
  if (kind == "robust_uniform") return Actuation::robust_uniform(eps, d_th);
  if (kind == "robust_laplace") return Actuation::robust_laplace(eps);
  if (kind == "saturation") return Actuation::saturation(kappa);
  throw ConfigError("unknown actuation kind '" + kind + "'");
}

GraphSchedule ScheduleSpec::build(int n, std::uint64_t seed) const {
  if (kind == "cycle") {
    std::vector<WeightedGraph> graphs;
    for (int k = 0; k < count; ++k) graphs.push_back(build_cycle(n, weights, seed + static_cast<std::uint64_t>(k)));
    return GraphSchedule(std::move(graphs), dwell);
  }
  if (kind == "erdos_renyi") {
    return build_er_schedule(count, n, p, weights, dwell, seed);
  }
  throw ConfigError("unknown schedule kind '" + kind + "'");
}

Scenario scenario_from_name(const std::string& name) {
  if (name == "f2_quantized") return Scenario::f2_quantized;
  if (name == "f2_saturated") return Scenario::f2_saturated;
  if (name == "agc") return Scenario::agc;
  if (name == "custom") return Scenario::custom;
  throw ConfigError("unknown scenario '" + name + "'");
}

std::string scenario_name(Scenario s) {
  switch (s) {
    case Scenario::f2_quantized:
      return "f2_quantized";
    case Scenario::f2_saturated:
      return "f2_saturated";
    case Scenario::agc:
      return "agc";
    case Scenario::custom:
      return "custom";
  }
  return "custom";
}

std::vector<std::pair<std::string, std::string>> list_scenarios() {
  return {
      {"f2_quantized",
       "switching-network allocation, n=100, d=4, logarithmic quantizer (delta=1)"},
      {"f2_saturated", "switching-network allocation, n=100, d=4, saturated actuation (kappa=1)"},
      {"agc", "generation-control dispatch, n=10, 800 MW mismatch, fixed-time actuation"},
      {"custom", "everything specified explicitly in the config file"},
  };
}

ExperimentConfig scenario_preset(Scenario s) {
  ExperimentConfig cfg;
  cfg.scenario = s;
  cfg.name = scenario_name(s);
  switch (s) {
    case Scenario::f2_quantized:
    case Scenario::f2_saturated: {
      cfg.n = 100;
      cfg.d = 4;
      cfg.cost_kind = "f2";
      cfg.a_kind = "uniform";
      cfg.a_lo = 0.1;
      cfg.a_hi = 1.0;
      cfg.b = Eigen::VectorXd::Constant(4, 10.0);
      cfg.actuation.kind = s == Scenario::f2_quantized ? "log_quantizer" : "saturation";
      cfg.actuation.delta = 1.0;
      cfg.actuation.kappa = 1.0;
      cfg.schedule.kind = "erdos_renyi";
      cfg.schedule.count = 4;
      cfg.schedule.dwell = 0.1;
      cfg.schedule.p = 0.02;
      cfg.schedule.weights = {0.5, 1.0};
      cfg.dt = 1e-3;
      cfg.horizon = 30.0;
      cfg.record_every = 100;
      cfg.init_mode = InitMode::equal_share;
      cfg.seed = 7;
      cfg.checks = {{"feasibility_rel", 1e-9},
                    {"lyapunov_monotone_slack", 1e-6},
                    {"lyapunov_final_rel", 1e-2}};
      break;
    }
    case Scenario::agc: {
      cfg.n = 10;
      cfg.d = 1;
      cfg.cost_kind = "quadratic";
      cfg.gamma_lo = 0.02;
      cfg.gamma_hi = 0.10;
      cfg.beta_lo = 15.0;
      cfg.beta_hi = 40.0;
      cfg.alpha_lo = 0.0;
      cfg.alpha_hi = 100.0;
      cfg.a_kind = "ones";
      cfg.b = Eigen::VectorXd::Constant(1, 800.0);
      cfg.box = BoxSpec{-50.0, 150.0, 50.0, 20.0};
      cfg.actuation.kind = "fixed_time";
      cfg.actuation.mu1 = 0.7;
      cfg.actuation.mu2 = 1.4;
      cfg.schedule.kind = "cycle";
      cfg.schedule.count = 1;
      cfg.schedule.dwell = 0.1;
      cfg.schedule.weights = {0.5, 1.0};
      cfg.dt = 1e-3;  // time unit: minutes
      cfg.horizon = 300.0;
      cfg.record_every = 100;
      cfg.init_mode = InitMode::equal_share;
      cfg.seed = 11;
      cfg.residual_mark = 1e-3;
      cfg.checks = {{"feasibility_abs", 1e-6}, {"box_slack", 1.0 / 50.0}, {"consensus_final", 1e-4}};
      break;
    }
    case Scenario::custom:
      break;
  }
  return cfg;
}

namespace {

void apply_problem(ExperimentConfig& cfg, const std::map<std::string, ParsedConfig::Entry>& sec) {
  for (const auto& [key, entry] : sec) {
    if (key == "scenario") continue;  // handled by the caller
    if (key == "n") cfg.n = parse_int(entry, key);
    else if (key == "d") cfg.d = parse_int(entry, key);
    else if (key == "cost") cfg.cost_kind = entry.value;
    else if (key == "gamma_range") std::tie(cfg.gamma_lo, cfg.gamma_hi) = parse_range(entry, key);
    else if (key == "beta_range") std::tie(cfg.beta_lo, cfg.beta_hi) = parse_range(entry, key);
    else if (key == "alpha_range") std::tie(cfg.alpha_lo, cfg.alpha_hi) = parse_range(entry, key);
    else if (key == "a") {
      if (entry.value == "ones") {
        cfg.a_kind = "ones";
      } else {
        std::istringstream is(entry.value);
        std::string head;
        is >> head;
        if (head == "uniform") {
          cfg.a_kind = "uniform";
          if (!(is >> cfg.a_lo >> cfg.a_hi)) {
            throw ConfigError("'a = uniform lo hi' needs two numbers", entry.line);
          }
        } else {
          const auto vals = parse_list(entry, key);
          cfg.a_kind = "explicit";
          cfg.a_explicit = Eigen::Map<const Eigen::VectorXd>(vals.data(),
                                                             static_cast<Eigen::Index>(vals.size()));
        }
      }
    } else if (key == "b") {
      const auto vals = parse_list(entry, key);
      cfg.b = Eigen::Map<const Eigen::VectorXd>(vals.data(), static_cast<Eigen::Index>(vals.size()));
    } else if (key == "box_lower") {
      if (!cfg.box) cfg.box = BoxSpec{};
      cfg.box->lower = parse_double(entry, key);
    } else if (key == "box_upper") {
      if (!cfg.box) cfg.box = BoxSpec{};
      cfg.box->upper = parse_double(entry, key);
    } else if (key == "penalty_eps") {
      if (!cfg.box) cfg.box = BoxSpec{};
      cfg.box->eps = parse_double(entry, key);
    } else if (key == "penalty_mu") {
      if (!cfg.box) cfg.box = BoxSpec{};
      cfg.box->mu = parse_double(entry, key);
    } else {
      throw ConfigError("unknown key '" + key + "' in [problem]", entry.line);
    }
  }
}

void apply_actuation(ExperimentConfig& cfg, const std::map<std::string, ParsedConfig::Entry>& sec) {
  for (const auto& [key, entry] : sec) {
    if (key == "kind") cfg.actuation.kind = entry.value;
    else if (key == "mu") cfg.actuation.mu = parse_double(entry, key);
    else if (key == "mu1") cfg.actuation.mu1 = parse_double(entry, key);
    else if (key == "mu2") cfg.actuation.mu2 = parse_double(entry, key);
    else if (key == "delta") cfg.actuation.delta = parse_double(entry, key);
    else if (key == "eps") cfg.actuation.eps = parse_double(entry, key);
    else if (key == "d_th") cfg.actuation.d_th = parse_double(entry, key);
    else if (key == "kappa") cfg.actuation.kappa = parse_double(entry, key);
    else throw ConfigError("unknown key '" + key + "' in [actuation]", entry.line);
  }
}

void apply_schedule(ExperimentConfig& cfg, const std::map<std::string, ParsedConfig::Entry>& sec) {
  for (const auto& [key, entry] : sec) {
    if (key == "kind") cfg.schedule.kind = entry.value;
    else if (key == "count") cfg.schedule.count = parse_int(entry, key);
    else if (key == "dwell") cfg.schedule.dwell = parse_double(entry, key);
    else if (key == "p") cfg.schedule.p = parse_double(entry, key);
    else if (key == "weight_range") {
      const auto [lo, hi] = parse_range(entry, key);
      cfg.schedule.weights = {lo, hi};
    } else if (key == "window") {
      cfg.schedule.window = parse_double(entry, key);
    } else {
      throw ConfigError("unknown key '" + key + "' in [schedule]", entry.line);
    }
  }
}

void apply_sim(ExperimentConfig& cfg, const std::map<std::string, ParsedConfig::Entry>& sec) {
  for (const auto& [key, entry] : sec) {
    if (key == "dt") cfg.dt = parse_double(entry, key);
    else if (key == "horizon") cfg.horizon = parse_double(entry, key);
    else if (key == "integrator") {
      if (entry.value != "euler" && entry.value != "rk4") {
        throw ConfigError("integrator must be euler or rk4", entry.line);
      }
      cfg.integrator = entry.value;
    } else if (key == "record_every") cfg.record_every = parse_int(entry, key);
    else if (key == "init") {
      if (entry.value == "equal_share") cfg.init_mode = InitMode::equal_share;
      else if (entry.value == "random_feasible") cfg.init_mode = InitMode::random_feasible;
      else throw ConfigError("init must be equal_share or random_feasible", entry.line);
    } else if (key == "seed") cfg.seed = parse_u64(entry, key);
    else if (key == "feasibility_correction") cfg.feasibility_correction = parse_bool(entry, key);
    else if (key == "consensus_tol") cfg.consensus_tol = parse_double(entry, key);
    else if (key == "plateau") cfg.plateau = parse_bool(entry, key);
    else if (key == "plateau_steps") cfg.plateau_steps = parse_int(entry, key);
    else if (key == "rate_clamp") cfg.rate_clamp = parse_bool(entry, key);
    else if (key == "states_csv") cfg.states_csv = parse_bool(entry, key);
    else if (key == "oracle_tol") cfg.oracle_tol = parse_double(entry, key);
    else throw ConfigError("unknown key '" + key + "' in [sim]", entry.line);
  }
}

void apply_checks(ExperimentConfig& cfg, const std::map<std::string, ParsedConfig::Entry>& sec) {
  for (const auto& [key, entry] : sec) {
    if (key == "residual_mark") {
      cfg.residual_mark = parse_double(entry, key);
      continue;
    }
    if (!kCheckNames.count(key)) {
      throw ConfigError("unknown check '" + key + "'", entry.line);
    }
    const double threshold = parse_double(entry, key);
    bool replaced = false;
    for (auto& c : cfg.checks) {
      if (c.first == key) {
        c.second = threshold;
        replaced = true;
        break;
      }
    }
    if (!replaced) cfg.checks.emplace_back(key, threshold);
  }
}

}  // namespace

ExperimentConfig load_config_stream(std::istream& is, const std::string& name) {
  const ParsedConfig parsed = ParsedConfig::parse(is);

  Scenario scenario = Scenario::custom;
  if (auto problem = parsed.sections.find("problem"); problem != parsed.sections.end()) {
    if (auto it = problem->second.find("scenario"); it != problem->second.end()) {
      try {
        scenario = scenario_from_name(it->second.value);
      } catch (const ConfigError& e) {
        throw ConfigError(e.what(), it->second.line);
      }
    }
  }

  ExperimentConfig cfg = scenario_preset(scenario);
  cfg.name = name;
  for (const auto& [section, entries] : parsed.sections) {
    if (section == "problem") apply_problem(cfg, entries);
    else if (section == "actuation") apply_actuation(cfg, entries);
    else if (section == "schedule") apply_schedule(cfg, entries);
    else if (section == "sim") apply_sim(cfg, entries);
    else if (section == "checks") apply_checks(cfg, entries);
  }

  if (cfg.scenario == Scenario::custom && cfg.b.size() == 0) {
    throw ConfigError("custom configs must set 'b' under [problem]");
  }
  if (cfg.b.size() == 1 && cfg.d > 1) {
    cfg.b = Eigen::VectorXd::Constant(cfg.d, cfg.b(0));
  }
  if (cfg.b.size() != cfg.d) throw ConfigError("'b' must have d entries (or one to broadcast)");
  if (cfg.n < 2) throw ConfigError("'n' must be at least 2");
  if (cfg.box && !(cfg.box->lower < cfg.box->upper)) {
    throw ConfigError("box bounds must satisfy lower < upper");
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config file '" + path + "'");
  std::string stem = path;
  if (const auto slash = stem.find_last_of('/'); slash != std::string::npos) {
    stem = stem.substr(slash + 1);
  }
  if (const auto dot = stem.find_last_of('.'); dot != std::string::npos) {
    stem = stem.substr(0, dot);
  }
  return load_config_stream(is, stem);
}

}  // namespace dra
