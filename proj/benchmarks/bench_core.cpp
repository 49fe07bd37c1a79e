#include <benchmark/benchmark.h>

#include "dralloc/dynamics.hpp"
#include "dralloc/harness.hpp"
#include "dralloc/oracle.hpp"

namespace {

dra::AllocationProblem f2_problem(int n, int d) {
  auto costs = dra::make_f2_costs(n, 7, d);
  Eigen::VectorXd a = Eigen::VectorXd::LinSpaced(n, 0.1, 1.0);
  Eigen::VectorXd b = Eigen::VectorXd::Constant(d, 10.0);
  return dra::AllocationProblem(std::move(costs), std::move(a), std::move(b));
}

void BM_rhs_f2(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto problem = f2_problem(n, 4);
  const auto graph = dra::build_erdos_renyi(n, 0.05, {0.5, 1.0}, 3);
  const auto g = dra::Actuation::log_quantizer(1.0);
  const Eigen::MatrixXd X = dra::init_feasible(problem, dra::InitMode::random_feasible, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(dra::rhs(X, graph, problem, g));
  }
}
BENCHMARK(BM_rhs_f2)->Arg(20)->Arg(100);

void BM_step_rk4(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto problem = f2_problem(n, 4);
  dra::SimConfig cfg(dra::GraphSchedule({dra::build_erdos_renyi(n, 0.05, {0.5, 1.0}, 3)}, 0.1));
  cfg.integrator = dra::Integrator::rk4;
  cfg.g = dra::Actuation::saturation(1.0);
  const Eigen::MatrixXd X = dra::init_feasible(problem, dra::InitMode::equal_share, 1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(dra::step(X, 0.0, cfg, problem));
  }
}
BENCHMARK(BM_step_rk4)->Arg(20)->Arg(100);

void BM_solve_kkt(benchmark::State& state) {
  const auto problem = f2_problem(static_cast<int>(state.range(0)), 4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(dra::solve_kkt(problem, 1e-10));
  }
}
BENCHMARK(BM_solve_kkt)->Arg(20)->Arg(100);

void BM_log_quantizer(benchmark::State& state) {
  const auto g = dra::Actuation::log_quantizer(1.0);
  Eigen::VectorXd z = Eigen::VectorXd::LinSpaced(64, -3.0, 3.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(g(z));
  }
}
BENCHMARK(BM_log_quantizer);

}  // namespace
