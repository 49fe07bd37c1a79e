#include <doctest.h>

#include <cmath>
#include <random>

#include "dralloc/costs.hpp"
#include "support.hpp"

using dra::CostPtr;
using dra::LogSumExpQuadCost;
using dra::QuadraticCost;

namespace {

Eigen::VectorXd scalar(double v) {
  Eigen::VectorXd x(1);
  x(0) = v;
  return x;
}

LogSumExpQuadCost::Params flat_params(int d) {
  LogSumExpQuadCost::Params p;
  p.quad_weight = Eigen::VectorXd::Ones(d);
  p.logistic_slope = Eigen::VectorXd::Zero(d);
  p.quad_center = Eigen::VectorXd::Zero(d);
  p.logistic_shift = Eigen::VectorXd::Zero(d);
  p.time_amp = Eigen::VectorXd::Zero(d);
  p.time_freq = Eigen::VectorXd::Ones(d);
  p.time_phase = Eigen::VectorXd::Zero(d);
  return p;
}

}  // namespace

TEST_CASE("quadratic gradient") {
  CHECK(QuadraticCost(1, 0, 0).gradient(scalar(3.0))(0) == 6.0);
  CHECK(QuadraticCost(2, 1, 5).gradient(scalar(0.0))(0) == 1.0);
  CHECK(QuadraticCost(1, 0, 0).value(scalar(3.0)) == 9.0);
  CHECK_THROWS_AS(QuadraticCost(0.0, 1, 0), std::invalid_argument);
  CHECK_THROWS_AS(QuadraticCost(-1.0, 1, 0), std::invalid_argument);
}

TEST_CASE("lse-quad gradient with zero slope reduces to the quadratic term") {
  LogSumExpQuadCost cost(flat_params(1));
  // slope 0 leaves a constant log(2) in the value, nothing in the gradient
  CHECK(cost.gradient(scalar(2.0))(0) == 4.0);
  CHECK(cost.value(scalar(0.0)) == doctest::Approx(std::log(2.0)));
  CHECK(cost.time_value(1.23) == 0.0);
}

TEST_CASE("lse-quad rejects bad parameters") {
  auto p = flat_params(2);
  p.quad_weight(1) = 0.0;
  CHECK_THROWS_AS(LogSumExpQuadCost{p}, std::invalid_argument);
  auto q = flat_params(2);
  q.time_amp.resize(3);
  CHECK_THROWS_AS(LogSumExpQuadCost{q}, std::invalid_argument);
}

TEST_CASE("lse-quad is overflow safe far from the origin") {
  auto p = flat_params(1);
  p.logistic_slope(0) = 1.0;
  LogSumExpQuadCost cost(p);
  for (double v : {1e6, -1e6, 700.0, -700.0}) {
    CHECK(std::isfinite(cost.value(scalar(v))));
    CHECK(std::isfinite(cost.gradient(scalar(v))(0)));
  }
  CHECK(cost.value(scalar(1e6)) == doctest::Approx(1e12 + 1e6));
}

TEST_CASE("eval_total sums static and time parts") {
  std::vector<CostPtr> costs{std::make_shared<QuadraticCost>(1, 0, 0),
                             std::make_shared<QuadraticCost>(1, 0, 0)};
  Eigen::MatrixXd X(1, 2);
  X << 1.0, 2.0;
  CHECK(dra::eval_total(costs, X, 0.0) == 5.0);
  CHECK(dra::eval_total(costs, X, 17.0) == 5.0);  // no time parts

  Eigen::MatrixXd bad(1, 3);
  CHECK_THROWS_AS(dra::eval_total(costs, bad, 0.0), std::invalid_argument);
}

TEST_CASE("penalty gradient vanishes inside the box and is eps/2 on the bound") {
  const double eps = 10.0;
  const double mu = 20.0;
  auto base = std::make_shared<QuadraticCost>(1, 0, 0);
  const auto pen = dra::penalize(base, scalar(0.0), scalar(10.0), eps, mu);

  const double slack = 5.0;  // x = 5 sits 5 away from both bounds
  const double contribution = pen->gradient(scalar(5.0))(0) - base->gradient(scalar(5.0))(0);
  CHECK(std::abs(contribution) <= 2.0 * eps * dra::logistic(-mu * slack));

  const double at_upper = pen->gradient(scalar(10.0))(0) - base->gradient(scalar(10.0))(0);
  CHECK(at_upper == doctest::Approx(eps / 2.0).epsilon(1e-12));

  const double at_lower = pen->gradient(scalar(0.0))(0) - base->gradient(scalar(0.0))(0);
  CHECK(at_lower == doctest::Approx(-eps / 2.0).epsilon(1e-12));
}

TEST_CASE("penalize validates its arguments") {
  auto base = std::make_shared<QuadraticCost>(1, 0, 0);
  CHECK_THROWS_AS(dra::penalize(base, scalar(1.0), scalar(1.0), 1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(dra::penalize(base, scalar(2.0), scalar(1.0), 1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(dra::penalize(base, scalar(0.0), scalar(1.0), 0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(dra::penalize(base, scalar(0.0), scalar(1.0), 1.0, -1.0), std::invalid_argument);
}

TEST_CASE("analytic gradients match central finite differences") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(-3.0, 3.0);

  const auto f2 = dra::make_f2_costs(4, 91, 4);
  const auto quad = std::make_shared<QuadraticCost>(0.7, -1.3, 2.0);
  const auto pen = dra::penalize(std::make_shared<QuadraticCost>(0.05, 20.0, 0.0),
                                 scalar(-50.0), scalar(150.0), 10.0, 20.0);

  for (int k = 0; k < 100; ++k) {
    Eigen::VectorXd x4(4);
    for (int j = 0; j < 4; ++j) x4(j) = u(rng);
    for (const auto& c : f2) {
      CHECK(testsupport::gradient_fd_rel_error(*c, x4) <= 1e-6);
    }
    const Eigen::VectorXd x1 = scalar(u(rng) * 40.0);
    CHECK(testsupport::gradient_fd_rel_error(*quad, x1) <= 1e-6);
    CHECK(testsupport::gradient_fd_rel_error(*pen, x1) <= 1e-6);
  }
}

TEST_CASE("f2 costs are reproducible, well-posed and strictly convex") {
  const auto a = dra::make_f2_costs(6, 31, 4);
  const auto b = dra::make_f2_costs(6, 31, 4);
  REQUIRE(a.size() == 6);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  Eigen::VectorXd x(4);
  for (int j = 0; j < 4; ++j) x(j) = u(rng);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i]->value(x) == b[i]->value(x));  // bitwise identical parameters
    CHECK((a[i]->gradient(x).array() == b[i]->gradient(x).array()).all());
    CHECK(a[i]->time_value(0.7) == b[i]->time_value(0.7));

    const auto& lse = dynamic_cast<const LogSumExpQuadCost&>(*a[i]);
    CHECK((lse.params().quad_weight.array() > 0.0).all());
    CHECK(testsupport::monotone_gradient_probe(*a[i], 100, 1234 + i));
  }
}

TEST_CASE("penalized costs stay strictly convex") {
  const auto pen = dra::penalize(std::make_shared<QuadraticCost>(0.05, 20.0, 0.0),
                                 scalar(-50.0), scalar(150.0), 10.0, 20.0);
  CHECK(testsupport::monotone_gradient_probe(*pen, 100, 77, 200.0));
}

TEST_CASE("quadratic cost generator honours its ranges") {
  const auto costs = dra::make_quadratic_costs(50, 3, 0.02, 0.10, 15.0, 40.0, 0.0, 100.0);
  for (const auto& c : costs) {
    const auto& q = dynamic_cast<const QuadraticCost&>(*c);
    CHECK(q.gamma() >= 0.02);
    CHECK(q.gamma() <= 0.10);
    CHECK(q.beta() >= 15.0);
    CHECK(q.beta() <= 40.0);
    CHECK(q.alpha() >= 0.0);
    CHECK(q.alpha() <= 100.0);
  }
  CHECK_THROWS_AS(dra::make_quadratic_costs(3, 1, 0.0, 0.1, 0, 1, 0, 1), std::invalid_argument);
}
