#include "dralloc/costs.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <utility>

namespace dra {

double softplus(double u) {
  return std::max(u, 0.0) + std::log1p(std::exp(-std::abs(u)));
}

double logistic(double u) {
  if (u >= 0.0) return 1.0 / (1.0 + std::exp(-u));
  const double e = std::exp(u);
  return e / (1.0 + e);
}

QuadraticCost::QuadraticCost(double gamma, double beta, double alpha)
    : gamma_(gamma), beta_(beta), alpha_(alpha) {
  if (!(gamma > 0.0)) throw std::invalid_argument("quadratic cost: gamma must be positive");
}

double QuadraticCost::value(const Eigen::VectorXd& x) const {
  const double v = x(0);
  return gamma_ * v * v + beta_ * v + alpha_;
}

Eigen::VectorXd QuadraticCost::gradient(const Eigen::VectorXd& x) const {
  Eigen::VectorXd g(1);
  g(0) = 2.0 * gamma_ * x(0) + beta_;
  return g;
}

LogSumExpQuadCost::LogSumExpQuadCost(Params p) : params_(std::move(p)) {
  const auto d = params_.quad_weight.size();
  if (d < 1) throw std::invalid_argument("lse-quad cost: empty parameter set");
  const auto& q = params_;
  if (q.logistic_slope.size() != d || q.quad_center.size() != d || q.logistic_shift.size() != d ||
      q.time_amp.size() != d || q.time_freq.size() != d || q.time_phase.size() != d) {
    throw std::invalid_argument("lse-quad cost: parameter vectors must share one length");
  }
  if ((q.quad_weight.array() <= 0.0).any()) {
    throw std::invalid_argument("lse-quad cost: quadratic weights must be positive");
  }
}

double LogSumExpQuadCost::value(const Eigen::VectorXd& x) const {
  const auto& q = params_;
  double sum = 0.0;
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    const double dx = x(j) - q.quad_center(j);
    sum += q.quad_weight(j) * dx * dx + softplus(q.logistic_slope(j) * (x(j) - q.logistic_shift(j)));
  }
  return sum;
}

Eigen::VectorXd LogSumExpQuadCost::gradient(const Eigen::VectorXd& x) const {
  const auto& q = params_;
  Eigen::VectorXd g(x.size());
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    const double slope = q.logistic_slope(j);
    g(j) = 2.0 * q.quad_weight(j) * (x(j) - q.quad_center(j)) +
           slope * logistic(slope * (x(j) - q.logistic_shift(j)));
  }
  return g;
}

double LogSumExpQuadCost::time_value(double t) const {
  const auto& q = params_;
  double sum = 0.0;
  for (Eigen::Index j = 0; j < q.time_amp.size(); ++j) {
    sum += q.time_amp(j) * std::sin(q.time_freq(j) * t + q.time_phase(j));
  }
  return sum;
}

PenalizedCost::PenalizedCost(CostPtr base, Eigen::VectorXd lower, Eigen::VectorXd upper,
                             double eps, double mu)
    : base_(std::move(base)), lower_(std::move(lower)), upper_(std::move(upper)), eps_(eps), mu_(mu) {
  if (!base_) throw std::invalid_argument("penalized cost: null base");
  if (lower_.size() != base_->dim() || upper_.size() != base_->dim()) {
    throw std::invalid_argument("penalized cost: bounds must match the cost dimension");
  }
  if (((upper_ - lower_).array() <= 0.0).any()) {
    throw std::invalid_argument("penalized cost: lower must be < upper elementwise");
  }
  if (!(eps_ > 0.0) || !(mu_ > 0.0)) {
    throw std::invalid_argument("penalized cost: eps and mu must be positive");
  }
}

double PenalizedCost::value(const Eigen::VectorXd& x) const {
  double pen = 0.0;
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    pen += softplus(mu_ * (x(j) - upper_(j))) + softplus(mu_ * (lower_(j) - x(j)));
  }
  return base_->value(x) + eps_ / mu_ * pen;
}

Eigen::VectorXd PenalizedCost::gradient(const Eigen::VectorXd& x) const {
  Eigen::VectorXd g = base_->gradient(x);
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    g(j) += eps_ * (logistic(mu_ * (x(j) - upper_(j))) - logistic(mu_ * (lower_(j) - x(j))));
  }
  return g;
}

CostPtr penalize(CostPtr base, const Eigen::VectorXd& lower, const Eigen::VectorXd& upper,
                 double eps, double mu) {
  return std::make_shared<PenalizedCost>(std::move(base), lower, upper, eps, mu);
}

double eval_total(const std::vector<CostPtr>& costs, const Eigen::MatrixXd& X, double t) {
  return eval_static_total(costs, X) + eval_time_total(costs, t);
}

double eval_static_total(const std::vector<CostPtr>& costs, const Eigen::MatrixXd& X) {
  if (static_cast<std::size_t>(X.cols()) != costs.size()) {
    throw std::invalid_argument("eval_total: X must have one column per cost");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < costs.size(); ++i) {
    if (costs[i]->dim() != X.rows()) {
      throw std::invalid_argument("eval_total: cost dimension mismatch");
    }
    sum += costs[i]->value(X.col(static_cast<Eigen::Index>(i)));
  }
  return sum;
}

double eval_time_total(const std::vector<CostPtr>& costs, double t) {
  double sum = 0.0;
  for (const auto& c : costs) sum += c->time_value(t);
  return sum;
}

std::vector<CostPtr> make_f2_costs(int n, std::uint64_t seed, int d) {
  if (n < 1 || d < 1) throw std::invalid_argument("make_f2_costs: n and d must be positive");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> quad(0.5, 2.0);
  std::uniform_real_distribution<double> slope(-1.0, 1.0);
  std::uniform_real_distribution<double> center(-2.0, 2.0);
  std::uniform_real_distribution<double> amp(0.0, 1.0);
  std::uniform_real_distribution<double> freq(0.1, 2.0);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);

  std::vector<CostPtr> costs;
  costs.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    LogSumExpQuadCost::Params p;
    p.quad_weight.resize(d);
    p.logistic_slope.resize(d);
    p.quad_center.resize(d);
    p.logistic_shift.resize(d);
    p.time_amp.resize(d);
    p.time_freq.resize(d);
    p.time_phase.resize(d);
    for (int j = 0; j < d; ++j) {
      p.quad_weight(j) = quad(rng);
      p.logistic_slope(j) = slope(rng);
      p.quad_center(j) = center(rng);
      p.logistic_shift(j) = center(rng);
      p.time_amp(j) = amp(rng);
      p.time_freq(j) = freq(rng);
      p.time_phase(j) = phase(rng);
    }
    costs.push_back(std::make_shared<LogSumExpQuadCost>(std::move(p)));
  }
  return costs;
}

std::vector<CostPtr> make_quadratic_costs(int n, std::uint64_t seed,
                                          double gamma_lo, double gamma_hi,
                                          double beta_lo, double beta_hi,
                                          double alpha_lo, double alpha_hi) {
  if (n < 1) throw std::invalid_argument("make_quadratic_costs: n must be positive");
  if (!(gamma_lo > 0.0) || gamma_lo > gamma_hi) {
    throw std::invalid_argument("make_quadratic_costs: need 0 < gamma_lo <= gamma_hi");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> gamma(gamma_lo, gamma_hi);
  std::uniform_real_distribution<double> beta(beta_lo, beta_hi);
  std::uniform_real_distribution<double> alpha(alpha_lo, alpha_hi);
  std::vector<CostPtr> costs;
  costs.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double g = gamma(rng);
    const double b = beta(rng);
    const double a = alpha(rng);
    costs.push_back(std::make_shared<QuadraticCost>(g, b, a));
  }
  return costs;
}

}  // namespace dra
