#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <memory>
#include <vector>

namespace dra {

/// log(1 + exp(u)) evaluated as max(u,0) + log1p(exp(-|u|)); never overflows.
double softplus(double u);

/// Logistic function 1/(1 + exp(-u)), overflow-safe on both tails.
double logistic(double u);

/// Local cost f_i(x, t) split into a strictly convex differentiable static
/// part and an additive scalar time part. The time part never enters the
/// gradient. Implementations are immutable and evaluation is pure.
class LocalCost {
 public:
  virtual ~LocalCost() = default;

  virtual int dim() const = 0;

  /// Static part value.
  virtual double value(const Eigen::VectorXd& x) const = 0;

  /// Exact analytic gradient of the static part.
  virtual Eigen::VectorXd gradient(const Eigen::VectorXd& x) const = 0;

  /// Additive time-varying part; defaults to zero.
  virtual double time_value(double /*t*/) const { return 0.0; }

  /// True when the static part is a sum of per-coordinate terms. The KKT
  /// oracle only accepts separable costs.
  virtual bool coordinate_separable() const { return true; }
};

using CostPtr = std::shared_ptr<const LocalCost>;

/// gamma*x^2 + beta*x + alpha on scalars; gamma > 0 keeps it strictly convex.
class QuadraticCost final : public LocalCost {
 public:
  QuadraticCost(double gamma, double beta, double alpha);

  int dim() const override { return 1; }
  double value(const Eigen::VectorXd& x) const override;
  Eigen::VectorXd gradient(const Eigen::VectorXd& x) const override;

  double gamma() const { return gamma_; }
  double beta() const { return beta_; }
  double alpha() const { return alpha_; }

 private:
  double gamma_, beta_, alpha_;
};

/// Per coordinate j:
///   static:  quad_weight_j*(x_j - quad_center_j)^2
///          + softplus(logistic_slope_j*(x_j - logistic_shift_j))
///   time:    time_amp_j * sin(time_freq_j*t + time_phase_j)
/// quad_weight must be positive everywhere; the softplus term is convex for
/// any slope, so the sum stays strictly convex.
class LogSumExpQuadCost final : public LocalCost {
 public:
  struct Params {
    Eigen::VectorXd quad_weight;     // > 0
    Eigen::VectorXd logistic_slope;
    Eigen::VectorXd quad_center;
    Eigen::VectorXd logistic_shift;
    Eigen::VectorXd time_amp;
    Eigen::VectorXd time_freq;
    Eigen::VectorXd time_phase;
  };

  explicit LogSumExpQuadCost(Params p);

  int dim() const override { return static_cast<int>(params_.quad_weight.size()); }
  double value(const Eigen::VectorXd& x) const override;
  Eigen::VectorXd gradient(const Eigen::VectorXd& x) const override;
  double time_value(double t) const override;

  const Params& params() const { return params_; }

 private:
  Params params_;
};

/// Smooth two-sided box penalty around a base cost:
///   value += eps/mu * [softplus(mu*(x - upper)) + softplus(mu*(lower - x))]
///   grad  += eps * [logistic(mu*(x - upper)) - logistic(mu*(lower - x))]
/// applied per coordinate. Remains strictly convex and differentiable.
class PenalizedCost final : public LocalCost {
 public:
  PenalizedCost(CostPtr base, Eigen::VectorXd lower, Eigen::VectorXd upper, double eps, double mu);

  int dim() const override { return base_->dim(); }
  double value(const Eigen::VectorXd& x) const override;
  Eigen::VectorXd gradient(const Eigen::VectorXd& x) const override;
  double time_value(double t) const override { return base_->time_value(t); }
  bool coordinate_separable() const override { return base_->coordinate_separable(); }

  const Eigen::VectorXd& lower() const { return lower_; }
  const Eigen::VectorXd& upper() const { return upper_; }
  double eps() const { return eps_; }
  double mu() const { return mu_; }

 private:
  CostPtr base_;
  Eigen::VectorXd lower_, upper_;
  double eps_, mu_;
};

/// Wraps `base` with the smooth box penalty above. Requires lower < upper
/// elementwise and eps, mu > 0.
CostPtr penalize(CostPtr base, const Eigen::VectorXd& lower, const Eigen::VectorXd& upper,
                 double eps, double mu);

/// Sum of static parts over columns of X plus the sum of time parts at t.
double eval_total(const std::vector<CostPtr>& costs, const Eigen::MatrixXd& X, double t);

/// Sum of static parts only.
double eval_static_total(const std::vector<CostPtr>& costs, const Eigen::MatrixXd& X);

/// Sum of time parts only.
double eval_time_total(const std::vector<CostPtr>& costs, double t);

/// n seeded LogSumExpQuadCost instances of dimension d. Parameter ranges:
/// quad_weight in [0.5, 2], logistic_slope in [-1, 1], centers/shifts in
/// [-2, 2], time amplitude in [0, 1], frequency in [0.1, 2] rad/s, phase in
/// [0, 2*pi). Same seed, same parameters.
std::vector<CostPtr> make_f2_costs(int n, std::uint64_t seed, int d = 4);

/// n seeded scalar quadratics with coefficients drawn uniformly from the
/// given ranges.
std::vector<CostPtr> make_quadratic_costs(int n, std::uint64_t seed,
                                          double gamma_lo, double gamma_hi,
                                          double beta_lo, double beta_hi,
                                          double alpha_lo, double alpha_hi);

}  // namespace dra
