#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace dra {

/// sign with sign(0) = 0.
inline double sign(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

/// z * ||z||^(mu-1) with the Euclidean norm; 0 at z = 0 for every mu >= 0
/// (continuous extension for mu > 0, convention for mu = 0, where the map is
/// the unit vector in the direction of z).
Eigen::VectorXd power_sign(const Eigen::VectorXd& z, double mu);

/// power_sign(z, mu1) + power_sign(z, mu2); mu1 in (0,1), mu2 > 0. mu2 < 1
/// gives the finite-time map, mu2 > 1 the fixed-time one.
Eigen::VectorXd fixed_time(const Eigen::VectorXd& z, double mu1, double mu2);

/// Elementwise delta * round(z/delta), round half to even. Has a dead zone
/// (-delta/2, delta/2), so it is not strictly sign-preserving.
Eigen::VectorXd uniform_quantize(const Eigen::VectorXd& z, double delta);

/// Elementwise logarithmic quantizer: 0 at 0, otherwise
/// sign(z) * exp(delta * round(log|z| / delta)), round half to even.
Eigen::VectorXd log_quantize(const Eigen::VectorXd& z, double delta);

/// Elementwise ((1-eps)/(eps*d_th)) * sign(z) outside the dead band
/// |z| <= d_th, 0 inside it.
Eigen::VectorXd robust_uniform(const Eigen::VectorXd& z, double eps, double d_th);

/// Elementwise 2*eps*sign(z).
Eigen::VectorXd robust_laplace(const Eigen::VectorXd& z, double eps);

/// Elementwise clamp to [-kappa, kappa].
Eigen::VectorXd saturate(const Eigen::VectorXd& z, double kappa);

/// An odd sign-preserving actuation map g applied to d-vectors. Every shipped
/// variant satisfies g(-z) = -g(z) exactly, g(0) = 0 and z'g(z) >= 0; the
/// uniform quantizer and the robust uniform map have dead zones and are
/// flagged non-strict.
class Actuation {
 public:
  enum class Kind {
    identity,
    power_sign,
    fixed_time,
    uniform_quantizer,
    log_quantizer,
    robust_uniform,
    robust_laplace,
    saturation,
    composition,
  };

  static Actuation identity();
  static Actuation power_sign(double mu);
  static Actuation fixed_time(double mu1, double mu2);
  static Actuation uniform_quantizer(double delta);
  static Actuation log_quantizer(double delta);
  static Actuation robust_uniform(double eps, double d_th);
  static Actuation robust_laplace(double eps);
  static Actuation saturation(double kappa);

  /// z -> outer(inner(z)). Oddness and sign preservation are inherited.
  static Actuation compose(Actuation outer, Actuation inner);

  Eigen::VectorXd operator()(const Eigen::VectorXd& z) const;

  Kind kind() const { return kind_; }

  /// False for variants with a dead zone (nonzero inputs can map to zero).
  bool strict() const;

  /// Upper bound on |g(z)|_inf when the variant is bounded, +inf otherwise.
  double output_bound() const;

  std::string describe() const;

 private:
  Actuation(Kind kind, double p1, double p2) : kind_(kind), p1_(p1), p2_(p2) {}

  Kind kind_ = Kind::identity;
  double p1_ = 0.0;
  double p2_ = 0.0;
  std::vector<Actuation> chain_;  // composition only: {outer, inner}
};

/// Sampled property check for an arbitrary map: oddness (exact equality),
/// elementwise sign agreement, g(0) = 0. `strict` is cleared when any sampled
/// nonzero component maps to zero (dead zone).
struct SignPreservingReport {
  bool odd_ok = true;
  bool sign_ok = true;
  bool zero_ok = true;
  bool strict = true;

  bool pass() const { return odd_ok && sign_ok && zero_ok; }
};

SignPreservingReport verify_sign_preserving(
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& g, int dim, int n_samples,
    std::uint64_t seed);

}  // namespace dra
