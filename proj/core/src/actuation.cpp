#include "dralloc/actuation.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace dra {

namespace {

// round half to even; relies on the default FE_TONEAREST rounding mode
double round_even(double v) { return std::nearbyint(v); }

}  // namespace

Eigen::VectorXd power_sign(const Eigen::VectorXd& z, double mu) {
  const double norm = z.norm();
  if (norm == 0.0) return Eigen::VectorXd::Zero(z.size());
  return z * std::pow(norm, mu - 1.0);
}

Eigen::VectorXd fixed_time(const Eigen::VectorXd& z, double mu1, double mu2) {
  if (!(mu1 > 0.0 && mu1 < 1.0)) throw std::invalid_argument("fixed_time: mu1 must be in (0,1)");
  if (!(mu2 > 0.0)) throw std::invalid_argument("fixed_time: mu2 must be positive");
  return power_sign(z, mu1) + power_sign(z, mu2);
}

Eigen::VectorXd uniform_quantize(const Eigen::VectorXd& z, double delta) {
  if (!(delta > 0.0)) throw std::invalid_argument("uniform quantizer: delta must be positive");
  Eigen::VectorXd out(z.size());
  for (Eigen::Index p = 0; p < z.size(); ++p) out(p) = delta * round_even(z(p) / delta);
  return out;
}

Eigen::VectorXd log_quantize(const Eigen::VectorXd& z, double delta) {
  if (!(delta > 0.0)) throw std::invalid_argument("log quantizer: delta must be positive");
  Eigen::VectorXd out(z.size());
  for (Eigen::Index p = 0; p < z.size(); ++p) {
    if (z(p) == 0.0) {
      out(p) = 0.0;
    } else {
      out(p) = sign(z(p)) * std::exp(delta * round_even(std::log(std::abs(z(p))) / delta));
    }
  }
  return out;
}

Eigen::VectorXd robust_uniform(const Eigen::VectorXd& z, double eps, double d_th) {
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("robust_uniform: eps must be in (0,1)");
  if (!(d_th > 0.0)) throw std::invalid_argument("robust_uniform: threshold must be positive");
  const double level = (1.0 - eps) / (eps * d_th);
  Eigen::VectorXd out(z.size());
  for (Eigen::Index p = 0; p < z.size(); ++p) {
    out(p) = std::abs(z(p)) > d_th ? level * sign(z(p)) : 0.0;
  }
  return out;
}

Eigen::VectorXd robust_laplace(const Eigen::VectorXd& z, double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("robust_laplace: eps must be in (0,1)");
  Eigen::VectorXd out(z.size());
  for (Eigen::Index p = 0; p < z.size(); ++p) out(p) = 2.0 * eps * sign(z(p));
  return out;
}

Eigen::VectorXd saturate(const Eigen::VectorXd& z, double kappa) {
  if (!(kappa > 0.0)) throw std::invalid_argument("saturation: kappa must be positive");
  Eigen::VectorXd out(z.size());
  for (Eigen::Index p = 0; p < z.size(); ++p) {
    out(p) = std::abs(z(p)) <= kappa ? z(p) : kappa * sign(z(p));
  }
  return out;
}

Actuation Actuation::identity() { return Actuation(Kind::identity, 0.0, 0.0); }

Actuation Actuation::power_sign(double mu) {
  if (!(mu >= 0.0)) throw std::invalid_argument("power_sign: mu must be >= 0");
  return Actuation(Kind::power_sign, mu, 0.0);
}

Actuation Actuation::fixed_time(double mu1, double mu2) {
  if (!(mu1 > 0.0 && mu1 < 1.0)) throw std::invalid_argument("fixed_time: mu1 must be in (0,1)");
  if (!(mu2 > 0.0)) throw std::invalid_argument("fixed_time: mu2 must be positive");
  return Actuation(Kind::fixed_time, mu1, mu2);
}

Actuation Actuation::uniform_quantizer(double delta) {
  if (!(delta > 0.0)) throw std::invalid_argument("uniform quantizer: delta must be positive");
  return Actuation(Kind::uniform_quantizer, delta, 0.0);
}

Actuation Actuation::log_quantizer(double delta) {
  if (!(delta > 0.0)) throw std::invalid_argument("log quantizer: delta must be positive");
  return Actuation(Kind::log_quantizer, delta, 0.0);
}

Actuation Actuation::robust_uniform(double eps, double d_th) {
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("robust_uniform: eps must be in (0,1)");
  if (!(d_th > 0.0)) throw std::invalid_argument("robust_uniform: threshold must be positive");
  return Actuation(Kind::robust_uniform, eps, d_th);
}

Actuation Actuation::robust_laplace(double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("robust_laplace: eps must be in (0,1)");
  return Actuation(Kind::robust_laplace, eps, 0.0);
}

Actuation Actuation::saturation(double kappa) {
  if (!(kappa > 0.0)) throw std::invalid_argument("saturation: kappa must be positive");
  return Actuation(Kind::saturation, kappa, 0.0);
}

Actuation Actuation::compose(Actuation outer, Actuation inner) {
  Actuation a(Kind::composition, 0.0, 0.0);
  a.chain_.push_back(std::move(outer));
  a.chain_.push_back(std::move(inner));
  return a;
}

Eigen::VectorXd Actuation::operator()(const Eigen::VectorXd& z) const {
  switch (kind_) {
    case Kind::identity:
      return z;
    case Kind::power_sign:
      return dra::power_sign(z, p1_);
    case Kind::fixed_time:
      return dra::fixed_time(z, p1_, p2_);
    case Kind::uniform_quantizer:
      return dra::uniform_quantize(z, p1_);
    case Kind::log_quantizer:
      return dra::log_quantize(z, p1_);
    case Kind::robust_uniform:
      return dra::robust_uniform(z, p1_, p2_);
    case Kind::robust_laplace:
      return dra::robust_laplace(z, p1_);
    case Kind::saturation:
      return dra::saturate(z, p1_);
    case Kind::composition:
      return chain_[0](chain_[1](z));
  }
  return z;  // unreachable
}

bool Actuation::strict() const {
  switch (kind_) {
    case Kind::uniform_quantizer:
    case Kind::robust_uniform:
      return false;
    case Kind::composition:
      return chain_[0].strict() && chain_[1].strict();
    default:
      return true;
  }
}

double Actuation::output_bound() const {
  constexpr double inf = std::numeric_limits<double>::infinity();
  switch (kind_) {
    case Kind::saturation:
      return p1_;
    case Kind::robust_laplace:
      return 2.0 * p1_;
    case Kind::robust_uniform:
      return (1.0 - p1_) / (p1_ * p2_);
    case Kind::composition: {
      // The outer map acts last, so its bound applies if it has one.
      const double outer = chain_[0].output_bound();
      return outer;
    }
    default:
      return inf;
  }
}

std::string Actuation::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::identity:
      os << "identity";
      break;
    case Kind::power_sign:
      os << "power_sign(mu=" << p1_ << ")";
      break;
    case Kind::fixed_time:
      os << "fixed_time(mu1=" << p1_ << ", mu2=" << p2_ << ")";
      break;
    case Kind::uniform_quantizer:
      os << "uniform_quantizer(delta=" << p1_ << ")";
      break;
    case Kind::log_quantizer:
      os << "log_quantizer(delta=" << p1_ << ")";
      break;
    case Kind::robust_uniform:
      os << "robust_uniform(eps=" << p1_ << ", d_th=" << p2_ << ")";
      break;
    case Kind::robust_laplace:
      os << "robust_laplace(eps=" << p1_ << ")";
      break;
    case Kind::saturation:
      os << "saturation(kappa=" << p1_ << ")";
      break;
    case Kind::composition:
      os << chain_[0].describe() << " . " << chain_[1].describe();
      break;
  }
  return os.str();
}

SignPreservingReport verify_sign_preserving(
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& g, int dim, int n_samples,
    std::uint64_t seed) {
  if (dim < 1 || n_samples < 1) {
    throw std::invalid_argument("verify_sign_preserving: dim and n_samples must be >= 1");
  }
  SignPreservingReport report;

  const Eigen::VectorXd at_zero = g(Eigen::VectorXd::Zero(dim));
  report.zero_ok = (at_zero.array() == 0.0).all();

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int s = 0; s < n_samples; ++s) {
    Eigen::VectorXd z(dim);
    for (int p = 0; p < dim; ++p) z(p) = normal(rng);
    const Eigen::VectorXd gz = g(z);
    const Eigen::VectorXd gneg = g(-z);
    if (!(gneg.array() == (-gz).array()).all()) report.odd_ok = false;
    for (int p = 0; p < dim; ++p) {
      if (sign(gz(p)) * sign(z(p)) < 0.0) report.sign_ok = false;
      if (z(p) != 0.0 && gz(p) == 0.0) report.strict = false;
    }
  }
  return report;
}

}  // namespace dra
