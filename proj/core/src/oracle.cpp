#include "dralloc/oracle.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace dra {

namespace {

// Root of a strictly increasing scalar function f on [lo, hi] with
// f(lo) <= 0 <= f(hi): bisection to f-tolerance or interval collapse, then a
// few safeguarded Newton corrections with a central-difference slope.
double increasing_root(const std::function<double(double)>& f, double lo, double hi, double flo,
                       double fhi, double ftol) {
  if (flo > 0.0 || fhi < 0.0) throw std::logic_error("increasing_root: invalid bracket");
  double mid = 0.5 * (lo + hi);
  double fmid = 0.0;
  for (int it = 0; it < 200; ++it) {
    mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;  // interval collapsed to adjacent doubles
    fmid = f(mid);
    if (std::abs(fmid) <= ftol) break;
    if (fmid < 0.0) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
      fhi = fmid;
    }
  }
  // Newton polish, kept inside the bracket.
  double x = mid;
  double fx = f(x);
  for (int it = 0; it < 8 && std::abs(fx) > ftol; ++it) {
    const double h = 1e-7 * (1.0 + std::abs(x));
    const double slope = (f(x + h) - f(x - h)) / (2.0 * h);
    if (!(slope > 0.0)) break;
    double next = x - fx / slope;
    if (!(next > lo && next < hi)) break;
    const double fnext = f(next);
    if (std::abs(fnext) >= std::abs(fx)) break;
    x = next;
    fx = fnext;
  }
  return x;
}

// Expands [-seed, seed] by doubling until f changes sign. f must be
// increasing. Throws after 60 doublings (2^60 * seed reached).
void expand_bracket(const std::function<double(double)>& f, double seed, double& lo, double& hi,
                    double& flo, double& fhi, const char* what) {
  lo = -seed;
  hi = seed;
  flo = f(lo);
  fhi = f(hi);
  int doublings = 0;
  while (flo > 0.0 || fhi < 0.0) {
    if (++doublings > 60) {
      throw std::runtime_error(std::string(what) +
                               ": target never bracketed; gradient may be bounded or the cost "
                               "not strictly convex");
    }
    if (flo > 0.0) {
      lo *= 2.0;
      flo = f(lo);
    }
    if (fhi < 0.0) {
      hi *= 2.0;
      fhi = f(hi);
    }
  }
}

}  // namespace

double invert_gradient(const LocalCost& cost, int coordinate, double target) {
  if (coordinate < 0 || coordinate >= cost.dim()) {
    throw std::invalid_argument("invert_gradient: coordinate out of range");
  }
  if (!cost.coordinate_separable()) {
    throw std::invalid_argument("invert_gradient: cost must be coordinate-separable");
  }
  Eigen::VectorXd x = Eigen::VectorXd::Zero(cost.dim());
  auto f = std::function<double(double)>([&](double s) {
    x(coordinate) = s;
    return cost.gradient(x)(coordinate) - target;
  });
  double lo, hi, flo, fhi;
  expand_bracket(f, 1.0, lo, hi, flo, fhi, "invert_gradient");
  const double ftol = 1e-12 * (1.0 + std::abs(target));
  return increasing_root(f, lo, hi, flo, fhi, ftol);
}

KktSolution solve_kkt(const AllocationProblem& problem, double tol, double bracket_seed) {
  if (!(tol > 0.0)) throw std::invalid_argument("solve_kkt: tol must be positive");
  if (!(bracket_seed > 0.0)) throw std::invalid_argument("solve_kkt: bracket_seed must be positive");
  for (const auto& c : problem.costs()) {
    if (!c->coordinate_separable()) {
      throw std::invalid_argument(
          "solve_kkt: all costs must be coordinate-separable; coupled costs would need a "
          "d-dimensional multiplier solve");
    }
  }

  const int n = problem.n();
  const int d = problem.d();
  const Eigen::VectorXd& a = problem.a();
  const Eigen::VectorXd& b = problem.b();

  KktSolution sol;
  sol.x_star.resize(d, n);
  sol.phi_star.resize(d);

  // Per-coordinate mismatch between allocated and requested resource for a
  // trial multiplier. Strictly increasing in phi since each agent term has
  // slope a_i^2 / f_i'' > 0.
  for (int p = 0; p < d; ++p) {
    auto mismatch = std::function<double(double)>([&](double phi) {
      double sum = 0.0;
      for (int i = 0; i < n; ++i) {
        sum += a(i) * invert_gradient(problem.cost(i), p, phi * a(i));
      }
      return sum - b(p);
    });
    const double htol = 0.5 * tol * (1.0 + b.norm()) / std::sqrt(static_cast<double>(d));
    double lo, hi, flo, fhi;
    expand_bracket(mismatch, bracket_seed, lo, hi, flo, fhi, "solve_kkt");
    sol.phi_star(p) = increasing_root(mismatch, lo, hi, flo, fhi, htol);
    for (int i = 0; i < n; ++i) {
      sol.x_star(p, i) = invert_gradient(problem.cost(i), p, sol.phi_star(p) * a(i));
    }
  }
  sol.residual = (sol.x_star * a - b).norm();
  return sol;
}

double optimal_static_value(const AllocationProblem& problem, const KktSolution& sol) {
  return eval_static_total(problem.costs(), sol.x_star);
}

std::vector<double> optimal_value_trace(const AllocationProblem& problem, const KktSolution& sol,
                                        const std::vector<double>& times) {
  const double base = optimal_static_value(problem, sol);
  std::vector<double> trace;
  trace.reserve(times.size());
  for (double t : times) trace.push_back(base + eval_time_total(problem.costs(), t));
  return trace;
}

void write_kkt_csv(std::ostream& os, const KktSolution& sol) {
  os << "agent,coordinate,x_star\n";
  char buf[64];
  for (Eigen::Index i = 0; i < sol.x_star.cols(); ++i) {
    for (Eigen::Index p = 0; p < sol.x_star.rows(); ++p) {
      std::snprintf(buf, sizeof(buf), "%lld,%lld,%.17g\n", static_cast<long long>(i),
                    static_cast<long long>(p), sol.x_star(p, i));
      os << buf;
    }
  }
  for (Eigen::Index p = 0; p < sol.phi_star.size(); ++p) {
    std::snprintf(buf, sizeof(buf), "phi,%lld,%.17g\n", static_cast<long long>(p),
                  sol.phi_star(p));
    os << buf;
  }
}

}  // namespace dra
