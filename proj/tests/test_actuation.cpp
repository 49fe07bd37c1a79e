#include <doctest.h>

#include <cmath>
#include <random>

#include "dralloc/actuation.hpp"

using dra::Actuation;

namespace {

Eigen::VectorXd scalar(double v) {
  Eigen::VectorXd x(1);
  x(0) = v;
  return x;
}

Eigen::VectorXd random_vec(std::mt19937_64& rng, int d) {
  std::normal_distribution<double> n(0.0, 1.5);
  Eigen::VectorXd z(d);
  for (int p = 0; p < d; ++p) z(p) = n(rng);
  return z;
}

std::vector<Actuation> all_variants() {
  return {
      Actuation::identity(),
      Actuation::power_sign(0.5),
      Actuation::power_sign(2.0),
      Actuation::power_sign(0.0),
      Actuation::fixed_time(0.7, 1.4),
      Actuation::uniform_quantizer(1.0),
      Actuation::log_quantizer(1.0),
      Actuation::robust_uniform(0.5, 1.0),
      Actuation::robust_laplace(0.5),
      Actuation::saturation(1.0),
      Actuation::compose(Actuation::saturation(1.0), Actuation::power_sign(2.0)),
  };
}

}  // namespace

TEST_CASE("power_sign values") {
  CHECK(dra::power_sign(scalar(4.0), 0.5)(0) == doctest::Approx(2.0));
  Eigen::VectorXd z(2);
  z << 3.0, 4.0;
  const Eigen::VectorXd out = dra::power_sign(z, 2.0);
  CHECK(out(0) == doctest::Approx(15.0));
  CHECK(out(1) == doctest::Approx(20.0));
  CHECK(dra::power_sign(Eigen::VectorXd::Zero(3), 0.5).isZero(0.0));
  CHECK(dra::power_sign(Eigen::VectorXd::Zero(1), 0.0).isZero(0.0));
  // mu = 0 is the unit-direction map
  CHECK(dra::power_sign(scalar(5.0), 0.0)(0) == 1.0);
  CHECK(dra::power_sign(scalar(-5.0), 0.0)(0) == -1.0);
}

TEST_CASE("fixed_time values and parameter checks") {
  CHECK(dra::fixed_time(scalar(1.0), 0.5, 2.0)(0) == doctest::Approx(2.0));
  CHECK(dra::fixed_time(scalar(0.0), 0.5, 2.0)(0) == 0.0);
  CHECK(dra::fixed_time(scalar(-1.0), 0.5, 2.0)(0) == doctest::Approx(-2.0));
  CHECK_THROWS_AS(dra::fixed_time(scalar(1.0), 1.5, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(dra::fixed_time(scalar(1.0), 0.0, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(Actuation::fixed_time(1.0, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(Actuation::fixed_time(0.5, 0.0), std::invalid_argument);
}

TEST_CASE("uniform quantizer rounds half to even") {
  CHECK(dra::uniform_quantize(scalar(0.4), 1.0)(0) == 0.0);
  CHECK(dra::uniform_quantize(scalar(1.6), 1.0)(0) == 2.0);
  CHECK(dra::uniform_quantize(scalar(-1.6), 1.0)(0) == -2.0);
  CHECK(dra::uniform_quantize(scalar(0.5), 1.0)(0) == 0.0);   // half to even
  CHECK(dra::uniform_quantize(scalar(1.5), 1.0)(0) == 2.0);
  CHECK(dra::uniform_quantize(scalar(2.5), 1.0)(0) == 2.0);
  CHECK_THROWS_AS(dra::uniform_quantize(scalar(1.0), 0.0), std::invalid_argument);
}

TEST_CASE("log quantizer values") {
  CHECK(dra::log_quantize(scalar(1.4), 1.0)(0) == doctest::Approx(1.0));
  CHECK(dra::log_quantize(scalar(5.0), 1.0)(0) == doctest::Approx(std::exp(2.0)));
  CHECK(dra::log_quantize(scalar(-5.0), 1.0)(0) == doctest::Approx(-std::exp(2.0)));
  CHECK(dra::log_quantize(scalar(0.0), 1.0)(0) == 0.0);
}

TEST_CASE("robust maps") {
  CHECK(dra::robust_uniform(scalar(2.0), 0.5, 1.0)(0) == doctest::Approx(1.0));
  CHECK(dra::robust_uniform(scalar(0.5), 0.5, 1.0)(0) == 0.0);
  CHECK(dra::robust_uniform(scalar(-2.0), 0.5, 1.0)(0) == doctest::Approx(-1.0));
  CHECK_THROWS_AS(dra::robust_uniform(scalar(1.0), 1.5, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(dra::robust_uniform(scalar(1.0), 0.5, 0.0), std::invalid_argument);

  CHECK(dra::robust_laplace(scalar(7.0), 0.5)(0) == doctest::Approx(1.0));
  CHECK(dra::robust_laplace(scalar(0.0), 0.5)(0) == 0.0);
  CHECK(dra::robust_laplace(scalar(-0.1), 0.25)(0) == doctest::Approx(-0.5));
  CHECK_THROWS_AS(dra::robust_laplace(scalar(1.0), 0.0), std::invalid_argument);
}

TEST_CASE("saturation clamps") {
  CHECK(dra::saturate(scalar(0.5), 1.0)(0) == 0.5);
  CHECK(dra::saturate(scalar(3.0), 1.0)(0) == 1.0);
  CHECK(dra::saturate(scalar(-3.0), 1.0)(0) == -1.0);
  CHECK_THROWS_AS(dra::saturate(scalar(1.0), 0.0), std::invalid_argument);
}

TEST_CASE("composition applies inner first") {
  const auto g = Actuation::compose(Actuation::saturation(1.0), Actuation::power_sign(2.0));
  CHECK(g(scalar(2.0))(0) == 1.0);  // inner grows the input, outer clamps

  std::mt19937_64 rng(17);
  const auto wrapped = Actuation::compose(Actuation::identity(), Actuation::saturation(0.7));
  const auto bare = Actuation::saturation(0.7);
  for (int k = 0; k < 100; ++k) {
    const Eigen::VectorXd z = random_vec(rng, 3);
    CHECK((wrapped(z).array() == bare(z).array()).all());
    CHECK((g(-z).array() == (-g(z)).array()).all());  // composition stays odd
  }
}

TEST_CASE("all variants are odd, sign preserving and have nonnegative pairing") {
  std::mt19937_64 rng(4242);
  for (const auto& g : all_variants()) {
    CAPTURE(g.describe());
    for (int d : {1, 2, 4}) {
      CHECK(g(Eigen::VectorXd::Zero(d)).isZero(0.0));
      for (int k = 0; k < 100; ++k) {
        const Eigen::VectorXd z = random_vec(rng, d);
        const Eigen::VectorXd gz = g(z);
        CHECK((g(-z).array() == (-gz).array()).all());  // exact oddness
        CHECK(z.dot(gz) >= 0.0);
        for (int p = 0; p < d; ++p) {
          CHECK(dra::sign(gz(p)) * dra::sign(z(p)) >= 0.0);
        }
      }
    }
  }
}

TEST_CASE("bounded variants respect their output bounds") {
  std::mt19937_64 rng(99);
  const struct {
    Actuation g;
    double bound;
  } cases[] = {
      {Actuation::saturation(1.0), 1.0},
      {Actuation::robust_laplace(0.5), 1.0},
      {Actuation::robust_uniform(0.5, 2.0), 0.5},
  };
  for (const auto& c : cases) {
    CHECK(c.g.output_bound() == doctest::Approx(c.bound));
    for (int k = 0; k < 200; ++k) {
      const Eigen::VectorXd z = 10.0 * random_vec(rng, 3);
      CHECK(c.g(z).cwiseAbs().maxCoeff() <= c.bound + 1e-15);
    }
  }
  CHECK(Actuation::identity().output_bound() == std::numeric_limits<double>::infinity());
  CHECK(Actuation::compose(Actuation::saturation(2.0), Actuation::identity()).output_bound() ==
        doctest::Approx(2.0));
}

TEST_CASE("verifier classifies the shipped variants") {
  const auto sat = dra::verify_sign_preserving(Actuation::saturation(1.0), 2, 200, 1);
  CHECK(sat.odd_ok);
  CHECK(sat.sign_ok);
  CHECK(sat.zero_ok);
  CHECK(sat.strict);
  CHECK(sat.pass());

  const auto robust = dra::verify_sign_preserving(Actuation::robust_uniform(0.5, 1.0), 2, 200, 2);
  CHECK(robust.odd_ok);
  CHECK(robust.zero_ok);
  CHECK(robust.sign_ok);
  CHECK_FALSE(robust.strict);  // dead zone

  const auto quant = dra::verify_sign_preserving(Actuation::uniform_quantizer(1.0), 2, 200, 3);
  CHECK_FALSE(quant.strict);

  // deliberately broken test double
  const auto shifted = dra::verify_sign_preserving(
      [](const Eigen::VectorXd& z) { return Eigen::VectorXd(z.array() + 1.0); }, 1, 50, 4);
  CHECK_FALSE(shifted.odd_ok);
  CHECK_FALSE(shifted.pass());

  CHECK_THROWS_AS(dra::verify_sign_preserving(Actuation::identity(), 0, 10, 1),
                  std::invalid_argument);
}

TEST_CASE("describe names the variant and its parameters") {
  CHECK(Actuation::saturation(1.0).describe() == "saturation(kappa=1)");
  CHECK(Actuation::compose(Actuation::identity(), Actuation::robust_laplace(0.5)).describe() ==
        "identity . robust_laplace(eps=0.5)");
}
