#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "lendsim/biasstudy.hpp"
#include "lendsim/errors.hpp"

using namespace lendsim;
using biasstudy::BiasStudySpec;

namespace {

BiasStudySpec quick_spec() {
  BiasStudySpec spec;
  spec.n_units = 4000;
  spec.n_sims = 200;
  return spec;
}

}  // namespace

TEST_CASE("closed-form mixture oracle at the audit error rate") {
  BiasStudySpec spec;  // fn 0.34, fp 0, means 1 and 1.3
  // E[y | obs = 1] = 1.3; E[y | obs = 0] = (0.5 + 0.17 * 1.3) / 0.67.
  const double e0 = (0.5 * 1.0 + 0.5 * 0.34 * 1.3) / (0.5 + 0.5 * 0.34);
  CHECK(biasstudy::attenuated_coefficient(spec) ==
        doctest::Approx(1.3 - e0).epsilon(1e-12));
  CHECK(biasstudy::attenuated_coefficient(spec) ==
        doctest::Approx(0.2239).epsilon(1e-3));
}

TEST_CASE("no corruption recovers the true effect") {
  auto spec = quick_spec();
  spec.fn_rate = 0.0;
  const auto result = biasstudy::run_bias_study(spec, 42);
  CHECK(std::abs(result.mean_coef - 0.3) < 3.0 * result.se_of_mean);
  CHECK(std::abs(result.relative_bias) < 0.05);
  CHECK(result.degenerate_sims == 0);
}

TEST_CASE("Monte Carlo agrees with the mixture oracle at fn = 0.34") {
  auto spec = quick_spec();
  const auto result = biasstudy::run_bias_study(spec, 7);
  const double oracle = biasstudy::attenuated_coefficient(spec);
  CHECK(std::abs(result.mean_coef - oracle) < 3.0 * result.se_of_mean);
  // Relative bias lands near the -25% the mixture implies.
  CHECK(result.relative_bias < -0.20);
  CHECK(result.relative_bias > -0.30);
}

TEST_CASE("total corruption drives the coefficient to zero") {
  auto spec = quick_spec();
  spec.fn_rate = 1.0;
  spec.fp_rate = 0.05;  // keeps an observed-treated arm populated
  const auto result = biasstudy::run_bias_study(spec, 11);
  CHECK(std::abs(result.mean_coef) < 3.0 * result.se_of_mean + 0.01);
}

TEST_CASE("fn = 1 with fp = 0 leaves no observed treated units") {
  auto spec = quick_spec();
  spec.fn_rate = 1.0;
  spec.fp_rate = 0.0;
  CHECK_THROWS_AS(biasstudy::run_bias_study(spec, 13), NumericError);
}

TEST_CASE("relative bias is monotone in the false-negative rate") {
  double previous = 1.0;
  for (double fn : {0.0, 0.1, 0.2, 0.3, 0.4, 0.5}) {
    auto spec = quick_spec();
    spec.n_sims = 150;
    spec.fn_rate = fn;
    const auto result = biasstudy::run_bias_study(spec, 17);
    const double oracle_bias =
        (biasstudy::attenuated_coefficient(spec) - 0.3) / 0.3;
    CHECK(std::abs(result.relative_bias - oracle_bias) <
          3.0 * result.se_of_mean / 0.3);
    CHECK(result.relative_bias < previous + 1e-9);
    previous = result.relative_bias;
  }
}

TEST_CASE("se of the mean shrinks like 1/sqrt(n_sims)") {
  auto spec = quick_spec();
  spec.n_sims = 200;
  const auto narrow = biasstudy::run_bias_study(spec, 19);
  spec.n_sims = 800;
  const auto wide = biasstudy::run_bias_study(spec, 19);
  const double ratio = narrow.se_of_mean / wide.se_of_mean;
  CHECK(ratio == doctest::Approx(2.0).epsilon(0.25));
}

TEST_CASE("spec validation") {
  BiasStudySpec spec;
  spec.fn_rate = -0.1;
  CHECK_THROWS_AS(spec.validate(), ConfigError);
  spec = BiasStudySpec{};
  spec.n_sims = 0;
  CHECK_THROWS_AS(spec.validate(), ConfigError);
}

TEST_CASE("results are reproducible under a fixed seed") {
  auto spec = quick_spec();
  spec.n_sims = 50;
  const auto a = biasstudy::run_bias_study(spec, 23);
  const auto b = biasstudy::run_bias_study(spec, 23);
  CHECK(a.mean_coef == b.mean_coef);
  CHECK(a.coefficients == b.coefficients);
}
