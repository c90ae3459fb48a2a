#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "lendsim/econtools.hpp"
#include "lendsim/errors.hpp"
#include "lendsim/rng.hpp"

using namespace lendsim;
using econtools::AipwOptions;
using econtools::Dataset;

namespace {

double logistic(double t) { return 1.0 / (1.0 + std::exp(-t)); }

Eigen::MatrixXd with_intercept(const Eigen::MatrixXd& X) {
  Eigen::MatrixXd out(X.rows(), X.cols() + 1);
  out.col(0).setOnes();
  out.rightCols(X.cols()) = X;
  return out;
}

}  // namespace

TEST_CASE("ols recovers an exact linear relationship") {
  RngStream rng(1);
  Eigen::MatrixXd X(200, 3);
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    X(i, 0) = 1.0;
    X(i, 1) = rng.normal(0, 1);
    X(i, 2) = rng.normal(0, 1);
  }
  Eigen::Vector3d b(0.5, -2.0, 3.25);
  const Eigen::VectorXd y = X * b;
  const auto fit = econtools::ols(y, X);
  for (int j = 0; j < 3; ++j) {
    CHECK(fit.coef[j] == doctest::Approx(b[j]).epsilon(1e-10));
  }
}

TEST_CASE("intercept-only regression returns the mean") {
  Eigen::VectorXd y(4);
  y << 1, 2, 3, 10;
  Eigen::MatrixXd X = Eigen::MatrixXd::Ones(4, 1);
  const auto fit = econtools::ols(y, X);
  CHECK(fit.coef[0] == doctest::Approx(4.0));
}

TEST_CASE("three-point hand instance: slope 1.5, intercept 5/6") {
  Eigen::VectorXd y(3);
  y << 1, 2, 4;
  Eigen::MatrixXd X(3, 2);
  X << 1, 0, 1, 1, 1, 2;
  const auto fit = econtools::ols(y, X);
  CHECK(fit.coef[1] == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(fit.coef[0] == doctest::Approx(5.0 / 6.0).epsilon(1e-12));
}

TEST_CASE("rank deficiency names the offending column") {
  Eigen::MatrixXd X(50, 3);
  RngStream rng(2);
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    X(i, 0) = 1.0;
    X(i, 1) = rng.normal(0, 1);
    X(i, 2) = 2.0 * X(i, 1);  // collinear
  }
  Eigen::VectorXd y = X.col(1);
  try {
    econtools::ols(y, X, {"intercept", "a", "twice_a"});
    FAIL("expected NumericError");
  } catch (const NumericError& e) {
    const std::string what = e.what();
    CHECK(what.find("twice_a") != std::string::npos);
  }
}

TEST_CASE("robust covariance stays close under homoskedasticity") {
  RngStream rng(3);
  Eigen::MatrixXd X(5000, 2);
  Eigen::VectorXd y(5000);
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    X(i, 0) = 1.0;
    X(i, 1) = rng.normal(0, 1);
    y[i] = 2.0 + 0.5 * X(i, 1) + rng.normal(0, 1);
  }
  const auto classic = econtools::ols(y, X);
  const auto robust = econtools::ols(y, X, {}, {.robust_se = true});
  CHECK(robust.se(1) == doctest::Approx(classic.se(1)).epsilon(0.1));
}

namespace {

Dataset random_dataset(RngStream& rng, int n, int n_groups, int cols_per_group) {
  Dataset d;
  d.outcome.resize(n);
  d.focal.resize(n);
  std::vector<Eigen::MatrixXd> groups(
      static_cast<std::size_t>(n_groups),
      Eigen::MatrixXd(n, cols_per_group));
  for (int i = 0; i < n; ++i) {
    d.focal[i] = rng.bernoulli(0.4) ? 1.0 : 0.0;
    for (auto& g : groups) {
      for (int j = 0; j < cols_per_group; ++j) {
        g(i, j) = rng.normal(0.3 * d.focal[i], 1.0);
      }
    }
    double y = 1.0 + 2.0 * d.focal[i] + rng.normal(0, 1);
    for (const auto& g : groups) y += g.row(i).sum() * 0.7;
    d.outcome[i] = y;
  }
  for (std::size_t k = 0; k < groups.size(); ++k) {
    d.groups.emplace_back("g" + std::to_string(k), groups[k]);
  }
  return d;
}

}  // namespace

TEST_CASE("orthogonal covariates contribute nothing") {
  RngStream rng(4);
  const int n = 4000;
  Dataset d;
  d.outcome.resize(n);
  d.focal.resize(n);
  Eigen::MatrixXd g(n, 2);
  for (int i = 0; i < n; ++i) {
    d.focal[i] = i % 2 == 0 ? 1.0 : 0.0;
    // Exactly balanced across focal levels: orthogonal by construction.
    g(i, 0) = (i / 2) % 2 == 0 ? 1.0 : -1.0;
    g(i, 1) = (i / 4) % 2 == 0 ? 1.0 : -1.0;
    d.outcome[i] = 3.0 * d.focal[i] + 0.5 * g(i, 0);
  }
  d.groups.emplace_back("noise", g);
  const auto result = econtools::gelbach_decompose(d);
  CHECK(result.coef_base == doctest::Approx(result.coef_full).epsilon(1e-10));
  CHECK(result.contributions[0].second == doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("constructed mediation path has contribution 2") {
  // z = 2 * focal + noise, outcome = focal + z: omitting z loads 2 onto the
  // focal coefficient.
  RngStream rng(5);
  const int n = 20000;
  Dataset d;
  d.outcome.resize(n);
  d.focal.resize(n);
  Eigen::MatrixXd z(n, 1);
  for (int i = 0; i < n; ++i) {
    d.focal[i] = rng.bernoulli(0.5) ? 1.0 : 0.0;
    z(i, 0) = 2.0 * d.focal[i] + rng.normal(0, 0.5);
    d.outcome[i] = d.focal[i] + z(i, 0) + rng.normal(0, 0.1);
  }
  d.groups.emplace_back("z", z);
  const auto result = econtools::gelbach_decompose(d);
  CHECK(result.contributions[0].second == doctest::Approx(2.0).epsilon(0.05));
  CHECK(result.coef_base - result.coef_full ==
        doctest::Approx(result.contribution_total()).epsilon(1e-10));
}

TEST_CASE("gelbach additivity is exact on random datasets") {
  RngStream rng(6);
  for (int rep = 0; rep < 100; ++rep) {
    const int n = 60 + static_cast<int>(rng.uniform_int(200));
    const int n_groups = 1 + static_cast<int>(rng.uniform_int(4));
    const int cols = 1 + static_cast<int>(rng.uniform_int(3));
    const auto d = random_dataset(rng, n, n_groups, cols);
    const auto result = econtools::gelbach_decompose(d);
    CHECK(std::abs((result.coef_base - result.coef_full) -
                   result.contribution_total()) < 1e-10);
  }
}

TEST_CASE("gelbach contributions are invariant to group order") {
  RngStream rng(7);
  auto d = random_dataset(rng, 500, 3, 2);
  const auto forward = econtools::gelbach_decompose(d);
  std::swap(d.groups[0], d.groups[2]);
  const auto reversed = econtools::gelbach_decompose(d);
  for (const auto& [name, value] : forward.contributions) {
    for (const auto& [rname, rvalue] : reversed.contributions) {
      if (rname == name) {
        CHECK(value == doctest::Approx(rvalue).epsilon(1e-10));
      }
    }
  }
}

namespace {

struct AipwSim {
  Eigen::VectorXd y;
  Eigen::VectorXi w;
  Eigen::MatrixXd X;
};

// Confounded design with true ATE = 2 and logistic propensity in x1.
AipwSim make_aipw_sim(int n, std::uint64_t seed) {
  AipwSim sim;
  sim.y.resize(n);
  sim.w.resize(n);
  sim.X.resize(n, 2);
  RngStream rng(seed);
  for (int i = 0; i < n; ++i) {
    const double x1 = rng.normal(0, 1);
    const double x2 = rng.normal(0, 1);
    sim.X(i, 0) = x1;
    sim.X(i, 1) = x2;
    const double e = logistic(0.8 * x1 - 0.4 * x2);
    sim.w[i] = rng.bernoulli(e) ? 1 : 0;
    sim.y[i] = 2.0 * sim.w[i] + 1.5 * x1 + 0.5 * x2 + rng.normal(0, 1);
  }
  return sim;
}

}  // namespace

TEST_CASE("randomized treatment with zero nuisances reduces to IPW means") {
  RngStream rng(8);
  const int n = 20000;
  Eigen::VectorXd y(n);
  Eigen::VectorXi w(n);
  Eigen::MatrixXd X = Eigen::MatrixXd::Zero(n, 1);
  double sum1 = 0, sum0 = 0;
  long n1 = 0, n0 = 0;
  for (int i = 0; i < n; ++i) {
    w[i] = rng.bernoulli(0.5) ? 1 : 0;
    y[i] = 1.0 + 2.0 * w[i] + rng.normal(0, 1);
    (w[i] == 1 ? sum1 : sum0) += y[i];
    (w[i] == 1 ? n1 : n0) += 1;
  }
  AipwOptions options;
  options.folds = 1;
  options.propensity_override = [](const Eigen::RowVectorXd&) { return 0.5; };
  options.outcome_override = [](const Eigen::RowVectorXd&, int) { return 0.0; };
  const auto result = econtools::aipw_ate(y, w, X, options);
  const double diff_means = sum1 / n1 - sum0 / n0;
  CHECK(result.ate == doctest::Approx(diff_means).epsilon(0.05));
  CHECK(std::abs(result.ate - 2.0) < 3.0 * result.se);
  CHECK(result.influence.size() == n);
  CHECK(result.ate == doctest::Approx(result.influence.mean()).epsilon(1e-12));
}

TEST_CASE("AIPW recovers the true ATE with fitted nuisances") {
  int hits = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto sim = make_aipw_sim(10000, 100 + seed);
    const auto result = econtools::aipw_ate(sim.y, sim.w, sim.X, {.seed = seed});
    if (std::abs(result.ate - 2.0) < 3.0 * result.se) ++hits;
  }
  CHECK(hits >= 9);
}

TEST_CASE("double robustness: true propensity, broken outcome model") {
  int hits = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto sim = make_aipw_sim(10000, 300 + seed);
    AipwOptions options;
    options.seed = seed;
    options.propensity_override = [](const Eigen::RowVectorXd& x) {
      return logistic(0.8 * x[0] - 0.4 * x[1]);
    };
    options.outcome_override = [](const Eigen::RowVectorXd&, int) {
      return 0.0;  // deliberately misspecified
    };
    const auto result = econtools::aipw_ate(sim.y, sim.w, sim.X, options);
    if (std::abs(result.ate - 2.0) < 3.0 * result.se) ++hits;
  }
  CHECK(hits >= 9);
}

TEST_CASE("known-nuisance AIPW covers the truth") {
  int covered = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto sim = make_aipw_sim(2000, 500 + seed);
    AipwOptions options;
    options.folds = 1;
    options.propensity_override = [](const Eigen::RowVectorXd& x) {
      return logistic(0.8 * x[0] - 0.4 * x[1]);
    };
    options.outcome_override = [](const Eigen::RowVectorXd& x, int arm) {
      return 2.0 * arm + 1.5 * x[0] + 0.5 * x[1];
    };
    const auto result = econtools::aipw_ate(sim.y, sim.w, sim.X, options);
    if (std::abs(result.ate - 2.0) < 1.96 * result.se) ++covered;
  }
  CHECK(covered >= 90);
}

TEST_CASE("an empty treatment arm is rejected") {
  Eigen::VectorXd y = Eigen::VectorXd::Ones(10);
  Eigen::VectorXi w = Eigen::VectorXi::Ones(10);
  Eigen::MatrixXd X = Eigen::MatrixXd::Zero(10, 1);
  CHECK_THROWS_AS(econtools::aipw_ate(y, w, X), ConfigError);
}

TEST_CASE("propensity clipping events are counted") {
  const auto sim = make_aipw_sim(2000, 900);
  AipwOptions options;
  options.folds = 1;
  options.clip = 0.4;  // aggressive clip so events certainly occur
  options.propensity_override = [](const Eigen::RowVectorXd& x) {
    return logistic(3.0 * x[0]);
  };
  options.outcome_override = [](const Eigen::RowVectorXd&, int) { return 0.0; };
  const auto result = econtools::aipw_ate(sim.y, sim.w, sim.X, options);
  CHECK(result.clipped > 0);
}

TEST_CASE("dataset overload stacks groups and binarizes the focal column") {
  const auto sim = make_aipw_sim(5000, 1000);
  Dataset d;
  d.outcome = sim.y;
  d.focal.resize(sim.w.size());
  for (Eigen::Index i = 0; i < sim.w.size(); ++i) {
    d.focal[i] = sim.w[i];  // already 0/1
  }
  d.groups.emplace_back("x", sim.X);
  const auto via_dataset = econtools::aipw_ate(d, {.seed = 3});
  const auto direct = econtools::aipw_ate(sim.y, sim.w, sim.X, {.seed = 3});
  CHECK(via_dataset.ate == doctest::Approx(direct.ate).epsilon(1e-12));
}
