#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "lendsim/rng.hpp"

using lendsim::RngStream;
using lendsim::derive_seed;

TEST_CASE("same seed gives identical draws, different seeds differ") {
  RngStream a(123), b(123), c(124);
  bool all_equal = true, any_diff = false;
  for (int i = 0; i < 1000; ++i) {
    const double ua = a.uniform01();
    all_equal = all_equal && ua == b.uniform01();
    any_diff = any_diff || ua != c.uniform01();
  }
  CHECK(all_equal);
  CHECK(any_diff);
}

TEST_CASE("derived streams are independent of sibling keys") {
  CHECK(derive_seed(1, {2, 3}) == derive_seed(1, {2, 3}));
  CHECK(derive_seed(1, {2, 3}) != derive_seed(1, {3, 2}));
  CHECK(derive_seed(1, {2, 3}) != derive_seed(2, {2, 3}));
  CHECK(derive_seed(1, {2}) != derive_seed(1, {2, 0}));
}

TEST_CASE("uniform01 stays in [0,1) and has mean ~1/2") {
  RngStream rng(7);
  double sum = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform01();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  // 3 sigma for the mean of Uniform(0,1).
  CHECK(std::abs(sum / n - 0.5) < 3.0 * std::sqrt(1.0 / 12.0 / n));
}

TEST_CASE("normal sampler matches target moments") {
  RngStream rng(11);
  const int n = 200000;
  double sum = 0.0, ss = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = rng.normal(-0.385, 0.079);
    sum += z;
    ss += z * z;
  }
  const double mean = sum / n;
  const double var = ss / n - mean * mean;
  CHECK(std::abs(mean + 0.385) < 3.0 * 0.079 / std::sqrt(n));
  CHECK(std::abs(std::sqrt(var) - 0.079) < 3.0 * 0.079 / std::sqrt(2.0 * n));
}

TEST_CASE("gumbel sampler matches the standard Gumbel mean") {
  RngStream rng(13);
  const int n = 200000;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += rng.gumbel();
  const double euler = 0.5772156649015329;
  const double sd = std::numbers::pi / std::sqrt(6.0);
  CHECK(std::abs(sum / n - euler) < 3.0 * sd / std::sqrt(n));
}

TEST_CASE("uniform_int covers its range uniformly") {
  RngStream rng(17);
  const std::uint64_t k = 22;
  std::vector<int> counts(k, 0);
  const int n = 220000;
  for (int i = 0; i < n; ++i) ++counts[rng.uniform_int(k)];
  const double expected = static_cast<double>(n) / k;
  const double sigma = std::sqrt(expected * (1.0 - 1.0 / k));
  for (std::uint64_t i = 0; i < k; ++i) {
    CHECK(std::abs(counts[i] - expected) < 4.0 * sigma);
  }
}
