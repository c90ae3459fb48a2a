#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include "lendsim/choice.hpp"
#include "lendsim/errors.hpp"
#include "lendsim/fixtures.hpp"
#include "lendsim/rng.hpp"

using namespace lendsim;

namespace {

pool::BorrowerProfile profile(int id, double eta, bool male = false,
                              bool smile = false, bool bodyshot = false) {
  return pool::BorrowerProfile{id, eta, male, smile, bodyshot};
}

}  // namespace

TEST_CASE("zero-sd draws hit the means exactly") {
  choice::PreferenceParams params;
  params.alpha_mean = -0.385;
  params.beta_mean = 0.298;
  params.gamma_mean = -0.191;
  RngStream rng(1);
  const auto prefs = choice::draw_prefs(params, rng);
  CHECK(prefs.alpha == -0.385);
  CHECK(prefs.beta == 0.298);
  CHECK(prefs.gamma == -0.191);
}

TEST_CASE("draw_prefs moments match the experiment estimates") {
  const auto params = fixtures::experiment_preference_params();
  RngStream rng(2);
  const int n = 100000;
  double sa = 0, sb = 0, sg = 0, ssa = 0, ssb = 0, ssg = 0;
  for (int i = 0; i < n; ++i) {
    const auto p = choice::draw_prefs(params, rng);
    sa += p.alpha; ssa += p.alpha * p.alpha;
    sb += p.beta;  ssb += p.beta * p.beta;
    sg += p.gamma; ssg += p.gamma * p.gamma;
  }
  auto check_moments = [&](double sum, double ss, double mean, double sd) {
    const double m = sum / n;
    const double v = ss / n - m * m;
    CHECK(std::abs(m - mean) < 3.0 * sd / std::sqrt(n));
    CHECK(std::abs(std::sqrt(v) - sd) < 3.0 * sd / std::sqrt(2.0 * n));
  };
  check_moments(sa, ssa, -0.385, 0.079);
  check_moments(sb, ssb, 0.298, 0.074);
  check_moments(sg, ssg, -0.191, 0.079);
}

TEST_CASE("same seed same draws, different seeds differ") {
  const auto params = fixtures::experiment_preference_params();
  RngStream a(3), b(3), c(4);
  const auto pa = choice::draw_prefs(params, a);
  const auto pb = choice::draw_prefs(params, b);
  const auto pc = choice::draw_prefs(params, c);
  CHECK(pa.alpha == pb.alpha);
  CHECK(pa.beta == pb.beta);
  CHECK(pa.gamma == pb.gamma);
  CHECK(pa.alpha != pc.alpha);
}

TEST_CASE("systematic utility is the linear index") {
  choice::LenderPrefs prefs{-0.385, 0.298, -0.191};
  CHECK(choice::systematic_utility(profile(0, 0.0), prefs) == 0.0);
  CHECK(choice::systematic_utility(profile(0, 0.0, true, true, false), prefs) ==
        doctest::Approx(-0.087));
  CHECK(choice::systematic_utility(profile(0, 0.64), prefs) ==
        doctest::Approx(0.64));
}

TEST_CASE("two identical options split the probability") {
  choice::Market m;
  m.profiles = {profile(0, 0.3), profile(1, 0.3)};
  m.outside_utility = -1e9;  // no outside option in effect
  const auto probs = choice::choice_probs(m, {});
  CHECK(probs.borrower[0] == doctest::Approx(0.5));
  CHECK(probs.borrower[1] == doctest::Approx(0.5));
  CHECK(probs.outside == doctest::Approx(0.0));
}

TEST_CASE("pair logit closed form: smile vs male") {
  choice::LenderPrefs prefs{-0.385, 0.298, -0.191};
  choice::Market m;
  m.profiles = {profile(0, 0.0, false, true, false),
                profile(1, 0.0, true, false, false)};
  m.outside_utility = -1e9;
  const auto probs = choice::choice_probs(m, prefs);
  // e^{0.683} / (1 + e^{0.683})
  CHECK(probs.borrower[0] == doctest::Approx(0.664).epsilon(5e-4));
}

TEST_CASE("probabilities sum to one and survive huge utilities") {
  choice::Market m;
  m.profiles = {profile(0, 900.0), profile(1, -900.0), profile(2, 0.0)};
  m.outside_utility = 1.0;
  const auto probs = choice::choice_probs(m, {});
  double total = probs.outside;
  for (double p : probs.borrower) {
    REQUIRE(p >= 0.0);
    total += p;
  }
  CHECK(std::abs(total - 1.0) < 1e-12);
}

TEST_CASE("adding a constant to all utilities leaves probabilities unchanged") {
  RngStream rng(7);
  for (int rep = 0; rep < 50; ++rep) {
    choice::Market m;
    const int n = 1 + static_cast<int>(rng.uniform_int(10));
    for (int i = 0; i < n; ++i) {
      m.profiles.push_back(profile(i, rng.normal(0.0, 1.0), rng.bernoulli(0.5),
                                   rng.bernoulli(0.5), rng.bernoulli(0.5)));
    }
    m.outside_utility = rng.normal(0.0, 1.0);
    choice::LenderPrefs prefs{rng.normal(0, 0.5), rng.normal(0, 0.5),
                              rng.normal(0, 0.5)};
    const auto base = choice::choice_probs(m, prefs);

    choice::Market shifted = m;
    const double c = rng.normal(0.0, 10.0);
    for (auto& p : shifted.profiles) p.eta += c;
    shifted.outside_utility += c;
    const auto moved = choice::choice_probs(shifted, prefs);
    CHECK(std::abs(base.outside - moved.outside) < 1e-12);
    for (int i = 0; i < n; ++i) {
      CHECK(std::abs(base.borrower[static_cast<std::size_t>(i)] -
                     moved.borrower[static_cast<std::size_t>(i)]) < 1e-12);
    }
  }
}

TEST_CASE("a dominant borrower always wins; a dominant outside always wins") {
  choice::LenderPrefs prefs{};
  RngStream rng(8);
  choice::Market strong;
  strong.profiles = {profile(0, 1e6)};
  strong.outside_utility = 1.0;
  choice::Market weak;
  weak.profiles = {profile(0, -1e6), profile(1, -1e6)};
  weak.outside_utility = 1.0;
  for (int i = 0; i < 10000; ++i) {
    CHECK(choice::simulate_choice(strong, prefs, rng).chosen == 0);
    CHECK(choice::simulate_choice(weak, prefs, rng).is_outside());
  }
}

TEST_CASE("Gumbel-max choice frequencies match the logit closed form") {
  // Randomized market; chi-square against choice_probs at the 0.001 level.
  RngStream setup(9);
  choice::Market m;
  for (int i = 0; i < 6; ++i) {
    m.profiles.push_back(profile(i, setup.normal(0.3, 0.5),
                                 setup.bernoulli(0.5), setup.bernoulli(0.5),
                                 setup.bernoulli(0.5)));
  }
  m.outside_utility = 1.0;
  choice::LenderPrefs prefs{-0.385, 0.298, -0.191};
  const auto probs = choice::choice_probs(m, prefs);

  RngStream rng(10);
  const int n = 100000;
  std::map<int, long> counts;
  for (int i = 0; i < n; ++i) {
    ++counts[choice::simulate_choice(m, prefs, rng).chosen];
  }
  double chi2 = 0.0;
  auto add_cell = [&](double p, long c) {
    const double expected = p * n;
    chi2 += (c - expected) * (c - expected) / expected;
  };
  for (int i = 0; i < 6; ++i) {
    add_cell(probs.borrower[static_cast<std::size_t>(i)], counts[i]);
  }
  add_cell(probs.outside, counts[choice::kOutsideOption]);
  // 0.999 quantile of chi2(6) = 22.46
  CHECK(chi2 < 22.46);

  // And each option frequency individually within 3 binomial sigma.
  for (int i = 0; i < 6; ++i) {
    const double p = probs.borrower[static_cast<std::size_t>(i)];
    const double sigma = std::sqrt(p * (1 - p) / n);
    CHECK(std::abs(static_cast<double>(counts[i]) / n - p) < 3.5 * sigma);
  }
}

TEST_CASE("permuting the market permutes outcomes, not their distribution") {
  choice::Market m;
  for (int i = 0; i < 5; ++i) m.profiles.push_back(profile(i, 0.1 * i));
  m.outside_utility = 0.4;
  choice::Market rev = m;
  std::reverse(rev.profiles.begin(), rev.profiles.end());

  choice::LenderPrefs prefs{};
  const auto pm = choice::choice_probs(m, prefs);
  const auto pr = choice::choice_probs(rev, prefs);
  for (int i = 0; i < 5; ++i) {
    CHECK(pm.borrower[static_cast<std::size_t>(i)] ==
          doctest::Approx(pr.borrower[static_cast<std::size_t>(4 - i)]));
  }

  // Simulated frequencies agree per borrower id across the two orderings.
  RngStream r1(11), r2(11);
  std::map<int, long> c1, c2;
  const int n = 50000;
  for (int i = 0; i < n; ++i) {
    ++c1[choice::simulate_choice(m, prefs, r1).chosen];
    ++c2[choice::simulate_choice(rev, prefs, r2).chosen];
  }
  for (int id = 0; id < 5; ++id) {
    const double f1 = static_cast<double>(c1[id]) / n;
    const double f2 = static_cast<double>(c2[id]) / n;
    const double sigma = std::sqrt(f1 * (1 - f1) / n);
    CHECK(std::abs(f1 - f2) < 4.0 * sigma + 1e-9);
  }
}

TEST_CASE("empty market is rejected") {
  choice::Market m;
  RngStream rng(12);
  CHECK_THROWS_AS(choice::choice_probs(m, {}), ConfigError);
  CHECK_THROWS_AS(choice::simulate_choice(m, {}, rng), ConfigError);
}
