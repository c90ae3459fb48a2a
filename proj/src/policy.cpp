#include "lendsim/policy.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

#include "lendsim/errors.hpp"

namespace lendsim::policy {

PolicyKind policy_kind_from_string(const std::string& name) {
  if (name == "Baseline") return PolicyKind::Baseline;
  if (name == "Benchmark") return PolicyKind::Benchmark;
  if (name == "Naive") return PolicyKind::Naive;
  if (name == "PartialCompliance") return PolicyKind::PartialCompliance;
  if (name == "LowTypeSupport") return PolicyKind::LowTypeSupport;
  if (name == "RestrictCompetition") return PolicyKind::RestrictCompetition;
  if (name == "Hybrid") return PolicyKind::Hybrid;
  throw ConfigError("unknown policy kind: " + name);
}

std::string to_string(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::Baseline: return "Baseline";
    case PolicyKind::Benchmark: return "Benchmark";
    case PolicyKind::Naive: return "Naive";
    case PolicyKind::PartialCompliance: return "PartialCompliance";
    case PolicyKind::LowTypeSupport: return "LowTypeSupport";
    case PolicyKind::RestrictCompetition: return "RestrictCompetition";
    case PolicyKind::Hybrid: return "Hybrid";
  }
  throw ConfigError("unknown policy kind");
}

void PolicySpec::validate(int pool_size) const {
  if (!(compliance_prob >= 0.0 && compliance_prob <= 1.0)) {
    throw ConfigError("compliance probability must be in [0, 1]");
  }
  if (restricted_size < 1 || restricted_size > market_size) {
    throw ConfigError("restricted size must be in [1, market size]");
  }
  if (market_size < 1 || market_size > pool_size) {
    throw ConfigError("market size must be in [1, pool size]");
  }
}

pool::BorrowerPool apply_style_transform(const pool::BorrowerPool& pool,
                                         const PolicySpec& spec,
                                         RngStream& rng) {
  pool::BorrowerPool out = pool;
  switch (spec.kind) {
    case PolicyKind::Baseline:
    case PolicyKind::Naive:
    case PolicyKind::LowTypeSupport:
    case PolicyKind::RestrictCompetition:
      break;
    case PolicyKind::Benchmark:
      for (auto& p : out.profiles) {
        p.smile = true;
        p.bodyshot = false;
      }
      break;
    case PolicyKind::PartialCompliance:
    case PolicyKind::Hybrid:
      for (auto& p : out.profiles) {
        if (!p.smile && rng.bernoulli(spec.compliance_prob)) p.smile = true;
        if (p.bodyshot && rng.bernoulli(spec.compliance_prob))
          p.bodyshot = false;
      }
      break;
  }
  return out;
}

namespace {

// Partial Fisher-Yates: first k entries of a shuffled copy of indices.
std::vector<int> sample_without_replacement(const std::vector<int>& indices,
                                            int k, RngStream& rng) {
  std::vector<int> pool = indices;
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) {
    const auto j =
        i + static_cast<int>(rng.uniform_int(pool.size() - static_cast<std::size_t>(i)));
    std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
    out.push_back(pool[static_cast<std::size_t>(i)]);
  }
  return out;
}

std::vector<int> all_indices(int n) {
  std::vector<int> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), 0);
  return idx;
}

// Promoted set always enters the market when it fits; remaining slots are
// filled uniformly from the complement.  With an oversized promoted set the
// market is drawn uniformly from it.
std::vector<int> sample_with_promotion(const pool::BorrowerPool& pool,
                                       const std::vector<int>& promoted,
                                       int market_size, RngStream& rng) {
  if (static_cast<int>(promoted.size()) > market_size) {
    return sample_without_replacement(promoted, market_size, rng);
  }
  std::vector<bool> is_promoted(pool.profiles.size(), false);
  for (int i : promoted) is_promoted[static_cast<std::size_t>(i)] = true;
  std::vector<int> rest;
  for (int i = 0; i < pool.size(); ++i) {
    if (!is_promoted[static_cast<std::size_t>(i)]) rest.push_back(i);
  }
  std::vector<int> chosen = promoted;
  const int fill = market_size - static_cast<int>(promoted.size());
  const auto extra = sample_without_replacement(rest, fill, rng);
  chosen.insert(chosen.end(), extra.begin(), extra.end());
  return chosen;
}

}  // namespace

choice::Market sample_market(const pool::BorrowerPool& pool,
                             const PolicySpec& spec, double omega,
                             RngStream& rng) {
  spec.validate(pool.size());

  std::vector<int> chosen;
  switch (spec.kind) {
    case PolicyKind::Baseline:
    case PolicyKind::Benchmark:
    case PolicyKind::PartialCompliance:
      chosen = sample_without_replacement(all_indices(pool.size()),
                                          spec.market_size, rng);
      break;
    case PolicyKind::RestrictCompetition:
      chosen = sample_without_replacement(all_indices(pool.size()),
                                          spec.restricted_size, rng);
      break;
    case PolicyKind::Naive: {
      std::vector<int> compliant;
      for (int i = 0; i < pool.size(); ++i) {
        const auto& p = pool.profiles[static_cast<std::size_t>(i)];
        if (p.smile && !p.bodyshot) compliant.push_back(i);
      }
      chosen = sample_with_promotion(pool, compliant, spec.market_size, rng);
      break;
    }
    case PolicyKind::LowTypeSupport:
    case PolicyKind::Hybrid: {
      std::vector<int> male;
      for (int i = 0; i < pool.size(); ++i) {
        if (pool.profiles[static_cast<std::size_t>(i)].male) male.push_back(i);
      }
      chosen = sample_with_promotion(pool, male, spec.market_size, rng);
      break;
    }
  }

  choice::Market market;
  market.outside_utility = omega;
  market.profiles.reserve(chosen.size());
  for (int i : chosen) {
    market.profiles.push_back(pool.profiles[static_cast<std::size_t>(i)]);
  }
  return market;
}

}  // namespace lendsim::policy
