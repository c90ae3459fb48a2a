#pragma once

#include <string>

#include "lendsim/choice.hpp"
#include "lendsim/pool.hpp"
#include "lendsim/rng.hpp"

namespace lendsim::policy {

// The seven platform policies.  A policy acts twice: once on the pool's
// style distribution, once on how markets are sampled from the pool.
enum class PolicyKind {
  Baseline,
  Benchmark,
  Naive,
  PartialCompliance,
  LowTypeSupport,
  RestrictCompetition,
  Hybrid,
};

PolicyKind policy_kind_from_string(const std::string& name);
std::string to_string(PolicyKind kind);

struct PolicySpec {
  PolicyKind kind = PolicyKind::Baseline;
  double compliance_prob = 0.75;  // PartialCompliance / Hybrid
  int restricted_size = 5;        // RestrictCompetition
  int market_size = 10;

  void validate(int pool_size) const;
};

// Pool-level style transform.  Benchmark forces smile on and bodyshot off
// everywhere; PartialCompliance and Hybrid flip each non-compliant style flag
// to compliant independently with compliance_prob; the other policies leave
// the pool untouched.  eta and male are never modified.
pool::BorrowerPool apply_style_transform(const pool::BorrowerPool& pool,
                                         const PolicySpec& spec,
                                         RngStream& rng);

// Samples one lender's market.  Uniform without replacement for Baseline,
// Benchmark and PartialCompliance; Naive promotes compliant borrowers
// (smile and no bodyshot) and LowTypeSupport / Hybrid promote male borrowers,
// always including the promoted set when it fits and filling remaining slots
// uniformly from the rest; RestrictCompetition samples restricted_size
// borrowers uniformly.
choice::Market sample_market(const pool::BorrowerPool& pool,
                             const PolicySpec& spec, double omega,
                             RngStream& rng);

}  // namespace lendsim::policy
