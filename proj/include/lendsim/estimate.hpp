#pragma once

#include <Eigen/Dense>
#include <array>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace lendsim::estimate {

struct ChoiceOption {
  std::string profile_id;
  bool male = false;
  bool smile = false;
  bool bodyshot = false;
};

// One paired-choice instance: two options, an index of the chosen one.
struct ChoiceRecord {
  std::string subject_id;
  std::string pair_id;
  std::array<ChoiceOption, 2> options;
  int chosen = 0;  // 0 or 1
};

enum class Feature { Male, Smile, Bodyshot };

struct FitOptions {
  int max_iter = 100;
  double tol = 1e-8;  // gradient max-norm

  // Sample restriction: records mentioning these profiles are dropped.
  std::vector<std::string> exclude_profiles;

  // When set, the three feature columns are duplicated by a high/low
  // fixed-effect group indicator; low_fe_profiles names the low group.
  bool fe_group_interactions = false;
  std::vector<std::string> low_fe_profiles;

  // Optional subject covariates interacted with the three features.
  std::vector<std::string> subject_covariate_names;
  std::map<std::string, std::vector<double>> subject_covariates;
};

struct LogitFit {
  std::vector<std::string> names;  // parameter layout: features, then FEs
  Eigen::VectorXd coef;
  Eigen::VectorXd se;
  std::map<std::string, double> mu;  // per-profile fixed effects, ref = 0
  std::string reference_profile;
  double log_likelihood = 0.0;
  bool converged = false;
  int iterations = 0;

  double coef_for(const std::string& name) const;
  double se_for(const std::string& name) const;
  // Plain-specification accessors.
  double alpha() const { return coef_for("male"); }
  double beta() const { return coef_for("smile"); }
  double gamma() const { return coef_for("bodyshot"); }
};

// Maximizes the conditional log-likelihood of the paired choices by Newton
// iterations with step halving.  The lexicographically first profile id is
// the reference; its fixed effect is pinned to 0.  Separation or collinearity
// is flagged via converged = false on the returned partial fit.
LogitFit fit_conditional_logit(std::span<const ChoiceRecord> records,
                               const FitOptions& options = {});

// Conditional log-likelihood and its analytic gradient at params, using the
// same parameter layout as fit_conditional_logit.  Exposed for testing the
// MLE core; empty records give (0, zero gradient).
std::pair<double, Eigen::VectorXd> loglik_and_gradient(
    const Eigen::VectorXd& params, std::span<const ChoiceRecord> records,
    const FitOptions& options = {});

struct MarginalEffect {
  double absolute = 0.0;
  double relative = 0.0;
};

// Average over all observed (record, option) instances of
// P(chosen | feature = 1) - P(chosen | feature = 0), opponent held fixed;
// relative divides by the average P(chosen | feature = 0).
MarginalEffect average_marginal_effect(const LogitFit& fit,
                                       std::span<const ChoiceRecord> records,
                                       Feature feature);

}  // namespace lendsim::estimate
