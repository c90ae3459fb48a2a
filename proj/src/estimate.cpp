#include "lendsim/estimate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "lendsim/errors.hpp"

namespace lendsim::estimate {

namespace {

double logistic(double t) {
  if (t >= 0.0) {
    return 1.0 / (1.0 + std::exp(-t));
  }
  const double e = std::exp(t);
  return e / (1.0 + e);
}

// log(sigma(t)) without overflow.
double log_logistic(double t) {
  return t >= 0.0 ? -std::log1p(std::exp(-t)) : t - std::log1p(std::exp(t));
}

void validate_record(const ChoiceRecord& r) {
  if (r.chosen != 0 && r.chosen != 1) {
    throw SchemaError("chosen index must be 0 or 1 (pair " + r.pair_id + ")");
  }
  const auto& a = r.options[0];
  const auto& b = r.options[1];
  if (a.profile_id == b.profile_id && a.male == b.male && a.smile == b.smile &&
      a.bodyshot == b.bodyshot) {
    throw SchemaError("options in pair " + r.pair_id +
                      " do not differ in any feature");
  }
}

// Differenced design for the pair likelihood: one row per record holding
// x(option 1) - x(option 0), outcome 1 when option 1 was chosen.
struct Design {
  Eigen::MatrixXd diffs;
  Eigen::VectorXd y;
  std::vector<std::string> names;
  std::vector<std::string> profiles;  // sorted; front is the reference
};

bool in_list(const std::vector<std::string>& list, const std::string& s) {
  return std::find(list.begin(), list.end(), s) != list.end();
}

Design build_design(std::span<const ChoiceRecord> records,
                    const FitOptions& options) {
  std::vector<const ChoiceRecord*> kept;
  std::set<std::string> profile_set;
  for (const auto& r : records) {
    validate_record(r);
    if (in_list(options.exclude_profiles, r.options[0].profile_id) ||
        in_list(options.exclude_profiles, r.options[1].profile_id)) {
      continue;
    }
    kept.push_back(&r);
    profile_set.insert(r.options[0].profile_id);
    profile_set.insert(r.options[1].profile_id);
  }

  Design design;
  design.profiles.assign(profile_set.begin(), profile_set.end());

  const auto& cov_names = options.subject_covariate_names;
  if (options.fe_group_interactions) {
    if (options.low_fe_profiles.empty()) {
      throw ConfigError("FE-group interactions need a low-FE profile list");
    }
    for (const char* f : {"male", "smile", "bodyshot"}) {
      design.names.push_back(std::string(f) + ":high_fe");
    }
    for (const char* f : {"male", "smile", "bodyshot"}) {
      design.names.push_back(std::string(f) + ":low_fe");
    }
  } else {
    design.names = {"male", "smile", "bodyshot"};
  }
  for (const auto& cov : cov_names) {
    for (const char* f : {"male", "smile", "bodyshot"}) {
      design.names.push_back(std::string(f) + ":" + cov);
    }
  }
  const auto n_feature_cols = design.names.size();
  for (std::size_t i = 1; i < design.profiles.size(); ++i) {
    design.names.push_back("fe:" + design.profiles[i]);
  }

  std::map<std::string, int> profile_col;  // column in the full design
  for (std::size_t i = 1; i < design.profiles.size(); ++i) {
    profile_col[design.profiles[i]] =
        static_cast<int>(n_feature_cols + i - 1);
  }

  design.diffs = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(kept.size()),
                                       static_cast<Eigen::Index>(design.names.size()));
  design.y.resize(static_cast<Eigen::Index>(kept.size()));

  for (std::size_t row = 0; row < kept.size(); ++row) {
    const auto& r = *kept[row];
    design.y[static_cast<Eigen::Index>(row)] = r.chosen == 1 ? 1.0 : 0.0;
    for (int side = 0; side < 2; ++side) {
      const auto& opt = r.options[static_cast<std::size_t>(side)];
      const double sign = side == 1 ? 1.0 : -1.0;
      const double feats[3] = {opt.male ? 1.0 : 0.0, opt.smile ? 1.0 : 0.0,
                               opt.bodyshot ? 1.0 : 0.0};
      std::size_t col = 0;
      if (options.fe_group_interactions) {
        const bool low = in_list(options.low_fe_profiles, opt.profile_id);
        for (int f = 0; f < 3; ++f) {
          design.diffs(static_cast<Eigen::Index>(row),
                       static_cast<Eigen::Index>(col + (low ? 3 : 0) + f)) +=
              sign * feats[f];
        }
        col += 6;
      } else {
        for (int f = 0; f < 3; ++f) {
          design.diffs(static_cast<Eigen::Index>(row),
                       static_cast<Eigen::Index>(col + f)) += sign * feats[f];
        }
        col += 3;
      }
      if (!cov_names.empty()) {
        auto it = options.subject_covariates.find(r.subject_id);
        if (it == options.subject_covariates.end() ||
            it->second.size() != cov_names.size()) {
          throw SchemaError("missing subject covariates for " + r.subject_id);
        }
        for (std::size_t c = 0; c < cov_names.size(); ++c) {
          for (int f = 0; f < 3; ++f) {
            design.diffs(static_cast<Eigen::Index>(row),
                         static_cast<Eigen::Index>(col + 3 * c + f)) +=
                sign * feats[f] * it->second[c];
          }
        }
        col += 3 * cov_names.size();
      }
      auto fe_it = profile_col.find(opt.profile_id);
      if (fe_it != profile_col.end()) {
        design.diffs(static_cast<Eigen::Index>(row), fe_it->second) += sign;
      }
    }
  }
  return design;
}

double loglik_at(const Design& design, const Eigen::VectorXd& theta) {
  const Eigen::VectorXd t = design.diffs * theta;
  double ll = 0.0;
  for (Eigen::Index i = 0; i < t.size(); ++i) {
    ll += design.y[i] == 1.0 ? log_logistic(t[i]) : log_logistic(-t[i]);
  }
  return ll;
}

Eigen::VectorXd gradient_at(const Design& design,
                            const Eigen::VectorXd& theta) {
  const Eigen::VectorXd t = design.diffs * theta;
  Eigen::VectorXd resid(t.size());
  for (Eigen::Index i = 0; i < t.size(); ++i) {
    resid[i] = design.y[i] - logistic(t[i]);
  }
  return design.diffs.transpose() * resid;
}

Eigen::MatrixXd information_at(const Design& design,
                               const Eigen::VectorXd& theta) {
  const Eigen::VectorXd t = design.diffs * theta;
  Eigen::VectorXd w(t.size());
  for (Eigen::Index i = 0; i < t.size(); ++i) {
    const double p = logistic(t[i]);
    w[i] = p * (1.0 - p);
  }
  return design.diffs.transpose() * w.asDiagonal() * design.diffs;
}

}  // namespace

double LogitFit::coef_for(const std::string& name) const {
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == name) return coef[static_cast<Eigen::Index>(i)];
  }
  throw ConfigError("no coefficient named " + name + " in this fit");
}

double LogitFit::se_for(const std::string& name) const {
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == name) return se[static_cast<Eigen::Index>(i)];
  }
  throw ConfigError("no standard error named " + name + " in this fit");
}

std::pair<double, Eigen::VectorXd> loglik_and_gradient(
    const Eigen::VectorXd& params, std::span<const ChoiceRecord> records,
    const FitOptions& options) {
  if (records.empty()) {
    return {0.0, Eigen::VectorXd::Zero(params.size())};
  }
  const Design design = build_design(records, options);
  if (params.size() != static_cast<Eigen::Index>(design.names.size())) {
    throw ConfigError("parameter vector has wrong length for this design");
  }
  return {loglik_at(design, params), gradient_at(design, params)};
}

LogitFit fit_conditional_logit(std::span<const ChoiceRecord> records,
                               const FitOptions& options) {
  const Design design = build_design(records, options);
  const auto p = static_cast<Eigen::Index>(design.names.size());
  if (design.y.size() < p) {
    throw ConfigError("fewer records than parameters");
  }

  LogitFit fit;
  fit.names = design.names;
  fit.reference_profile = design.profiles.empty() ? "" : design.profiles.front();

  bool healthy =
      Eigen::ColPivHouseholderQR<Eigen::MatrixXd>(design.diffs).rank() == p;

  Eigen::VectorXd theta = Eigen::VectorXd::Zero(p);
  double ll = loglik_at(design, theta);
  int iter = 0;
  bool converged = false;
  while (healthy && iter < options.max_iter) {
    ++iter;
    const Eigen::VectorXd grad = gradient_at(design, theta);
    if (grad.lpNorm<Eigen::Infinity>() < options.tol) {
      converged = true;
      break;
    }
    const Eigen::MatrixXd info = information_at(design, theta);
    Eigen::LDLT<Eigen::MatrixXd> ldlt(info);
    if (ldlt.info() != Eigen::Success) {
      healthy = false;
      break;
    }
    const Eigen::VectorXd direction = ldlt.solve(grad);
    if (!direction.allFinite()) {
      healthy = false;
      break;
    }
    // Step halving until the likelihood does not decrease.
    double step = 1.0;
    Eigen::VectorXd candidate = theta + step * direction;
    double ll_new = loglik_at(design, candidate);
    int halvings = 0;
    while ((!std::isfinite(ll_new) || ll_new < ll) && halvings < 40) {
      step *= 0.5;
      ++halvings;
      candidate = theta + step * direction;
      ll_new = loglik_at(design, candidate);
    }
    if (!std::isfinite(ll_new)) {
      healthy = false;
      break;
    }
    theta = candidate;
    ll = ll_new;
  }

  fit.coef = theta;
  fit.log_likelihood = ll;
  fit.iterations = iter;
  fit.converged = converged && healthy;

  fit.se = Eigen::VectorXd::Constant(
      p, std::numeric_limits<double>::quiet_NaN());
  if (fit.converged) {
    const Eigen::MatrixXd info = information_at(design, theta);
    Eigen::LDLT<Eigen::MatrixXd> ldlt(info);
    if (ldlt.info() == Eigen::Success) {
      const Eigen::MatrixXd cov =
          ldlt.solve(Eigen::MatrixXd::Identity(p, p));
      for (Eigen::Index i = 0; i < p; ++i) {
        fit.se[i] = std::sqrt(std::max(cov(i, i), 0.0));
      }
    } else {
      fit.converged = false;
    }
  }

  if (!design.profiles.empty()) {
    fit.mu[design.profiles.front()] = 0.0;
    const auto n_feature_cols = design.names.size() -
                                (design.profiles.size() - 1);
    for (std::size_t i = 1; i < design.profiles.size(); ++i) {
      fit.mu[design.profiles[i]] =
          theta[static_cast<Eigen::Index>(n_feature_cols + i - 1)];
    }
  }
  return fit;
}

MarginalEffect average_marginal_effect(const LogitFit& fit,
                                       std::span<const ChoiceRecord> records,
                                       Feature feature) {
  const double alpha = fit.coef_for("male");
  const double beta = fit.coef_for("smile");
  const double gamma = fit.coef_for("bodyshot");

  auto util = [&](const ChoiceOption& o, Feature forced, double value) {
    double male = o.male ? 1.0 : 0.0;
    double smile = o.smile ? 1.0 : 0.0;
    double bodyshot = o.bodyshot ? 1.0 : 0.0;
    switch (forced) {
      case Feature::Male: male = value; break;
      case Feature::Smile: smile = value; break;
      case Feature::Bodyshot: bodyshot = value; break;
    }
    auto it = fit.mu.find(o.profile_id);
    const double mu = it == fit.mu.end() ? 0.0 : it->second;
    return alpha * male + beta * smile + gamma * bodyshot + mu;
  };
  auto raw_util = [&](const ChoiceOption& o) {
    auto it = fit.mu.find(o.profile_id);
    const double mu = it == fit.mu.end() ? 0.0 : it->second;
    return alpha * (o.male ? 1.0 : 0.0) + beta * (o.smile ? 1.0 : 0.0) +
           gamma * (o.bodyshot ? 1.0 : 0.0) + mu;
  };

  double sum_delta = 0.0, sum_p0 = 0.0;
  long count = 0;
  for (const auto& r : records) {
    for (int side = 0; side < 2; ++side) {
      const auto& self = r.options[static_cast<std::size_t>(side)];
      const auto& other = r.options[static_cast<std::size_t>(1 - side)];
      const double v_other = raw_util(other);
      const double p1 = logistic(util(self, feature, 1.0) - v_other);
      const double p0 = logistic(util(self, feature, 0.0) - v_other);
      sum_delta += p1 - p0;
      sum_p0 += p0;
      ++count;
    }
  }
  if (count == 0) {
    throw ConfigError("marginal effect requires at least one record");
  }
  MarginalEffect ame;
  ame.absolute = sum_delta / static_cast<double>(count);
  const double base = sum_p0 / static_cast<double>(count);
  ame.relative = base > 0.0 ? ame.absolute / base : 0.0;
  return ame;
}

}  // namespace lendsim::estimate
