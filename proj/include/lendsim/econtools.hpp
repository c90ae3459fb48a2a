#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace lendsim::econtools {

struct OlsOptions {
  bool robust_se = false;  // HC1 when true, classical otherwise
};

struct OlsFit {
  Eigen::VectorXd coef;
  Eigen::MatrixXd cov;
  std::vector<std::string> names;
  double sigma2 = 0.0;
  Eigen::Index rank = 0;

  double se(Eigen::Index i) const { return std::sqrt(cov(i, i)); }
};

// Least squares via column-pivoted QR.  Rank deficiency raises an error that
// names the offending columns.
OlsFit ols(const Eigen::VectorXd& y, const Eigen::MatrixXd& X,
           std::vector<std::string> names = {}, const OlsOptions& options = {});

// Outcome, a focal binary column, and named groups of covariate columns.
struct Dataset {
  Eigen::VectorXd outcome;
  Eigen::VectorXd focal;
  std::vector<std::pair<std::string, Eigen::MatrixXd>> groups;
  std::vector<std::vector<std::string>> group_column_names;  // optional

  void validate() const;
};

struct GelbachResult {
  double coef_base = 0.0;
  double se_base = 0.0;
  double coef_full = 0.0;
  double se_full = 0.0;
  std::vector<std::pair<std::string, double>> contributions;

  double contribution_total() const;
};

// Decomposes coef_base - coef_full into per-group contributions Gamma_g *
// beta_g, where Gamma_g comes from regressing each group column on the focal
// variable (plus intercept) and beta_g from the full model.  The additivity
// identity is exact OLS algebra.
GelbachResult gelbach_decompose(const Dataset& data);

struct AipwOptions {
  int folds = 5;        // 1 disables cross-fitting
  double clip = 0.01;   // propensity clipped to [clip, 1-clip]
  double ridge_lambda = 1e-3;
  double logit_lambda = 1e-3;
  std::uint64_t seed = 0;  // fold assignment

  // Test hooks: when set, replace the fitted nuisances.
  std::function<double(const Eigen::RowVectorXd&)> propensity_override;
  std::function<double(const Eigen::RowVectorXd&, int)> outcome_override;
};

struct AipwResult {
  double ate = 0.0;
  double se = 0.0;
  Eigen::VectorXd influence;
  int clipped = 0;  // propensity clipping events
};

// Doubly-robust average treatment effect: cross-fitted outcome and propensity
// models feed the AIPW influence function; ATE is its mean, SE its standard
// deviation over sqrt(n).
AipwResult aipw_ate(const Eigen::VectorXd& y, const Eigen::VectorXi& w,
                    const Eigen::MatrixXd& X, const AipwOptions& options = {});

// Dataset surface: focal is the treatment, group columns are stacked as X.
AipwResult aipw_ate(const Dataset& data, const AipwOptions& options = {});

}  // namespace lendsim::econtools
