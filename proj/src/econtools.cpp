#include "lendsim/econtools.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "lendsim/errors.hpp"
#include "lendsim/rng.hpp"

namespace lendsim::econtools {

OlsFit ols(const Eigen::VectorXd& y, const Eigen::MatrixXd& X,
           std::vector<std::string> names, const OlsOptions& options) {
  const Eigen::Index n = X.rows();
  const Eigen::Index p = X.cols();
  if (y.size() != n) {
    throw SchemaError("outcome length does not match design rows");
  }
  if (n <= p) {
    throw ConfigError("need more observations than regressors");
  }
  if (names.empty()) {
    for (Eigen::Index j = 0; j < p; ++j) {
      names.push_back("x" + std::to_string(j));
    }
  }

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
  if (qr.rank() < p) {
    // The trailing pivots index the columns a full-rank basis excludes.
    std::string offending;
    const auto& perm = qr.colsPermutation().indices();
    for (Eigen::Index j = qr.rank(); j < p; ++j) {
      if (!offending.empty()) offending += ", ";
      offending += names[static_cast<std::size_t>(perm[j])];
    }
    throw NumericError("design is rank deficient; dependent columns: " +
                       offending);
  }

  OlsFit fit;
  fit.names = std::move(names);
  fit.rank = qr.rank();
  fit.coef = qr.solve(y);

  const Eigen::VectorXd resid = y - X * fit.coef;
  const auto dof = static_cast<double>(n - p);
  fit.sigma2 = resid.squaredNorm() / dof;

  const Eigen::MatrixXd xtx_inv =
      (X.transpose() * X).ldlt().solve(Eigen::MatrixXd::Identity(p, p));
  if (options.robust_se) {
    // HC1 sandwich.
    Eigen::MatrixXd meat = Eigen::MatrixXd::Zero(p, p);
    for (Eigen::Index i = 0; i < n; ++i) {
      const Eigen::RowVectorXd xi = X.row(i);
      meat += resid[i] * resid[i] * xi.transpose() * xi;
    }
    fit.cov = (static_cast<double>(n) / dof) * xtx_inv * meat * xtx_inv;
  } else {
    fit.cov = fit.sigma2 * xtx_inv;
  }
  return fit;
}

void Dataset::validate() const {
  const Eigen::Index n = outcome.size();
  if (n == 0) {
    throw SchemaError("dataset is empty");
  }
  if (focal.size() != n) {
    throw SchemaError("focal column length mismatch");
  }
  for (const auto& [name, cols] : groups) {
    if (cols.rows() != n) {
      throw SchemaError("covariate group '" + name + "' length mismatch");
    }
  }
}

double GelbachResult::contribution_total() const {
  double s = 0.0;
  for (const auto& [name, c] : contributions) s += c;
  return s;
}

GelbachResult gelbach_decompose(const Dataset& data) {
  data.validate();
  const Eigen::Index n = data.outcome.size();

  // Base: outcome on intercept + focal.
  Eigen::MatrixXd base(n, 2);
  base.col(0).setOnes();
  base.col(1) = data.focal;
  const OlsFit base_fit = ols(data.outcome, base, {"intercept", "focal"});

  // Full: adds every group column.
  Eigen::Index extra = 0;
  for (const auto& [name, cols] : data.groups) extra += cols.cols();
  Eigen::MatrixXd full(n, 2 + extra);
  full.leftCols(2) = base;
  std::vector<std::string> full_names = {"intercept", "focal"};
  Eigen::Index at = 2;
  for (const auto& [name, cols] : data.groups) {
    full.middleCols(at, cols.cols()) = cols;
    for (Eigen::Index j = 0; j < cols.cols(); ++j) {
      full_names.push_back(name + "[" + std::to_string(j) + "]");
    }
    at += cols.cols();
  }
  const OlsFit full_fit = ols(data.outcome, full, full_names);

  GelbachResult result;
  result.coef_base = base_fit.coef[1];
  result.se_base = base_fit.se(1);
  result.coef_full = full_fit.coef[1];
  result.se_full = full_fit.se(1);

  // Auxiliary regressions of each covariate on (intercept, focal); the focal
  // loading times the full-model coefficient is the column's contribution.
  at = 2;
  for (const auto& [name, cols] : data.groups) {
    double contribution = 0.0;
    for (Eigen::Index j = 0; j < cols.cols(); ++j) {
      const OlsFit aux = ols(cols.col(j), base, {"intercept", "focal"});
      contribution += aux.coef[1] * full_fit.coef[at + j];
    }
    result.contributions.emplace_back(name, contribution);
    at += cols.cols();
  }
  return result;
}

namespace {

// Ridge regression with an unpenalized intercept; predictors are centered
// and scaled on the training data.
class RidgeModel {
 public:
  void fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double lambda) {
    center_ = X.colwise().mean();
    scale_.resize(X.cols());
    Eigen::MatrixXd Z = X.rowwise() - center_.transpose();
    for (Eigen::Index j = 0; j < X.cols(); ++j) {
      const double s = std::sqrt(Z.col(j).squaredNorm() /
                                 static_cast<double>(X.rows()));
      scale_[j] = s > 1e-12 ? s : 1.0;
      Z.col(j) /= scale_[j];
    }
    intercept_ = y.mean();
    const Eigen::MatrixXd gram =
        Z.transpose() * Z +
        lambda * Eigen::MatrixXd::Identity(X.cols(), X.cols());
    coef_ = gram.ldlt().solve(Z.transpose() * (y.array() - intercept_).matrix());
  }

  double predict(const Eigen::RowVectorXd& x) const {
    double v = intercept_;
    for (Eigen::Index j = 0; j < coef_.size(); ++j) {
      v += coef_[j] * (x[j] - center_[j]) / scale_[j];
    }
    return v;
  }

 private:
  Eigen::VectorXd coef_;
  Eigen::VectorXd center_;
  Eigen::VectorXd scale_;
  double intercept_ = 0.0;
};

// L2-regularized logistic regression by Newton iterations, intercept
// unpenalized.
class LogisticModel {
 public:
  void fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double lambda,
           int max_iter = 50) {
    const Eigen::Index n = X.rows();
    const Eigen::Index p = X.cols() + 1;
    Eigen::MatrixXd Z(n, p);
    Z.col(0).setOnes();
    Z.rightCols(X.cols()) = X;
    theta_ = Eigen::VectorXd::Zero(p);
    Eigen::VectorXd penalty = Eigen::VectorXd::Constant(p, lambda);
    penalty[0] = 0.0;
    for (int it = 0; it < max_iter; ++it) {
      const Eigen::VectorXd t = Z * theta_;
      Eigen::VectorXd mu(n), w(n);
      for (Eigen::Index i = 0; i < n; ++i) {
        mu[i] = 1.0 / (1.0 + std::exp(-t[i]));
        w[i] = mu[i] * (1.0 - mu[i]);
      }
      const Eigen::VectorXd grad =
          Z.transpose() * (y - mu) - penalty.asDiagonal() * theta_;
      if (grad.lpNorm<Eigen::Infinity>() < 1e-9) break;
      Eigen::MatrixXd hess = Z.transpose() * w.asDiagonal() * Z;
      hess += penalty.asDiagonal();
      theta_ += hess.ldlt().solve(grad);
    }
  }

  double predict(const Eigen::RowVectorXd& x) const {
    double t = theta_[0];
    for (Eigen::Index j = 0; j < x.size(); ++j) t += theta_[j + 1] * x[j];
    return 1.0 / (1.0 + std::exp(-t));
  }

 private:
  Eigen::VectorXd theta_;
};

Eigen::MatrixXd rows_subset(const Eigen::MatrixXd& X,
                            const std::vector<Eigen::Index>& idx) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(idx.size()), X.cols());
  for (std::size_t i = 0; i < idx.size(); ++i) {
    out.row(static_cast<Eigen::Index>(i)) = X.row(idx[i]);
  }
  return out;
}

Eigen::VectorXd vec_subset(const Eigen::VectorXd& v,
                           const std::vector<Eigen::Index>& idx) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(idx.size()));
  for (std::size_t i = 0; i < idx.size(); ++i) {
    out[static_cast<Eigen::Index>(i)] = v[idx[i]];
  }
  return out;
}

}  // namespace

AipwResult aipw_ate(const Eigen::VectorXd& y, const Eigen::VectorXi& w,
                    const Eigen::MatrixXd& X, const AipwOptions& options) {
  const Eigen::Index n = y.size();
  if (n == 0 || w.size() != n || X.rows() != n) {
    throw SchemaError("AIPW inputs are not aligned");
  }
  const int treated = w.sum();
  if (treated == 0 || treated == n) {
    throw ConfigError("one treatment arm is empty");
  }
  if (options.folds < 1) {
    throw ConfigError("fold count must be >= 1");
  }

  // Deterministic fold assignment: shuffled indices dealt round-robin.
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  RngStream rng = RngStream::from_keys(options.seed, {0x41495057ULL});
  for (std::size_t i = order.size(); i > 1; --i) {
    std::swap(order[i - 1], order[rng.uniform_int(i)]);
  }
  std::vector<int> fold_of(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < order.size(); ++i) {
    fold_of[static_cast<std::size_t>(order[i])] =
        static_cast<int>(i % static_cast<std::size_t>(options.folds));
  }

  Eigen::VectorXd e_hat(n), mu1_hat(n), mu0_hat(n);
  int clipped = 0;
  for (int fold = 0; fold < options.folds; ++fold) {
    std::vector<Eigen::Index> train, hold;
    for (Eigen::Index i = 0; i < n; ++i) {
      // With folds == 1 train on everything and predict in-sample.
      if (options.folds == 1 || fold_of[static_cast<std::size_t>(i)] != fold) {
        train.push_back(i);
      }
      if (fold_of[static_cast<std::size_t>(i)] == fold) {
        hold.push_back(i);
      }
    }
    if (hold.empty()) continue;

    LogisticModel propensity;
    RidgeModel outcome1, outcome0;
    if (!options.propensity_override) {
      const Eigen::MatrixXd Xt = rows_subset(X, train);
      Eigen::VectorXd wt(static_cast<Eigen::Index>(train.size()));
      for (std::size_t i = 0; i < train.size(); ++i) {
        wt[static_cast<Eigen::Index>(i)] = w[train[i]];
      }
      propensity.fit(Xt, wt, options.logit_lambda);
    }
    if (!options.outcome_override) {
      std::vector<Eigen::Index> t1, t0;
      for (Eigen::Index i : train) (w[i] == 1 ? t1 : t0).push_back(i);
      if (t1.empty() || t0.empty()) {
        throw NumericError("a training fold lost an entire treatment arm");
      }
      outcome1.fit(rows_subset(X, t1), vec_subset(y, t1), options.ridge_lambda);
      outcome0.fit(rows_subset(X, t0), vec_subset(y, t0), options.ridge_lambda);
    }

    for (Eigen::Index i : hold) {
      const Eigen::RowVectorXd xi = X.row(i);
      double e = options.propensity_override ? options.propensity_override(xi)
                                             : propensity.predict(xi);
      if (e < options.clip || e > 1.0 - options.clip) {
        e = std::clamp(e, options.clip, 1.0 - options.clip);
        ++clipped;
      }
      e_hat[i] = e;
      mu1_hat[i] = options.outcome_override ? options.outcome_override(xi, 1)
                                            : outcome1.predict(xi);
      mu0_hat[i] = options.outcome_override ? options.outcome_override(xi, 0)
                                            : outcome0.predict(xi);
    }
  }

  AipwResult result;
  result.influence.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double wi = w[i];
    result.influence[i] = mu1_hat[i] - mu0_hat[i] +
                          wi * (y[i] - mu1_hat[i]) / e_hat[i] -
                          (1.0 - wi) * (y[i] - mu0_hat[i]) / (1.0 - e_hat[i]);
  }
  result.ate = result.influence.mean();
  const double var =
      (result.influence.array() - result.ate).square().sum() /
      static_cast<double>(n - 1);
  result.se = std::sqrt(var / static_cast<double>(n));
  result.clipped = clipped;
  return result;
}

AipwResult aipw_ate(const Dataset& data, const AipwOptions& options) {
  data.validate();
  const Eigen::Index n = data.outcome.size();
  Eigen::VectorXi w(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    // Binarize at 0.5 so continuous feature scores can act as treatments.
    w[i] = data.focal[i] > 0.5 ? 1 : 0;
  }
  Eigen::Index extra = 0;
  for (const auto& [name, cols] : data.groups) extra += cols.cols();
  Eigen::MatrixXd X(n, extra);
  Eigen::Index at = 0;
  for (const auto& [name, cols] : data.groups) {
    X.middleCols(at, cols.cols()) = cols;
    at += cols.cols();
  }
  return aipw_ate(data.outcome, w, X, options);
}

}  // namespace lendsim::econtools
