#include "drselect/refit.hpp"

#include <algorithm>
#include <cmath>

namespace drselect {

namespace {

inline double expit(double eta) {
  if (eta >= 0.0) {
    return 1.0 / (1.0 + std::exp(-eta));
  }
  const double e = std::exp(eta);
  return e / (1.0 + e);
}

// Restricted design [1, X_set].
Eigen::MatrixXd restricted_design(const Dataset& data, const IndexSet& set) {
  const Eigen::Index n = data.n();
  Eigen::MatrixXd xr(n, 1 + Eigen::Index(set.size()));
  xr.col(0).setOnes();
  Eigen::Index c = 1;
  for (int j : set.indices()) {
    if (j >= data.p()) throw SchemaError("index set exceeds covariate count");
    xr.col(c++) = data.x.col(j);
  }
  return xr;
}

// Throws RankDeficientError naming the dependent columns of the set.
void check_rank(const Eigen::ColPivHouseholderQR<Eigen::MatrixXd>& qr,
                const IndexSet& set) {
  const Eigen::Index m = qr.cols();
  if (qr.rank() == m) return;
  std::vector<int> bad;
  const auto& perm = qr.colsPermutation().indices();
  for (Eigen::Index k = qr.rank(); k < m; ++k) {
    const Eigen::Index col = perm[k];
    bad.push_back(col == 0 ? 0 : set.indices()[size_t(col - 1)]);
  }
  std::sort(bad.begin(), bad.end());
  throw RankDeficientError(std::move(bad));
}

Eigen::VectorXd embed(const Eigen::VectorXd& restricted, const IndexSet& set,
                      Eigen::Index p) {
  Eigen::VectorXd full = Eigen::VectorXd::Zero(p);
  full[0] = restricted[0];
  Eigen::Index c = 1;
  for (int j : set.indices()) full[j] = restricted[c++];
  return full;
}

double log_likelihood(const Eigen::VectorXd& a, const Eigen::VectorXd& eta) {
  double ll = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    // a*eta - log(1+exp(eta)), computed stably in both tails
    ll += a[i] * eta[i] -
          (eta[i] > 0.0 ? eta[i] + std::log1p(std::exp(-eta[i]))
                        : std::log1p(std::exp(eta[i])));
  }
  return ll;
}

}  // namespace

Eigen::VectorXd refit_outcome(const Dataset& arm_data, const IndexSet& set) {
  if (arm_data.n() == 0) throw SchemaError("empty arm in refit_outcome");
  const Eigen::MatrixXd xr = restricted_design(arm_data, set);
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(xr);
  check_rank(qr, set);
  const Eigen::VectorXd coef = qr.solve(arm_data.y);
  return embed(coef, set, arm_data.p());
}

Eigen::VectorXd refit_ps(const Dataset& data, const IndexSet& set,
                         bool* separated) {
  data.validate(true);
  if (separated) *separated = false;
  const Eigen::MatrixXd xr = restricted_design(data, set);
  {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(xr);
    check_rank(qr, set);
  }
  const Eigen::Index n = xr.rows(), m = xr.cols();
  const Eigen::VectorXd& a = data.a;

  Eigen::VectorXd coef = Eigen::VectorXd::Zero(m);
  Eigen::VectorXd eta = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd prob = Eigen::VectorXd::Constant(n, 0.5);
  double ll = log_likelihood(a, eta);

  constexpr int kMaxNewton = 100;
  constexpr double kScoreTol = 1e-10;
  for (int iter = 0; iter < kMaxNewton; ++iter) {
    const Eigen::VectorXd score = xr.transpose() * (a - prob);
    if (score.cwiseAbs().maxCoeff() <= kScoreTol * std::max(1.0, double(n))) {
      break;
    }
    Eigen::VectorXd w(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      w[i] = std::max(prob[i] * (1.0 - prob[i]), 1e-12);
    }
    const Eigen::MatrixXd hess =
        xr.transpose() * w.asDiagonal() * xr;
    Eigen::VectorXd step = hess.ldlt().solve(score);
    // Step halving keeps the likelihood nondecreasing near separation.
    double scale = 1.0;
    for (int half = 0; half < 30; ++half) {
      const Eigen::VectorXd trial = coef + scale * step;
      const Eigen::VectorXd trial_eta = xr * trial;
      const double trial_ll = log_likelihood(a, trial_eta);
      if (trial_ll >= ll - 1e-12) {
        coef = trial;
        eta = trial_eta;
        ll = trial_ll;
        break;
      }
      scale *= 0.5;
    }
    for (Eigen::Index i = 0; i < n; ++i) prob[i] = expit(eta[i]);
    if (coef.cwiseAbs().maxCoeff() > 1e3) {
      if (separated) *separated = true;
      break;
    }
  }
  return embed(coef, set, data.p());
}

RefitModels build_refit(const Dataset& data, const IndexSet& set,
                        const ClipBounds& clip) {
  clip.validate();
  auto [treated, control] = split_by_arm(data);

  RefitModels models;
  models.restriction_set = set;
  try {
    models.beta1_hat = refit_outcome(treated, set);
  } catch (const Error& e) {
    throw Error(e.code(), std::string("treated outcome refit: ") + e.what());
  }
  try {
    models.beta0_hat = refit_outcome(control, set);
  } catch (const Error& e) {
    throw Error(e.code(), std::string("control outcome refit: ") + e.what());
  }
  try {
    models.alpha_hat = refit_ps(data, set, &models.ps_separated);
  } catch (const Error& e) {
    throw Error(e.code(), std::string("propensity refit: ") + e.what());
  }

  models.fitted_mu1 = data.x * models.beta1_hat;
  models.fitted_mu0 = data.x * models.beta0_hat;
  const Eigen::VectorXd eta = data.x * models.alpha_hat;
  const Eigen::Index n = data.n();
  models.fitted_ps_raw.resize(n);
  models.fitted_ps.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double e = expit(eta[i]);
    models.fitted_ps_raw[i] = e;
    const double clipped = std::clamp(e, clip.lo, clip.hi);
    if (clipped != e) ++models.clipping_events;
    models.fitted_ps[i] = clipped;
  }
  return models;
}

}  // namespace drselect
