#include "drselect/aipw.hpp"

#include <atomic>
#include <cmath>
#include <thread>
#include <vector>

#include "drselect/rng.hpp"

namespace drselect {

namespace {

Eigen::MatrixXd restricted_design(const Dataset& data, const IndexSet& set) {
  Eigen::MatrixXd xr(data.n(), 1 + Eigen::Index(set.size()));
  xr.col(0).setOnes();
  Eigen::Index c = 1;
  for (int j : set.indices()) xr.col(c++) = data.x.col(j);
  return xr;
}

// Solver wrapper that rejects numerically singular symmetric systems.
class CheckedSolver {
public:
  CheckedSolver(const Eigen::MatrixXd& m, const char* label) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
    const double min_abs = es.eigenvalues().cwiseAbs().minCoeff();
    if (min_abs <= 1e-10) {
      throw SingularInformationError(std::string(label) +
                                     " is numerically singular");
    }
    ldlt_.compute(m);
  }
  Eigen::VectorXd solve(const Eigen::VectorXd& b) const {
    return ldlt_.solve(b);
  }

private:
  Eigen::LDLT<Eigen::MatrixXd> ldlt_;
};

double aipw_core(double a, double y, double e, double mu1, double mu0) {
  return a * y / e + (1.0 - a / e) * mu1 - (1.0 - a) * y / (1.0 - e) -
         (1.0 - (1.0 - a) / (1.0 - e)) * mu0;
}

}  // namespace

double aipw_point(const Dataset& data, const RefitModels& models) {
  const Eigen::Index n = data.n();
  double sum = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    sum += aipw_core(data.a[i], data.y[i], models.fitted_ps[i],
                     models.fitted_mu1[i], models.fitted_mu0[i]);
  }
  const double tau = sum / double(n);
  if (!std::isfinite(tau)) {
    throw NonFiniteError("AIPW estimate overflowed; check clipping bounds");
  }
  return tau;
}

Eigen::VectorXd influence_values(const Dataset& data, const RefitModels& models,
                                 double tau_hat) {
  const Eigen::Index n = data.n();
  const Eigen::MatrixXd xr = restricted_design(data, models.restriction_set);
  const Eigen::Index m = xr.cols();
  const Eigen::VectorXd& a = data.a;
  const Eigen::VectorXd& y = data.y;
  const Eigen::VectorXd& ec = models.fitted_ps;      // clipped, weights
  const Eigen::VectorXd& er = models.fitted_ps_raw;  // ML fit, scores
  const Eigen::VectorXd& mu1 = models.fitted_mu1;
  const Eigen::VectorXd& mu0 = models.fitted_mu0;

  // Sample versions of the three bracketed expectations and the two
  // derivative matrices. The PS score and information use the unclipped
  // fitted values (the ML identities hold there); inverse-probability
  // weights use the clipped ones, matching the point estimator.
  Eigen::VectorXd r_alpha = Eigen::VectorXd::Zero(m);
  Eigen::VectorXd r_beta1 = Eigen::VectorXd::Zero(m);
  Eigen::VectorXd r_beta0 = Eigen::VectorXd::Zero(m);
  Eigen::MatrixXd info_alpha = Eigen::MatrixXd::Zero(m, m);
  Eigen::MatrixXd d_s1 = Eigen::MatrixXd::Zero(m, m);
  Eigen::MatrixXd d_s0 = Eigen::MatrixXd::Zero(m, m);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto xi = xr.row(i).transpose();
    // d(e)/d(alpha) = e(1-e) x folded against the 1/e^2-type weights
    const double w_alpha = a[i] * (y[i] - mu1[i]) * (1.0 - ec[i]) / ec[i] +
                           (1.0 - a[i]) * (y[i] - mu0[i]) * ec[i] / (1.0 - ec[i]);
    r_alpha.noalias() += w_alpha * xi;
    r_beta1.noalias() += (1.0 - a[i] / ec[i]) * xi;
    r_beta0.noalias() += (1.0 - (1.0 - a[i]) / (1.0 - ec[i])) * xi;
    const double v = er[i] * (1.0 - er[i]);
    info_alpha.noalias() += v * xi * xi.transpose();
    if (a[i] == 1.0) {
      d_s1.noalias() += xi * xi.transpose();
    } else {
      d_s0.noalias() += xi * xi.transpose();
    }
  }
  const double dn = double(n);
  r_alpha /= dn;
  r_beta1 /= dn;
  r_beta0 /= dn;
  info_alpha /= dn;
  d_s1 /= dn;  // -E(dS_1) for the linear outcome model
  d_s0 /= dn;

  const CheckedSolver alpha_solver(info_alpha, "PS Fisher information");
  const CheckedSolver s1_solver(d_s1, "treated outcome derivative matrix");
  const CheckedSolver s0_solver(d_s0, "control outcome derivative matrix");

  const Eigen::VectorXd alpha_w = alpha_solver.solve(r_alpha);
  const Eigen::VectorXd b1_w = s1_solver.solve(r_beta1);
  const Eigen::VectorXd b0_w = s0_solver.solve(r_beta0);

  Eigen::VectorXd psi(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto xi = xr.row(i).transpose();
    const double core =
        aipw_core(a[i], y[i], ec[i], mu1[i], mu0[i]);
    const double s_alpha = (a[i] - er[i]) * alpha_w.dot(xi);
    // S_{1i} = A_i x_i (y_i - mu1_i); the minus sign of E(dS_1) = -d_s1
    // cancels against the minus in front of the beta1 correction.
    const double s_b1 = a[i] * (y[i] - mu1[i]) * b1_w.dot(xi);
    const double s_b0 = (1.0 - a[i]) * (y[i] - mu0[i]) * b0_w.dot(xi);
    psi[i] = core + s_alpha + s_b1 - s_b0 - tau_hat;
  }
  if (!psi.allFinite()) {
    throw NonFiniteError("influence values overflowed");
  }
  return psi;
}

Interval wald_interval(const Eigen::VectorXd& psi, double tau_hat) {
  const double n = double(psi.size());
  const double se = std::sqrt(psi.squaredNorm()) / n;
  return {se, tau_hat - kZ975 * se, tau_hat + kZ975 * se};
}

double bootstrap_se(const Dataset& data, const IndexSet& set,
                    const AipwOptions& options) {
  const int B = options.bootstrap_reps;
  if (B < 2) throw SchemaError("bootstrap needs at least 2 replicates");
  const Eigen::Index n = data.n();
  std::vector<double> taus(size_t(B), std::numeric_limits<double>::quiet_NaN());

  auto one_replicate = [&](int b) {
    Philox rng(options.seed,
               options.stream_base + streams::kBootstrapBase + std::uint64_t(b));
    Dataset res;
    res.column_names = data.column_names;
    res.y.resize(n);
    res.a.resize(n);
    res.x.resize(n, data.p());
    for (Eigen::Index i = 0; i < n; ++i) {
      const auto row = Eigen::Index(rng.next_below(std::uint64_t(n)));
      res.y[i] = data.y[row];
      res.a[i] = data.a[row];
      res.x.row(i) = data.x.row(row);
    }
    try {
      IndexSet use = set;
      if (options.bootstrap_reselect) {
        SelectionConfig cfg = *options.bootstrap_reselect;
        cfg.stream_base = options.stream_base + streams::kBootstrapBase +
                          std::uint64_t(b) + 1;
        use = strategy_set(select_variables(res, cfg),
                           options.reselect_strategy);
      }
      const RefitModels models = build_refit(res, use, options.clip);
      taus[size_t(b)] = aipw_point(res, models);
    } catch (const Error&) {
      // degenerate resample (single-arm, collinear); skipped in the SD
    }
  };

  if (options.workers <= 1) {
    for (int b = 0; b < B; ++b) one_replicate(b);
  } else {
    std::atomic<int> next{0};
    auto worker = [&] {
      for (int b = next.fetch_add(1); b < B; b = next.fetch_add(1)) {
        one_replicate(b);
      }
    };
    std::vector<std::thread> pool;
    for (int w = 0; w < options.workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  // Fixed-order reduction over replicate index.
  double sum = 0.0;
  long k = 0;
  for (double t : taus) {
    if (std::isfinite(t)) {
      sum += t;
      ++k;
    }
  }
  if (k < 2) throw SingularInformationError("all bootstrap replicates failed");
  const double mean = sum / double(k);
  double ss = 0.0;
  for (double t : taus) {
    if (std::isfinite(t)) ss += (t - mean) * (t - mean);
  }
  return std::sqrt(ss / double(k - 1));
}

AipwEstimate estimate_ace(const Dataset& data, const RefitModels& models,
                          Strategy label, const AipwOptions& options) {
  AipwEstimate est;
  est.strategy = label;
  est.adjustment_set = models.restriction_set;
  est.tau_hat = aipw_point(data, models);

  bool use_bootstrap = options.variance == VarianceMethod::Bootstrap;
  if (!use_bootstrap) {
    try {
      est.psi_hat = influence_values(data, models, est.tau_hat);
      const Interval iv = wald_interval(est.psi_hat, est.tau_hat);
      est.se = iv.se;
      est.ci_lower = iv.lo;
      est.ci_upper = iv.hi;
      est.variance_method = VarianceMethod::Analytic;
      return est;
    } catch (const SingularInformationError&) {
      if (options.bootstrap_reps < 2) throw;
      use_bootstrap = true;
      est.information_fallback = true;
    }
  }

  est.se = bootstrap_se(data, models.restriction_set, options);
  est.ci_lower = est.tau_hat - kZ975 * est.se;
  est.ci_upper = est.tau_hat + kZ975 * est.se;
  est.variance_method = VarianceMethod::Bootstrap;
  return est;
}

}  // namespace drselect
