#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>

#include "drselect/refit.hpp"
#include "drselect/selection.hpp"

namespace drselect {

enum class VarianceMethod { Analytic, Bootstrap };

struct AipwEstimate {
  double tau_hat = 0.0;
  Eigen::VectorXd psi_hat;  // estimated per-unit influence values, mean 0
  double se = 0.0;
  double ci_lower = 0.0;
  double ci_upper = 0.0;
  VarianceMethod variance_method = VarianceMethod::Analytic;
  Strategy strategy = Strategy::Union;
  IndexSet adjustment_set;
  bool information_fallback = false;  // analytic failed, bootstrap used
};

struct AipwOptions {
  VarianceMethod variance = VarianceMethod::Analytic;
  int bootstrap_reps = 500;
  std::uint64_t seed = 0;
  std::uint64_t stream_base = 0;
  ClipBounds clip{};
  int workers = 1;  // bootstrap replicate threads
  // When set, each bootstrap resample re-runs variable selection with this
  // configuration before refitting (off by default: the resample reuses the
  // original adjustment set).
  std::optional<SelectionConfig> bootstrap_reselect;
  Strategy reselect_strategy = Strategy::Union;
};

// 95% Wald critical value.
inline constexpr double kZ975 = 1.959964;

// AIPW point estimate of the ACE using the clipped fitted propensities.
double aipw_point(const Dataset& data, const RefitModels& models);

// Plug-in influence values: the AIPW core term plus the three
// nuisance-estimation corrections, centered at tau_hat. Throws
// SingularInformationError when the estimated PS Fisher information or an
// outcome derivative matrix is numerically singular.
Eigen::VectorXd influence_values(const Dataset& data, const RefitModels& models,
                                 double tau_hat);

// se = sqrt(sum psi^2)/n and the 95% Wald interval around tau_hat.
struct Interval {
  double se, lo, hi;
};
Interval wald_interval(const Eigen::VectorXd& psi, double tau_hat);

// Nonparametric bootstrap SE: resample rows with replacement, refit on the
// same adjustment set (or reselect when configured), recompute tau.
// Replicates own substreams and reduce in index order, so the result is
// independent of the worker count.
double bootstrap_se(const Dataset& data, const IndexSet& set,
                    const AipwOptions& options);

// Full estimate: point, influence, variance (with bootstrap fallback when
// the information matrix is singular and bootstrap_reps > 0).
AipwEstimate estimate_ace(const Dataset& data, const RefitModels& models,
                          Strategy label, const AipwOptions& options);

}  // namespace drselect
