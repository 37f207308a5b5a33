#pragma once

#include <Eigen/Dense>

#include "drselect/dataset.hpp"

namespace drselect {

struct ClipBounds {
  double lo = 0.01;
  double hi = 0.99;

  void validate() const {
    if (!(0.0 < lo && lo < hi && hi < 1.0)) {
      throw SchemaError("clip bounds must satisfy 0 < lo < hi < 1");
    }
  }
};

// Unpenalized refits restricted to an index set. Coefficient vectors are
// full length p with exact zeros off restriction_set + intercept.
struct RefitModels {
  Eigen::VectorXd alpha_hat;
  Eigen::VectorXd beta0_hat;
  Eigen::VectorXd beta1_hat;
  Eigen::VectorXd fitted_ps;      // clipped into [lo, hi]
  Eigen::VectorXd fitted_ps_raw;  // the ML fitted values, used for scores
  Eigen::VectorXd fitted_mu0;
  Eigen::VectorXd fitted_mu1;
  IndexSet restriction_set;
  bool ps_separated = false;
  int clipping_events = 0;
};

// OLS of Y on [intercept, X_set] for one arm; errors with the collinear
// columns on rank deficiency. Returns a length-p embedded coefficient vector.
Eigen::VectorXd refit_outcome(const Dataset& arm_data, const IndexSet& set);

// ML logistic regression of A on [intercept, X_set] by damped Newton
// (step halving on likelihood decrease). Divergence (|coef| > 1e3) sets
// *separated and returns the last stable iterate.
Eigen::VectorXd refit_ps(const Dataset& data, const IndexSet& set,
                         bool* separated = nullptr);

RefitModels build_refit(const Dataset& data, const IndexSet& set,
                        const ClipBounds& clip = {});

}  // namespace drselect
