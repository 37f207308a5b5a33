#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "drselect/dataset.hpp"
#include "drselect/scad.hpp"

namespace drselect {

enum class GlmFamily { Gaussian, Binomial };

// Rule for the data-derived upper end of the lambda grid.
//   NullGradient: smallest lambda with an all-zero penalized solution,
//     max_j |gradient_j| at the intercept-only fit.
//   DesignEigenvalue: largest eigenvalue of the non-intercept Gram matrix
//     X'X/n (the ncvreg-documented default, kept as an alternative).
enum class LambdaMaxRule { NullGradient, DesignEigenvalue };

struct LambdaGrid {
  double lambda_min = 0.1;
  double lambda_max = 0.0;  // <= 0: derive from the data via `rule`
  int count = 100;
  int folds = 10;
  LambdaMaxRule rule = LambdaMaxRule::NullGradient;
};

struct CvEntry {
  double lambda;
  double mean_loss;  // CV squared error (gaussian) or deviance (binomial)
  double sd_loss;    // across folds, n-1 denominator
};

struct PenalizedFit {
  Eigen::VectorXd coefficients;  // length p, [0] is the unpenalized intercept
  IndexSet active_set;           // nonzero non-intercept coefficients
  double lambda_used = 0.0;
  bool converged = false;
  int iterations = 0;  // coordinate sweeps of the final fit
  bool separation_warning = false;  // binomial: |linear predictor| > 30
  std::vector<CvEntry> cv_table;    // descending lambda (path order)
};

struct CvChoice {
  double lambda_star = 0.0;
  std::vector<CvEntry> table;
};

// Materialized grid, log-uniform, descending from lambda_max to lambda_min.
std::vector<double> materialize_grid(GlmFamily family, const Dataset& data,
                                     const LambdaGrid& grid);

// K-fold cross-validation over the grid. Fold assignment is a seeded
// shuffle of the rows into contiguous blocks; ties in mean loss resolve to
// the larger lambda. `params.lambda` is ignored (the grid supplies it).
CvChoice cross_validate(GlmFamily family, const Dataset& data,
                        const LambdaGrid& grid, const ScadParams& params,
                        std::uint64_t seed, std::uint64_t stream);

// SCAD-penalized least squares on a single-arm dataset, 1/n_arm
// normalization, intercept unpenalized, lambda chosen by CV.
PenalizedFit fit_penalized_linear(const Dataset& arm_data,
                                  const LambdaGrid& grid,
                                  const ScadParams& params, std::uint64_t seed,
                                  std::uint64_t stream);

// SCAD-penalized logistic regression of A on X via coordinate descent on a
// fixed-curvature quadratic majorization (curvature = col mean square / 4,
// an upper bound on the per-coordinate deviance curvature, so sweeps never
// increase the objective). Lambda chosen by CV on binomial deviance.
PenalizedFit fit_penalized_logistic(const Dataset& data,
                                    const LambdaGrid& grid,
                                    const ScadParams& params,
                                    std::uint64_t seed, std::uint64_t stream);

}  // namespace drselect
