#pragma once

#include "drselect/errors.hpp"

namespace drselect {

// SCAD penalty family: lambda is the regularization strength, a > 2 the
// concavity knee (3.7 by convention).
struct ScadParams {
  double lambda = 0.0;
  double a = 3.7;

  void validate() const {
    if (lambda < 0.0) throw SchemaError("SCAD lambda must be nonnegative");
    if (a <= 2.0) throw SchemaError("SCAD a must exceed 2");
  }
};

// Penalty rate q_lambda(|theta|): lambda on [0, lambda), then the linearly
// decaying (a*lambda - |theta|)_+ / (a-1) segment, zero beyond a*lambda.
double scad_rate(double theta_abs, const ScadParams& params);

// Penalty primitive P_lambda with P(0) = 0 and P' = q_lambda:
//   lambda*t                                   t <= lambda
//   lambda^2 + (a*lambda*(t-lambda) - (t^2-lambda^2)/2)/(a-1)
//                                              lambda < t <= a*lambda
//   (a+1)*lambda^2/2                           t >  a*lambda
double scad_penalty(double theta_abs, const ScadParams& params);

// Global minimizer of f(b) = c/2 * (b - z/c)^2 + P_lambda(|b|), the exact
// univariate subproblem of SCAD coordinate descent with quadratic
// coefficient c > 0. Reduces to soft-thresholding for small |z|/c and to
// the unpenalized solution z/c for |z|/c >= a*lambda.
double scad_threshold(double z, double step_curvature,
                      const ScadParams& params);

}  // namespace drselect
