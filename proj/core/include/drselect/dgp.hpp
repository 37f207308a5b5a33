#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <utility>

#include "drselect/dataset.hpp"

namespace drselect {

// Simulation settings: which of the two generating forms each nuisance
// takes. Fitting is always linear/logistic, so B, C, D are misspecified by
// construction (PS, OM, and both, respectively).
enum class Setting { A, B, C, D };

inline char setting_char(Setting s) {
  switch (s) {
    case Setting::A: return 'a';
    case Setting::B: return 'b';
    case Setting::C: return 'c';
    case Setting::D: return 'd';
  }
  return '?';
}

struct ScenarioSpec {
  int scenario = 1;  // 1..4
  Setting setting = Setting::A;
  int n = 5000;
  int p = 50;
  std::uint64_t seed = 0;
  std::uint64_t stream_base = 0;

  void validate() const;

  bool ps_nonlinear() const {
    return setting == Setting::B || setting == Setting::D;
  }
  bool om_nonlinear() const {
    return setting == Setting::C || setting == Setting::D;
  }

  // Generating coefficient vectors, length p with the intercept first.
  Eigen::VectorXd alpha1() const;  // linear PS
  Eigen::VectorXd alpha2() const;  // nonlinear PS
  Eigen::VectorXd beta0() const;
  Eigen::VectorXd beta1() const;

  // Oracle variable sets (scenario-determined; the nonlinear forms share
  // the supports of the linear ones).
  IndexSet true_m_alpha() const;
  IndexSet true_m_beta() const;
  IndexSet true_u() const { return set_union(true_m_alpha(), true_m_beta()); }
  IndexSet true_i() const {
    return set_intersection(true_m_alpha(), true_m_beta());
  }
};

struct OracleTruth {
  Eigen::VectorXd true_ps;  // e_i used to draw A_i
  Eigen::VectorXd y0;       // potential outcomes (noise included)
  Eigen::VectorXd y1;
  IndexSet m_alpha, m_beta, u, i;
};

// Draws a dataset: covariates are iid standard normal, A ~ Bernoulli(e_i),
// Y = A*Y(1) + (1-A)*Y(0). Pure function of (spec.seed, spec.stream_base).
std::pair<Dataset, OracleTruth> generate(const ScenarioSpec& spec);

// True propensity and noise-free potential-outcome means at a covariate row
// (length p, intercept first).
double true_logit(const ScenarioSpec& spec, const Eigen::VectorXd& row);
double potential_mean(const ScenarioSpec& spec, int arm,
                      const Eigen::VectorXd& row);

struct AceEstimate {
  double value = 0.0;
  double se = 0.0;
};

// Seeded Monte Carlo mean of Y(1)-Y(0) under the spec's outcome model,
// using antithetic covariate pairs (additive noise integrates to zero and
// is excluded). For the linear outcome model the pairing cancels the odd
// integrand exactly, so the estimate is 0 up to rounding.
AceEstimate true_ace(const ScenarioSpec& spec, std::int64_t mc_draws);

}  // namespace drselect
