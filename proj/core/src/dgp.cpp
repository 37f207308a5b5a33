#include "drselect/dgp.hpp"

#include <cmath>
#include <string>

#include "drselect/rng.hpp"

namespace drselect {

namespace {

inline double expit(double eta) {
  if (eta >= 0.0) {
    return 1.0 / (1.0 + std::exp(-eta));
  }
  const double e = std::exp(eta);
  return e / (1.0 + e);
}

Eigen::VectorXd pattern(int p, std::initializer_list<double> head) {
  Eigen::VectorXd v = Eigen::VectorXd::Zero(p);
  int k = 0;
  for (double c : head) v[k++] = c;
  return v;
}

}  // namespace

void ScenarioSpec::validate() const {
  if (scenario < 1 || scenario > 4) throw SchemaError("scenario must be 1..4");
  if (p < 8) throw SchemaError("scenario designs need p >= 8");
  if (n < 2) throw SchemaError("n must be at least 2");
}

// Scenario patterns: instrumental variables X1,X2 appear in scenarios 1 and
// 4, precision variables X5,X6 in scenarios 1 and 3, and the confounders
// X3,X4 everywhere.
Eigen::VectorXd ScenarioSpec::alpha1() const {
  return scenario == 1 || scenario == 4 ? pattern(p, {0, 1, 1, 1, 1})
                                        : pattern(p, {0, 0, 0, 1, 1});
}

Eigen::VectorXd ScenarioSpec::alpha2() const {
  return scenario == 1 || scenario == 4 ? pattern(p, {0, 3, 3, 3, 3})
                                        : pattern(p, {0, 0, 0, 3, 3});
}

Eigen::VectorXd ScenarioSpec::beta0() const {
  return scenario == 1 || scenario == 3 ? pattern(p, {1, 0, 0, 1, 1, 1, 1})
                                        : pattern(p, {1, 0, 0, 1, 1});
}

Eigen::VectorXd ScenarioSpec::beta1() const {
  return scenario == 1 || scenario == 3 ? pattern(p, {1, 0, 0, 2, 2, 2, 2})
                                        : pattern(p, {1, 0, 0, 2, 2});
}

IndexSet ScenarioSpec::true_m_alpha() const {
  return scenario == 1 || scenario == 4 ? IndexSet::of({1, 2, 3, 4})
                                        : IndexSet::of({3, 4});
}

IndexSet ScenarioSpec::true_m_beta() const {
  return scenario == 1 || scenario == 3 ? IndexSet::of({3, 4, 5, 6})
                                        : IndexSet::of({3, 4});
}

double true_logit(const ScenarioSpec& spec, const Eigen::VectorXd& row) {
  if (!spec.ps_nonlinear()) {
    return spec.alpha1().dot(row);
  }
  const Eigen::VectorXd a2 = spec.alpha2();
  double eta = 3.5 - std::cos(row[3] + row[4]);
  for (int j = 1; j < spec.p; ++j) {
    if (a2[j] != 0.0) {
      eta += a2[j] * std::log(std::max(row[j] * row[j], 1e-12));
    }
  }
  return eta;
}

double potential_mean(const ScenarioSpec& spec, int arm,
                      const Eigen::VectorXd& row) {
  const Eigen::VectorXd beta = arm == 1 ? spec.beta1() : spec.beta0();
  const double lin = beta.dot(row);
  if (!spec.om_nonlinear()) {
    return lin;
  }
  // Coefficient positions 4..7 (1-based, intercept first) multiply X3..X6.
  const double cos_arg = beta[3] * row[3] + beta[4] * row[4];
  const double tail = beta[5] * row[5] - beta[6] * row[6];
  return arm == 1 ? 1.0 + std::exp(2.0 * std::sin(lin)) - std::cos(cos_arg) + tail
                  : 1.0 + std::exp(std::sin(lin)) - 2.0 * std::cos(cos_arg) + tail;
}

std::pair<Dataset, OracleTruth> generate(const ScenarioSpec& spec) {
  spec.validate();
  const int n = spec.n, p = spec.p;
  Philox rng(spec.seed, spec.stream_base + streams::kDgp);

  Dataset data;
  data.y.resize(n);
  data.a.resize(n);
  data.x.resize(n, p);
  data.column_names.resize(size_t(p));
  data.column_names[0] = "(intercept)";
  for (int j = 1; j < p; ++j) data.column_names[size_t(j)] = "X" + std::to_string(j);

  OracleTruth truth;
  truth.true_ps.resize(n);
  truth.y0.resize(n);
  truth.y1.resize(n);
  truth.m_alpha = spec.true_m_alpha();
  truth.m_beta = spec.true_m_beta();
  truth.u = spec.true_u();
  truth.i = spec.true_i();

  Eigen::VectorXd row(p);
  row[0] = 1.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 1; j < p; ++j) row[j] = rng.next_normal();
    data.x.row(i) = row;
    const double e = expit(true_logit(spec, row));
    truth.true_ps[i] = e;
    data.a[i] = double(rng.next_bernoulli(e));
    truth.y0[i] = potential_mean(spec, 0, row) + rng.next_normal();
    truth.y1[i] = potential_mean(spec, 1, row) + rng.next_normal();
    data.y[i] = data.a[i] == 1.0 ? truth.y1[i] : truth.y0[i];
  }
  return {std::move(data), std::move(truth)};
}

AceEstimate true_ace(const ScenarioSpec& spec, std::int64_t mc_draws) {
  spec.validate();
  if (mc_draws < 2) throw SchemaError("true_ace needs at least 2 draws");
  Philox rng(spec.seed, spec.stream_base + streams::kAceOracle);
  const std::int64_t pairs = (mc_draws + 1) / 2;

  Eigen::VectorXd row(spec.p), neg(spec.p);
  row[0] = 1.0;
  neg[0] = 1.0;
  double sum = 0.0, sumsq = 0.0;
  for (std::int64_t k = 0; k < pairs; ++k) {
    for (int j = 1; j < spec.p; ++j) {
      row[j] = rng.next_normal();
      neg[j] = -row[j];
    }
    const double d = 0.5 * (potential_mean(spec, 1, row) -
                            potential_mean(spec, 0, row) +
                            potential_mean(spec, 1, neg) -
                            potential_mean(spec, 0, neg));
    sum += d;
    sumsq += d * d;
  }
  const double mean = sum / double(pairs);
  const double var =
      std::max(0.0, (sumsq - double(pairs) * mean * mean) / double(pairs - 1));
  return {mean, std::sqrt(var / double(pairs))};
}

}  // namespace drselect
