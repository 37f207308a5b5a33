#include "drselect/penalized.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numeric>

#include "drselect/rng.hpp"

namespace drselect {

namespace {

constexpr double kSweepTol = 1e-7;
constexpr int kMaxSweeps = 10000;

inline double expit(double eta) {
  if (eta >= 0.0) {
    return 1.0 / (1.0 + std::exp(-eta));
  }
  const double e = std::exp(eta);
  return e / (1.0 + e);
}

// Coordinate-descent state for one design. Gaussian tracks the residual,
// binomial tracks the linear predictor and fitted probabilities.
class CdState {
public:
  CdState(const Eigen::MatrixXd& x, const Eigen::VectorXd& resp,
          GlmFamily family)
      : x_(x), resp_(resp), family_(family) {
    const Eigen::Index n = x.rows(), p = x.cols();
    beta_ = Eigen::VectorXd::Zero(p);
    curvature_.resize(p);
    for (Eigen::Index j = 0; j < p; ++j) {
      const double meansq = x.col(j).squaredNorm() / double(n);
      curvature_[j] =
          family == GlmFamily::Gaussian ? meansq : 0.25 * meansq;
    }
    if (family == GlmFamily::Gaussian) {
      residual_ = resp;
    } else {
      eta_ = Eigen::VectorXd::Zero(n);
      prob_ = Eigen::VectorXd::Constant(n, 0.5);
    }
  }

  const Eigen::VectorXd& beta() const { return beta_; }
  double max_abs_eta() const {
    return family_ == GlmFamily::Binomial ? eta_.cwiseAbs().maxCoeff() : 0.0;
  }

  // One pass over the given coordinates; returns the max coefficient change.
  double sweep(const std::vector<int>& coords, const ScadParams& pen) {
    double max_delta = 0.0;
    for (int j : coords) {
      const double c = curvature_[j];
      if (c <= 0.0) continue;  // all-zero column in this fold
      const double g = gradient(j);
      const double z = c * beta_[j] - g;
      const double bnew = j == 0 ? z / c : scad_threshold(z, c, pen);
      const double d = bnew - beta_[j];
      if (d != 0.0) {
        beta_[j] = bnew;
        apply_delta(j, d);
        max_delta = std::max(max_delta, std::abs(d));
      }
    }
    return max_delta;
  }

  // Fit at a single lambda from the current warm start; returns sweeps used.
  int fit(const ScadParams& pen, std::vector<int>& all, std::vector<int>& act) {
    int sweeps = 0;
    for (;;) {
      const double full_delta = sweep(all, pen);
      ++sweeps;
      if (sweeps > kMaxSweeps) throw NotConvergedError(kMaxSweeps);
      if (full_delta <= kSweepTol) return sweeps;
      act.clear();
      for (Eigen::Index j = 0; j < beta_.size(); ++j) {
        if (j == 0 || beta_[j] != 0.0) act.push_back(int(j));
      }
      for (;;) {
        const double d = sweep(act, pen);
        ++sweeps;
        if (sweeps > kMaxSweeps) throw NotConvergedError(kMaxSweeps);
        if (d <= kSweepTol) break;
      }
    }
  }

private:
  double gradient(int j) const {
    const double n = double(x_.rows());
    if (family_ == GlmFamily::Gaussian) {
      return -x_.col(j).dot(residual_) / n;
    }
    return x_.col(j).dot(prob_ - resp_) / n;
  }

  void apply_delta(int j, double d) {
    if (family_ == GlmFamily::Gaussian) {
      residual_.noalias() -= d * x_.col(j);
    } else {
      eta_.noalias() += d * x_.col(j);
      for (Eigen::Index i = 0; i < eta_.size(); ++i) prob_[i] = expit(eta_[i]);
    }
  }

  const Eigen::MatrixXd& x_;
  const Eigen::VectorXd& resp_;
  GlmFamily family_;
  Eigen::VectorXd beta_, curvature_;
  Eigen::VectorXd residual_;     // gaussian
  Eigen::VectorXd eta_, prob_;   // binomial
};

struct PathResult {
  Eigen::MatrixXd coefs;  // p x L, column l is the solution at lambdas[l]
  int last_sweeps = 0;    // sweeps spent on the final (smallest kept) lambda
  double max_abs_eta = 0.0;
};

// Warm-started solution path over descending lambdas; stops after `upto`
// columns when upto >= 0.
PathResult fit_path(const Eigen::MatrixXd& x, const Eigen::VectorXd& resp,
                    GlmFamily family, const std::vector<double>& lambdas,
                    double scad_a, int upto = -1) {
  const int limit = upto >= 0 ? upto + 1 : int(lambdas.size());
  CdState state(x, resp, family);
  PathResult out;
  out.coefs.resize(x.cols(), limit);
  std::vector<int> all(size_t(x.cols()));
  std::iota(all.begin(), all.end(), 0);
  std::vector<int> active;
  for (int l = 0; l < limit; ++l) {
    out.last_sweeps = state.fit({lambdas[size_t(l)], scad_a}, all, active);
    out.coefs.col(l) = state.beta();
  }
  out.max_abs_eta = state.max_abs_eta();
  return out;
}

// Gradient bound at the intercept-only fit, whose fitted value is the
// response mean for both families: max_j |x_j'(resp - mean)| / n.
double null_gradient_bound(const Eigen::MatrixXd& x,
                           const Eigen::VectorXd& resp) {
  const Eigen::Index n = x.rows(), p = x.cols();
  const Eigen::VectorXd centered = resp.array() - resp.mean();
  double bound = 0.0;
  for (Eigen::Index j = 1; j < p; ++j) {
    bound = std::max(bound, std::abs(x.col(j).dot(centered)) / double(n));
  }
  return bound;
}

double design_eigenvalue_bound(const Eigen::MatrixXd& x) {
  const Eigen::Index p = x.cols();
  if (p < 2) return 1.0;
  const Eigen::MatrixXd sub = x.rightCols(p - 1);
  Eigen::MatrixXd gram = sub.transpose() * sub / double(x.rows());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
  return es.eigenvalues().maxCoeff();
}

double held_out_loss(const Eigen::MatrixXd& x, const Eigen::VectorXd& resp,
                     GlmFamily family, const Eigen::VectorXd& beta) {
  const Eigen::VectorXd eta = x * beta;
  if (family == GlmFamily::Gaussian) {
    return (resp - eta).squaredNorm() / double(x.rows());
  }
  double dev = 0.0;
  for (Eigen::Index i = 0; i < eta.size(); ++i) {
    double pr = std::clamp(expit(eta[i]), 1e-10, 1.0 - 1e-10);
    dev += resp[i] == 1.0 ? -2.0 * std::log(pr) : -2.0 * std::log(1.0 - pr);
  }
  return dev / double(x.rows());
}

std::uint64_t row_content_hash(const Dataset& data, Eigen::Index i) {
  // FNV-1a over the bit patterns of (y, a, x row); NaN excluded upstream.
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&h](double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, sizeof bits);
    for (int k = 0; k < 8; ++k) {
      h ^= (bits >> (8 * k)) & 0xff;
      h *= 0x100000001b3ULL;
    }
  };
  mix(data.y[i]);
  mix(data.a[i]);
  for (Eigen::Index j = 0; j < data.p(); ++j) mix(data.x(i, j));
  return h;
}

// Seeded shuffle for fold blocks, keyed on row content so that fold
// membership (hence the chosen lambda and the selected set) does not
// depend on the order rows arrive in. Identical rows are interchangeable.
std::vector<Eigen::Index> shuffled_rows(const Dataset& data, std::uint64_t seed,
                                        std::uint64_t stream) {
  const Eigen::Index n = data.n();
  std::vector<std::uint64_t> key(static_cast<size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    key[size_t(i)] = Philox::hash64(seed, stream, row_content_hash(data, i));
  }
  std::vector<Eigen::Index> perm(static_cast<size_t>(n));
  std::iota(perm.begin(), perm.end(), Eigen::Index(0));
  std::sort(perm.begin(), perm.end(), [&](Eigen::Index a, Eigen::Index b) {
    if (key[size_t(a)] != key[size_t(b)]) return key[size_t(a)] < key[size_t(b)];
    if (data.y[a] != data.y[b]) return data.y[a] < data.y[b];
    if (data.a[a] != data.a[b]) return data.a[a] < data.a[b];
    for (Eigen::Index j = 0; j < data.p(); ++j) {
      if (data.x(a, j) != data.x(b, j)) return data.x(a, j) < data.x(b, j);
    }
    return false;
  });
  return perm;
}

PenalizedFit fit_with_cv(GlmFamily family, const Dataset& data,
                         const LambdaGrid& grid, const ScadParams& params,
                         std::uint64_t seed, std::uint64_t stream) {
  params.validate();
  const CvChoice cv = cross_validate(family, data, grid, params, seed, stream);
  const std::vector<double> lambdas = materialize_grid(family, data, grid);
  int star = 0;
  while (lambdas[size_t(star)] != cv.lambda_star) ++star;

  const PathResult path = fit_path(data.x, family == GlmFamily::Gaussian
                                               ? data.y
                                               : data.a,
                                   family, lambdas, params.a, star);
  PenalizedFit fit;
  fit.coefficients = path.coefs.col(star);
  std::vector<int> active;
  for (Eigen::Index j = 1; j < fit.coefficients.size(); ++j) {
    if (fit.coefficients[j] != 0.0) active.push_back(int(j));
  }
  fit.active_set = IndexSet::of(std::move(active));
  fit.lambda_used = cv.lambda_star;
  fit.converged = true;  // fit_path throws on non-convergence
  fit.iterations = path.last_sweeps;
  fit.separation_warning =
      family == GlmFamily::Binomial && path.max_abs_eta > 30.0;
  fit.cv_table = cv.table;
  return fit;
}

}  // namespace

std::vector<double> materialize_grid(GlmFamily family, const Dataset& data,
                                     const LambdaGrid& grid) {
  if (grid.count < 1) throw EmptyGridError("count must be at least 1");
  if (grid.lambda_min <= 0.0) throw EmptyGridError("lambda_min must be positive");
  double lo = grid.lambda_min;
  double hi = grid.lambda_max;
  if (hi <= 0.0) {
    const Eigen::VectorXd& resp =
        family == GlmFamily::Gaussian ? data.y : data.a;
    hi = grid.rule == LambdaMaxRule::NullGradient
             ? 1.0001 * null_gradient_bound(data.x, resp)
             : design_eigenvalue_bound(data.x);
    hi = std::max(hi, lo * 1.0001);  // all-noise data: grid collapses to the floor
  } else if (hi < lo) {
    throw EmptyGridError("lambda_max below lambda_min");
  }
  if (grid.count == 1 || hi == lo) return {lo};
  std::vector<double> lambdas(size_t(grid.count));
  const double lhi = std::log(hi), llo = std::log(lo);
  for (int k = 0; k < grid.count; ++k) {
    lambdas[size_t(k)] =
        std::exp(lhi + (llo - lhi) * double(k) / double(grid.count - 1));
  }
  lambdas.front() = hi;
  lambdas.back() = lo;
  return lambdas;
}

CvChoice cross_validate(GlmFamily family, const Dataset& data,
                        const LambdaGrid& grid, const ScadParams& params,
                        std::uint64_t seed, std::uint64_t stream) {
  const Eigen::Index n = data.n(), p = data.p();
  const int folds = grid.folds;
  if (folds < 2) throw EmptyGridError("need at least 2 folds");
  if (n < folds) throw TooFewRowsError(long(n), folds);

  const std::vector<double> lambdas = materialize_grid(family, data, grid);
  const int L = int(lambdas.size());
  const Eigen::VectorXd& resp = family == GlmFamily::Gaussian ? data.y : data.a;
  const std::vector<Eigen::Index> perm = shuffled_rows(data, seed, stream);

  Eigen::MatrixXd losses(folds, L);
  for (int f = 0; f < folds; ++f) {
    const Eigen::Index t0 = n * f / folds, t1 = n * (f + 1) / folds;
    const Eigen::Index ntest = t1 - t0, ntrain = n - ntest;
    Eigen::MatrixXd xtr(ntrain, p), xte(ntest, p);
    Eigen::VectorXd rtr(ntrain), rte(ntest);
    Eigen::Index it = 0, ie = 0;
    for (Eigen::Index k = 0; k < n; ++k) {
      const Eigen::Index row = perm[size_t(k)];
      if (k >= t0 && k < t1) {
        xte.row(ie) = data.x.row(row);
        rte[ie++] = resp[row];
      } else {
        xtr.row(it) = data.x.row(row);
        rtr[it++] = resp[row];
      }
    }
    const PathResult path = fit_path(xtr, rtr, family, lambdas, params.a);
    for (int l = 0; l < L; ++l) {
      losses(f, l) = held_out_loss(xte, rte, family, path.coefs.col(l));
    }
  }

  CvChoice out;
  out.table.resize(size_t(L));
  int best = 0;
  for (int l = 0; l < L; ++l) {
    const double mean = losses.col(l).mean();
    const double sd =
        folds > 1
            ? std::sqrt((losses.col(l).array() - mean).square().sum() /
                        double(folds - 1))
            : 0.0;
    out.table[size_t(l)] = {lambdas[size_t(l)], mean, sd};
    if (mean < out.table[size_t(best)].mean_loss) best = l;
  }
  out.lambda_star = lambdas[size_t(best)];
  return out;
}

PenalizedFit fit_penalized_linear(const Dataset& arm_data,
                                  const LambdaGrid& grid,
                                  const ScadParams& params, std::uint64_t seed,
                                  std::uint64_t stream) {
  if (arm_data.n() > 0) {
    const double a0 = arm_data.a[0];
    for (Eigen::Index i = 1; i < arm_data.n(); ++i) {
      if (arm_data.a[i] != a0) {
        throw SchemaError("fit_penalized_linear expects a single-arm dataset");
      }
    }
  }
  return fit_with_cv(GlmFamily::Gaussian, arm_data, grid, params, seed, stream);
}

PenalizedFit fit_penalized_logistic(const Dataset& data,
                                    const LambdaGrid& grid,
                                    const ScadParams& params,
                                    std::uint64_t seed, std::uint64_t stream) {
  data.validate(true);
  return fit_with_cv(GlmFamily::Binomial, data, grid, params, seed, stream);
}

}  // namespace drselect
