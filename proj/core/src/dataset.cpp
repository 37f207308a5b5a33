#include "drselect/dataset.hpp"

#include <algorithm>
#include <cmath>

namespace drselect {

IndexSet IndexSet::of(std::vector<int> indices) {
  std::sort(indices.begin(), indices.end());
  indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
  if (!indices.empty() && indices.front() < 1) {
    throw SchemaError("index set may not contain the intercept or negative indices");
  }
  IndexSet s;
  s.idx_ = std::move(indices);
  return s;
}

IndexSet IndexSet::full(int p) {
  std::vector<int> all(static_cast<std::size_t>(p > 1 ? p - 1 : 0));
  for (int j = 1; j < p; ++j) all[static_cast<std::size_t>(j - 1)] = j;
  return of(std::move(all));
}

bool IndexSet::contains(int j) const {
  return std::binary_search(idx_.begin(), idx_.end(), j);
}

IndexSet set_union(const IndexSet& a, const IndexSet& b) {
  std::vector<int> out;
  out.reserve(a.size() + b.size());
  std::set_union(a.indices().begin(), a.indices().end(), b.indices().begin(),
                 b.indices().end(), std::back_inserter(out));
  return IndexSet::of(std::move(out));
}

IndexSet set_intersection(const IndexSet& a, const IndexSet& b) {
  std::vector<int> out;
  std::set_intersection(a.indices().begin(), a.indices().end(),
                        b.indices().begin(), b.indices().end(),
                        std::back_inserter(out));
  return IndexSet::of(std::move(out));
}

IndexSet set_difference(const IndexSet& a, const IndexSet& b) {
  std::vector<int> out;
  std::set_difference(a.indices().begin(), a.indices().end(),
                      b.indices().begin(), b.indices().end(),
                      std::back_inserter(out));
  return IndexSet::of(std::move(out));
}

Dataset Dataset::create(Eigen::VectorXd y, Eigen::VectorXd a, Eigen::MatrixXd x,
                        std::vector<std::string> column_names,
                        bool require_both_arms) {
  Dataset d{std::move(y), std::move(a), std::move(x), std::move(column_names)};
  d.validate(require_both_arms);
  return d;
}

void Dataset::validate(bool require_both_arms) const {
  const Eigen::Index rows = x.rows();
  if (y.size() != rows || a.size() != rows) {
    throw SchemaError("Y, A, and X row counts disagree");
  }
  if (rows < 2) throw SchemaError("need at least two observations");
  if (static_cast<Eigen::Index>(column_names.size()) != x.cols()) {
    throw SchemaError("column_names length does not match X");
  }
  if (!y.allFinite() || !a.allFinite() || !x.allFinite()) {
    throw NonFiniteError("dataset contains NaN or Inf");
  }
  for (Eigen::Index i = 0; i < rows; ++i) {
    if (a[i] != 0.0 && a[i] != 1.0) {
      throw SchemaError("treatment column is not binary at row " +
                        std::to_string(i));
    }
    if (x(i, 0) != 1.0) {
      throw SchemaError("column 0 of X must be identically 1");
    }
  }
  if (require_both_arms) {
    const Eigen::Index n1 = n_treated();
    if (n1 == 0) throw EmptyArmError(1);
    if (n1 == rows) throw EmptyArmError(0);
  }
}

std::pair<Dataset, Standardization> standardize(const Dataset& data) {
  data.validate(false);
  const Eigen::Index n = data.n(), p = data.p();
  Standardization s;
  s.mean.resize(p - 1);
  s.scale.resize(p - 1);
  Dataset out = data;
  for (Eigen::Index j = 1; j < p; ++j) {
    const auto col = data.x.col(j);
    const double mu = col.mean();
    const double var = (col.array() - mu).square().sum() / double(n - 1);
    if (var <= 0.0) throw ConstantColumnError(int(j), data.column_names[j]);
    const double sd = std::sqrt(var);
    s.mean[j - 1] = mu;
    s.scale[j - 1] = sd;
    out.x.col(j) = (col.array() - mu) / sd;
  }
  return {std::move(out), std::move(s)};
}

Dataset unstandardize(const Dataset& data, const Standardization& s) {
  Dataset out = data;
  for (Eigen::Index j = 1; j < data.p(); ++j) {
    out.x.col(j) = data.x.col(j).array() * s.scale[j - 1] + s.mean[j - 1];
  }
  return out;
}

std::pair<Dataset, Dataset> split_by_arm(const Dataset& data) {
  data.validate(true);
  const Eigen::Index n = data.n(), p = data.p();
  const Eigen::Index n1 = data.n_treated(), n0 = n - n1;
  Dataset t, c;
  t.y.resize(n1); t.a.resize(n1); t.x.resize(n1, p);
  c.y.resize(n0); c.a.resize(n0); c.x.resize(n0, p);
  t.column_names = data.column_names;
  c.column_names = data.column_names;
  Eigen::Index it = 0, ic = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (data.a[i] == 1.0) {
      t.y[it] = data.y[i]; t.a[it] = 1.0; t.x.row(it) = data.x.row(i); ++it;
    } else {
      c.y[ic] = data.y[i]; c.a[ic] = 0.0; c.x.row(ic) = data.x.row(i); ++ic;
    }
  }
  return {std::move(t), std::move(c)};
}

}  // namespace drselect
