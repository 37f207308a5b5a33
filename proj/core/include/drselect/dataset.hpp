#pragma once

#include <Eigen/Dense>
#include <string>
#include <utility>
#include <vector>

#include "drselect/errors.hpp"

namespace drselect {

// Covariate index set: sorted distinct column indices in 1..p-1. Column 0 is
// the intercept and is never a member.
class IndexSet {
public:
  IndexSet() = default;

  // Sorts, deduplicates, and validates (every index >= 1).
  static IndexSet of(std::vector<int> indices);

  // All indices in 1..p-1.
  static IndexSet full(int p);

  const std::vector<int>& indices() const noexcept { return idx_; }
  bool contains(int j) const;
  std::size_t size() const noexcept { return idx_.size(); }
  bool empty() const noexcept { return idx_.empty(); }

  bool operator==(const IndexSet&) const = default;

private:
  std::vector<int> idx_;
};

IndexSet set_union(const IndexSet& a, const IndexSet& b);
IndexSet set_intersection(const IndexSet& a, const IndexSet& b);
IndexSet set_difference(const IndexSet& a, const IndexSet& b);

// Observations (Y, A, X). X is n x p with X(:,0) identically one; columns
// 1..p-1 are predictors. A holds exact 0/1 values.
struct Dataset {
  Eigen::VectorXd y;
  Eigen::VectorXd a;
  Eigen::MatrixXd x;
  std::vector<std::string> column_names;  // length p, [0] is the intercept

  Eigen::Index n() const noexcept { return y.size(); }
  Eigen::Index p() const noexcept { return x.cols(); }
  Eigen::Index n_treated() const { return static_cast<Eigen::Index>(a.sum()); }
  Eigen::Index n_control() const { return n() - n_treated(); }

  // Validates and returns the dataset; throws SchemaError / NonFiniteError /
  // EmptyArmError on violation. `require_both_arms` is relaxed for the
  // single-arm datasets produced by split_by_arm.
  static Dataset create(Eigen::VectorXd y, Eigen::VectorXd a, Eigen::MatrixXd x,
                        std::vector<std::string> column_names,
                        bool require_both_arms = true);

  void validate(bool require_both_arms = true) const;
};

// Per-column affine transform that maps each non-intercept column to sample
// mean 0 and sample standard deviation 1 (n-1 denominator).
struct Standardization {
  Eigen::VectorXd mean;   // length p-1
  Eigen::VectorXd scale;  // length p-1, strictly positive
};

std::pair<Dataset, Standardization> standardize(const Dataset& data);
Dataset unstandardize(const Dataset& data, const Standardization& s);

// Row partition by treatment; returns (treated, control).
std::pair<Dataset, Dataset> split_by_arm(const Dataset& data);

}  // namespace drselect
