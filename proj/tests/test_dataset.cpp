#include <doctest.h>

#include <cmath>

#include "drselect/dataset.hpp"
#include "drselect/rng.hpp"

using namespace drselect;

namespace {

Dataset tiny(std::initializer_list<double> a_vals) {
  const Eigen::Index n = Eigen::Index(a_vals.size());
  Dataset d;
  d.y = Eigen::VectorXd::LinSpaced(n, 1.0, double(n));
  d.a.resize(n);
  Eigen::Index i = 0;
  for (double v : a_vals) d.a[i++] = v;
  d.x.resize(n, 2);
  d.x.col(0).setOnes();
  d.x.col(1) = Eigen::VectorXd::LinSpaced(n, -1.0, 1.0);
  d.column_names = {"(intercept)", "X1"};
  return d;
}

Dataset random_dataset(int n, int p, std::uint64_t seed) {
  Philox rng(seed, 0);
  Dataset d;
  d.y.resize(n);
  d.a.resize(n);
  d.x.resize(n, p);
  d.column_names.resize(size_t(p));
  d.column_names[0] = "(intercept)";
  for (int j = 1; j < p; ++j) d.column_names[size_t(j)] = "X" + std::to_string(j);
  for (int i = 0; i < n; ++i) {
    d.x(i, 0) = 1.0;
    for (int j = 1; j < p; ++j) d.x(i, j) = 5.0 + 2.0 * rng.next_normal();
    d.a[i] = double(rng.next_bernoulli(0.5));
    d.y[i] = rng.next_normal();
  }
  // force both arms nonempty
  d.a[0] = 1.0;
  d.a[1] = 0.0;
  return d;
}

}  // namespace

TEST_CASE("two-point column standardizes to a symmetric unit-SD pair") {
  Dataset d = tiny({1, 0});
  d.x(0, 1) = 1.0;
  d.x(1, 1) = 3.0;
  auto [std_d, s] = standardize(d);
  // sample SD (n-1 denominator): (1,3) has mean 2 and SD sqrt(2)
  CHECK(s.mean[0] == doctest::Approx(2.0));
  CHECK(s.scale[0] == doctest::Approx(std::sqrt(2.0)));
  CHECK(std_d.x(0, 1) == doctest::Approx(-1.0 / std::sqrt(2.0)));
  CHECK(std_d.x(1, 1) == doctest::Approx(1.0 / std::sqrt(2.0)));
  const double mean = std_d.x.col(1).mean();
  const double sd = std::sqrt((std_d.x.col(1).array() - mean).square().sum() /
                              double(std_d.n() - 1));
  CHECK(std::abs(mean) < 1e-10);
  CHECK(std::abs(sd - 1.0) < 1e-10);
}

TEST_CASE("standardize is idempotent on a standardized column") {
  Dataset d = random_dataset(500, 4, 11);
  auto [once, s1] = standardize(d);
  auto [twice, s2] = standardize(once);
  CHECK((twice.x - once.x).cwiseAbs().maxCoeff() < 1e-12);
  for (int j = 0; j < 3; ++j) {
    CHECK(std::abs(s2.mean[j]) < 1e-12);
    CHECK(std::abs(s2.scale[j] - 1.0) < 1e-12);
  }
}

TEST_CASE("recorded moments match the sampling distribution") {
  // N(5, 2^2) draws: recorded mean within 3*SE of 5, scale within 3*SE of 2
  const int n = 1000;
  Dataset d = random_dataset(n, 2, 123);
  auto [std_d, s] = standardize(d);
  (void)std_d;
  const double se_mean = 2.0 / std::sqrt(double(n));
  const double se_sd = 2.0 / std::sqrt(2.0 * double(n - 1));
  CHECK(std::abs(s.mean[0] - 5.0) < 3.0 * se_mean);
  CHECK(std::abs(s.scale[0] - 2.0) < 3.0 * se_sd);
}

TEST_CASE("standardize then unstandardize is the identity") {
  Dataset d = random_dataset(200, 6, 77);
  auto [std_d, s] = standardize(d);
  const Dataset back = unstandardize(std_d, s);
  for (Eigen::Index i = 0; i < d.n(); ++i) {
    for (Eigen::Index j = 0; j < d.p(); ++j) {
      CHECK(back.x(i, j) ==
            doctest::Approx(d.x(i, j)).epsilon(1e-12));
    }
  }
}

TEST_CASE("constant column is rejected") {
  Dataset d = tiny({1, 0, 1});
  d.x.col(1).setConstant(4.0);
  CHECK_THROWS_AS(standardize(d), ConstantColumnError);
}

TEST_CASE("non-finite input is rejected") {
  Dataset d = tiny({1, 0, 1});
  d.y[1] = std::nan("");
  CHECK_THROWS_AS(d.validate(), NonFiniteError);
}

TEST_CASE("split_by_arm partitions rows") {
  Dataset d = tiny({1, 0, 1});
  auto [t, c] = split_by_arm(d);
  REQUIRE(t.n() == 2);
  REQUIRE(c.n() == 1);
  CHECK(t.y[0] == d.y[0]);
  CHECK(t.y[1] == d.y[2]);
  CHECK(c.y[0] == d.y[1]);
  CHECK(t.x.row(1) == d.x.row(2));
}

TEST_CASE("split_by_arm rejects an empty arm") {
  Dataset d = tiny({1, 1, 1});
  CHECK_THROWS_AS(split_by_arm(d), EmptyArmError);
}

TEST_CASE("split preserves counts on a large draw") {
  Dataset d = random_dataset(5000, 8, 999);
  auto [t, c] = split_by_arm(d);
  CHECK(t.n() + c.n() == 5000);
  CHECK(t.a.minCoeff() == 1.0);
  CHECK(c.a.maxCoeff() == 0.0);
}

TEST_CASE("index set algebra") {
  const IndexSet ma = IndexSet::of({1, 3});
  const IndexSet mb = IndexSet::of({2});
  CHECK(set_union(ma, mb) == IndexSet::of({1, 2, 3}));
  CHECK(set_intersection(ma, mb).empty());

  CHECK(set_union(ma, ma) == ma);
  CHECK(set_intersection(ma, ma) == ma);

  const IndexSet none;
  const IndexSet s57 = IndexSet::of({5, 7});
  CHECK(set_union(none, s57) == s57);
  CHECK(set_intersection(none, s57).empty());
}

TEST_CASE("index set property battery") {
  Philox rng(2024, 0);
  for (int rep = 0; rep < 200; ++rep) {
    std::vector<int> av, bv;
    for (int j = 1; j <= 12; ++j) {
      if (rng.next_bernoulli(0.4)) av.push_back(j);
      if (rng.next_bernoulli(0.4)) bv.push_back(j);
    }
    const IndexSet a = IndexSet::of(av), b = IndexSet::of(bv);
    const IndexSet u = set_union(a, b), i = set_intersection(a, b);
    CHECK(set_union(b, a) == u);
    CHECK(set_intersection(b, a) == i);
    CHECK(set_union(set_union(a, b), a) == u);
    // I subset of both, both subsets of U
    CHECK(set_intersection(i, a) == i);
    CHECK(set_intersection(i, b) == i);
    CHECK(set_union(a, u) == u);
    CHECK(set_union(b, u) == u);
  }
}

TEST_CASE("index set rejects the intercept") {
  CHECK_THROWS_AS(IndexSet::of({0, 1}), SchemaError);
}
