#include <doctest.h>

#include <cmath>
#include <set>

#include "drselect/rng.hpp"

using namespace drselect;

TEST_CASE("philox streams are reproducible and distinct") {
  Philox a(42, 7), b(42, 7), c(42, 8), d(43, 7);
  for (int i = 0; i < 100; ++i) {
    const auto va = a.next_u64();
    CHECK(va == b.next_u64());
    CHECK(va != c.next_u64());
    CHECK(va != d.next_u64());
  }
}

TEST_CASE("uniforms live strictly inside (0,1)") {
  Philox g(1, 0);
  double lo = 1.0, hi = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const double u = g.next_uniform();
    CHECK(u > 0.0);
    CHECK(u < 1.0);
    lo = std::min(lo, u);
    hi = std::max(hi, u);
  }
  CHECK(lo < 0.01);
  CHECK(hi > 0.99);
}

TEST_CASE("normal moments match at Monte Carlo accuracy") {
  Philox g(9, 3);
  const int n = 200000;
  double sum = 0.0, sumsq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = g.next_normal();
    sum += z;
    sumsq += z * z;
  }
  const double mean = sum / n;
  const double var = sumsq / n - mean * mean;
  CHECK(std::abs(mean) < 4.0 / std::sqrt(double(n)));
  CHECK(std::abs(var - 1.0) < 4.0 * std::sqrt(2.0 / double(n)));
}

TEST_CASE("next_below is unbiased over a small range") {
  Philox g(5, 1);
  int counts[7] = {0};
  const int n = 70000;
  for (int i = 0; i < n; ++i) ++counts[g.next_below(7)];
  for (int k = 0; k < 7; ++k) {
    CHECK(counts[k] > n / 7 - 600);
    CHECK(counts[k] < n / 7 + 600);
  }
}

TEST_CASE("hash64 is stateless and keyed") {
  CHECK(Philox::hash64(1, 2, 3) == Philox::hash64(1, 2, 3));
  CHECK(Philox::hash64(1, 2, 3) != Philox::hash64(1, 2, 4));
  CHECK(Philox::hash64(1, 2, 3) != Philox::hash64(2, 2, 3));
}
