#include <doctest.h>

#include <cmath>

#include "drselect/rng.hpp"
#include "drselect/scad.hpp"

using namespace drselect;

namespace {

// Independent oracle: objective of the univariate subproblem.
double objective(double b, double z, double c, const ScadParams& p) {
  const double t = z / c;
  return 0.5 * c * (b - t) * (b - t) + scad_penalty(std::abs(b), p);
}

// Coarse grid scan refined by golden-section search, no closed forms.
double brute_minimizer(double z, double c, const ScadParams& p) {
  const double span = std::max(std::abs(z) / c, p.a * p.lambda) + 1.0;
  double best_b = 0.0, best_v = objective(0.0, z, c, p);
  const int grid_n = 40000;
  for (int k = -grid_n; k <= grid_n; ++k) {
    const double b = span * double(k) / double(grid_n);
    const double v = objective(b, z, c, p);
    if (v < best_v) {
      best_v = v;
      best_b = b;
    }
  }
  const double step = span / double(grid_n);
  double lo = best_b - step, hi = best_b + step;
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int it = 0; it < 120; ++it) {
    const double m1 = hi - gr * (hi - lo);
    const double m2 = lo + gr * (hi - lo);
    if (objective(m1, z, c, p) < objective(m2, z, c, p)) {
      hi = m2;
    } else {
      lo = m1;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("rate function branches") {
  const ScadParams p{1.0, 3.7};
  CHECK(scad_rate(0.5, p) == doctest::Approx(1.0));      // flat branch
  CHECK(scad_rate(5.0, p) == doctest::Approx(0.0));      // beyond a*lambda
  CHECK(scad_rate(2.0, p) == doctest::Approx((3.7 - 2.0) / 2.7));
}

TEST_CASE("rate function is continuous at the knots") {
  for (double lam : {0.2, 1.0, 2.5}) {
    const ScadParams p{lam, 3.7};
    CHECK(std::abs(scad_rate(std::nextafter(lam, 0.0), p) -
                   scad_rate(lam, p)) < 1e-12);
    CHECK(std::abs(scad_rate(p.a * lam, p)) < 1e-12);
    CHECK(std::abs(scad_rate(std::nextafter(p.a * lam, 0.0), p)) < 1e-10);
  }
}

TEST_CASE("penalty primitive matches numerical integration of the rate") {
  const ScadParams p{0.7, 3.7};
  // trapezoid integral of q over [0, t]
  for (double t : {0.3, 0.7, 1.5, 2.59, 4.0}) {
    const int steps = 200000;
    double acc = 0.0;
    for (int k = 0; k < steps; ++k) {
      const double x0 = t * double(k) / steps, x1 = t * double(k + 1) / steps;
      acc += 0.5 * (scad_rate(x0, p) + scad_rate(x1, p)) * (x1 - x0);
    }
    CHECK(scad_penalty(t, p) == doctest::Approx(acc).epsilon(1e-7));
  }
  CHECK(scad_penalty(100.0, p) ==
        doctest::Approx(0.5 * (p.a + 1.0) * p.lambda * p.lambda));
}

TEST_CASE("threshold fixed points") {
  const ScadParams p{1.0, 3.7};
  CHECK(scad_threshold(0.3, 1.0, p) == 0.0);    // below lambda
  CHECK(scad_threshold(10.0, 1.0, p) == doctest::Approx(10.0));  // unpenalized
  CHECK(scad_threshold(1.6, 1.0, p) == doctest::Approx(0.6));    // soft region
}

TEST_CASE("threshold equals the brute-force minimizer on a grid") {
  Philox rng(17, 0);
  for (int rep = 0; rep < 300; ++rep) {
    const double z = 8.0 * (rng.next_uniform() - 0.5);
    const double c = 0.25 + 1.75 * rng.next_uniform();
    const double lam = 0.05 + 1.5 * rng.next_uniform();
    const ScadParams p{lam, 3.7};
    const double ours = scad_threshold(z, c, p);
    const double brute = brute_minimizer(z, c, p);
    CHECK(objective(ours, z, c, p) <= objective(brute, z, c, p) + 1e-8);
  }
}

TEST_CASE("threshold is odd, monotone, and shrinks") {
  const ScadParams p{0.8, 3.7};
  double prev = -100.0;
  for (int k = -80; k <= 80; ++k) {
    const double z = 0.1 * double(k);
    for (double c : {0.5, 1.0, 2.0}) {
      const double v = scad_threshold(z, c, p);
      CHECK(v == doctest::Approx(-scad_threshold(-z, c, p)).epsilon(1e-14));
      CHECK(std::abs(v) <= std::abs(z) / c + 1e-14);
    }
    const double v1 = scad_threshold(z, 1.0, p);
    CHECK(v1 >= prev - 1e-12);
    prev = v1;
  }
}

TEST_CASE("zero lambda means no shrinkage") {
  const ScadParams p{0.0, 3.7};
  CHECK(scad_threshold(1.23, 2.0, p) == doctest::Approx(0.615));
  CHECK(scad_rate(0.5, p) == 0.0);
  CHECK(scad_penalty(0.5, p) == 0.0);
}

TEST_CASE("invalid params are rejected") {
  CHECK_THROWS_AS((ScadParams{-1.0, 3.7}).validate(), SchemaError);
  CHECK_THROWS_AS((ScadParams{1.0, 2.0}).validate(), SchemaError);
}
