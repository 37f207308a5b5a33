#include "drselect/scad.hpp"

#include <algorithm>
#include <cmath>

namespace drselect {

double scad_rate(double theta_abs, const ScadParams& params) {
  const double lam = params.lambda, a = params.a;
  if (lam == 0.0) return 0.0;
  if (theta_abs < lam) return lam;
  const double cut = a * lam - theta_abs;
  return cut > 0.0 ? lam * cut / ((a - 1.0) * lam) : 0.0;
}

double scad_penalty(double theta_abs, const ScadParams& params) {
  const double lam = params.lambda, a = params.a;
  const double t = std::abs(theta_abs);
  if (lam == 0.0) return 0.0;
  if (t <= lam) return lam * t;
  if (t <= a * lam) {
    return lam * lam +
           (a * lam * (t - lam) - 0.5 * (t * t - lam * lam)) / (a - 1.0);
  }
  return 0.5 * (a + 1.0) * lam * lam;
}

namespace {

// f(b) = c/2*b^2 - w*b + P(b) for b >= 0 (the constant term is dropped).
inline double half_objective(double b, double c, double w,
                             const ScadParams& params) {
  return 0.5 * c * b * b - w * b + scad_penalty(b, params);
}

}  // namespace

double scad_threshold(double z, double step_curvature,
                      const ScadParams& params) {
  const double c = step_curvature;
  const double lam = params.lambda, a = params.a;
  if (lam == 0.0) return z / c;
  const double w = std::abs(z);
  const double sign = z < 0.0 ? -1.0 : 1.0;
  if (w <= lam) return 0.0;  // subgradient condition at zero

  // Stationary point of each penalty branch, clamped into its interval,
  // plus the breakpoints. The objective can be nonconvex when
  // c < 1/(a-1), so candidates are compared by value; ties go to the
  // smaller magnitude.
  double candidates[5];
  int m = 0;
  candidates[m++] = std::clamp((w - lam) / c, 0.0, lam);
  const double mid_denom = c * (a - 1.0) - 1.0;
  if (std::abs(mid_denom) > 1e-14) {
    candidates[m++] =
        std::clamp(((a - 1.0) * w - a * lam) / mid_denom, lam, a * lam);
  }
  candidates[m++] = std::max(w / c, a * lam);
  candidates[m++] = lam;
  candidates[m++] = a * lam;

  double best = 0.0, best_val = 0.0;  // b = 0 is always feasible
  for (int i = 0; i < m; ++i) {
    const double val = half_objective(candidates[i], c, w, params);
    if (val < best_val - 1e-15 ||
        (std::abs(val - best_val) <= 1e-15 && candidates[i] < best)) {
      best = candidates[i];
      best_val = val;
    }
  }
  return sign * best;
}

}  // namespace drselect
