#pragma once

#include <array>
#include <span>
#include <vector>

namespace sorlayout {

/// One (problem size, measured time) observation.
struct SamplePoint {
  double c = 0.0;
  double t = 0.0;
};

/// T = beta0 + beta1 c + beta2 c^2 + beta3 c^3.
struct RegressionFit {
  std::array<double, 4> beta{};
  double r_squared = 0.0;

  double predict(double c) const {
    return beta[0] + c * (beta[1] + c * (beta[2] + c * beta[3]));
  }
};

/// Ordinary least squares polynomial of the given degree (0..3), returned in
/// the cubic layout with unused coefficients zero. The normal equations are
/// built on c scaled by max|c| and solved in extended precision by Gaussian
/// elimination with partial pivoting plus one refinement step; coefficients
/// are unscaled before returning.
///
/// Throws Error(kSingularDesign) with fewer than degree + 1 distinct c.
RegressionFit fit_polynomial(std::span<const SamplePoint> points, int degree);

inline RegressionFit fit_cubic(std::span<const SamplePoint> points) {
  return fit_polynomial(points, 3);
}

/// 1 - SSres / SStot. A response without variance gives 1 for a perfect
/// fit and 0 otherwise.
double r_squared(std::span<const SamplePoint> points, const RegressionFit& fit);

}  // namespace sorlayout
