#include "sorlayout/regression.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "sorlayout/error.hpp"

namespace sorlayout {

namespace {

constexpr int kMaxParams = 4;

// Normal equations are formed and solved in extended precision; squaring the
// design's condition number otherwise costs several digits at c ~ 800.
using Real = long double;
using Vec = std::array<Real, kMaxParams>;
using Mat = std::array<Vec, kMaxParams>;

// Solves the k x k system; `a` is row-major with k columns.
Vec eliminate(Mat a, Vec b, int k) {
  Real largest = 0.0;
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) largest = std::max(largest, std::abs(a[i][j]));
  }
  const Real floor = largest * 1e-14L;

  for (int col = 0; col < k; ++col) {
    int pivot = col;
    for (int row = col + 1; row < k; ++row) {
      if (std::abs(a[row][col]) > std::abs(a[pivot][col])) pivot = row;
    }
    if (!(std::abs(a[pivot][col]) > floor)) {
      throw Error(ErrorCode::kSingularDesign, "normal equations are singular");
    }
    std::swap(a[pivot], a[col]);
    std::swap(b[pivot], b[col]);
    for (int row = col + 1; row < k; ++row) {
      const Real factor = a[row][col] / a[col][col];
      for (int j = col; j < k; ++j) a[row][j] -= factor * a[col][j];
      b[row] -= factor * b[col];
    }
  }

  Vec x{};
  for (int row = k - 1; row >= 0; --row) {
    Real sum = b[row];
    for (int j = row + 1; j < k; ++j) sum -= a[row][j] * x[j];
    x[row] = sum / a[row][row];
  }
  return x;
}

}  // namespace

RegressionFit fit_polynomial(std::span<const SamplePoint> points, int degree) {
  if (degree < 0 || degree > 3) {
    throw Error(ErrorCode::kInvalidArgument, "degree must lie in 0..3");
  }
  const int k = degree + 1;
  std::set<double> distinct;
  for (const SamplePoint& p : points) distinct.insert(p.c);
  if (static_cast<int>(distinct.size()) < k) {
    throw Error(ErrorCode::kSingularDesign,
                "need at least " + std::to_string(k) + " distinct c values, got " +
                    std::to_string(distinct.size()));
  }

  Real scale = 0.0;
  for (const SamplePoint& p : points) scale = std::max<Real>(scale, std::abs(p.c));
  if (scale == 0.0) scale = 1.0;

  Mat normal{};
  Vec rhs{};
  for (const SamplePoint& p : points) {
    Vec row{};
    const Real z = p.c / scale;
    Real power = 1.0;
    for (int j = 0; j < k; ++j) {
      row[j] = power;
      power *= z;
    }
    for (int i = 0; i < k; ++i) {
      for (int j = 0; j < k; ++j) normal[i][j] += row[i] * row[j];
      rhs[i] += row[i] * p.t;
    }
  }

  Vec scaled = eliminate(normal, rhs, k);
  // One step of iterative refinement.
  Vec residual = rhs;
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) residual[i] -= normal[i][j] * scaled[j];
  }
  const Vec correction = eliminate(normal, residual, k);
  for (int j = 0; j < k; ++j) scaled[j] += correction[j];

  RegressionFit fit;
  Real unscale = 1.0;
  for (int j = 0; j < k; ++j) {
    fit.beta[j] = static_cast<double>(scaled[j] / unscale);
    unscale *= scale;
  }
  fit.r_squared = r_squared(points, fit);
  return fit;
}

double r_squared(std::span<const SamplePoint> points, const RegressionFit& fit) {
  if (points.empty()) return 0.0;
  double mean = 0.0;
  for (const SamplePoint& p : points) mean += p.t;
  mean /= static_cast<double>(points.size());

  double ss_res = 0.0;
  double ss_tot = 0.0;
  for (const SamplePoint& p : points) {
    const double e = p.t - fit.predict(p.c);
    ss_res += e * e;
    ss_tot += (p.t - mean) * (p.t - mean);
  }
  if (ss_tot == 0.0) return ss_res == 0.0 ? 1.0 : 0.0;
  return 1.0 - ss_res / ss_tot;
}

}  // namespace sorlayout
