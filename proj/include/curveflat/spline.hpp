#pragma once

// Regression splines in the truncated power basis
//   1, x, ..., x^(M-1), (x - k_1)_+^(M-1), ..., (x - k_{K-1})_+^(M-1)
// with M = degree + 1 and K = interior knots + 1 intervals, fitted by ordinary
// least squares. Diagnostics come from the hat matrix L = X (X'X)^-1 X'.
//
// Fitting happens on x mapped affinely to [0, 1] with unit-norm columns and an
// SVD solve; reported coefficients are mapped back to the raw basis above.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace curveflat {

inline constexpr int kDefaultSplineDegree = 3;
// Singular values below this fraction of the largest count as rank loss.
inline constexpr double kRankTolerance = 1e-10;

struct SplineBasis {
  int degree = kDefaultSplineDegree;
  std::vector<double> interior_knots;

  int order() const noexcept { return degree + 1; }  // M
  int intervals() const noexcept { return static_cast<int>(interior_knots.size()) + 1; }  // K
  std::size_t size() const noexcept { return static_cast<std::size_t>(order() + intervals() - 1); }  // J
  std::vector<std::string> column_names() const;
};

// Row-major n x J evaluation of the raw basis at x.
struct DesignMatrix {
  SplineBasis basis;
  std::vector<double> x;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> entries;

  double operator()(std::size_t i, std::size_t j) const { return entries[i * cols + j]; }
  std::span<const double> row(std::size_t i) const { return {entries.data() + i * cols, cols}; }
};

DesignMatrix build_basis(std::span<const double> x, const SplineBasis& basis);
DesignMatrix build_basis(std::span<const double> x, std::span<const double> interior_knots, int degree);

struct SplineModel {
  SplineBasis basis;
  std::vector<double> coefficients;  // raw-basis beta, length J
  double residual_variance = 0.0;    // RSS / (n - J); NaN when n == J
  std::vector<double> hat_diagonal;  // z_ii
  std::optional<double> loocv;       // absent when some z_ii == 1
  double r_squared = 0.0;
  double rss = 0.0;

  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> fitted;
  std::vector<double> pointwise_sd;  // sqrt(sigma^2 * ||z(x_i)||^2)

  // Internal representation used for evaluation.
  double x_offset = 0.0;
  double x_scale = 1.0;
  std::vector<double> scaled_coefficients;

  double hat_trace() const;
  double x_min() const;
  double x_max() const;
};

SplineModel fit_ols(const DesignMatrix& design, std::span<const double> y);
SplineModel fit_spline(std::span<const double> x, std::span<const double> y, const SplineBasis& basis);

// Closed-form leave-one-out score; throws when a point has z_ii == 1.
double loocv(const SplineModel& model);

std::vector<double> predict(const SplineModel& model, std::span<const double> x_new);
double predict(const SplineModel& model, double x);
// d^order/dx^order of the fitted spline.
double predict_derivative(const SplineModel& model, double x, int order);
bool extrapolates(const SplineModel& model, double x);

}  // namespace curveflat
