#pragma once

// Bounded logistic growth y(t) = u / (1 + u * b0 * b1^t) with a fixed upper
// bound u, estimated by OLS on the linearisation ln(1/y - 1/u) = ln b0 + t ln b1.
// R^2 and F refer to that linearised regression.

#include <span>
#include <vector>

#include "curveflat/series.hpp"

namespace curveflat {

inline constexpr int kDefaultLogisticWindow = 54;

struct LogisticModel {
  double upper_bound_u = 0.0;
  double b0 = 0.0;  // "Constant"
  double b1 = 0.0;
  int window_start = 0;  // first t in the fit
  int n = 0;
  double r_squared = 0.0;
  double f_stat = 0.0;
  int df1 = 1;
  int df2 = 0;
  // Standard errors of ln b0 and ln b1 on the linearised scale.
  double se_log_b0 = 0.0;
  double se_log_b1 = 0.0;
};

double sigmoid(double z) noexcept;
// beta[0] + sum_i beta[i + 1] * x[i]
double linear_predictor(std::span<const double> beta, std::span<const double> x);

LogisticModel fit_logistic_growth(std::span<const double> t, std::span<const double> y, double u);
// Cumulative cases of `series` over days [window_start, window_start + n).
LogisticModel fit_logistic_growth(const ObservationSeries& series, double u, int window_start, int n);

double predict_logistic(const LogisticModel& model, double t);

}  // namespace curveflat
