#include "curveflat/logistic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "curveflat/error.hpp"
#include "curveflat/kernels.hpp"

namespace curveflat {

namespace {

[[noreturn]] void fail(const std::string& message) { throw Error("logistic_fit", message); }

}  // namespace

double sigmoid(double z) noexcept {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

double linear_predictor(std::span<const double> beta, std::span<const double> x) {
  if (beta.size() != x.size() + 1) {
    fail("coefficient vector has " + std::to_string(beta.size()) + " entries for " + std::to_string(x.size()) +
         " covariates");
  }
  return beta[0] + kernels::dot(beta.subspan(1), x);
}

LogisticModel fit_logistic_growth(std::span<const double> t, std::span<const double> y, double u) {
  if (t.size() != y.size()) fail("time and response lengths differ");
  if (y.size() < 3) fail("need at least three observations");
  if (!(u > 0.0) || !std::isfinite(u)) fail("upper bound must be positive and finite");
  const std::size_t n = y.size();
  std::vector<double> z(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(y[i] > 0.0)) fail("non-positive value at t = " + std::to_string(t[i]));
    if (!(y[i] < u)) fail("value at t = " + std::to_string(t[i]) + " is not below the upper bound");
    z[i] = std::log(1.0 / y[i] - 1.0 / u);
  }

  double t_mean = 0.0;
  double z_mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    t_mean += t[i];
    z_mean += z[i];
  }
  t_mean /= static_cast<double>(n);
  z_mean /= static_cast<double>(n);
  double sxx = 0.0;
  double sxz = 0.0;
  double tss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (t[i] - t_mean) * (t[i] - t_mean);
    sxz += (t[i] - t_mean) * (z[i] - z_mean);
    tss += (z[i] - z_mean) * (z[i] - z_mean);
  }
  if (sxx == 0.0) fail("time values have zero spread");
  const double slope = sxz / sxx;
  const double intercept = z_mean - slope * t_mean;

  double rss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = z[i] - (intercept + slope * t[i]);
    rss += r * r;
  }

  LogisticModel m;
  m.upper_bound_u = u;
  m.b0 = std::exp(intercept);
  m.b1 = std::exp(slope);
  m.window_start = static_cast<int>(t[0]);
  m.n = static_cast<int>(n);
  m.df1 = 1;
  m.df2 = static_cast<int>(n) - 2;
  m.r_squared = tss > 0.0 ? std::clamp(1.0 - rss / tss, 0.0, 1.0) : 0.0;
  m.f_stat = m.r_squared < 1.0 ? m.r_squared / (1.0 - m.r_squared) * m.df2 / m.df1
                               : std::numeric_limits<double>::infinity();
  const double sigma2 = rss / m.df2;
  m.se_log_b1 = std::sqrt(sigma2 / sxx);
  m.se_log_b0 = std::sqrt(sigma2 * (1.0 / static_cast<double>(n) + t_mean * t_mean / sxx));
  return m;
}

LogisticModel fit_logistic_growth(const ObservationSeries& series, double u, int window_start, int n) {
  const auto window = series.slice(window_start, window_start + n - 1);
  if (static_cast<int>(window.size()) != n) {
    fail("window [" + std::to_string(window_start) + ", " + std::to_string(window_start + n) +
         ") is not covered by the series");
  }
  std::vector<double> t;
  std::vector<double> y;
  for (const auto& r : window.records) {
    t.push_back(r.day_id);
    y.push_back(static_cast<double>(r.all_cases));
  }
  return fit_logistic_growth(t, y, u);
}

double predict_logistic(const LogisticModel& model, double t) {
  const double log_term = std::log(model.upper_bound_u) + std::log(model.b0) + t * std::log(model.b1);
  // u / (1 + e^log_term) == u * sigmoid(-log_term)
  return model.upper_bound_u * sigmoid(-log_term);
}

}  // namespace curveflat
