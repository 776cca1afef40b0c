#include "curveflat/bias_variance.hpp"

#include <cmath>
#include <random>

#include "curveflat/error.hpp"
#include "curveflat/kernels.hpp"

namespace curveflat {

namespace {

std::vector<double> grid(double lo, double hi, std::size_t n) {
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  return out;
}

}  // namespace

BiasVarianceReport bias_variance_mc(const TruthGenerator& truth, const FitterConfig& config, std::size_t replicates,
                                    std::uint64_t seed) {
  if (replicates < 2) throw Error("spline_fit", "need at least two Monte-Carlo replicates");
  if (!truth.h) throw Error("spline_fit", "truth generator has no mean function");
  if (!(truth.x_hi > truth.x_lo)) throw Error("spline_fit", "truth generator has zero x-spread");
  if (truth.n_train < 2 || truth.n_eval < 1) throw Error("spline_fit", "generator needs n_train >= 2, n_eval >= 1");
  if (truth.noise_sd < 0.0) throw Error("spline_fit", "noise sd must be non-negative");

  const auto x_train = grid(truth.x_lo, truth.x_hi, truth.n_train);
  const auto x_eval = grid(truth.x_lo, truth.x_hi, truth.n_eval);
  std::vector<double> h_train(x_train.size());
  std::vector<double> h_eval(x_eval.size());
  for (std::size_t i = 0; i < x_train.size(); ++i) h_train[i] = truth.h(x_train[i]);
  for (std::size_t i = 0; i < x_eval.size(); ++i) h_eval[i] = truth.h(x_eval[i]);

  const DesignMatrix design = build_basis(x_train, SplineBasis{config.degree, config.interior_knots});
  const std::size_t g = x_eval.size();
  std::vector<double> pred_sum(g, 0.0);
  std::vector<double> pred_sq_sum(g, 0.0);
  std::vector<double> losses(replicates);
  std::vector<double> y(x_train.size());
  std::vector<double> target(g);

  for (std::size_t r = 0; r < replicates; ++r) {
    std::mt19937_64 rng(seed + r);
    std::normal_distribution<double> noise(0.0, truth.noise_sd);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = h_train[i] + (truth.noise_sd > 0 ? noise(rng) : 0.0);
    for (std::size_t i = 0; i < g; ++i) target[i] = h_eval[i] + (truth.noise_sd > 0 ? noise(rng) : 0.0);
    const auto model = fit_ols(design, y);
    const auto pred = predict(model, x_eval);
    for (std::size_t i = 0; i < g; ++i) {
      pred_sum[i] += pred[i];
      pred_sq_sum[i] += pred[i] * pred[i];
    }
    losses[r] = kernels::sum_sq_diff(pred, target) / static_cast<double>(g);
  }

  BiasVarianceReport report;
  report.mc_replicates = replicates;
  const double R = static_cast<double>(replicates);
  for (std::size_t i = 0; i < g; ++i) {
    const double mean = pred_sum[i] / R;
    const double bias = mean - h_eval[i];
    report.bias_sq += bias * bias;
    report.variance += std::max(0.0, pred_sq_sum[i] / R - mean * mean);
  }
  report.bias_sq /= static_cast<double>(g);
  report.variance /= static_cast<double>(g);
  report.noise = truth.noise_sd * truth.noise_sd;
  report.expected_loss = report.bias_sq + report.variance + report.noise;

  double mean_loss = 0.0;
  for (double l : losses) mean_loss += l;
  mean_loss /= R;
  double var_loss = 0.0;
  for (double l : losses) var_loss += (l - mean_loss) * (l - mean_loss);
  var_loss /= R - 1.0;
  report.empirical_loss = mean_loss;
  report.empirical_loss_se = std::sqrt(var_loss / R);
  return report;
}

}  // namespace curveflat
