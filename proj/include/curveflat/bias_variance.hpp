#pragma once

// Monte-Carlo estimate of expected_loss = bias^2 + variance + noise for a
// spline fitter against a known ground truth h(x) with Gaussian noise.

#include <cstdint>
#include <functional>
#include <vector>

#include "curveflat/spline.hpp"

namespace curveflat {

struct TruthGenerator {
  std::function<double(double)> h;
  double noise_sd = 0.0;
  double x_lo = 0.0;
  double x_hi = 1.0;
  std::size_t n_train = 20;  // equispaced fixed design on [x_lo, x_hi]
  std::size_t n_eval = 50;   // equispaced evaluation grid, uniform p(x)
};

struct FitterConfig {
  int degree = kDefaultSplineDegree;
  std::vector<double> interior_knots;
};

struct BiasVarianceReport {
  double bias_sq = 0.0;
  double variance = 0.0;
  double noise = 0.0;
  double expected_loss = 0.0;  // bias_sq + variance + noise
  std::size_t mc_replicates = 0;
  // Direct estimate: mean squared error of each replicate's predictions
  // against fresh noisy targets on the evaluation grid.
  double empirical_loss = 0.0;
  double empirical_loss_se = 0.0;
};

// Replicate r draws its noise from seed + r.
BiasVarianceReport bias_variance_mc(const TruthGenerator& truth, const FitterConfig& config, std::size_t replicates,
                                    std::uint64_t seed);

}  // namespace curveflat
