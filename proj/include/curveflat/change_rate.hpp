#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "curveflat/series.hpp"

namespace curveflat {

// How consecutive values are compared. Every rate is attributed to the later
// of the two days it compares.
enum class RateBasis {
  cumulative_ratio,         // y[t] / y[t-1]
  increment_ratio,          // dy[t] / dy[t-1]
  printed_increment_ratio,  // dy[t-1] / dy[t], the literal earlier-over-later form
};

std::string_view to_string(RateBasis basis) noexcept;
std::optional<RateBasis> parse_rate_basis(std::string_view text) noexcept;

struct ChangeRateSeries {
  std::vector<int> day_ids;
  std::vector<std::optional<double>> rates;  // nullopt marks a zero denominator
  RateBasis basis = RateBasis::cumulative_ratio;

  std::size_t undefined_count() const;
};

struct MeanRate {
  double value = 0.0;
  int window_start = 0;
  int window_length = 0;
  int excluded = 0;  // undefined rates inside the window
};

inline constexpr int kDefaultRateWindowStart = 19;
inline constexpr int kDefaultRateWindowLength = 46;

ChangeRateSeries change_rates(const ObservationSeries& series, RateBasis basis = RateBasis::cumulative_ratio);
// Rates of a bare sequence whose first element is day `first_day`. The values
// are cumulative counts for cumulative_ratio and increments otherwise.
ChangeRateSeries change_rates(std::span<const double> values, RateBasis basis, int first_day = 1);

// Mean of the defined rates with window_start <= day_id < window_start + n.
MeanRate mean_change_rate(const ChangeRateSeries& rates, int window_start, int n);

}  // namespace curveflat
