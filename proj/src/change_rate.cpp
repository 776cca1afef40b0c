#include "curveflat/change_rate.hpp"

#include <algorithm>
#include <cmath>

#include "curveflat/error.hpp"

namespace curveflat {

std::string_view to_string(RateBasis basis) noexcept {
  switch (basis) {
    case RateBasis::cumulative_ratio: return "cumulative_ratio";
    case RateBasis::increment_ratio: return "increment_ratio";
    case RateBasis::printed_increment_ratio: return "printed_increment_ratio";
  }
  return "?";
}

std::optional<RateBasis> parse_rate_basis(std::string_view text) noexcept {
  for (auto b : {RateBasis::cumulative_ratio, RateBasis::increment_ratio, RateBasis::printed_increment_ratio}) {
    if (to_string(b) == text) return b;
  }
  return std::nullopt;
}

std::size_t ChangeRateSeries::undefined_count() const {
  return static_cast<std::size_t>(std::count(rates.begin(), rates.end(), std::nullopt));
}

ChangeRateSeries change_rates(std::span<const double> values, RateBasis basis, int first_day) {
  if (values.size() < 2) throw Error("change_rate", "need at least two observations");
  ChangeRateSeries out;
  out.basis = basis;
  out.day_ids.reserve(values.size() - 1);
  out.rates.reserve(values.size() - 1);
  for (std::size_t t = 1; t < values.size(); ++t) {
    const double num = basis == RateBasis::printed_increment_ratio ? values[t - 1] : values[t];
    const double den = basis == RateBasis::printed_increment_ratio ? values[t] : values[t - 1];
    out.day_ids.push_back(first_day + static_cast<int>(t));
    const double r = num / den;
    out.rates.push_back(den != 0.0 && std::isfinite(r) ? std::optional<double>(r) : std::nullopt);
  }
  return out;
}

ChangeRateSeries change_rates(const ObservationSeries& series, RateBasis basis) {
  if (series.size() < 2) throw Error("change_rate", "need at least two observations");
  std::vector<double> values;
  values.reserve(series.size());
  for (const auto& r : series.records) {
    values.push_back(static_cast<double>(basis == RateBasis::cumulative_ratio ? r.all_cases : r.new_cases));
  }
  return change_rates(values, basis, series.first_day());
}

MeanRate mean_change_rate(const ChangeRateSeries& rates, int window_start, int n) {
  if (n < 1) throw Error("change_rate", "window length must be at least 1");
  if (rates.day_ids.empty()) throw Error("change_rate", "empty rate series");
  const int first = rates.day_ids.front();
  const int last = rates.day_ids.back();
  if (window_start < first || window_start + n - 1 > last) {
    throw Error("change_rate", "window [" + std::to_string(window_start) + ", " + std::to_string(window_start + n) +
                                   ") lies outside rate days [" + std::to_string(first) + ", " +
                                   std::to_string(last) + "]");
  }
  MeanRate mean;
  mean.window_start = window_start;
  mean.window_length = n;
  double sum = 0.0;
  int defined = 0;
  for (std::size_t i = 0; i < rates.day_ids.size(); ++i) {
    const int day = rates.day_ids[i];
    if (day < window_start || day >= window_start + n) continue;
    if (rates.rates[i]) {
      sum += *rates.rates[i];
      ++defined;
    } else {
      ++mean.excluded;
    }
  }
  if (defined == 0) throw Error("change_rate", "no defined rates in the averaging window");
  mean.value = sum / defined;
  return mean;
}

}  // namespace curveflat
