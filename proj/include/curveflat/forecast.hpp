#pragma once

// Horizon forecasts of cumulative cases and the averaged upper-bound estimate.

#include <chrono>
#include <optional>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

namespace curveflat {

// Intermediates of one step of the recursive scheme
//   U_k = m_bar - U_{k-1}
//   g_k = (f_{k-1} * U_k) * m_bar
//   h_k = (g_k * m) + (g_k * U_k) * m_bar
//   f_k = h_k - g_k
struct ForecastState {
  double f_hat = 0.0;
  double u = 0.0;
  double g = 0.0;
  double h = 0.0;
  double m_bar = 0.0;
  double m = 0.0;
};

enum class ForecastMode { eq13_recursive, geometric_increment };

std::string_view to_string(ForecastMode mode) noexcept;

struct ForecastAnchor {
  int day_id = 0;  // last observed day; forecasts start at day_id + 1
  std::optional<std::chrono::year_month_day> date;
};

struct Eq13Params {
  double start = 0.0;  // f_hat at the anchor day
  double m_bar = 0.0;
  double m = 0.0;
  double u0 = 0.0;
};

struct GeometricParams {
  double start = 0.0;           // cumulative count at the anchor day
  double last_increment = 0.0;  // increment at the anchor day
  double daily_factor = 1.0;
};

struct ForecastRow {
  int day_id = 0;
  std::optional<std::chrono::year_month_day> date;
  double value = 0.0;
};

struct ForecastTable {
  std::vector<ForecastRow> rows;
  ForecastMode mode = ForecastMode::geometric_increment;
  std::variant<Eq13Params, GeometricParams> params;
  std::vector<ForecastState> trace;  // eq13 only, one entry per row

  std::vector<double> values() const;
};

ForecastTable forecast_eq13(double last_observed, double m_bar, double m, double u0, int horizon,
                            const ForecastAnchor& anchor = {});

// increment_k = last_increment * factor^k, cumulative_k = cumulative_{k-1} + increment_k
ForecastTable forecast_geometric(double last_cumulative, double last_increment, double daily_factor, int horizon,
                                 const ForecastAnchor& anchor = {});

struct GoldenRow {
  int day_id = 0;
  std::optional<std::chrono::year_month_day> date;
  double value = 0.0;
};

struct Calibration {
  GeometricParams params;
  ForecastAnchor anchor;  // the day before the first golden row
  double max_abs_deviation = 0.0;
};

// Factor search grid for calibrate_to_table: [lo, hi] in steps of `step`,
// then golden-section refinement inside the best grid cell.
inline constexpr double kCalibrationFactorLo = 0.95;
inline constexpr double kCalibrationFactorHi = 1.05;
inline constexpr double kCalibrationFactorStep = 1e-4;

// Geometric parameters whose replay minimises the maximum absolute deviation
// from consecutive golden rows. Rows must be strictly increasing.
Calibration calibrate_to_table(std::span<const GoldenRow> golden);

std::vector<GoldenRow> load_golden_csv(const std::string& path);

struct UpperBoundEstimate {
  double u_pb1 = 0.0;
  double u_pb2 = 0.0;
  double u_pb = 0.0;
  bool override_used = false;

  // Presentation rounding: u_pb floors, the components round half up.
  long long u_pb_serialized() const;
  long long u_pb1_serialized() const;
  long long u_pb2_serialized() const;
};

UpperBoundEstimate upper_bound(double u_pb1, double m_bar, std::optional<double> u_pb2_override = std::nullopt);

long long round_half_up(double v);

}  // namespace curveflat
