#include "curveflat/forecast.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "curveflat/error.hpp"
#include "curveflat/series.hpp"

namespace curveflat {

namespace {

[[noreturn]] void fail(const std::string& message) { throw Error("forecast", message); }

std::optional<std::chrono::year_month_day> shift(const std::optional<std::chrono::year_month_day>& date, int days) {
  if (!date) return std::nullopt;
  return std::chrono::year_month_day{std::chrono::sys_days{*date} + std::chrono::days{days}};
}

// Golden-section minimisation of a unimodal function on [a, b].
template <class F>
double golden_min(F&& f, double a, double b, int iterations = 200) {
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = f(c);
  double fd = f(d);
  for (int i = 0; i < iterations && b - a > 0.0; ++i) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = f(d);
    }
  }
  return fc <= fd ? c : d;
}

struct LineFit {
  double increment = 0.0;
  double start = 0.0;
  double max_dev = 0.0;
};

// For a fixed factor the model v_k = start + increment * S_k is linear in S_k,
// and the minimax line through (S_k, v_k) has a convex objective in the slope.
class GeometricObjective {
 public:
  explicit GeometricObjective(std::span<const GoldenRow> rows) {
    values_.reserve(rows.size());
    for (const auto& r : rows) values_.push_back(r.value);
    sums_.resize(rows.size());
  }

  LineFit fit(double factor) {
    double p = 1.0;
    double s = 0.0;
    for (auto& sk : sums_) {
      p *= factor;
      s += p;
      sk = s;
    }
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (std::size_t k = 1; k < values_.size(); ++k) {
      const double slope = (values_[k] - values_[k - 1]) / (sums_[k] - sums_[k - 1]);
      lo = std::min(lo, slope);
      hi = std::max(hi, slope);
    }
    const double inc = lo == hi ? lo : golden_min([&](double c) { return spread(c).max_dev; }, lo, hi);
    return spread(inc);
  }

 private:
  LineFit spread(double inc) const {
    double rmin = std::numeric_limits<double>::infinity();
    double rmax = -rmin;
    for (std::size_t k = 0; k < values_.size(); ++k) {
      const double r = values_[k] - inc * sums_[k];
      rmin = std::min(rmin, r);
      rmax = std::max(rmax, r);
    }
    return {inc, 0.5 * (rmin + rmax), 0.5 * (rmax - rmin)};
  }

  std::vector<double> values_;
  std::vector<double> sums_;
};

}  // namespace

std::string_view to_string(ForecastMode mode) noexcept {
  return mode == ForecastMode::eq13_recursive ? "eq13" : "geometric";
}

std::vector<double> ForecastTable::values() const {
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r.value);
  return out;
}

ForecastTable forecast_eq13(double last_observed, double m_bar, double m, double u0, int horizon,
                            const ForecastAnchor& anchor) {
  if (horizon < 1) fail("horizon must be at least 1");
  for (double v : {last_observed, m_bar, m, u0}) {
    if (!std::isfinite(v)) fail("recursion parameters must be finite");
  }
  ForecastTable table;
  table.mode = ForecastMode::eq13_recursive;
  table.params = Eq13Params{last_observed, m_bar, m, u0};
  double f_prev = last_observed;
  double u_prev = u0;
  for (int k = 1; k <= horizon; ++k) {
    ForecastState st;
    st.m_bar = m_bar;
    st.m = m;
    st.u = m_bar - u_prev;
    st.g = (f_prev * st.u) * m_bar;
    st.h = (st.g * m) + (st.g * st.u) * m_bar;
    st.f_hat = st.h - st.g;
    table.trace.push_back(st);
    table.rows.push_back({anchor.day_id + k, shift(anchor.date, k), st.f_hat});
    f_prev = st.f_hat;
    u_prev = st.u;
  }
  return table;
}

ForecastTable forecast_geometric(double last_cumulative, double last_increment, double daily_factor, int horizon,
                                 const ForecastAnchor& anchor) {
  if (horizon < 1) fail("horizon must be at least 1");
  if (!(daily_factor > 0.0)) fail("daily factor must be positive");
  if (last_increment < 0.0) fail("last increment must be non-negative");
  ForecastTable table;
  table.mode = ForecastMode::geometric_increment;
  table.params = GeometricParams{last_cumulative, last_increment, daily_factor};
  double cumulative = last_cumulative;
  double increment = last_increment;
  for (int k = 1; k <= horizon; ++k) {
    increment *= daily_factor;
    cumulative += increment;
    table.rows.push_back({anchor.day_id + k, shift(anchor.date, k), cumulative});
  }
  return table;
}

Calibration calibrate_to_table(std::span<const GoldenRow> golden) {
  if (golden.size() < 3) fail("calibration needs at least three rows");
  for (std::size_t k = 1; k < golden.size(); ++k) {
    if (!(golden[k].value > golden[k - 1].value)) {
      fail("golden table is not strictly increasing at row " + std::to_string(k + 1));
    }
    if (golden[k].day_id != golden[k - 1].day_id + 1) {
      fail("golden table days are not consecutive at row " + std::to_string(k + 1));
    }
  }

  GeometricObjective objective(golden);
  double best_factor = kCalibrationFactorLo;
  double best_dev = std::numeric_limits<double>::infinity();
  const int steps = static_cast<int>(std::lround((kCalibrationFactorHi - kCalibrationFactorLo) / kCalibrationFactorStep));
  for (int i = 0; i <= steps; ++i) {
    const double f = kCalibrationFactorLo + kCalibrationFactorStep * i;
    const double dev = objective.fit(f).max_dev;
    if (dev < best_dev) {
      best_dev = dev;
      best_factor = f;
    }
  }
  const double lo = std::max(kCalibrationFactorLo, best_factor - kCalibrationFactorStep);
  const double hi = std::min(kCalibrationFactorHi, best_factor + kCalibrationFactorStep);
  double factor = golden_min([&](double f) { return objective.fit(f).max_dev; }, lo, hi);
  LineFit fit = objective.fit(factor);
  if (fit.max_dev > best_dev) {
    factor = best_factor;
    fit = objective.fit(factor);
  }

  Calibration c;
  c.params = {fit.start, fit.increment, factor};
  c.anchor = {golden.front().day_id - 1, shift(golden.front().date, -1)};
  c.max_abs_deviation = fit.max_dev;
  return c;
}

std::vector<GoldenRow> load_golden_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) fail(path + " is empty");
  std::vector<std::string> header;
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      std::erase_if(cell, [](unsigned char ch) { return std::isspace(ch); });
      std::transform(cell.begin(), cell.end(), cell.begin(), [](unsigned char ch) { return std::tolower(ch); });
      header.push_back(cell);
    }
  }
  auto find = [&](std::string_view name) -> std::optional<std::size_t> {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) return i;
    }
    return std::nullopt;
  };
  const auto day_col = find("day_id");
  const auto date_col = find("date");
  auto value_col = find("forecast");
  if (!value_col) value_col = find("value");
  if (!day_col || !value_col) fail(path + ": golden CSV needs day_id and forecast columns");

  std::vector<GoldenRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != header.size()) fail(path + ": malformed row " + std::to_string(line_no));
    GoldenRow r;
    try {
      std::size_t used = 0;
      r.day_id = std::stoi(cells[*day_col], &used);
      r.value = std::stod(cells[*value_col]);
    } catch (const std::exception&) {
      fail(path + ": malformed row " + std::to_string(line_no));
    }
    if (date_col) {
      std::string d = cells[*date_col];
      std::erase_if(d, [](unsigned char ch) { return std::isspace(ch); });
      r.date = parse_iso_date(d);
    }
    rows.push_back(r);
  }
  return rows;
}

long long round_half_up(double v) { return static_cast<long long>(std::floor(v + 0.5)); }

long long UpperBoundEstimate::u_pb_serialized() const { return static_cast<long long>(std::floor(u_pb)); }
long long UpperBoundEstimate::u_pb1_serialized() const { return round_half_up(u_pb1); }
long long UpperBoundEstimate::u_pb2_serialized() const { return round_half_up(u_pb2); }

UpperBoundEstimate upper_bound(double u_pb1, double m_bar, std::optional<double> u_pb2_override) {
  if (!(u_pb1 > 0.0)) fail("u_pb1 must be positive");
  if (!(m_bar > 0.0)) fail("mean change rate must be positive");
  UpperBoundEstimate e;
  e.u_pb1 = u_pb1;
  e.override_used = u_pb2_override.has_value();
  e.u_pb2 = u_pb2_override ? *u_pb2_override : u_pb1 * m_bar;
  e.u_pb = (e.u_pb1 + e.u_pb2) / 2.0;
  return e;
}

}  // namespace curveflat
