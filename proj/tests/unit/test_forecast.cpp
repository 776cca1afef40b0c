#include <doctest.h>

#include <cmath>

#include "curveflat/error.hpp"
#include "curveflat/forecast.hpp"

using namespace curveflat;

TEST_CASE("recursion hand trace") {
  const auto t = forecast_eq13(100, 1.0, 1.0, 0.5, 1);
  REQUIRE(t.trace.size() == 1);
  CHECK(t.trace[0].u == 0.5);
  CHECK(t.trace[0].g == 50.0);
  CHECK(t.trace[0].h == 75.0);
  CHECK(t.trace[0].f_hat == 25.0);
  CHECK(t.rows[0].value == 25.0);
  CHECK(t.mode == ForecastMode::eq13_recursive);
}

TEST_CASE("recursion with constant U") {
  // m_bar = 2 u0 keeps U fixed, so each step multiplies by u0 m_bar (m + u0 m_bar - 1).
  const double u0 = 0.6, m_bar = 1.2, m = 1.3;
  const auto t = forecast_eq13(1000, m_bar, m, u0, 4);
  double f = 1000;
  for (const auto& st : t.trace) {
    CHECK(st.u == doctest::Approx(u0).epsilon(1e-15));
    f *= u0 * m_bar * (m + u0 * m_bar - 1.0);
    CHECK(st.f_hat == doctest::Approx(f).epsilon(1e-12));
  }
}

TEST_CASE("recursion zero propagation") {
  const auto t = forecast_eq13(500, 1.05, 1.05, 0.0, 4);
  CHECK(t.trace[0].u == 1.05);
  CHECK(t.trace[1].u == 0.0);
  CHECK(t.trace[1].g == 0.0);
  CHECK(t.trace[1].h == 0.0);
  CHECK(t.trace[1].f_hat == 0.0);
  CHECK(t.trace[3].f_hat == 0.0);
  const auto again = forecast_eq13(500, 1.05, 1.05, 0.0, 4);
  CHECK(again.values() == t.values());
  CHECK_THROWS_AS(forecast_eq13(500, 1.05, 1.05, 0.0, 0), Error);
  CHECK_THROWS_AS(forecast_eq13(500, NAN, 1.05, 0.0, 3), Error);
}

TEST_CASE("geometric increments") {
  const auto t = forecast_geometric(2602, 12, 1.0, 2, {65, std::chrono::year_month_day{std::chrono::year{2020}, std::chrono::month{4}, std::chrono::day{30}}});
  REQUIRE(t.rows.size() == 2);
  CHECK(t.rows[0].value == 2614);
  CHECK(t.rows[1].value == 2626);
  CHECK(t.rows[0].day_id == 66);
  REQUIRE(t.rows[1].date.has_value());
  CHECK(*t.rows[1].date == std::chrono::year_month_day{std::chrono::year{2020}, std::chrono::month{5}, std::chrono::day{2}});
  const auto flat = forecast_geometric(100, 0, 1.3, 5);
  for (double v : flat.values()) CHECK(v == 100);
  CHECK_THROWS_AS(forecast_geometric(100, 1, 0.0, 5), Error);
  CHECK_THROWS_AS(forecast_geometric(100, -1, 1.0, 5), Error);
}

TEST_CASE("calibration recovers generating parameters") {
  const auto truth = forecast_geometric(1000.0, 8.0, 1.0123, 40, {10, std::nullopt});
  std::vector<GoldenRow> golden;
  for (const auto& r : truth.rows) golden.push_back({r.day_id, r.date, r.value});
  const auto cal = calibrate_to_table(golden);
  CHECK(cal.params.daily_factor == doctest::Approx(1.0123).epsilon(1e-6));
  CHECK(cal.params.last_increment == doctest::Approx(8.0).epsilon(1e-6));
  CHECK(cal.params.start == doctest::Approx(1000.0).epsilon(1e-6));
  CHECK(cal.anchor.day_id == 10);
  CHECK(cal.max_abs_deviation < 1e-6);
}

TEST_CASE("calibration on the shipped table") {
  const auto golden = load_golden_csv(CURVEFLAT_SOURCE_DIR "/fixtures/table1.csv");
  REQUIRE(golden.size() == 62);
  CHECK(golden.front().value == 2602);
  CHECK(golden.back().value == 3435);
  const auto cal = calibrate_to_table(golden);
  CHECK(cal.params.daily_factor >= 1.003);
  CHECK(cal.params.daily_factor <= 1.006);
  const auto replay = forecast_geometric(cal.params.start, cal.params.last_increment, cal.params.daily_factor, 62,
                                         cal.anchor);
  for (std::size_t k = 0; k < golden.size(); ++k) {
    CHECK(std::abs(static_cast<double>(round_half_up(replay.rows[k].value)) - golden[k].value) <= 2.0);
    CHECK(replay.rows[k].day_id == golden[k].day_id);
  }
}

TEST_CASE("calibration rejects degenerate tables") {
  std::vector<GoldenRow> two{{1, std::nullopt, 5}, {2, std::nullopt, 5}};
  CHECK_THROWS_AS(calibrate_to_table(two), Error);
  std::vector<GoldenRow> flat{{1, std::nullopt, 5}, {2, std::nullopt, 5}, {3, std::nullopt, 6}};
  CHECK_THROWS_AS(calibrate_to_table(flat), Error);
  std::vector<GoldenRow> gap{{1, std::nullopt, 5}, {2, std::nullopt, 6}, {4, std::nullopt, 7}};
  CHECK_THROWS_AS(calibrate_to_table(gap), Error);
}

TEST_CASE("upper bound") {
  const auto replay = upper_bound(3435, 1.049521, 3932.0);
  CHECK(replay.override_used);
  CHECK(replay.u_pb == 3683.5);
  CHECK(replay.u_pb_serialized() == 3683);

  const auto direct = upper_bound(3435, 1.049521);
  CHECK_FALSE(direct.override_used);
  CHECK(direct.u_pb2 == doctest::Approx(3605.1).epsilon(1e-4));
  CHECK(direct.u_pb == doctest::Approx(3435 * (1 + 1.049521) / 2).epsilon(1e-15));
  CHECK(direct.u_pb2_serialized() == 3605);

  const auto same = upper_bound(1000, 1.0);
  CHECK(same.u_pb == 1000);
  CHECK_THROWS_AS(upper_bound(0, 1.0), Error);
}

TEST_CASE("rounding") {
  CHECK(round_half_up(2.5) == 3);
  CHECK(round_half_up(2.4999) == 2);
  CHECK(round_half_up(-2.5) == -2);
  CHECK(round_half_up(3683.5) == 3684);
}
