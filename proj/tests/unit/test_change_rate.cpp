#include <doctest.h>

#include <cmath>
#include <random>

#include "curveflat/change_rate.hpp"
#include "curveflat/error.hpp"
#include "curveflat/series.hpp"

using namespace curveflat;

namespace {

std::vector<double> defined(const ChangeRateSeries& r) {
  std::vector<double> v;
  for (const auto& x : r.rates) v.push_back(x.value_or(NAN));
  return v;
}

}  // namespace

TEST_CASE("hand cases") {
  const std::vector<double> flat{100, 100, 100};
  CHECK(defined(change_rates(flat, RateBasis::cumulative_ratio)) == std::vector<double>{1.0, 1.0});

  const std::vector<double> geo{100, 110, 121};
  const auto r = change_rates(geo, RateBasis::cumulative_ratio);
  CHECK(r.day_ids == std::vector<int>{2, 3});
  CHECK(*r.rates[0] == doctest::Approx(1.1).epsilon(1e-15));
  CHECK(*r.rates[1] == doctest::Approx(1.1).epsilon(1e-15));

  // The span overload reads the values as increments for increment bases.
  const std::vector<double> doubling{2, 4, 8};
  const auto inc = change_rates(doubling, RateBasis::increment_ratio);
  REQUIRE(inc.rates.size() == 2);
  CHECK(*inc.rates[0] == 2.0);
  CHECK(*inc.rates[1] == 2.0);
  const auto printed = change_rates(doubling, RateBasis::printed_increment_ratio);
  CHECK(*printed.rates[1] == 0.5);
}

TEST_CASE("zero denominators are undefined, not errors") {
  const std::vector<double> v{0, 0, 3, 3, 6};
  const auto r = change_rates(v, RateBasis::cumulative_ratio);
  CHECK_FALSE(r.rates[0].has_value());
  CHECK_FALSE(r.rates[1].has_value());
  CHECK(r.undefined_count() == 2);
  const auto inc = change_rates(v, RateBasis::increment_ratio);
  CHECK_FALSE(inc.rates[0].has_value());
  CHECK(*inc.rates[2] == 1.0);
}

TEST_CASE("mean over a window") {
  ChangeRateSeries r;
  r.day_ids = {2, 3, 4};
  r.rates = {1.1, 1.1, 1.1};
  CHECK(mean_change_rate(r, 2, 3).value == doctest::Approx(1.1));

  r.rates = {2.0, std::nullopt, 4.0};
  const auto m = mean_change_rate(r, 2, 3);
  CHECK(m.value == 3.0);
  CHECK(m.excluded == 1);

  CHECK_THROWS_AS(mean_change_rate(r, 3, 5), Error);
  CHECK_THROWS_AS(mean_change_rate(r, 2, 0), Error);
  r.rates = {std::nullopt, std::nullopt, std::nullopt};
  CHECK_THROWS_AS(mean_change_rate(r, 2, 3), Error);
}

TEST_CASE("geometric series gives the generating ratio exactly") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ratio(1.001, 1.5), start(1.0, 1000.0);
  for (int trial = 0; trial < 50; ++trial) {
    const double q = ratio(rng);
    std::vector<double> v{start(rng)};
    for (int i = 0; i < 40; ++i) v.push_back(v.back() * q);
    const auto r = change_rates(v, RateBasis::cumulative_ratio);
    for (const auto& x : r.rates) CHECK(std::abs(*x - q) <= 4e-16 * q);
    CHECK(std::abs(mean_change_rate(r, 2, 40).value - q) <= 1e-14);
  }
}

TEST_CASE("rates are invariant to rescaling by a power of two") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> step(0.0, 30.0);
  std::vector<double> v{10.0};
  for (int i = 0; i < 60; ++i) v.push_back(v.back() + step(rng));
  std::vector<double> scaled = v;
  for (auto& x : scaled) x *= 1024.0;
  for (auto basis : {RateBasis::cumulative_ratio, RateBasis::increment_ratio}) {
    const auto a = change_rates(v, basis);
    const auto b = change_rates(scaled, basis);
    CHECK(a.rates == b.rates);
  }
  // Any positive scale agrees to rounding.
  std::vector<double> odd = v;
  for (auto& x : odd) x *= 3.7;
  const auto a = change_rates(v, RateBasis::cumulative_ratio);
  const auto c = change_rates(odd, RateBasis::cumulative_ratio);
  for (std::size_t i = 0; i < a.rates.size(); ++i) CHECK(*c.rates[i] == doctest::Approx(*a.rates[i]).epsilon(1e-14));
}

TEST_CASE("series overload picks the column by basis") {
  ObservationSeries s;
  const std::vector<Count> cum{2, 6, 14};
  for (std::size_t i = 0; i < cum.size(); ++i) {
    DailyRecord r;
    r.day_id = static_cast<int>(i) + 5;
    r.all_cases = cum[i];
    r.new_cases = i == 0 ? 2 : cum[i] - cum[i - 1];
    s.records.push_back(r);
  }
  const auto inc = change_rates(s, RateBasis::increment_ratio);
  CHECK(inc.day_ids == std::vector<int>{6, 7});
  CHECK(*inc.rates[0] == 2.0);
  CHECK(*inc.rates[1] == 2.0);
  CHECK(*change_rates(s, RateBasis::cumulative_ratio).rates[0] == 3.0);
}

TEST_CASE("fixture mean rate") {
  const auto s = load_csv(CURVEFLAT_SOURCE_DIR "/data/greece_2020.csv").series;
  const auto r = change_rates(s);
  CHECK(r.day_ids.front() == 2);
  const auto m = mean_change_rate(r, kDefaultRateWindowStart, kDefaultRateWindowLength);
  CHECK(m.window_start == 19);
  CHECK(m.window_length == 46);
  CHECK(m.excluded == 0);
  CHECK(std::abs(m.value - 1.049521) <= 0.01);
}

TEST_CASE("basis names") {
  for (auto b : {RateBasis::cumulative_ratio, RateBasis::increment_ratio, RateBasis::printed_increment_ratio}) {
    CHECK(parse_rate_basis(to_string(b)) == b);
  }
  CHECK_FALSE(parse_rate_basis("bogus").has_value());
}
