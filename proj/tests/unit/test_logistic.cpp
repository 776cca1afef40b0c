#include <doctest.h>

#include <cmath>

#include "curveflat/error.hpp"
#include "curveflat/logistic.hpp"
#include "curveflat/series.hpp"

using namespace curveflat;

namespace {

double generator(double u, double b0, double b1, double t) { return u / (1.0 + u * b0 * std::pow(b1, t)); }

}  // namespace

TEST_CASE("sigmoid") {
  CHECK(sigmoid(0.0) == 0.5);
  CHECK(sigmoid(std::log(3.0)) == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(sigmoid(800.0) == 1.0);
  CHECK(sigmoid(-800.0) >= 0.0);
  for (double z : {0.1, 1.0, 5.0, 20.0, 36.0}) CHECK(std::abs(sigmoid(-z) - (1.0 - sigmoid(z))) <= 1e-15);
}

TEST_CASE("linear predictor") {
  CHECK(linear_predictor(std::vector<double>{1}, std::vector<double>{}) == 1.0);
  CHECK(linear_predictor(std::vector<double>{0, 2}, std::vector<double>{3}) == 6.0);
  CHECK(linear_predictor(std::vector<double>{1, 2, -1}, std::vector<double>{1, 4}) == -1.0);
  CHECK_THROWS_AS(linear_predictor(std::vector<double>{1, 2}, std::vector<double>{1, 4}), Error);
}

TEST_CASE("noiseless round trip") {
  std::vector<double> t, y;
  for (int i = 1; i <= 54; ++i) {
    t.push_back(i);
    y.push_back(generator(1000, 0.2, 0.9, i));
  }
  const auto m = fit_logistic_growth(t, y, 1000);
  CHECK(m.b0 == doctest::Approx(0.2).epsilon(1e-9));
  CHECK(m.b1 == doctest::Approx(0.9).epsilon(1e-9));
  CHECK(m.r_squared == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(m.df1 == 1);
  CHECK(m.df2 == 52);
  for (int i = 1; i <= 80; ++i) {
    CHECK(predict_logistic(m, i) == doctest::Approx(generator(1000, 0.2, 0.9, i)).epsilon(1e-9));
  }
  CHECK(std::abs(predict_logistic(m, 500) - 1000) <= 1e-6 * 1000);
}

TEST_CASE("constant response") {
  std::vector<double> t{1, 2, 3, 4, 5}, y(5, 500.0);
  const auto m = fit_logistic_growth(t, y, 1000);
  CHECK(m.b1 == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(m.r_squared == 0.0);
  for (double s : {1.0, 7.0, 30.0}) CHECK(predict_logistic(m, s) == doctest::Approx(1000 / (1 + 1000 * m.b0)));
}

TEST_CASE("fit statistics against hand formulas") {
  std::vector<double> t{1, 2, 3, 4, 5, 6}, y{10, 14, 23, 30, 47, 60};
  const double u = 200;
  const auto m = fit_logistic_growth(t, y, u);
  double st = 0, sz = 0;
  std::vector<double> z;
  for (std::size_t i = 0; i < t.size(); ++i) {
    z.push_back(std::log(1 / y[i] - 1 / u));
    st += t[i];
    sz += z.back();
  }
  const double tb = st / 6, zb = sz / 6;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    sxx += (t[i] - tb) * (t[i] - tb);
    sxy += (t[i] - tb) * (z[i] - zb);
    syy += (z[i] - zb) * (z[i] - zb);
  }
  const double slope = sxy / sxx;
  const double r2 = sxy * sxy / (sxx * syy);
  CHECK(std::log(m.b1) == doctest::Approx(slope).epsilon(1e-12));
  CHECK(std::log(m.b0) == doctest::Approx(zb - slope * tb).epsilon(1e-12));
  CHECK(m.r_squared == doctest::Approx(r2).epsilon(1e-12));
  CHECK(m.f_stat == doctest::Approx(r2 / (1 - r2) * 4).epsilon(1e-10));
  const double s2 = (syy - slope * sxy) / 4;
  CHECK(m.se_log_b1 == doctest::Approx(std::sqrt(s2 / sxx)).epsilon(1e-10));
}

TEST_CASE("input checks") {
  std::vector<double> t{1, 2, 3}, y{1, 2, 3};
  CHECK_THROWS_AS(fit_logistic_growth(t, y, 3), Error);
  CHECK_THROWS_AS(fit_logistic_growth(t, std::vector<double>{0, 1, 2}, 10), Error);
  CHECK_THROWS_AS(fit_logistic_growth(t, std::vector<double>{1, 2}, 10), Error);
  CHECK_THROWS_AS(fit_logistic_growth(std::vector<double>{2, 2, 2}, y, 10), Error);
}

TEST_CASE("fixture over the first 54 days") {
  const auto s = load_csv(CURVEFLAT_SOURCE_DIR "/data/greece_2020.csv").series;
  const auto m = fit_logistic_growth(s, 3683, 1, kDefaultLogisticWindow);
  CHECK(m.window_start == 1);
  CHECK(m.n == 54);
  CHECK(std::abs(m.b0 - 0.137) <= 0.05);
  CHECK(std::abs(m.b1 - 0.853) <= 0.05);
  CHECK(m.r_squared > 0.85);
  MESSAGE("leading window: b0 = " << m.b0 << ", b1 = " << m.b1 << ", R^2 = " << m.r_squared);
  CHECK_THROWS_AS(fit_logistic_growth(s, 3683, 100, 54), Error);
}
