#include "curveflat/spline.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "curveflat/error.hpp"
#include "curveflat/kernels.hpp"

namespace curveflat {

namespace {

[[noreturn]] void fail(const std::string& message) { throw Error("spline_fit", message); }

void check_basis(std::span<const double> x, const SplineBasis& basis) {
  if (basis.degree < 0) fail("degree must be non-negative");
  if (x.empty()) fail("no abscissae");
  for (double v : x) {
    if (!std::isfinite(v)) fail("non-finite abscissa");
  }
  const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
  const auto& knots = basis.interior_knots;
  for (std::size_t k = 0; k < knots.size(); ++k) {
    if (k > 0 && knots[k] == knots[k - 1]) fail("duplicate knot at " + std::to_string(knots[k]));
    if (k > 0 && knots[k] < knots[k - 1]) fail("knots must be strictly increasing");
    if (!(knots[k] > *lo && knots[k] < *hi)) {
      fail("knot " + std::to_string(knots[k]) + " outside data range (" + std::to_string(*lo) + ", " +
           std::to_string(*hi) + ")");
    }
  }
}

// Fills a row-major n x J matrix with the basis at `s` and knots `knots`.
void fill_basis(std::span<const double> s, std::span<const double> knots, int degree, std::vector<double>& out) {
  const std::size_t n = s.size();
  const std::size_t order = static_cast<std::size_t>(degree) + 1;
  const std::size_t cols = order + knots.size();
  out.assign(n * cols, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double p = 1.0;
    for (std::size_t j = 0; j < order; ++j) {
      out[i * cols + j] = p;
      p *= s[i];
    }
  }
  std::vector<double> column(n);
  for (std::size_t k = 0; k < knots.size(); ++k) {
    kernels::truncated_power(s, knots[k], degree, column);
    for (std::size_t i = 0; i < n; ++i) out[i * cols + order + k] = column[i];
  }
}

double falling_factorial(int j, int r) {
  double f = 1.0;
  for (int i = 0; i < r; ++i) f *= static_cast<double>(j - i);
  return f;
}

double ipow(double base, int e) {
  double p = 1.0;
  for (int i = 0; i < e; ++i) p *= base;
  return p;
}

double binomial(int n, int k) {
  double c = 1.0;
  for (int i = 1; i <= k; ++i) c = c * static_cast<double>(n - k + i) / i;
  return c;
}

std::vector<double> scaled_knots(const SplineModel& m) {
  std::vector<double> out;
  out.reserve(m.basis.interior_knots.size());
  for (double k : m.basis.interior_knots) out.push_back((k - m.x_offset) / m.x_scale);
  return out;
}

}  // namespace

std::vector<std::string> SplineBasis::column_names() const {
  std::vector<std::string> names;
  for (int j = 0; j < order(); ++j) {
    names.push_back(j == 0 ? "1" : j == 1 ? "x" : "x^" + std::to_string(j));
  }
  for (double k : interior_knots) {
    std::ostringstream s;
    s << "(x-" << k << ")_+^" << degree;
    names.push_back(s.str());
  }
  return names;
}

DesignMatrix build_basis(std::span<const double> x, const SplineBasis& basis) {
  check_basis(x, basis);
  DesignMatrix d;
  d.basis = basis;
  d.x.assign(x.begin(), x.end());
  d.rows = x.size();
  d.cols = basis.size();
  fill_basis(x, basis.interior_knots, basis.degree, d.entries);
  return d;
}

DesignMatrix build_basis(std::span<const double> x, std::span<const double> interior_knots, int degree) {
  return build_basis(x, SplineBasis{degree, {interior_knots.begin(), interior_knots.end()}});
}

double SplineModel::hat_trace() const {
  double t = 0.0;
  for (double z : hat_diagonal) t += z;
  return t;
}

double SplineModel::x_min() const { return *std::min_element(x.begin(), x.end()); }
double SplineModel::x_max() const { return *std::max_element(x.begin(), x.end()); }

SplineModel fit_ols(const DesignMatrix& design, std::span<const double> y) {
  const std::size_t n = design.rows;
  const std::size_t J = design.cols;
  if (y.size() != n) fail("response length " + std::to_string(y.size()) + " != design rows " + std::to_string(n));
  if (n < J) fail("need at least " + std::to_string(J) + " observations, have " + std::to_string(n));
  for (double v : y) {
    if (!std::isfinite(v)) fail("non-finite response value");
  }

  SplineModel m;
  m.basis = design.basis;
  m.x = design.x;
  m.y.assign(y.begin(), y.end());
  const auto [lo, hi] = std::minmax_element(m.x.begin(), m.x.end());
  m.x_offset = *lo;
  m.x_scale = *hi > *lo ? *hi - *lo : 1.0;

  std::vector<double> s(n);
  for (std::size_t i = 0; i < n; ++i) s[i] = (m.x[i] - m.x_offset) / m.x_scale;
  std::vector<double> scaled;
  fill_basis(s, scaled_knots(m), m.basis.degree, scaled);

  using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  Eigen::MatrixXd A = Eigen::Map<const RowMatrix>(scaled.data(), static_cast<Eigen::Index>(n),
                                                   static_cast<Eigen::Index>(J));
  Eigen::VectorXd norms = A.colwise().norm().transpose();
  for (Eigen::Index j = 0; j < norms.size(); ++j) {
    if (norms[j] == 0.0) norms[j] = 1.0;
  }
  A = A * norms.cwiseInverse().asDiagonal();

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(sv.size() - 1) <= kRankTolerance * sv(0)) {
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
    qr.setThreshold(kRankTolerance);
    const auto rank = qr.rank();
    const auto names = m.basis.column_names();
    std::string offending;
    for (Eigen::Index k = rank; k < static_cast<Eigen::Index>(J); ++k) {
      const auto col = static_cast<std::size_t>(qr.colsPermutation().indices()(k));
      offending += (offending.empty() ? "" : ", ") + names[col];
    }
    if (offending.empty()) offending = names.back();
    fail("design matrix is rank deficient; dependent columns: " + offending);
  }

  const Eigen::Map<const Eigen::VectorXd> yv(m.y.data(), static_cast<Eigen::Index>(n));
  const Eigen::VectorXd gamma = svd.solve(yv).cwiseQuotient(norms);
  m.scaled_coefficients.assign(gamma.data(), gamma.data() + gamma.size());

  // Hat diagonal: squared row norms of the thin U factor.
  const RowMatrix U = svd.matrixU();
  m.hat_diagonal.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    m.hat_diagonal[i] = kernels::sum_sq({U.data() + i * J, J});
  }

  // Raw-basis coefficients. With s = (x - a) / w:
  //   s^j = w^-j sum_i C(j, i) x^i (-a)^(j-i),  (s - k')_+^d = w^-d (x - k)_+^d
  const int order = m.basis.order();
  m.coefficients.assign(J, 0.0);
  for (int j = 0; j < order; ++j) {
    const double gj = m.scaled_coefficients[static_cast<std::size_t>(j)] / ipow(m.x_scale, j);
    for (int i = 0; i <= j; ++i) {
      m.coefficients[static_cast<std::size_t>(i)] += gj * binomial(j, i) * ipow(-m.x_offset, j - i);
    }
  }
  for (std::size_t k = static_cast<std::size_t>(order); k < J; ++k) {
    m.coefficients[k] = m.scaled_coefficients[k] / ipow(m.x_scale, m.basis.degree);
  }

  m.fitted = predict(m, m.x);
  m.rss = kernels::sum_sq_diff(m.y, m.fitted);
  double mean = 0.0;
  for (double v : m.y) mean += v;
  mean /= static_cast<double>(n);
  double tss = 0.0;
  for (double v : m.y) tss += (v - mean) * (v - mean);
  m.r_squared = tss > 0.0 ? 1.0 - m.rss / tss : 0.0;
  m.residual_variance = n > J ? m.rss / static_cast<double>(n - J) : std::numeric_limits<double>::quiet_NaN();
  m.pointwise_sd.resize(n);
  for (std::size_t i = 0; i < n; ++i) m.pointwise_sd[i] = std::sqrt(m.residual_variance * m.hat_diagonal[i]);

  bool interpolating = false;
  for (double z : m.hat_diagonal) interpolating = interpolating || z >= 1.0 - kRankTolerance;
  if (!interpolating) m.loocv = loocv(m);
  return m;
}

SplineModel fit_spline(std::span<const double> x, std::span<const double> y, const SplineBasis& basis) {
  return fit_ols(build_basis(x, basis), y);
}

double loocv(const SplineModel& model) {
  const std::size_t n = model.y.size();
  if (n == 0) fail("model has no observations");
  double cv = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double z = model.hat_diagonal[i];
    if (z >= 1.0 - kRankTolerance) {
      fail("leave-one-out undefined: point " + std::to_string(i) + " (x = " + std::to_string(model.x[i]) +
           ") has hat value 1");
    }
    const double r = (model.y[i] - model.fitted[i]) / (1.0 - z);
    cv += r * r;
  }
  return cv / static_cast<double>(n);
}

std::vector<double> predict(const SplineModel& model, std::span<const double> x_new) {
  const std::size_t J = model.scaled_coefficients.size();
  std::vector<double> s(x_new.size());
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = (x_new[i] - model.x_offset) / model.x_scale;
  std::vector<double> rows;
  fill_basis(s, scaled_knots(model), model.basis.degree, rows);
  std::vector<double> out(x_new.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = kernels::dot({rows.data() + i * J, J}, model.scaled_coefficients);
  }
  return out;
}

double predict(const SplineModel& model, double x) { return predict(model, std::span<const double>(&x, 1))[0]; }

double predict_derivative(const SplineModel& model, double x, int order) {
  if (order < 0) fail("derivative order must be non-negative");
  if (order == 0) return predict(model, x);
  const double s = (x - model.x_offset) / model.x_scale;
  const int degree = model.basis.degree;
  const auto& g = model.scaled_coefficients;
  double acc = 0.0;
  for (int j = order; j <= degree; ++j) {
    acc += g[static_cast<std::size_t>(j)] * falling_factorial(j, order) * ipow(s, j - order);
  }
  if (order <= degree) {
    const auto knots = scaled_knots(model);
    for (std::size_t k = 0; k < knots.size(); ++k) {
      if (!(s > knots[k])) continue;
      acc += g[static_cast<std::size_t>(degree + 1) + k] * falling_factorial(degree, order) *
             ipow(s - knots[k], degree - order);
    }
  }
  return acc / ipow(model.x_scale, order);
}

bool extrapolates(const SplineModel& model, double x) { return x < model.x_min() || x > model.x_max(); }

}  // namespace curveflat
