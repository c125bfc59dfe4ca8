#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "gearline/preprocess.hpp"
#include "gearline/rng.hpp"

using gearline::apply_pca;
using gearline::apply_robust_scaler;
using gearline::FeatureMatrix;
using gearline::fit_pca;
using gearline::fit_robust_scaler;

namespace {

FeatureMatrix from_columns(const std::vector<std::vector<double>>& cols) {
  FeatureMatrix m;
  const std::size_t n = cols.front().size();
  m.values.assign(n, std::vector<double>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j)
    for (std::size_t i = 0; i < n; ++i) m.values[i][j] = cols[j][i];
  for (std::size_t j = 0; j < cols.size(); ++j) m.col_names.push_back("c" + std::to_string(j));
  for (std::size_t i = 0; i < n; ++i) m.row_names.push_back("r" + std::to_string(i));
  return m;
}

}  // namespace

TEST_CASE("robust scaler quartile arithmetic") {
  auto m = fit_robust_scaler(from_columns({{1, 3, 5, 7, 9}}));
  CHECK(m.medians[0] == 5.0);
  CHECK(m.half_iqrs[0] == 2.0);

  CHECK(apply_robust_scaler(m, std::vector<double>{3.0})[0] == -1.0);
  CHECK(apply_robust_scaler(m, std::vector<double>{7.0})[0] == 1.0);
  CHECK(apply_robust_scaler(m, std::vector<double>{5.0})[0] == 0.0);
  CHECK(apply_robust_scaler(m, std::vector<double>{11.0})[0] == 3.0);
}

TEST_CASE("robust scaler degenerate and duplicate columns") {
  auto m = fit_robust_scaler(from_columns({{2, 2, 2, 2, 2}, {1, 2, 3, 4, 5}, {1, 2, 3, 4, 5}}));
  CHECK(m.half_iqrs[0] == 0.0);
  CHECK(m.medians[1] == m.medians[2]);
  CHECK(m.half_iqrs[1] == m.half_iqrs[2]);

  auto out = apply_robust_scaler(m, std::vector<double>{123.0, 3.0, 3.0});
  CHECK(out[0] == 0.0);
  CHECK(out[1] == out[2]);
}

TEST_CASE("robust scaler preconditions") {
  CHECK_THROWS_AS(fit_robust_scaler(from_columns({{1, 2, 3}})), std::invalid_argument);
  auto m = fit_robust_scaler(from_columns({{1, 3, 5, 7, 9}}));
  CHECK_THROWS_AS(apply_robust_scaler(m, std::vector<double>{1.0, 2.0}), std::invalid_argument);
}

TEST_CASE("training quartiles land on plus-minus one for symmetric columns") {
  // Columns symmetric about their median: quartiles sit at exactly -1 / +1.
  gearline::Rng rng(31);
  FeatureMatrix X;
  const std::size_t n = 37, d = 5;
  X.values.assign(n, std::vector<double>(d));
  for (std::size_t j = 0; j < d; ++j) {
    const double center = rng.uniform(-5, 5), span = rng.uniform(0.5, 4.0);
    for (std::size_t i = 0; i < n; ++i) {
      const double step = static_cast<double>(i) - static_cast<double>(n - 1) / 2.0;
      X.values[i][j] = center + span * step;
    }
  }
  auto m = fit_robust_scaler(X);
  for (std::size_t j = 0; j < d; ++j) {
    std::vector<double> col(n);
    for (std::size_t i = 0; i < n; ++i) col[i] = X.values[i][j];
    std::sort(col.begin(), col.end());
    std::vector<double> probe_lo(d, 0.0), probe_hi(d, 0.0);
    probe_lo[j] = gearline::interpolated_quantile(col, 0.25);
    probe_hi[j] = gearline::interpolated_quantile(col, 0.75);
    CHECK(apply_robust_scaler(m, probe_lo)[j] == Catch::Approx(-1.0).margin(1e-12));
    CHECK(apply_robust_scaler(m, probe_hi)[j] == Catch::Approx(1.0).margin(1e-12));
  }
}

TEST_CASE("interquartile range always maps onto a width-2 interval") {
  gearline::Rng rng(32);
  FeatureMatrix X;
  const std::size_t n = 41, d = 4;
  X.values.assign(n, std::vector<double>(d));
  for (auto& row : X.values)
    for (auto& v : row) v = std::exp(rng.uniform(-2, 2));  // deliberately skewed
  auto m = fit_robust_scaler(X);
  for (std::size_t j = 0; j < d; ++j) {
    std::vector<double> col(n);
    for (std::size_t i = 0; i < n; ++i) col[i] = X.values[i][j];
    std::sort(col.begin(), col.end());
    std::vector<double> lo(d, 0.0), hi(d, 0.0);
    lo[j] = gearline::interpolated_quantile(col, 0.25);
    hi[j] = gearline::interpolated_quantile(col, 0.75);
    const double a = apply_robust_scaler(m, lo)[j];
    const double b = apply_robust_scaler(m, hi)[j];
    CHECK(b - a == Catch::Approx(2.0).margin(1e-9));
    CHECK(a <= 0.0);
    CHECK(b >= 0.0);
  }
}

TEST_CASE("pca on collinear points keeps one component") {
  FeatureMatrix X;
  for (int i = 0; i < 20; ++i) X.values.push_back({0.5 * i, -1.5 * i});
  auto m = fit_pca(X, 0.90);
  CHECK(m.kept() == 1);
  CHECK(m.explained_variance_fracs[0] == Catch::Approx(1.0));
}

TEST_CASE("pca keeps all three components of an isotropic gaussian") {
  gearline::Rng rng(77);
  FeatureMatrix X;
  for (int i = 0; i < 1000; ++i) X.values.push_back({rng.normal(), rng.normal(), rng.normal()});
  auto m = fit_pca(X, 0.90);
  CHECK(m.kept() == 3);
}

TEST_CASE("pca boundary rules") {
  gearline::Rng rng(78);
  FeatureMatrix X;
  for (int i = 0; i < 50; ++i) X.values.push_back({rng.normal(), rng.normal()});
  CHECK(fit_pca(X, 0.0).kept() == 1);

  FeatureMatrix constant;
  for (int i = 0; i < 10; ++i) constant.values.push_back({1.0, 2.0});
  CHECK_THROWS_AS(fit_pca(constant, 0.9), std::invalid_argument);
}

TEST_CASE("pca components are orthonormal and decorrelate training rows") {
  gearline::Rng rng(79);
  FeatureMatrix X;
  for (int i = 0; i < 200; ++i) {
    const double a = rng.normal(), b = rng.normal(), c = rng.normal();
    X.values.push_back({a + 0.5 * b, b, 0.1 * c + 0.3 * a, c * 2.0, a - b});
  }
  auto m = fit_pca(X, 0.999999);
  for (std::size_t i = 0; i < m.kept(); ++i) {
    for (std::size_t j = i; j < m.kept(); ++j) {
      double dot = 0.0;
      for (std::size_t t = 0; t < m.dim(); ++t) dot += m.components[i][t] * m.components[j][t];
      CHECK(std::abs(dot - (i == j ? 1.0 : 0.0)) < 1e-9);
    }
  }

  // Empirical covariance of transformed rows is diagonal.
  std::vector<std::vector<double>> Y;
  for (const auto& row : X.values) Y.push_back(apply_pca(m, row));
  const std::size_t k = m.kept();
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      double acc = 0.0;
      for (const auto& y : Y) acc += y[i] * y[j];
      acc /= static_cast<double>(Y.size());
      CHECK(std::abs(acc) < 1e-8);
    }
  }

  double cum = 0.0;
  for (double f : m.explained_variance_fracs) cum += f;
  CHECK(cum >= 0.90);
}

TEST_CASE("pca transform basics") {
  gearline::Rng rng(80);
  FeatureMatrix X;
  for (int i = 0; i < 40; ++i) X.values.push_back({rng.normal(), rng.normal(), rng.normal()});
  auto m = fit_pca(X, 1.0);
  REQUIRE(m.kept() == 3);

  auto zero = apply_pca(m, m.mean);
  for (double v : zero) CHECK(std::abs(v) < 1e-12);

  // Full-rank model reconstructs exactly; residual orthogonal to the span.
  std::vector<double> x = {0.3, -1.2, 0.7};
  auto y = apply_pca(m, x);
  std::vector<double> rec(3, 0.0);
  for (std::size_t j = 0; j < 3; ++j) {
    rec[j] = m.mean[j];
    for (std::size_t i = 0; i < 3; ++i) rec[j] += m.components[i][j] * y[i];
  }
  for (std::size_t j = 0; j < 3; ++j) CHECK(rec[j] == Catch::Approx(x[j]).margin(1e-9));

  auto partial = fit_pca(X, 0.5);
  auto yp = apply_pca(partial, x);
  std::vector<double> recp(3, 0.0), resid(3, 0.0);
  for (std::size_t j = 0; j < 3; ++j) {
    recp[j] = m.mean[j];
    for (std::size_t i = 0; i < partial.kept(); ++i) recp[j] += partial.components[i][j] * yp[i];
    resid[j] = x[j] - recp[j];
  }
  for (std::size_t i = 0; i < partial.kept(); ++i) {
    double dot = 0.0;
    for (std::size_t j = 0; j < 3; ++j) dot += partial.components[i][j] * resid[j];
    CHECK(std::abs(dot) < 1e-9);
  }

  CHECK_THROWS_AS(apply_pca(m, std::vector<double>{1.0}), std::invalid_argument);
}
