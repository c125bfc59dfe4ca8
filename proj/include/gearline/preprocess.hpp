#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "gearline/types.hpp"

namespace gearline {

/// Per-feature median and half interquartile range; quartiles map to +-1.
struct RobustScalerModel {
  std::vector<double> medians;
  std::vector<double> half_iqrs;

  std::size_t dim() const { return medians.size(); }
};

/// Linear-interpolation quantile on sorted data, h = p * (n - 1).
inline double interpolated_quantile(std::vector<double> sorted, double p) {
  if (sorted.empty()) throw std::invalid_argument("quantile of empty data");
  const double h = p * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

inline RobustScalerModel fit_robust_scaler(const FeatureMatrix& X) {
  if (X.rows() < 4) throw std::invalid_argument("fit_robust_scaler: needs at least 4 rows");
  const std::size_t d = X.cols();
  RobustScalerModel m;
  m.medians.resize(d);
  m.half_iqrs.resize(d);
  std::vector<double> col(X.rows());
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t i = 0; i < X.rows(); ++i) col[i] = X.values[i][j];
    std::sort(col.begin(), col.end());
    m.medians[j] = interpolated_quantile(col, 0.5);
    m.half_iqrs[j] = 0.5 * (interpolated_quantile(col, 0.75) - interpolated_quantile(col, 0.25));
  }
  return m;
}

inline std::vector<double> apply_robust_scaler(const RobustScalerModel& m,
                                               const std::vector<double>& x) {
  if (x.size() != m.dim()) throw std::invalid_argument("apply_robust_scaler: dimension mismatch");
  std::vector<double> out(x.size());
  for (std::size_t j = 0; j < x.size(); ++j)
    out[j] = m.half_iqrs[j] > 0.0 ? (x[j] - m.medians[j]) / m.half_iqrs[j] : 0.0;
  return out;
}

inline FeatureVector apply_robust_scaler(const RobustScalerModel& m, const FeatureVector& x) {
  FeatureVector out;
  out.names = x.names;
  out.values = apply_robust_scaler(m, x.values);
  return out;
}

struct PcaModel {
  std::vector<double> mean;
  std::vector<std::vector<double>> components;       // k x d, orthonormal rows
  std::vector<double> explained_variance_fracs;      // per kept component

  std::size_t dim() const { return mean.size(); }
  std::size_t kept() const { return components.size(); }
};

/// Centered PCA keeping the smallest component count whose cumulative variance
/// fraction reaches the target. Component signs follow the convention that the
/// largest-magnitude coefficient is positive.
inline PcaModel fit_pca(const FeatureMatrix& X, double variance_target = 0.90) {
  const std::size_t n = X.rows(), d = X.cols();
  if (n < 2) throw std::invalid_argument("fit_pca: needs at least 2 rows");
  Eigen::MatrixXd A(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      const double v = X.values[i][j];
      if (!std::isfinite(v)) throw std::invalid_argument("fit_pca: non-finite feature");
      A(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
    }
  }
  Eigen::RowVectorXd mean = A.colwise().mean();
  A.rowwise() -= mean;

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  const double total = sv.squaredNorm();
  if (!(total > 0.0)) throw std::invalid_argument("fit_pca: zero variance");

  std::size_t k = 0;
  double cum = 0.0;
  const auto rank = static_cast<std::size_t>(sv.size());
  for (std::size_t i = 0; i < rank; ++i) {
    const double frac = sv(static_cast<Eigen::Index>(i)) * sv(static_cast<Eigen::Index>(i)) / total;
    if (frac <= 0.0) break;
    cum += frac;
    k = i + 1;
    if (cum >= variance_target) break;
  }

  PcaModel m;
  m.mean.assign(mean.data(), mean.data() + d);
  m.components.resize(k, std::vector<double>(d));
  m.explained_variance_fracs.resize(k);
  for (std::size_t i = 0; i < k; ++i) {
    Eigen::VectorXd v = svd.matrixV().col(static_cast<Eigen::Index>(i));
    Eigen::Index arg = 0;
    v.cwiseAbs().maxCoeff(&arg);
    if (v(arg) < 0.0) v = -v;
    for (std::size_t j = 0; j < d; ++j) m.components[i][j] = v(static_cast<Eigen::Index>(j));
    m.explained_variance_fracs[i] =
        sv(static_cast<Eigen::Index>(i)) * sv(static_cast<Eigen::Index>(i)) / total;
  }
  return m;
}

inline std::vector<double> apply_pca(const PcaModel& m, const std::vector<double>& x) {
  if (x.size() != m.dim()) throw std::invalid_argument("apply_pca: dimension mismatch");
  std::vector<double> out(m.kept(), 0.0);
  for (std::size_t i = 0; i < m.kept(); ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) acc += m.components[i][j] * (x[j] - m.mean[j]);
    out[i] = acc;
  }
  return out;
}

inline FeatureVector apply_pca(const PcaModel& m, const FeatureVector& x) {
  FeatureVector out;
  out.values = apply_pca(m, x.values);
  out.names.resize(out.values.size());
  for (std::size_t i = 0; i < out.names.size(); ++i) out.names[i] = "pc" + std::to_string(i);
  return out;
}

}  // namespace gearline
