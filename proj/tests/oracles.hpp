#pragma once

// Independent brute-force references used to pin expected values. These stay
// deliberately naive (direct sums, pair counting) and must not share code
// with the library paths they check.

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

namespace oracle {

inline constexpr double kPi = 3.14159265358979323846;

/// Direct O(n^2) DFT.
inline std::vector<std::complex<double>> dft(const std::vector<std::complex<double>>& x) {
  const std::size_t n = x.size();
  std::vector<std::complex<double>> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::complex<double> acc(0.0, 0.0);
    for (std::size_t m = 0; m < n; ++m) {
      double a = -2.0 * kPi * static_cast<double>(k) * static_cast<double>(m) / static_cast<double>(n);
      acc += x[m] * std::complex<double>(std::cos(a), std::sin(a));
    }
    out[k] = acc;
  }
  return out;
}

inline std::vector<std::complex<double>> dft_real(const std::vector<double>& x) {
  std::vector<std::complex<double>> c(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) c[i] = x[i];
  return dft(c);
}

/// Direct double-loop DCT-II, unnormalized: X[k] = sum_n x[n] cos(pi k (2n+1) / (2N)).
inline std::vector<double> dct2(const std::vector<double>& x) {
  const std::size_t n = x.size();
  std::vector<double> out(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    double acc = 0.0;
    for (std::size_t m = 0; m < n; ++m)
      acc += x[m] * std::cos(kPi * static_cast<double>(k) * (2.0 * static_cast<double>(m) + 1.0) /
                             (2.0 * static_cast<double>(n)));
    out[k] = acc;
  }
  return out;
}

/// Mann-Whitney pair counting AUC; ties count one half.
/// `positive[i]` marks membership of the accept set.
inline double auc_pairs(const std::vector<double>& scores, const std::vector<bool>& positive) {
  double pairs = 0.0, won = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (!positive[i]) continue;
    for (std::size_t j = 0; j < scores.size(); ++j) {
      if (positive[j]) continue;
      pairs += 1.0;
      if (scores[i] > scores[j])
        won += 1.0;
      else if (scores[i] == scores[j])
        won += 0.5;
    }
  }
  return won / pairs;
}

/// Closed-form AM tone: (1 + depth*cos(2 pi f_mod t + phi_mod)) * cos(2 pi f_c t + phi_c).
inline std::vector<double> am_tone(double f_carrier, double f_mod, double depth, double sample_rate,
                                   std::size_t n, double phi_c = 0.0, double phi_m = 0.0) {
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) {
    double t = static_cast<double>(i) / sample_rate;
    x[i] = (1.0 + depth * std::cos(2.0 * kPi * f_mod * t + phi_m)) * std::cos(2.0 * kPi * f_carrier * t + phi_c);
  }
  return x;
}

/// The envelope the AM tone above should produce.
inline std::vector<double> am_envelope(double f_mod, double depth, double sample_rate, std::size_t n,
                                       double phi_m = 0.0) {
  std::vector<double> e(n);
  for (std::size_t i = 0; i < n; ++i) {
    double t = static_cast<double>(i) / sample_rate;
    e[i] = std::abs(1.0 + depth * std::cos(2.0 * kPi * f_mod * t + phi_m));
  }
  return e;
}

}  // namespace oracle
