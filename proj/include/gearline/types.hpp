#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace gearline {

inline constexpr double kPi = 3.14159265358979323846;

// Floor added inside every log transform so silent frames stay finite.
inline constexpr double kLogFloor = 1e-12;

/// Uniformly sampled real-valued acoustic record.
struct TimeSignal {
  std::vector<double> samples;
  double sample_rate_hz = 0.0;

  double duration_s() const {
    return static_cast<double>(samples.size()) / sample_rate_hz;
  }
};

inline void require_valid(const TimeSignal& s, const char* where) {
  if (s.samples.size() < 2)
    throw std::invalid_argument(std::string(where) + ": signal needs at least 2 samples");
  if (!(s.sample_rate_hz > 0.0))
    throw std::invalid_argument(std::string(where) + ": sample rate must be positive");
}

/// Pass band in Hz, low < high.
struct BandSpec {
  double low_hz = 0.0;
  double high_hz = 0.0;
};

inline void require_valid(const BandSpec& b, double sample_rate_hz, const char* where) {
  if (!(b.low_hz > 0.0) || !(b.low_hz < b.high_hz) || !(b.high_hz < sample_rate_hz / 2.0))
    throw std::invalid_argument(std::string(where) + ": band must satisfy 0 < low < high < rate/2");
}

/// One-sided spectrum; bin k corresponds to k * bin_hz.
struct Spectrum {
  double bin_hz = 0.0;
  std::vector<double> amplitudes;

  std::size_t size() const { return amplitudes.size(); }
  double freq_of(std::size_t k) const { return static_cast<double>(k) * bin_hz; }
};

/// Named, ordered real features for one measurement.
struct FeatureVector {
  std::vector<std::string> names;
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
};

inline void require_consistent(const FeatureVector& fv, const char* where) {
  if (fv.names.size() != fv.values.size())
    throw std::invalid_argument(std::string(where) + ": name/value length mismatch");
}

/// Row-major matrix with named rows and columns.
struct FeatureMatrix {
  std::vector<std::string> row_names;
  std::vector<std::string> col_names;
  std::vector<std::vector<double>> values;

  std::size_t rows() const { return values.size(); }
  std::size_t cols() const { return values.empty() ? col_names.size() : values.front().size(); }
};

inline bool all_finite(const std::vector<double>& v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

}  // namespace gearline
