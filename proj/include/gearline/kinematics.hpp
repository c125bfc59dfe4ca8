#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "gearline/types.hpp"

namespace gearline {

/// Two-stage gear train; all fault frequencies derive from these rated values.
struct GearTrain {
  double motor_speed_hz = 0.0;              // f1 (rated)
  std::array<int, 4> tooth_counts{};        // z1..z4, driving/driven per stage
  double speed_tolerance_frac = 0.01;

  double shaft_hz(int n) const {
    const double f1 = motor_speed_hz;
    if (n == 1) return f1;
    const double f2 = f1 * tooth_counts[0] / tooth_counts[1];
    if (n == 2) return f2;
    return f2 * tooth_counts[2] / tooth_counts[3];
  }

  /// Tooth-engagement rate of stage 1 or 2.
  double mesh_hz(int stage) const {
    return shaft_hz(stage) * tooth_counts[2 * (stage - 1)];
  }
};

inline void require_valid(const GearTrain& t, const char* where) {
  if (!(t.motor_speed_hz > 0.0))
    throw std::invalid_argument(std::string(where) + ": motor speed must be positive");
  for (int z : t.tooth_counts)
    if (z < 4) throw std::invalid_argument(std::string(where) + ": tooth counts must be >= 4");
  if (!(t.speed_tolerance_frac > 0.0) || t.speed_tolerance_frac > 0.05)
    throw std::invalid_argument(std::string(where) + ": speed tolerance must be in (0, 0.05]");
}

enum class FaultFrequencyKind { shaft_harmonic, mesh_center, mesh_sideband };

struct FaultFrequency {
  double hz = 0.0;
  std::string label;
  FaultFrequencyKind kind = FaultFrequencyKind::shaft_harmonic;
};

namespace detail {

inline void sort_by_frequency(std::vector<FaultFrequency>& v) {
  std::sort(v.begin(), v.end(), [](const FaultFrequency& a, const FaultFrequency& b) {
    if (a.hz != b.hz) return a.hz < b.hz;
    return a.label < b.label;
  });
}

}  // namespace detail

/// Shaft rotational frequencies and harmonics: i * f_n for i in {1,2,3}, n in {1,2}.
inline std::vector<FaultFrequency> shaft_fault_frequencies(const GearTrain& train, double lo, double hi) {
  require_valid(train, "shaft_fault_frequencies");
  if (!(lo < hi)) throw std::invalid_argument("shaft_fault_frequencies: domain must satisfy lo < hi");
  std::vector<FaultFrequency> out;
  for (int n = 1; n <= 2; ++n) {
    const double fn = train.shaft_hz(n);
    for (int i = 1; i <= 3; ++i) {
      const double hz = i * fn;
      if (hz < lo || hz > hi) continue;
      out.push_back({hz, "shaft" + std::to_string(n) + "_h" + std::to_string(i),
                     FaultFrequencyKind::shaft_harmonic});
    }
  }
  detail::sort_by_frequency(out);
  return out;
}

/// Gear-mesh centers and sidebands: f_n * z_{2n-1} +- i * f_{n+m-1},
/// i in {0..3}, n,m in {1,2}; the i = 0 duplicates collapse to one center per stage.
inline std::vector<FaultFrequency> mesh_fault_frequencies(const GearTrain& train, double lo, double hi) {
  require_valid(train, "mesh_fault_frequencies");
  if (!(lo < hi)) throw std::invalid_argument("mesh_fault_frequencies: domain must satisfy lo < hi");
  std::vector<FaultFrequency> out;
  for (int n = 1; n <= 2; ++n) {
    const double center = train.mesh_hz(n);
    if (center >= lo && center <= hi)
      out.push_back({center, "mesh" + std::to_string(n), FaultFrequencyKind::mesh_center});
    for (int m = 1; m <= 2; ++m) {
      const double fs = train.shaft_hz(n + m - 1);
      for (int i = 1; i <= 3; ++i) {
        for (int sign : {+1, -1}) {
          const double hz = center + sign * i * fs;
          if (hz < lo || hz > hi) continue;
          out.push_back({hz,
                         "mesh" + std::to_string(n) + "_sb" + (sign > 0 ? "+" : "-") +
                             std::to_string(i) + "f" + std::to_string(n + m - 1),
                         FaultFrequencyKind::mesh_sideband});
        }
      }
    }
  }
  detail::sort_by_frequency(out);
  return out;
}

/// Union of shaft and mesh frequencies, exact coincidences (1e-9 Hz) merged.
inline std::vector<FaultFrequency> fault_frequency_set(const GearTrain& train, double lo, double hi) {
  auto out = shaft_fault_frequencies(train, lo, hi);
  auto mesh = mesh_fault_frequencies(train, lo, hi);
  out.insert(out.end(), mesh.begin(), mesh.end());
  detail::sort_by_frequency(out);
  std::vector<FaultFrequency> dedup;
  for (auto& ff : out) {
    if (!dedup.empty() && std::abs(dedup.back().hz - ff.hz) <= 1e-9) continue;
    dedup.push_back(std::move(ff));
  }
  return dedup;
}

/// Rated 1375 rpm motor with the reconstructed tooth counts used throughout
/// the test rig. Configuration data, not a constant of the algorithms.
inline GearTrain reference_gear_train() {
  GearTrain t;
  t.motor_speed_hz = 1375.0 / 60.0;
  t.tooth_counts = {21, 48, 11, 49};
  t.speed_tolerance_frac = 0.01;
  return t;
}

}  // namespace gearline
