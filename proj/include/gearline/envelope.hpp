#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

#include "gearline/kinematics.hpp"
#include "gearline/signal.hpp"
#include "gearline/types.hpp"

namespace gearline {

/// Log-envelope spectrum on positive frequencies:
/// LES[f] = |F{ log(|analytic(x)|^2 + eps) }|^2.
/// With apply_bandpass the band filter runs first; otherwise the caller must
/// have filtered the signal already.
inline Spectrum log_envelope_spectrum(const TimeSignal& signal, const BandSpec& band,
                                      bool apply_bandpass = true) {
  require_valid(signal, "log_envelope_spectrum");
  TimeSignal work;
  const TimeSignal* x = &signal;
  if (apply_bandpass) {
    auto kernel = design_bandpass_fir(band, signal.sample_rate_hz);
    work = filter_forward_backward(signal, kernel);
    x = &work;
  }
  auto a = analytic_signal(*x);
  const std::size_t n = a.size();
  std::vector<double> logenv(n);
  for (std::size_t i = 0; i < n; ++i) logenv[i] = std::log(std::norm(a[i]) + kLogFloor);
  auto spec = fft_real(logenv);
  Spectrum les;
  les.bin_hz = signal.sample_rate_hz / static_cast<double>(n);
  les.amplitudes.resize(n / 2 + 1);
  for (std::size_t k = 0; k <= n / 2; ++k) les.amplitudes[k] = std::norm(spec[k]);
  return les;
}

namespace detail {

inline std::string freq_name(const char* prefix, double hz) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%s%.4f", prefix, hz);
  return buf;
}

}  // namespace detail

/// LES amplitudes restricted to [lo, hi] (default 10..555.5 Hz); the heavily
/// contaminated lowest bins below 10 Hz are never emitted.
inline FeatureVector les_limited(const Spectrum& les, double lo = 10.0, double hi = 555.5) {
  if (les.amplitudes.empty()) throw std::invalid_argument("les_limited: empty spectrum");
  if (!(lo <= hi)) throw std::invalid_argument("les_limited: invalid domain");
  if (les.bin_hz * static_cast<double>(les.amplitudes.size() - 1) < hi)
    throw std::invalid_argument("les_limited: spectrum too coarse to cover domain");
  FeatureVector out;
  for (std::size_t k = 0; k < les.amplitudes.size(); ++k) {
    const double f = les.freq_of(k);
    if (f < lo || f > hi) continue;
    out.names.push_back(detail::freq_name("les_", f));
    out.values.push_back(les.amplitudes[k]);
  }
  return out;
}

/// One feature per fault frequency: the maximum LES amplitude within
/// FF*(1 +- tol); when no bin falls inside the window, the nearest bin.
/// Ties break toward the lower frequency.
inline FeatureVector les_ff(const Spectrum& les, const std::vector<FaultFrequency>& ffs,
                            double tol_frac = 0.01) {
  if (les.amplitudes.empty()) throw std::invalid_argument("les_ff: empty spectrum");
  if (ffs.empty()) throw std::invalid_argument("les_ff: no fault frequencies");
  const std::size_t last = les.amplitudes.size() - 1;
  FeatureVector out;
  out.names.reserve(ffs.size());
  out.values.reserve(ffs.size());
  for (const auto& ff : ffs) {
    const double lo = ff.hz * (1.0 - tol_frac);
    const double hi = ff.hz * (1.0 + tol_frac);
    auto kmin = static_cast<long long>(std::ceil(lo / les.bin_hz - 1e-12));
    auto kmax = static_cast<long long>(std::floor(hi / les.bin_hz + 1e-12));
    kmin = std::max<long long>(kmin, 0);
    kmax = std::min<long long>(kmax, static_cast<long long>(last));
    double value;
    if (kmin > kmax) {
      // Nearest bin, lower index on distance ties.
      auto k = static_cast<long long>(std::floor(ff.hz / les.bin_hz));
      k = std::clamp<long long>(k, 0, static_cast<long long>(last));
      double best = std::abs(les.freq_of(static_cast<std::size_t>(k)) - ff.hz);
      if (k < static_cast<long long>(last)) {
        const double up = std::abs(les.freq_of(static_cast<std::size_t>(k + 1)) - ff.hz);
        if (up < best) ++k;
      }
      value = les.amplitudes[static_cast<std::size_t>(k)];
    } else {
      value = les.amplitudes[static_cast<std::size_t>(kmin)];
      for (long long k = kmin + 1; k <= kmax; ++k)
        value = std::max(value, les.amplitudes[static_cast<std::size_t>(k)]);
    }
    out.names.push_back(ff.label);
    out.values.push_back(value);
  }
  return out;
}

}  // namespace gearline
