#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "gearline/kinematics.hpp"
#include "gearline/signal.hpp"
#include "gearline/types.hpp"

namespace gearline {

inline double hz_to_mel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
inline double mel_to_hz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

/// Triangular mel filter bank, peak weight 1, rows = filters, cols = FFT bins.
/// Corner points are equally spaced on the mel scale between f_lo and f_hi;
/// n_fft_bins is the one-sided bin count of the underlying spectrum.
inline std::vector<std::vector<double>> mel_filterbank(int n_filters, double f_lo, double f_hi,
                                                       std::size_t n_fft_bins,
                                                       double sample_rate_hz) {
  if (n_filters < 1) throw std::invalid_argument("mel_filterbank: need at least one filter");
  if (!(f_lo < f_hi) || !(f_hi < sample_rate_hz / 2.0))
    throw std::invalid_argument("mel_filterbank: need f_lo < f_hi < rate/2");
  if (n_fft_bins < 2) throw std::invalid_argument("mel_filterbank: too few bins");

  const double mel_lo = hz_to_mel(f_lo);
  const double mel_hi = hz_to_mel(f_hi);
  std::vector<double> corners(static_cast<std::size_t>(n_filters) + 2);
  for (std::size_t j = 0; j < corners.size(); ++j)
    corners[j] = mel_to_hz(mel_lo + (mel_hi - mel_lo) * static_cast<double>(j) /
                                        static_cast<double>(n_filters + 1));

  const double fft_len = 2.0 * static_cast<double>(n_fft_bins - 1);
  const double bin_hz = sample_rate_hz / fft_len;
  std::vector<std::vector<double>> bank(static_cast<std::size_t>(n_filters),
                                        std::vector<double>(n_fft_bins, 0.0));
  for (int j = 0; j < n_filters; ++j) {
    const double left = corners[j], peak = corners[j + 1], right = corners[j + 2];
    bool any = false;
    for (std::size_t k = 0; k < n_fft_bins; ++k) {
      const double f = static_cast<double>(k) * bin_hz;
      double w = 0.0;
      if (f > left && f < peak)
        w = (f - left) / (peak - left);
      else if (f == peak)
        w = 1.0;
      else if (f > peak && f < right)
        w = (right - f) / (right - peak);
      bank[static_cast<std::size_t>(j)][k] = w;
      any = any || w > 0.0;
    }
    if (!any)
      throw std::invalid_argument("mel_filterbank: spectrum too coarse to resolve filter " +
                                  std::to_string(j));
  }
  return bank;
}

struct LogMelConfig {
  int n_filters = 24;
  double f_lo_hz = 1150.0;
  double f_hi_hz = 5100.0;
  double overlap_frac = 0.5;
};

/// Log-mel spectrogram flattened time-major. The window spans four cycles of
/// the slowest shaft so any single-revolution fault lands inside one slot.
inline FeatureVector log_mel_features(const TimeSignal& signal, const GearTrain& train,
                                      const LogMelConfig& cfg = {}) {
  require_valid(signal, "log_mel_features");
  require_valid(train, "log_mel_features");
  const double window_s = 4.0 / train.shaft_hz(3);
  const auto window_len =
      static_cast<std::size_t>(std::llround(window_s * signal.sample_rate_hz));
  if (window_len > signal.samples.size())
    throw std::invalid_argument("log_mel_features: signal shorter than one window");
  auto stft = stft_magnitude(signal, window_len, cfg.overlap_frac);
  const std::size_t bins = stft.cols();
  auto bank = mel_filterbank(cfg.n_filters, cfg.f_lo_hz, cfg.f_hi_hz, bins, signal.sample_rate_hz);

  FeatureVector out;
  out.names.reserve(stft.rows() * static_cast<std::size_t>(cfg.n_filters));
  out.values.reserve(out.names.capacity());
  for (std::size_t t = 0; t < stft.rows(); ++t) {
    for (int b = 0; b < cfg.n_filters; ++b) {
      double acc = 0.0;
      const auto& w = bank[static_cast<std::size_t>(b)];
      for (std::size_t k = 0; k < bins; ++k) acc += w[k] * stft.values[t][k];
      out.names.push_back("lms_t" + std::to_string(t) + "_b" + std::to_string(b));
      out.values.push_back(std::log(acc + kLogFloor));
    }
  }
  return out;
}

struct EnvelopeSpectrogramConfig {
  double window_s = 0.0088;
  double overlap_frac = 0.5;
  double min_env_hz = 10.0;
  std::size_t pool_factor = 11;
};

/// Construction-time check that the pooled envelope resolution still separates
/// adjacent fault frequencies below the envelope Nyquist.
inline void check_envelope_pooling(const GearTrain& train, const EnvelopeSpectrogramConfig& cfg,
                                   double sample_rate_hz, std::size_t frames) {
  const auto window_len = static_cast<std::size_t>(std::llround(cfg.window_s * sample_rate_hz));
  const double env_rate = sample_rate_hz / static_cast<double>(stft_hop(window_len, cfg.overlap_frac));
  const double env_bin_hz = env_rate / (2.0 * static_cast<double>(frames));
  const double pooled_hz = env_bin_hz * static_cast<double>(cfg.pool_factor);
  const double nyquist = env_rate / 2.0;
  auto ffs = fault_frequency_set(train, cfg.min_env_hz, nyquist);
  for (std::size_t i = 1; i < ffs.size(); ++i)
    if (ffs[i].hz - ffs[i - 1].hz < pooled_hz)
      throw std::invalid_argument(
          "envelope spectrogram: pooling factor merges fault frequencies " + ffs[i - 1].label +
          " and " + ffs[i].label);
}

/// Envelope-spectrogram features: short-window log spectrogram, band-restricted
/// rows, DCT-II along time per row, |.|, sub-10 Hz bins dropped, max-pooled by
/// cfg.pool_factor (remainder window kept), flattened row-major.
inline FeatureVector log_envelope_spectrogram_features(const TimeSignal& signal,
                                                       const GearTrain& train, const BandSpec& band,
                                                       const EnvelopeSpectrogramConfig& cfg = {}) {
  require_valid(signal, "log_envelope_spectrogram_features");
  require_valid(train, "log_envelope_spectrogram_features");
  require_valid(band, signal.sample_rate_hz, "log_envelope_spectrogram_features");

  // The window must separate single-revolution faults of the fastest shaft and
  // still observe the second mesh frequency (plus tolerance) in the envelope.
  const double quarter_cycle = 0.25 / train.shaft_hz(1);
  if (!(cfg.window_s < quarter_cycle))
    throw std::invalid_argument("envelope spectrogram: window exceeds a quarter motor cycle");
  if (1.0 / cfg.window_s < train.mesh_hz(2) * (1.0 + train.speed_tolerance_frac))
    throw std::invalid_argument("envelope spectrogram: window too long to observe mesh 2");

  auto spec = log_spectrogram(signal, cfg.window_s, cfg.overlap_frac);
  const std::size_t frames = spec.rows();
  if (frames < 22)
    throw std::invalid_argument("envelope spectrogram: signal too short (needs >= 22 frames)");
  check_envelope_pooling(train, cfg, signal.sample_rate_hz, frames);

  const auto window_len = static_cast<std::size_t>(std::llround(cfg.window_s * signal.sample_rate_hz));
  const double row_hz = signal.sample_rate_hz / static_cast<double>(window_len);
  const double env_rate = signal.sample_rate_hz / static_cast<double>(stft_hop(window_len, cfg.overlap_frac));
  const double env_bin_hz = env_rate / (2.0 * static_cast<double>(frames));
  const auto first_env_bin =
      static_cast<std::size_t>(std::ceil(cfg.min_env_hz / env_bin_hz - 1e-12));

  FeatureVector out;
  std::vector<double> series(frames);
  for (std::size_t k = 0; k < spec.cols(); ++k) {
    const double f = static_cast<double>(k) * row_hz;
    if (f < band.low_hz || f > band.high_hz) continue;
    for (std::size_t t = 0; t < frames; ++t) series[t] = spec.values[t][k];
    auto env = dct2(series);
    for (auto& v : env) v = std::abs(v);
    std::size_t pooled_idx = 0;
    for (std::size_t b = first_env_bin; b < env.size(); b += cfg.pool_factor) {
      const std::size_t end = std::min(b + cfg.pool_factor, env.size());
      double m = env[b];
      for (std::size_t j = b + 1; j < end; ++j) m = std::max(m, env[j]);
      out.names.push_back("lesspec_f" + std::to_string(k) + "_p" + std::to_string(pooled_idx++));
      out.values.push_back(m);
    }
  }
  return out;
}

}  // namespace gearline
