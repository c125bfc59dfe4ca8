#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "gearline/fft.hpp"
#include "gearline/types.hpp"

namespace gearline {

/// Linear-phase FIR; taps are symmetric and odd in count.
struct FirKernel {
  std::vector<double> taps;
  BandSpec design_band;
  double design_rate_hz = 0.0;

  std::size_t size() const { return taps.size(); }
};

inline std::vector<double> hamming_window(std::size_t n) {
  std::vector<double> w(n, 1.0);
  if (n < 2) return w;
  for (std::size_t i = 0; i < n; ++i)
    w[i] = 0.54 - 0.46 * std::cos(2.0 * kPi * static_cast<double>(i) / static_cast<double>(n - 1));
  return w;
}

/// Window-method band-pass design (Hamming) with an explicit tap count.
inline FirKernel design_bandpass_fir_taps(const BandSpec& band, double sample_rate_hz,
                                          std::size_t taps) {
  require_valid(band, sample_rate_hz, "design_bandpass_fir");
  if (taps % 2 == 0) ++taps;
  const double f1 = band.low_hz / sample_rate_hz;
  const double f2 = band.high_hz / sample_rate_hz;
  const double mid = 0.5 * static_cast<double>(taps - 1);
  auto w = hamming_window(taps);
  FirKernel k;
  k.taps.resize(taps);
  for (std::size_t n = 0; n < taps; ++n) {
    const double m = static_cast<double>(n) - mid;
    double ideal;
    if (m == 0.0) {
      ideal = 2.0 * (f2 - f1);
    } else {
      ideal = (std::sin(2.0 * kPi * f2 * m) - std::sin(2.0 * kPi * f1 * m)) / (kPi * m);
    }
    k.taps[n] = ideal * w[n];
  }
  k.design_band = band;
  k.design_rate_hz = sample_rate_hz;
  return k;
}

/// Standard design: the tap count covers 7.5 periods of the lower cutoff,
/// bumped to the next odd number.
inline FirKernel design_bandpass_fir(const BandSpec& band, double sample_rate_hz) {
  require_valid(band, sample_rate_hz, "design_bandpass_fir");
  const auto taps = static_cast<std::size_t>(std::ceil(7.5 * sample_rate_hz / band.low_hz));
  return design_bandpass_fir_taps(band, sample_rate_hz, taps);
}

namespace detail {

// Reflective padding (no edge duplicate), `pad` samples per side.
inline std::vector<double> reflect_pad(const std::vector<double>& x, std::size_t pad) {
  const std::size_t n = x.size();
  std::vector<double> out;
  out.reserve(n + 2 * pad);
  for (std::size_t j = 0; j < pad; ++j) out.push_back(x[pad - j]);
  out.insert(out.end(), x.begin(), x.end());
  for (std::size_t j = 0; j < pad; ++j) out.push_back(x[n - 2 - j]);
  return out;
}

// FFT of the kernel zero-padded to length m.
inline std::vector<cplx> kernel_spectrum(const std::vector<double>& taps, std::size_t m) {
  std::vector<cplx> h(m, cplx(0.0, 0.0));
  for (std::size_t i = 0; i < taps.size(); ++i) h[i] = taps[i];
  fft_inplace(h, false);
  return h;
}

}  // namespace detail

/// Zero-phase filtering: forward and backward pass with the same kernel, so the
/// effective magnitude response is the squared single-pass response. Edge
/// transients are absorbed by one kernel length of reflective padding per side.
inline TimeSignal filter_forward_backward(const TimeSignal& signal, const FirKernel& kernel) {
  require_valid(signal, "filter_forward_backward");
  const std::size_t n = signal.samples.size();
  const std::size_t t = kernel.size();
  if (t < 3 || t % 2 == 0)
    throw std::invalid_argument("filter_forward_backward: kernel must have odd length >= 3");
  if (n <= 3 * t)
    throw std::invalid_argument("filter_forward_backward: signal too short for kernel");

  const std::size_t pad = t;
  auto padded = detail::reflect_pad(signal.samples, pad);
  const std::size_t m = detail::next_pow2(padded.size() + 2 * (t - 1));

  std::vector<cplx> spec(m, cplx(0.0, 0.0));
  for (std::size_t i = 0; i < padded.size(); ++i) spec[i] = padded[i];
  fft_inplace(spec, false);
  auto h = detail::kernel_spectrum(kernel.taps, m);
  for (std::size_t i = 0; i < m; ++i) spec[i] *= h[i] * h[i];
  fft_inplace(spec, true);

  // Double linear convolution delays by (t - 1); strip delay plus padding.
  TimeSignal out;
  out.sample_rate_hz = signal.sample_rate_hz;
  out.samples.resize(n);
  const std::size_t off = pad + (t - 1);
  for (std::size_t i = 0; i < n; ++i) out.samples[i] = spec[off + i].real();
  return out;
}

/// Discrete analytic signal: negative-frequency half of the transform zeroed,
/// interior positive bins doubled.
inline std::vector<cplx> analytic_signal(const TimeSignal& signal) {
  require_valid(signal, "analytic_signal");
  const std::size_t n = signal.samples.size();
  auto spec = fft_real(signal.samples);
  const std::size_t half = n / 2;
  for (std::size_t k = 1; k < (n + 1) / 2; ++k) spec[k] *= 2.0;
  for (std::size_t k = half + 1; k < n; ++k) spec[k] = cplx(0.0, 0.0);
  fft_inplace(spec, true);
  return spec;
}

inline std::vector<double> envelope(const TimeSignal& signal) {
  auto a = analytic_signal(signal);
  std::vector<double> e(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) e[i] = std::abs(a[i]);
  return e;
}

/// Unnormalized magnitude spectrum, bins 0..floor(N/2).
inline Spectrum magnitude_spectrum(const TimeSignal& signal) {
  require_valid(signal, "magnitude_spectrum");
  const std::size_t n = signal.samples.size();
  auto spec = fft_real(signal.samples);
  Spectrum s;
  s.bin_hz = signal.sample_rate_hz / static_cast<double>(n);
  s.amplitudes.resize(n / 2 + 1);
  for (std::size_t k = 0; k <= n / 2; ++k) s.amplitudes[k] = std::abs(spec[k]);
  return s;
}

inline std::size_t stft_hop(std::size_t window_len, double overlap_frac) {
  auto hop = static_cast<std::size_t>(std::llround(static_cast<double>(window_len) * (1.0 - overlap_frac)));
  return std::max<std::size_t>(hop, 1);
}

inline std::size_t stft_frame_count(std::size_t n, std::size_t window_len, double overlap_frac) {
  if (window_len > n) return 0;
  return (n - window_len) / stft_hop(window_len, overlap_frac) + 1;
}

/// Hamming-windowed magnitude STFT, frames as rows. Trailing samples that do
/// not fill a whole window are dropped.
inline FeatureMatrix stft_magnitude(const TimeSignal& signal, std::size_t window_len, double overlap_frac) {
  require_valid(signal, "stft_magnitude");
  if (overlap_frac < 0.0 || overlap_frac >= 1.0)
    throw std::invalid_argument("stft_magnitude: overlap must be in [0, 1)");
  const std::size_t n = signal.samples.size();
  if (window_len > n) throw std::invalid_argument("stft_magnitude: window longer than signal");
  const std::size_t hop = stft_hop(window_len, overlap_frac);
  const std::size_t frames = stft_frame_count(n, window_len, overlap_frac);
  const std::size_t bins = window_len / 2 + 1;
  const auto win = hamming_window(window_len);

  FeatureMatrix out;
  out.values.assign(frames, std::vector<double>(bins, 0.0));
  out.row_names.resize(frames);
  out.col_names.resize(bins);
  for (std::size_t k = 0; k < bins; ++k)
    out.col_names[k] = "f" + std::to_string(k);
  std::vector<cplx> buf(window_len);
  for (std::size_t f = 0; f < frames; ++f) {
    out.row_names[f] = "t" + std::to_string(f);
    const std::size_t start = f * hop;
    for (std::size_t i = 0; i < window_len; ++i)
      buf[i] = cplx(signal.samples[start + i] * win[i], 0.0);
    fft_inplace(buf, false);
    for (std::size_t k = 0; k < bins; ++k) out.values[f][k] = std::abs(buf[k]);
  }
  return out;
}

/// log(magnitude STFT + floor); requires the window to fit at least twice.
inline FeatureMatrix log_spectrogram(const TimeSignal& signal, double window_len_s, double overlap_frac) {
  require_valid(signal, "log_spectrogram");
  const auto window_len =
      static_cast<std::size_t>(std::llround(window_len_s * signal.sample_rate_hz));
  if (window_len < 2 || window_len > signal.samples.size())
    throw std::invalid_argument("log_spectrogram: window longer than signal");
  if (stft_frame_count(signal.samples.size(), window_len, overlap_frac) < 2)
    throw std::invalid_argument("log_spectrogram: window must fit at least twice");
  auto m = stft_magnitude(signal, window_len, overlap_frac);
  for (auto& row : m.values)
    for (auto& v : row) v = std::log(v + kLogFloor);
  return m;
}

/// Unnormalized DCT-II: X[k] = sum_n x[n] cos(pi k (2n+1) / (2N)).
/// Computed through an FFT of the even/odd reordered sequence.
inline std::vector<double> dct2(const std::vector<double>& x) {
  const std::size_t n = x.size();
  if (n == 0) throw std::invalid_argument("dct2: empty input");
  if (n == 1) return {x[0]};
  std::vector<cplx> v(n);
  for (std::size_t i = 0; i < (n + 1) / 2; ++i) v[i] = x[2 * i];
  for (std::size_t i = 0; 2 * i + 1 < n; ++i) v[n - 1 - i] = x[2 * i + 1];
  fft_inplace(v, false);
  std::vector<double> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double a = -kPi * static_cast<double>(k) / (2.0 * static_cast<double>(n));
    out[k] = v[k].real() * std::cos(a) - v[k].imag() * std::sin(a);
  }
  return out;
}

}  // namespace gearline
