#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

#include "gearline/fft.hpp"
#include "gearline/signal.hpp"
#include "gearline/types.hpp"

namespace gearline {

/// Traunmuller-style Bark mapping used for the critical-band split.
inline double bark_of_hz(double f) {
  return 13.0 * std::atan(0.00076 * f) + 3.5 * std::atan((f / 7500.0) * (f / 7500.0));
}

/// n_bands + 1 edges equally spaced on the Bark scale between lo and hi.
inline std::vector<double> bark_band_edges(double lo_hz, double hi_hz, int n_bands) {
  if (!(lo_hz < hi_hz) || n_bands < 1) throw std::invalid_argument("bark_band_edges: bad range");
  const double z_lo = bark_of_hz(lo_hz);
  const double z_hi = bark_of_hz(hi_hz);
  std::vector<double> edges(static_cast<std::size_t>(n_bands) + 1);
  for (int i = 0; i <= n_bands; ++i) {
    const double target = z_lo + (z_hi - z_lo) * static_cast<double>(i) / n_bands;
    double a = lo_hz, b = hi_hz;
    for (int it = 0; it < 80; ++it) {
      const double mid = 0.5 * (a + b);
      (bark_of_hz(mid) < target ? a : b) = mid;
    }
    edges[static_cast<std::size_t>(i)] = 0.5 * (a + b);
  }
  edges.front() = lo_hz;
  edges.back() = hi_hz;
  return edges;
}

/// Unimodal cosine taper in log frequency: 1 at the peak, 1/sqrt(2) at the
/// half-power points, reaching zero at twice their log distance.
struct ModulationWeight {
  double peak_hz = 0.0;
  double half_power_lo_hz = 0.0;
  double half_power_hi_hz = 0.0;

  double operator()(double f) const {
    if (!(f > 0.0)) return 0.0;
    const double up = std::log(peak_hz);
    const double u = std::log(f);
    const double r = f < peak_hz ? (up - u) / (up - std::log(half_power_lo_hz))
                                 : (u - up) / (std::log(half_power_hi_hz) - up);
    if (r >= 2.0) return 0.0;
    return std::cos(r * kPi / 4.0);
  }

  double support_lo_hz() const { return peak_hz * std::pow(half_power_lo_hz / peak_hz, 2.0); }
  double support_hi_hz() const { return peak_hz * std::pow(half_power_hi_hz / peak_hz, 2.0); }
};

struct ModulationModelConfig {
  std::vector<double> band_edges_hz;  // critical-band edges over the analysis band
  ModulationWeight roughness_weight{70.0, 30.0, 150.0};
  ModulationWeight fluctuation_weight{4.0, 0.5, 20.0};
  double roughness_frame_s = 0.2;
  double roughness_hop_s = 0.1;
  double fluctuation_frame_s = 2.0;
  double fluctuation_hop_s = 1.0;
  double calibration_gain_r = 1.0;
  double calibration_gain_f = 1.0;
};

namespace detail {

// Critical bands are narrow, so the split kernels size their transition to the
// bandwidth instead of the 7.5-period rule of the main band-pass.
inline std::size_t band_split_taps(double lo, double hi, double fs) {
  const double transition = 0.3 * (hi - lo);
  auto taps = static_cast<std::size_t>(std::ceil(3.3 * fs / transition));
  if (taps % 2 == 0) ++taps;
  return std::min<std::size_t>(taps, 20001);
}

// Zero-phase band split applied as the squared FIR response on the signal's
// own frequency grid; the same mask also builds the analytic signal, so each
// band costs one inverse transform.
inline std::shared_ptr<const std::vector<double>> band_power_response(std::size_t n, double fs,
                                                                      double lo, double hi) {
  struct Key {
    std::size_t n;
    double fs, lo, hi;
    bool operator<(const Key& o) const {
      if (n != o.n) return n < o.n;
      if (fs != o.fs) return fs < o.fs;
      if (lo != o.lo) return lo < o.lo;
      return hi < o.hi;
    }
  };
  static std::mutex mu;
  static std::map<Key, std::shared_ptr<const std::vector<double>>> cache;
  std::lock_guard<std::mutex> lock(mu);
  const Key key{n, fs, lo, hi};
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  auto kernel = design_bandpass_fir_taps({lo, hi}, fs, band_split_taps(lo, hi, fs));
  if (n < 3 * kernel.size())
    throw std::invalid_argument("modulation model: signal too short for the band split");
  std::vector<cplx> h(n, cplx(0.0, 0.0));
  for (std::size_t i = 0; i < kernel.size() && i < n; ++i) h[i] = kernel.taps[i];
  fft_inplace(h, false);
  auto resp = std::make_shared<std::vector<double>>(n);
  for (std::size_t k = 0; k < n; ++k) (*resp)[k] = std::norm(h[k]);
  cache.emplace(key, resp);
  return resp;
}

inline std::vector<double> band_envelope(const std::vector<cplx>& signal_spectrum, double fs,
                                         double lo, double hi) {
  const std::size_t n = signal_spectrum.size();
  auto resp = band_power_response(n, fs, lo, hi);
  std::vector<cplx> spec(n, cplx(0.0, 0.0));
  spec[0] = signal_spectrum[0] * (*resp)[0];
  for (std::size_t k = 1; k < (n + 1) / 2; ++k) spec[k] = 2.0 * signal_spectrum[k] * (*resp)[k];
  if (n % 2 == 0) spec[n / 2] = signal_spectrum[n / 2] * (*resp)[n / 2];
  fft_inplace(spec, true);
  std::vector<double> env(n);
  for (std::size_t i = 0; i < n; ++i) env[i] = std::abs(spec[i]);
  return env;
}

// Anti-aliased decimation of the envelope down to roughly 2 kHz; modulation
// analysis never looks above a few hundred hertz.
inline std::vector<double> decimate_envelope(const std::vector<double>& env, double fs,
                                             std::size_t& ratio_out) {
  const auto ratio = static_cast<std::size_t>(std::max(1.0, std::floor(fs / 2000.0)));
  ratio_out = ratio;
  if (ratio == 1) return env;
  const double fs_d = fs / static_cast<double>(ratio);
  const std::size_t taps = 201;
  const double fc = 0.375 * fs_d / fs;
  static std::mutex mu;
  static std::map<double, std::shared_ptr<const std::vector<double>>> cache;
  std::shared_ptr<const std::vector<double>> low;
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(fc);
    if (it == cache.end()) {
      auto h = std::make_shared<std::vector<double>>(taps);
      auto w = hamming_window(taps);
      const double mid = 0.5 * (taps - 1);
      for (std::size_t i = 0; i < taps; ++i) {
        const double m = static_cast<double>(i) - mid;
        (*h)[i] = (m == 0.0 ? 2.0 * fc : std::sin(2.0 * kPi * fc * m) / (kPi * m)) * w[i];
      }
      cache.emplace(fc, h);
      low = h;
    } else {
      low = it->second;
    }
  }
  const auto n = static_cast<long long>(env.size());
  const long long half = static_cast<long long>(taps) / 2;
  std::vector<double> out;
  out.reserve(env.size() / ratio + 1);
  for (long long center = 0; center < n; center += static_cast<long long>(ratio)) {
    double acc = 0.0;
    for (std::size_t j = 0; j < taps; ++j) {
      long long idx = center + static_cast<long long>(j) - half;
      idx = std::clamp<long long>(idx, 0, n - 1);
      acc += (*low)[j] * env[static_cast<std::size_t>(idx)];
    }
    out.push_back(acc);
  }
  return out;
}

inline std::vector<double> modulation_time_course(const TimeSignal& signal,
                                                  const ModulationModelConfig& cfg,
                                                  const ModulationWeight& weight, double frame_s,
                                                  double hop_s, double gain) {
  require_valid(signal, "modulation_time_course");
  if (cfg.band_edges_hz.size() < 3)
    throw std::invalid_argument("modulation model: need at least one overlapped band");
  if (frame_s * weight.half_power_lo_hz < 1.0 - 1e-9)
    throw std::invalid_argument(
        "modulation model: frame shorter than the slowest half-power modulation period");
  const double fs = signal.sample_rate_hz;
  const std::size_t n = signal.samples.size();

  double sig_rms = 0.0;
  for (double v : signal.samples) sig_rms += v * v;
  sig_rms = std::sqrt(sig_rms / static_cast<double>(n));

  auto spectrum = fft_real(signal.samples);

  // Bands span two adjacent edge intervals (50% overlap) so any carrier has a
  // band roughly centered on it and AM sidebands stay inside that band.
  const std::size_t n_bands = cfg.band_edges_hz.size() - 2;
  std::vector<std::vector<double>> envs(n_bands);
  std::size_t ratio = 1;
  std::size_t longest_kernel = 0;
  for (std::size_t b = 0; b < n_bands; ++b) {
    longest_kernel = std::max(
        longest_kernel, band_split_taps(cfg.band_edges_hz[b], cfg.band_edges_hz[b + 2], fs));
    auto env = band_envelope(spectrum, fs, cfg.band_edges_hz[b], cfg.band_edges_hz[b + 2]);
    envs[b] = decimate_envelope(env, fs, ratio);
  }
  // The circular split smears each record edge over one double-pass kernel
  // support; those envelope samples are cut before framing.
  const auto trim = static_cast<std::size_t>(
      std::ceil((2.0 * static_cast<double>(longest_kernel) + 101.0) / static_cast<double>(ratio)));
  for (auto& env : envs) {
    if (env.size() <= 2 * trim + 2)
      throw std::invalid_argument("modulation model: signal shorter than the edge transients");
    env.erase(env.end() - static_cast<long>(trim), env.end());
    env.erase(env.begin(), env.begin() + static_cast<long>(trim));
  }
  const double fs_d = fs / static_cast<double>(ratio);
  const auto frame_len = static_cast<std::size_t>(std::llround(frame_s * fs_d));
  const auto hop = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(hop_s * fs_d)));
  if (frame_len < 2 || frame_len > envs[0].size())
    throw std::invalid_argument("modulation model: signal shorter than one frame");
  const std::size_t frames = (envs[0].size() - frame_len) / hop + 1;

  const double bin_hz = fs_d / static_cast<double>(frame_len);
  const auto k_lo = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::ceil(weight.support_lo_hz() / bin_hz - 1e-12)));
  const auto k_hi = std::min<std::size_t>(
      frame_len / 2, static_cast<std::size_t>(std::floor(weight.support_hi_hz() / bin_hz + 1e-12)));

  std::vector<double> course(frames, 0.0);
  std::vector<double> frame(frame_len);
  std::vector<double> means(n_bands);
  for (std::size_t f = 0; f < frames; ++f) {
    const std::size_t start = f * hop;
    double loudest = 0.0;
    for (std::size_t b = 0; b < n_bands; ++b) {
      double mean = 0.0;
      for (std::size_t i = 0; i < frame_len; ++i) mean += envs[b][start + i];
      means[b] = mean / static_cast<double>(frame_len);
      loudest = std::max(loudest, means[b]);
    }
    // Bands far below the loudest band of the frame stay inaudible and carry
    // only leakage or floor noise; they are excluded from the depth sum.
    const double gate = std::max(0.10 * loudest, 1e-4 * sig_rms);
    double total = 0.0;
    for (std::size_t b = 0; b < n_bands; ++b) {
      const double mean = means[b];
      if (mean <= gate) continue;
      const auto& env = envs[b];
      for (std::size_t i = 0; i < frame_len; ++i) frame[i] = env[start + i] - mean;
      double power = 0.0;
      for (std::size_t k = k_lo; k <= k_hi; ++k) {
        const double w = weight(static_cast<double>(k) * bin_hz);
        if (w <= 0.0) continue;
        power += w * w * std::norm(goertzel(frame, k));
      }
      // sqrt(2)/L turns bin magnitudes into the RMS of the weighted modulation.
      const double mod_rms = std::sqrt(2.0 * power) / static_cast<double>(frame_len);
      const double depth = mod_rms / mean;
      total += depth * depth;
    }
    course[f] = gain * total;
  }
  return course;
}

}  // namespace detail

/// Per-frame roughness of a band-passed signal (asper-like units).
inline std::vector<double> roughness_time_course(const TimeSignal& signal,
                                                 const ModulationModelConfig& cfg) {
  return detail::modulation_time_course(signal, cfg, cfg.roughness_weight, cfg.roughness_frame_s,
                                        cfg.roughness_hop_s, cfg.calibration_gain_r);
}

/// Per-frame fluctuation strength (vacil-like units); longer frames resolve
/// the sub-hertz modulations.
inline std::vector<double> fluctuation_strength_time_course(const TimeSignal& signal,
                                                            const ModulationModelConfig& cfg) {
  return detail::modulation_time_course(signal, cfg, cfg.fluctuation_weight,
                                        cfg.fluctuation_frame_s, cfg.fluctuation_hop_s,
                                        cfg.calibration_gain_f);
}

inline double rms_of(const std::vector<double>& v) {
  if (v.empty()) throw std::invalid_argument("rms_of: empty input");
  double acc = 0.0;
  for (double x : v) acc += x * x;
  return std::sqrt(acc / static_cast<double>(v.size()));
}

/// ["pa_roughness", "pa_fluctuation"]: RMS over each metric's time course.
inline FeatureVector pa_features(const TimeSignal& signal, const ModulationModelConfig& cfg) {
  FeatureVector out;
  out.names = {"pa_roughness", "pa_fluctuation"};
  out.values = {rms_of(roughness_time_course(signal, cfg)),
                rms_of(fluctuation_strength_time_course(signal, cfg))};
  return out;
}

/// Concatenation of the already-scaled PA and LES_FF blocks.
inline FeatureVector palff(const FeatureVector& pa_scaled, const FeatureVector& les_ff_scaled) {
  if (pa_scaled.size() == 0 || les_ff_scaled.size() == 0)
    throw std::invalid_argument("palff: both feature blocks must be nonempty");
  require_consistent(pa_scaled, "palff");
  require_consistent(les_ff_scaled, "palff");
  FeatureVector out = pa_scaled;
  out.names.insert(out.names.end(), les_ff_scaled.names.begin(), les_ff_scaled.names.end());
  out.values.insert(out.values.end(), les_ff_scaled.values.begin(), les_ff_scaled.values.end());
  for (std::size_t i = 0; i < out.names.size(); ++i)
    for (std::size_t j = i + 1; j < out.names.size(); ++j)
      if (out.names[i] == out.names[j])
        throw std::invalid_argument("palff: duplicate feature name " + out.names[i]);
  return out;
}

/// 100%-AM reference tones the calibration gains are fitted against.
/// Lengths are the power-of-two record sizes the production contract uses.
inline TimeSignal modulation_reference_signal(bool roughness, double sample_rate_hz = 50000.0) {
  TimeSignal s;
  s.sample_rate_hz = sample_rate_hz;
  const double seconds = roughness ? 131072.0 / 50000.0 : 262144.0 / 50000.0;
  const double f_mod = roughness ? 70.0 : 4.0;
  const auto n = static_cast<std::size_t>(std::llround(seconds * sample_rate_hz));
  s.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / sample_rate_hz;
    s.samples[i] = (1.0 + std::cos(2.0 * kPi * f_mod * t)) * std::cos(2.0 * kPi * 2000.0 * t);
  }
  return s;
}

/// Fit calibration gains so each reference tone scores exactly 1.0.
inline ModulationModelConfig calibrate_modulation_gains(ModulationModelConfig cfg,
                                                        double sample_rate_hz = 50000.0) {
  cfg.calibration_gain_r = 1.0;
  cfg.calibration_gain_f = 1.0;
  const double raw_r = rms_of(roughness_time_course(modulation_reference_signal(true, sample_rate_hz), cfg));
  const double raw_f = rms_of(
      fluctuation_strength_time_course(modulation_reference_signal(false, sample_rate_hz), cfg));
  if (!(raw_r > 0.0) || !(raw_f > 0.0))
    throw std::runtime_error("calibrate_modulation_gains: degenerate reference response");
  cfg.calibration_gain_r = 1.0 / raw_r;
  cfg.calibration_gain_f = 1.0 / raw_f;
  return cfg;
}

/// Eight half-overlapping Bark bands over 1150..5100 Hz (ten edges) with gains
/// frozen from the calibration run at 50 kHz (see calibrate_modulation_gains).
inline ModulationModelConfig default_modulation_config() {
  ModulationModelConfig cfg;
  cfg.band_edges_hz = bark_band_edges(1150.0, 5100.0, 9);
  cfg.calibration_gain_r = 1.0370422217297819;
  cfg.calibration_gain_f = 0.99991735823549188;
  return cfg;
}

}  // namespace gearline
