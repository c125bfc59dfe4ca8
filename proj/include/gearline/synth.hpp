#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "gearline/dataset.hpp"
#include "gearline/fft.hpp"
#include "gearline/kinematics.hpp"
#include "gearline/rng.hpp"
#include "gearline/signal.hpp"
#include "gearline/types.hpp"

namespace gearline {

struct MotorRecipe {
  GearTrain train;
  double speed_deviation_frac = 0.0;
  double mesh_amplitude_stage1 = 0.25;
  double mesh_amplitude_stage2 = 0.15;
  double sideband_depth = 0.02;
  double noise_floor_rms = 0.01;
  double resonance_hz = 3000.0;     // burst center, inside the 850..5100 Hz fault range
  double duration_s = 262144.0 / 50000.0;
  double sample_rate_hz = 50000.0;
  std::uint64_t seed = 1;
};

enum class FaultKind { none, impulsive, circumferential };

inline const char* to_string(FaultKind k) {
  switch (k) {
    case FaultKind::none: return "none";
    case FaultKind::impulsive: return "impulsive";
    case FaultKind::circumferential: return "circumferential";
  }
  return "?";
}

inline FaultKind fault_kind_from_string(const std::string& s) {
  if (s == "none") return FaultKind::none;
  if (s == "impulsive") return FaultKind::impulsive;
  if (s == "circumferential") return FaultKind::circumferential;
  throw std::invalid_argument("unknown fault kind: " + s);
}

struct FaultRecipe {
  FaultKind kind = FaultKind::none;
  FaultFrequency target;   // one of the train's shaft or mesh frequencies
  double severity = 0.0;   // 0 = healthy
};

enum class DisturbanceKind { hammer, air_pressure, music, speech, ventilation, wrench };

inline const char* to_string(DisturbanceKind k) {
  switch (k) {
    case DisturbanceKind::hammer: return "hammer";
    case DisturbanceKind::air_pressure: return "air_pressure";
    case DisturbanceKind::music: return "music";
    case DisturbanceKind::speech: return "speech";
    case DisturbanceKind::ventilation: return "ventilation";
    case DisturbanceKind::wrench: return "wrench";
  }
  return "?";
}

inline DisturbanceKind disturbance_kind_from_string(const std::string& s) {
  if (s == "hammer") return DisturbanceKind::hammer;
  if (s == "air_pressure") return DisturbanceKind::air_pressure;
  if (s == "music") return DisturbanceKind::music;
  if (s == "speech") return DisturbanceKind::speech;
  if (s == "ventilation") return DisturbanceKind::ventilation;
  if (s == "wrench") return DisturbanceKind::wrench;
  throw std::invalid_argument("unknown disturbance kind: " + s);
}

/// Disturbance strength as a disturbance-to-signal RMS ratio.
/// 'low' maps to 0.5, 'loud' to 2.0; a ratio of zero is a no-op.
struct DisturbanceRecipe {
  DisturbanceKind kind = DisturbanceKind::hammer;
  double level_ratio = 2.0;
  std::uint64_t seed = 1;
};

inline double disturbance_level_ratio(const std::string& level) {
  if (level == "low") return 0.5;
  if (level == "loud") return 2.0;
  throw std::invalid_argument("unknown disturbance level: " + level);
}

namespace detail {

inline void require_target_in_train(const GearTrain& train, const FaultFrequency& target) {
  auto ffs = fault_frequency_set(train, 1e-6, 1e9);
  for (const auto& f : ffs)
    if (std::abs(f.hz - target.hz) <= 1e-6 * std::max(1.0, target.hz)) return;
  throw std::invalid_argument("synth_motor: fault target " + target.label +
                              " is not a fault frequency of the train");
}

// Zero-phase circular band-pass used by the disturbance builders.
inline void circular_bandpass(std::vector<double>& x, double fs, double lo, double hi) {
  const std::size_t n = x.size();
  auto taps = static_cast<std::size_t>(std::ceil(3.3 * fs / (0.25 * (hi - lo))));
  if (taps % 2 == 0) ++taps;
  taps = std::min<std::size_t>(taps, n / 3 | 1);
  auto kernel = design_bandpass_fir_taps({lo, hi}, fs, taps);
  std::vector<cplx> h(n, cplx(0.0, 0.0));
  for (std::size_t i = 0; i < kernel.size(); ++i) h[i] = kernel.taps[i];
  fft_inplace(h, false);
  auto spec = fft_real(x);
  for (std::size_t k = 0; k < n; ++k) spec[k] *= std::norm(h[k]);
  fft_inplace(spec, true);
  for (std::size_t i = 0; i < n; ++i) x[i] = spec[i].real();
}

inline double rms(const std::vector<double>& v) {
  double acc = 0.0;
  for (double x : v) acc += x * x;
  return std::sqrt(acc / static_cast<double>(v.size()));
}

}  // namespace detail

/// Synthetic geared-motor sound: shaft-modulated mesh tones, a white noise
/// floor, and an optional fault term (periodic resonance bursts for impulsive
/// faults, extra amplitude modulation for circumferential ones).
inline TimeSignal synth_motor(const MotorRecipe& recipe, const FaultRecipe& fault) {
  require_valid(recipe.train, "synth_motor");
  if (std::abs(recipe.speed_deviation_frac) > recipe.train.speed_tolerance_frac + 1e-12)
    throw std::invalid_argument("synth_motor: speed deviation exceeds the train tolerance");
  const double fs = recipe.sample_rate_hz;
  const auto n = static_cast<std::size_t>(std::llround(recipe.duration_s * fs));
  if (n < 2 || n > (1u << 20)) throw std::invalid_argument("synth_motor: record length out of range");
  if (fault.kind != FaultKind::none) detail::require_target_in_train(recipe.train, fault.target);

  const double dev = 1.0 + recipe.speed_deviation_frac;
  const double f1 = recipe.train.shaft_hz(1) * dev;
  const double f2 = recipe.train.shaft_hz(2) * dev;
  const double gmf1 = recipe.train.mesh_hz(1) * dev;
  const double gmf2 = recipe.train.mesh_hz(2) * dev;

  Rng tone_rng = rng_stream(recipe.seed, 0);
  Rng noise_rng = rng_stream(recipe.seed, 1);
  Rng fault_rng = rng_stream(recipe.seed, 2);

  const bool fault_active = fault.kind != FaultKind::none && fault.severity > 0.0;
  const double target_hz = fault.target.hz * dev;
  const double mesh_rate_depth = std::min(0.45, 0.25 * fault.severity);
  const double shaft_rate_depth = std::min(0.9, 0.5 * fault.severity);
  // Mesh targets also modulate at the stage's input-shaft rate (a defect fixed
  // on a gear passes the mesh once per revolution).
  double shaft_mod_hz = 0.0;
  if (fault_active && fault.kind == FaultKind::circumferential &&
      fault.target.kind != FaultFrequencyKind::shaft_harmonic) {
    const bool stage1 =
        std::abs(fault.target.hz - recipe.train.mesh_hz(1)) <
        std::abs(fault.target.hz - recipe.train.mesh_hz(2));
    shaft_mod_hz = (stage1 ? recipe.train.shaft_hz(1) : recipe.train.shaft_hz(2)) * dev;
  }
  const double circ_phase1 = fault_rng.uniform(0.0, 2.0 * kPi);
  const double circ_phase2 = fault_rng.uniform(0.0, 2.0 * kPi);

  struct Tone {
    double hz, amp, phase;
    int stage;
  };
  std::vector<Tone> tones;
  for (int stage = 1; stage <= 2; ++stage) {
    const double base = stage == 1 ? gmf1 : gmf2;
    const double amp0 = stage == 1 ? recipe.mesh_amplitude_stage1 : recipe.mesh_amplitude_stage2;
    for (int h = 1; h <= 3; ++h)
      tones.push_back({base * h, amp0 / h, tone_rng.uniform(0.0, 2.0 * kPi), stage});
  }
  const double sb_phase1 = tone_rng.uniform(0.0, 2.0 * kPi);
  const double sb_phase2 = tone_rng.uniform(0.0, 2.0 * kPi);
  const double sb_phase3 = tone_rng.uniform(0.0, 2.0 * kPi);

  TimeSignal out;
  out.sample_rate_hz = fs;
  out.samples.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / fs;
    const double am1 = (1.0 + recipe.sideband_depth * std::cos(2.0 * kPi * f1 * t + sb_phase1)) *
                       (1.0 + recipe.sideband_depth * std::cos(2.0 * kPi * f2 * t + sb_phase2));
    const double am2 = 1.0 + recipe.sideband_depth * std::cos(2.0 * kPi * f2 * t + sb_phase3);
    double mesh = 0.0;
    for (const auto& tone : tones)
      mesh += tone.amp * (tone.stage == 1 ? am1 : am2) * std::sin(2.0 * kPi * tone.hz * t + tone.phase);
    if (fault_active && fault.kind == FaultKind::circumferential) {
      const double target_depth = fault.target.kind == FaultFrequencyKind::shaft_harmonic
                                      ? shaft_rate_depth
                                      : mesh_rate_depth;
      mesh *= 1.0 + target_depth * std::cos(2.0 * kPi * target_hz * t + circ_phase1);
      if (shaft_mod_hz > 0.0)
        mesh *= 1.0 + shaft_rate_depth * std::cos(2.0 * kPi * shaft_mod_hz * t + circ_phase2);
    }
    out.samples[i] = mesh + noise_rng.normal() * recipe.noise_floor_rms;
  }

  if (fault_active && fault.kind == FaultKind::impulsive) {
    const double period_s = 1.0 / target_hz;
    const double tau = 10.0 / (kPi * recipe.resonance_hz);  // Q ~ 10 decay
    const auto burst_len = static_cast<std::size_t>(std::llround(10.0 * tau * fs));
    std::vector<double> burst(burst_len);
    for (std::size_t i = 0; i < burst_len; ++i) {
      const double tt = static_cast<double>(i) / fs;
      burst[i] = std::exp(-tt / tau) * std::sin(2.0 * kPi * recipe.resonance_hz * tt);
    }
    const double amp = 0.6 * fault.severity;
    double t0 = fault_rng.uniform(0.0, period_s);
    for (double tk = t0; tk < recipe.duration_s; tk += period_s) {
      const double a = amp * fault_rng.uniform(0.85, 1.15);
      const auto start = static_cast<std::size_t>(std::llround(tk * fs));
      for (std::size_t i = 0; i < burst_len && start + i < n; ++i)
        out.samples[start + i] += a * burst[i];
    }
  }
  return out;
}

namespace detail {

inline std::vector<double> build_hammer(std::size_t n, double fs, Rng& rng) {
  std::vector<double> d(n, 0.0);
  const double duration = static_cast<double>(n) / fs;
  const std::size_t hits = 3 + rng.below(6);
  std::vector<double> times;
  for (std::size_t h = 0; h < hits; ++h) {
    double t = 0.0;
    for (int attempt = 0; attempt < 100; ++attempt) {
      t = rng.uniform(0.05, duration - 0.15);
      bool ok = true;
      for (double prev : times)
        if (std::abs(prev - t) < 0.25) ok = false;
      if (ok) break;
    }
    times.push_back(t);
  }
  for (double t : times) {
    // Double decay: a slow low-frequency ring plus a fast in-band crack.
    const double f_low = rng.uniform(250.0, 600.0);
    const double tau_low = rng.uniform(0.006, 0.012);
    const double f_hi = rng.uniform(1800.0, 4200.0);
    const double tau_hi = rng.uniform(0.0015, 0.0035);
    const double a_low = rng.uniform(0.8, 1.2);
    const double a_hi = rng.uniform(0.8, 1.2);
    const auto start = static_cast<std::size_t>(t * fs);
    const auto len = static_cast<std::size_t>(0.1 * fs);
    for (std::size_t i = 0; i < len && start + i < n; ++i) {
      const double tt = static_cast<double>(i) / fs;
      d[start + i] += a_low * std::exp(-tt / tau_low) * std::sin(2.0 * kPi * f_low * tt) +
                      a_hi * std::exp(-tt / tau_hi) * std::sin(2.0 * kPi * f_hi * tt);
    }
  }
  return d;
}

inline std::vector<double> build_air_pressure(std::size_t n, double fs, Rng& rng) {
  std::vector<double> gate(n, 0.0);
  const double duration = static_cast<double>(n) / fs;
  const std::size_t bursts = 2 + rng.below(4);
  for (std::size_t b = 0; b < bursts; ++b) {
    const double len_s = rng.uniform(0.2, 0.8);
    const double start_s = rng.uniform(0.0, std::max(0.01, duration - len_s));
    const auto start = static_cast<std::size_t>(start_s * fs);
    const auto len = static_cast<std::size_t>(len_s * fs);
    const auto ramp = static_cast<std::size_t>(0.02 * fs);
    for (std::size_t i = 0; i < len && start + i < n; ++i) {
      double w = 1.0;
      if (i < ramp) w = 0.5 - 0.5 * std::cos(kPi * static_cast<double>(i) / ramp);
      if (len - i < ramp) w = std::min(w, 0.5 - 0.5 * std::cos(kPi * static_cast<double>(len - i) / ramp));
      gate[start + i] = std::max(gate[start + i], w);
    }
  }
  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i) d[i] = gate[i] * rng.normal();
  circular_bandpass(d, fs, 500.0, std::min(8000.0, 0.45 * fs));
  return d;
}

inline std::vector<double> build_music(std::size_t n, double fs, Rng& rng) {
  std::vector<double> d(n, 0.0);
  const double duration = static_cast<double>(n) / fs;
  const double beat_phase = rng.uniform(0.0, 2.0 * kPi);
  double t0 = 0.0;
  while (t0 < duration) {
    const double chord_len = rng.uniform(0.6, 1.0);
    const double root = rng.uniform(150.0, 300.0);
    const double ratios[4] = {1.0, 1.25, 1.5, 2.0};
    const auto start = static_cast<std::size_t>(t0 * fs);
    const auto len = static_cast<std::size_t>(chord_len * fs);
    const auto fade = static_cast<std::size_t>(0.05 * fs);
    double phases[4][4];
    for (auto& row : phases)
      for (auto& p : row) p = rng.uniform(0.0, 2.0 * kPi);
    for (std::size_t i = 0; i < len && start + i < n; ++i) {
      const double t = static_cast<double>(start + i) / fs;
      double v = 0.0;
      for (int tone = 0; tone < 4; ++tone) {
        const double f0 = root * ratios[tone];
        for (int h = 1; h <= 4; ++h)
          v += std::sin(2.0 * kPi * f0 * h * t + phases[tone][h - 1]) /
               static_cast<double>(h * h * h);
      }
      double w = 1.0;
      if (i < fade) w = static_cast<double>(i) / fade;
      if (len - i < fade) w = std::min(w, static_cast<double>(len - i) / fade);
      // 2 Hz beat
      v *= 1.0 + 0.5 * std::cos(2.0 * kPi * 2.0 * t + beat_phase);
      d[start + i] += w * v;
    }
    t0 += chord_len;
  }
  return d;
}

inline std::vector<double> build_speech(std::size_t n, double fs, Rng& rng) {
  const double f_syl = rng.uniform(2.5, 4.5);
  const double f_pause = rng.uniform(0.3, 0.5);
  const double p1 = rng.uniform(0.0, 2.0 * kPi), p2 = rng.uniform(0.0, 2.0 * kPi);
  struct Formant {
    double center, swing, rate, phase;
    double y1 = 0.0, y2 = 0.0;
  };
  Formant formants[3] = {
      {550.0, 200.0, rng.uniform(0.2, 0.5), rng.uniform(0.0, 2.0 * kPi)},
      {1400.0, 500.0, rng.uniform(0.2, 0.5), rng.uniform(0.0, 2.0 * kPi)},
      {2400.0, 600.0, rng.uniform(0.2, 0.5), rng.uniform(0.0, 2.0 * kPi)},
  };
  const double r = std::exp(-kPi * 120.0 / fs);  // ~120 Hz formant bandwidth
  std::vector<double> d(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / fs;
    double env = std::max(0.0, 0.25 + 0.75 * std::cos(2.0 * kPi * f_syl * t + p1));
    env = std::pow(env, 1.5) * (0.6 + 0.4 * std::cos(2.0 * kPi * f_pause * t + p2));
    const double x = rng.normal() * std::max(0.0, env);
    double v = 0.0;
    for (auto& f : formants) {
      const double theta = 2.0 * kPi * (f.center + f.swing * std::sin(2.0 * kPi * f.rate * t + f.phase)) / fs;
      const double y = 2.0 * r * std::cos(theta) * f.y1 - r * r * f.y2 + x;
      f.y2 = f.y1;
      f.y1 = y;
      v += y;
    }
    d[i] = v;
  }
  return d;
}

inline std::vector<double> build_ventilation(std::size_t n, double fs, Rng& rng) {
  std::vector<double> d(n);
  const double a = std::exp(-2.0 * kPi * 150.0 / fs);
  double s1 = 0.0, s2 = 0.0, s3 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    s1 = a * s1 + (1.0 - a) * rng.normal();
    s2 = a * s2 + (1.0 - a) * s1;
    s3 = a * s3 + (1.0 - a) * s2;
    d[i] = s3;
  }
  const double base = rms(d);
  const double hums[3] = {50.0, 100.0, 150.0};
  const double amps[3] = {0.8, 0.5, 0.3};
  const double ph[3] = {rng.uniform(0.0, 2.0 * kPi), rng.uniform(0.0, 2.0 * kPi),
                        rng.uniform(0.0, 2.0 * kPi)};
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / fs;
    for (int h = 0; h < 3; ++h)
      d[i] += base * amps[h] * std::sin(2.0 * kPi * hums[h] * t + ph[h]);
  }
  return d;
}

inline std::vector<double> build_wrench(std::size_t n, double fs, Rng& rng) {
  std::vector<double> d(n, 0.0);
  const bool first_half = rng.uniform() < 0.5;
  const std::size_t start = first_half ? 0 : n / 2;
  const std::size_t len = n / 2;
  const double f_wander = rng.uniform(0.3, 0.5);
  const double wander_phase = rng.uniform(0.0, 2.0 * kPi);
  const double click_rate = rng.uniform(14.0, 22.0);
  const double whine_phase0 = rng.uniform(0.0, 2.0 * kPi);
  double phase = whine_phase0;
  for (std::size_t i = 0; i < len && start + i < n; ++i) {
    const double t = static_cast<double>(i) / fs;
    const double f = 3500.0 + 1300.0 * std::sin(2.0 * kPi * f_wander * t + wander_phase);
    phase += 2.0 * kPi * f / fs;
    d[start + i] += 0.5 * std::sin(phase) + 0.2 * rng.normal();
  }
  const double click_period = 1.0 / click_rate;
  const double tau = 0.0012;
  const auto burst_len = static_cast<std::size_t>(8.0 * tau * fs);
  for (double tk = rng.uniform(0.0, click_period); tk < static_cast<double>(len) / fs;
       tk += click_period) {
    const double a = rng.uniform(0.9, 1.5);
    const auto s0 = start + static_cast<std::size_t>(tk * fs);
    for (std::size_t i = 0; i < burst_len && s0 + i < n; ++i) {
      const double tt = static_cast<double>(i) / fs;
      d[s0 + i] += a * std::exp(-tt / tau) * std::sin(2.0 * kPi * 2800.0 * tt);
    }
  }
  return d;
}

}  // namespace detail

/// Adds one calibrated disturbance to a record. The waveform is scaled so its
/// RMS over the whole record equals level_ratio times the signal RMS.
inline TimeSignal inject_disturbance(const TimeSignal& signal, const DisturbanceRecipe& rec) {
  require_valid(signal, "inject_disturbance");
  if (rec.level_ratio < 0.0) throw std::invalid_argument("inject_disturbance: negative level");
  if (rec.level_ratio == 0.0) return signal;
  const std::size_t n = signal.samples.size();
  const double fs = signal.sample_rate_hz;
  Rng rng = rng_stream(rec.seed, static_cast<std::uint64_t>(rec.kind));

  std::vector<double> d;
  switch (rec.kind) {
    case DisturbanceKind::hammer: d = detail::build_hammer(n, fs, rng); break;
    case DisturbanceKind::air_pressure: d = detail::build_air_pressure(n, fs, rng); break;
    case DisturbanceKind::music: d = detail::build_music(n, fs, rng); break;
    case DisturbanceKind::speech: d = detail::build_speech(n, fs, rng); break;
    case DisturbanceKind::ventilation: d = detail::build_ventilation(n, fs, rng); break;
    case DisturbanceKind::wrench: d = detail::build_wrench(n, fs, rng); break;
  }
  const double rms_d = detail::rms(d);
  const double rms_s = detail::rms(signal.samples);
  TimeSignal out = signal;
  if (rms_d > 0.0 && rms_s > 0.0) {
    const double scale = rec.level_ratio * rms_s / rms_d;
    for (std::size_t i = 0; i < n; ++i) out.samples[i] += scale * d[i];
  }
  return out;
}

// ---------------------------------------------------------------------------
// Dataset generation mirroring the paper's split structure.

struct DatasetSpec {
  GearTrain train = reference_gear_train();
  MotorRecipe base;                  // per-record seeds/deviations filled in
  std::size_t train_good = 25;
  std::size_t train_warning = 17;
  std::size_t validation_good = 6;
  std::size_t validation_warning = 8;
  std::size_t validation_error = 22;
  std::size_t disturbance_good_motors = 2;
  std::size_t disturbance_error_motors = 2;
  std::string disturbance_level = "loud";
};

namespace detail {

inline double severity_for(Label label, Rng& rng) {
  switch (label) {
    case Label::good: return rng.uniform(0.0, 0.05);
    case Label::warning: return rng.uniform(0.2, 0.4);
    case Label::error: return rng.uniform(0.8, 1.0);
  }
  return 0.0;
}

inline FaultRecipe draw_fault(const GearTrain& train, Label label, Rng& rng) {
  FaultRecipe fault;
  fault.kind = rng.uniform() < 0.6 ? FaultKind::impulsive : FaultKind::circumferential;
  fault.severity = severity_for(label, rng);
  auto ffs = fault_frequency_set(train, 1.0, 1e9);
  std::vector<FaultFrequency> candidates;
  for (const auto& f : ffs) {
    if (f.label == "shaft1_h1" || f.label == "mesh1" || f.label == "mesh2")
      candidates.push_back(f);
  }
  fault.target = candidates[rng.below(candidates.size())];
  return fault;
}

inline nlohmann::json recipe_json(const MotorRecipe& motor, const FaultRecipe& fault) {
  nlohmann::json j;
  j["seed"] = motor.seed;
  j["speed_deviation_frac"] = motor.speed_deviation_frac;
  j["fault_kind"] = to_string(fault.kind);
  j["target"] = fault.target.label;
  j["target_hz"] = fault.target.hz;
  j["severity"] = fault.severity;
  return j;
}

}  // namespace detail

/// Writes WAV records plus manifest.json into out_dir (which must exist) and
/// returns the manifest. Per-record RNG streams derive from (seed, index), so
/// a rerun with the same seed reproduces the files byte for byte.
inline Manifest generate_dataset(const DatasetSpec& spec, std::uint64_t seed,
                                 const std::string& out_dir) {
  Manifest manifest;
  std::uint64_t index = 0;

  auto make_record = [&](Label label) {
    Rng rng = rng_stream(seed, index);
    MotorRecipe motor = spec.base;
    motor.train = spec.train;
    motor.seed = mix_u64(seed, 1000000 + index);
    motor.speed_deviation_frac =
        rng.uniform(-spec.train.speed_tolerance_frac, spec.train.speed_tolerance_frac);
    FaultRecipe fault = detail::draw_fault(spec.train, label, rng);
    ++index;
    return std::make_pair(motor, fault);
  };

  auto emit = [&](Label label, const std::string& split, const std::string& name,
                  const MotorRecipe& motor, const FaultRecipe& fault, const std::string& noise,
                  const DisturbanceRecipe* disturbance) {
    TimeSignal sig = synth_motor(motor, fault);
    nlohmann::json recipes = detail::recipe_json(motor, fault);
    if (disturbance != nullptr) {
      sig = inject_disturbance(sig, *disturbance);
      recipes["disturbance"] = {{"kind", to_string(disturbance->kind)},
                                {"level_ratio", disturbance->level_ratio},
                                {"seed", disturbance->seed}};
    }
    write_wav(out_dir + "/" + name, sig);
    manifest.records.push_back({name, label, noise, split, recipes});
  };

  auto emit_batch = [&](Label label, const std::string& split, std::size_t count,
                        const char* prefix) {
    for (std::size_t i = 0; i < count; ++i) {
      auto [motor, fault] = make_record(label);
      char name[128];
      std::snprintf(name, sizeof(name), "%s_%03llu_%s.wav", prefix,
                    static_cast<unsigned long long>(manifest.records.size()), to_string(label));
      emit(label, split, name, motor, fault, "none", nullptr);
    }
  };

  emit_batch(Label::good, "train", spec.train_good, "train");
  emit_batch(Label::warning, "train", spec.train_warning, "train");
  emit_batch(Label::good, "validation", spec.validation_good, "val");
  emit_batch(Label::warning, "validation", spec.validation_warning, "val");
  emit_batch(Label::error, "validation", spec.validation_error, "val");

  // Disturbance subset: a few motors, each measured clean and under every
  // disturbance kind at the configured level.
  const double ratio = disturbance_level_ratio(spec.disturbance_level);
  const std::size_t motors = spec.disturbance_good_motors + spec.disturbance_error_motors;
  for (std::size_t m = 0; m < motors; ++m) {
    const Label label = m < spec.disturbance_good_motors ? Label::good : Label::error;
    auto [motor, fault] = make_record(label);
    char name[128];
    std::snprintf(name, sizeof(name), "dist_m%llu_%s_none.wav",
                  static_cast<unsigned long long>(m), to_string(label));
    emit(label, "disturbance", name, motor, fault, "none", nullptr);
    for (auto kind : {DisturbanceKind::hammer, DisturbanceKind::air_pressure,
                      DisturbanceKind::music, DisturbanceKind::speech,
                      DisturbanceKind::ventilation, DisturbanceKind::wrench}) {
      DisturbanceRecipe rec{kind, ratio, mix_u64(seed, 5000000 + m * 16 + static_cast<std::uint64_t>(kind))};
      std::snprintf(name, sizeof(name), "dist_m%llu_%s_%s.wav",
                    static_cast<unsigned long long>(m), to_string(label), to_string(kind));
      emit(label, "disturbance", name, motor, fault, to_string(kind), &rec);
    }
  }

  validate(manifest);
  write_manifest(manifest, out_dir + "/manifest.json");
  return manifest;
}

}  // namespace gearline
