#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numeric>
#include <vector>

#include "gearline/rng.hpp"
#include "gearline/signal.hpp"
#include "oracles.hpp"

using gearline::BandSpec;
using gearline::TimeSignal;

namespace {

TimeSignal tone(double freq, double rate, double seconds, double amp = 1.0, double phase = 0.0) {
  TimeSignal s;
  s.sample_rate_hz = rate;
  const auto n = static_cast<std::size_t>(seconds * rate);
  s.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    s.samples[i] = amp * std::sin(2.0 * gearline::kPi * freq * static_cast<double>(i) / rate + phase);
  return s;
}

double rms(const std::vector<double>& v) {
  double acc = 0.0;
  for (double x : v) acc += x * x;
  return std::sqrt(acc / static_cast<double>(v.size()));
}

}  // namespace

TEST_CASE("band-pass design follows the 7.5-period tap rule") {
  auto k = gearline::design_bandpass_fir({1150.0, 5100.0}, 50000.0);
  CHECK(k.size() == 327);

  auto wide = gearline::design_bandpass_fir({10.0, 24999.0}, 50000.0);
  CHECK(wide.size() == 37501);

  CHECK_THROWS_AS(gearline::design_bandpass_fir({5100.0, 1150.0}, 50000.0), std::invalid_argument);
}

TEST_CASE("band-pass kernel is symmetric with near-unit passband gain") {
  auto k = gearline::design_bandpass_fir({1150.0, 5100.0}, 50000.0);
  for (std::size_t i = 0; i < k.size() / 2; ++i)
    CHECK(std::abs(k.taps[i] - k.taps[k.size() - 1 - i]) < 1e-12 * (1.0 + std::abs(k.taps[i])));

  // Single-pass response at band center: |sum h[n] e^{-jwn}|.
  const double fc = std::sqrt(1150.0 * 5100.0);
  const double w = 2.0 * gearline::kPi * fc / 50000.0;
  std::complex<double> h(0.0, 0.0);
  for (std::size_t n = 0; n < k.size(); ++n)
    h += k.taps[n] * std::complex<double>(std::cos(w * static_cast<double>(n)),
                                          -std::sin(w * static_cast<double>(n)));
  const double gain_db = 20.0 * std::log10(std::abs(h));
  CHECK(std::abs(gain_db) < 1.0);
}

TEST_CASE("forward-backward filtering passes the band and rejects below it") {
  auto k = gearline::design_bandpass_fir({1150.0, 5100.0}, 50000.0);

  auto in_band = tone(2000.0, 50000.0, 5.0);
  auto out = gearline::filter_forward_backward(in_band, k);
  REQUIRE(out.samples.size() == in_band.samples.size());
  // Compare RMS over the interior to dodge edge transients.
  const std::size_t a = k.size(), b = out.samples.size() - k.size();
  std::vector<double> mid(out.samples.begin() + a, out.samples.begin() + b);
  std::vector<double> ref(in_band.samples.begin() + a, in_band.samples.begin() + b);
  CHECK(rms(mid) == Catch::Approx(rms(ref)).epsilon(0.02));

  auto low = tone(100.0, 50000.0, 5.0);
  auto rejected = gearline::filter_forward_backward(low, k);
  CHECK(rms(rejected.samples) <= 1e-2);

  TimeSignal zeros;
  zeros.sample_rate_hz = 50000.0;
  zeros.samples.assign(5000, 0.0);
  auto z = gearline::filter_forward_backward(zeros, k);
  for (double v : z.samples) CHECK(v == 0.0);
}

TEST_CASE("forward-backward filtering is phase neutral") {
  auto k = gearline::design_bandpass_fir({1150.0, 5100.0}, 50000.0);
  auto sig = tone(2000.0, 50000.0, 2.0);
  auto out = gearline::filter_forward_backward(sig, k);

  // Cross-correlation peak between input and output must sit at lag zero.
  const std::size_t n = sig.samples.size();
  const int max_lag = 12;
  double best = -1e300;
  int best_lag = -999;
  for (int lag = -max_lag; lag <= max_lag; ++lag) {
    double acc = 0.0;
    for (std::size_t i = 2000; i + 2000 < n; ++i) {
      const auto j = static_cast<std::size_t>(static_cast<int>(i) + lag);
      acc += sig.samples[i] * out.samples[j];
    }
    if (acc > best) {
      best = acc;
      best_lag = lag;
    }
  }
  CHECK(best_lag == 0);
}

TEST_CASE("forward-backward filtering rejects too-short signals") {
  auto k = gearline::design_bandpass_fir({1150.0, 5100.0}, 50000.0);
  auto sig = tone(2000.0, 50000.0, 0.01);  // 500 samples < 3 * 327
  CHECK_THROWS_AS(gearline::filter_forward_backward(sig, k), std::invalid_argument);
}

TEST_CASE("analytic signal has unit magnitude for pure tones") {
  for (double phase : {0.0, gearline::kPi / 2.0}) {
    auto sig = tone(1000.0, 50000.0, 1.0, 1.0, phase);
    auto a = gearline::analytic_signal(sig);
    const auto n = a.size();
    const auto edge = n / 100;
    for (std::size_t i = edge; i < n - edge; i += 97)
      CHECK(std::abs(std::abs(a[i]) - 1.0) < 1e-2);
    for (std::size_t i = 0; i < n; i += 131)
      CHECK(std::abs(a[i].real() - sig.samples[i]) < 1e-9);
  }
}

TEST_CASE("analytic signal tracks the AM envelope") {
  const double rate = 50000.0;
  const std::size_t n = 50000;
  TimeSignal sig;
  sig.sample_rate_hz = rate;
  sig.samples = oracle::am_tone(3000.0, 20.0, 0.5, rate, n);
  auto env = gearline::envelope(sig);
  auto want = oracle::am_envelope(20.0, 0.5, rate, n);
  const std::size_t edge = n / 50;
  double worst = 0.0;
  for (std::size_t i = edge; i < n - edge; ++i) worst = std::max(worst, std::abs(env[i] - want[i]));
  CHECK(worst <= 0.02);
}

TEST_CASE("analytic signal kills negative frequencies") {
  gearline::Rng rng(11);
  TimeSignal sig;
  sig.sample_rate_hz = 1000.0;
  sig.samples = rng.normals(512);
  auto a = gearline::analytic_signal(sig);
  auto spec = gearline::fft(a);
  double neg = 0.0, total = 0.0;
  for (std::size_t k = 0; k < spec.size(); ++k) {
    const double p = std::norm(spec[k]);
    total += p;
    if (k > spec.size() / 2) neg += p;
  }
  CHECK(neg <= 1e-10 * total);
}

TEST_CASE("magnitude spectrum basics") {
  TimeSignal dc;
  dc.sample_rate_hz = 8.0;
  dc.samples.assign(8, 1.0);
  auto s = gearline::magnitude_spectrum(dc);
  REQUIRE(s.amplitudes.size() == 5);
  CHECK(s.amplitudes[0] == Catch::Approx(8.0));
  for (std::size_t k = 1; k < 5; ++k) CHECK(s.amplitudes[k] < 1e-12);

  // Unit sine exactly on bin 5 of 64 samples.
  TimeSignal sine;
  sine.sample_rate_hz = 64.0;
  sine.samples.resize(64);
  for (std::size_t i = 0; i < 64; ++i)
    sine.samples[i] = std::sin(2.0 * gearline::kPi * 5.0 * static_cast<double>(i) / 64.0);
  auto ss = gearline::magnitude_spectrum(sine);
  CHECK(ss.amplitudes[5] == Catch::Approx(32.0).margin(1e-9));
  for (std::size_t k = 0; k < ss.amplitudes.size(); ++k)
    if (k != 5) CHECK(ss.amplitudes[k] <= 1e-9 * 64.0);

  TimeSignal imp;
  imp.sample_rate_hz = 16.0;
  imp.samples.assign(16, 0.0);
  imp.samples[0] = 1.0;
  auto si = gearline::magnitude_spectrum(imp);
  for (double v : si.amplitudes) CHECK(v == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("Parseval holds for the magnitude spectrum") {
  gearline::Rng rng(5);
  for (std::size_t n : {256u, 255u}) {
    TimeSignal sig;
    sig.sample_rate_hz = 1000.0;
    sig.samples = rng.normals(n);
    auto s = gearline::magnitude_spectrum(sig);
    double lhs = 0.0;
    for (std::size_t k = 0; k < s.amplitudes.size(); ++k) {
      const double p = s.amplitudes[k] * s.amplitudes[k];
      const bool interior = k != 0 && !(n % 2 == 0 && k == n / 2);
      lhs += interior ? 2.0 * p : p;
    }
    lhs /= static_cast<double>(n);
    double rhs = 0.0;
    for (double x : sig.samples) rhs += x * x;
    CHECK(lhs == Catch::Approx(rhs).epsilon(1e-9));
  }
}

TEST_CASE("log spectrogram frame arithmetic") {
  TimeSignal sig;
  sig.sample_rate_hz = 50000.0;
  sig.samples.assign(262144, 0.0);
  gearline::Rng rng(1);
  for (auto& v : sig.samples) v = rng.uniform(-1, 1);

  auto m1 = gearline::log_spectrogram(sig, 0.0088, 0.5);
  CHECK(m1.rows() == 1190);
  CHECK(m1.cols() == 221);

  auto m2 = gearline::log_spectrogram(sig, 1.75, 0.5);
  CHECK(m2.rows() == 4);

  TimeSignal tiny;
  tiny.sample_rate_hz = 50000.0;
  tiny.samples.assign(300, 0.0);
  CHECK_THROWS_AS(gearline::log_spectrogram(tiny, 0.0088, 0.5), std::invalid_argument);
}

TEST_CASE("constant signal gives identical spectrogram frames") {
  TimeSignal sig;
  sig.sample_rate_hz = 1000.0;
  sig.samples.assign(4000, 0.7);
  auto m = gearline::log_spectrogram(sig, 0.25, 0.5);
  REQUIRE(m.rows() >= 2);
  for (std::size_t f = 1; f < m.rows(); ++f)
    for (std::size_t k = 0; k < m.cols(); ++k)
      CHECK(m.values[f][k] == Catch::Approx(m.values[0][k]).margin(1e-12));
}

TEST_CASE("dct2 matches the defining sum") {
  CHECK(gearline::dct2({1, 1, 1, 1}) == std::vector<double>{4, 0, 0, 0});

  auto two = gearline::dct2({1, 0});
  CHECK(two[0] == Catch::Approx(1.0));
  CHECK(two[1] == Catch::Approx(std::cos(gearline::kPi / 4.0)));

  auto alt = gearline::dct2({1, -1, 1, -1});
  CHECK(std::abs(alt[0]) < 1e-12);
  double top = std::abs(alt[3]);
  CHECK(top > std::abs(alt[1]));
  CHECK(top > std::abs(alt[2]));

  gearline::Rng rng(9);
  for (std::size_t n : {1u, 2u, 5u, 17u, 64u}) {
    std::vector<double> x(n);
    for (auto& v : x) v = rng.uniform(-1, 1);
    auto got = gearline::dct2(x);
    auto want = oracle::dct2(x);
    for (std::size_t k = 0; k < n; ++k) CHECK(std::abs(got[k] - want[k]) < 1e-10);
  }
}

TEST_CASE("dct2 on four-sample constant is exact") {
  auto g = gearline::dct2({1.0, 1.0, 1.0, 1.0});
  CHECK(g[0] == Catch::Approx(4.0));
  for (std::size_t k = 1; k < 4; ++k) CHECK(std::abs(g[k]) < 1e-12);
}
