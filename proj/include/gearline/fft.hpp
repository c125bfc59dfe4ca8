#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <vector>

#include "gearline/types.hpp"

namespace gearline {

using cplx = std::complex<double>;

namespace detail {

inline bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

inline std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

// Twiddle tables are shared across calls; sizes recur constantly (one table
// per transform length, half-length entries).
inline std::shared_ptr<const std::vector<cplx>> twiddles_for(std::size_t n) {
  static std::mutex mu;
  static std::map<std::size_t, std::shared_ptr<const std::vector<cplx>>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  auto table = std::make_shared<std::vector<cplx>>(n / 2);
  for (std::size_t k = 0; k < n / 2; ++k) {
    double a = -2.0 * kPi * static_cast<double>(k) / static_cast<double>(n);
    (*table)[k] = cplx(std::cos(a), std::sin(a));
  }
  cache.emplace(n, table);
  return table;
}

// In-place iterative radix-2; n must be a power of two.
inline void fft_pow2(std::vector<cplx>& a, bool inverse) {
  const std::size_t n = a.size();
  if (n <= 1) return;
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  auto tw = twiddles_for(n);
  const std::vector<cplx>& w = *tw;
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const std::size_t step = n / len;
    for (std::size_t i = 0; i < n; i += len) {
      for (std::size_t k = 0; k < len / 2; ++k) {
        cplx wk = w[k * step];
        if (inverse) wk = std::conj(wk);
        cplx u = a[i + k];
        cplx v = a[i + k + len / 2] * wk;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
      }
    }
  }
  if (inverse) {
    const double s = 1.0 / static_cast<double>(n);
    for (auto& x : a) x *= s;
  }
}

struct BluesteinPlan {
  std::size_t n = 0;
  std::size_t m = 0;
  std::vector<cplx> chirp;       // exp(-i*pi*k^2/n), k in [0, n)
  std::vector<cplx> kernel_fft;  // FFT of the padded conjugate chirp
};

inline std::shared_ptr<const BluesteinPlan> bluestein_plan(std::size_t n) {
  static std::mutex mu;
  static std::map<std::size_t, std::shared_ptr<const BluesteinPlan>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  auto plan = std::make_shared<BluesteinPlan>();
  plan->n = n;
  plan->m = next_pow2(2 * n - 1);
  plan->chirp.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    // k^2 mod 2n keeps the angle argument small and exact.
    std::uint64_t q = (static_cast<std::uint64_t>(k) * k) % (2 * n);
    double a = -kPi * static_cast<double>(q) / static_cast<double>(n);
    plan->chirp[k] = cplx(std::cos(a), std::sin(a));
  }
  std::vector<cplx> b(plan->m, cplx(0.0, 0.0));
  b[0] = std::conj(plan->chirp[0]);
  for (std::size_t k = 1; k < n; ++k) {
    b[k] = std::conj(plan->chirp[k]);
    b[plan->m - k] = b[k];
  }
  fft_pow2(b, false);
  plan->kernel_fft = std::move(b);
  cache.emplace(n, plan);
  return plan;
}

inline void fft_bluestein(std::vector<cplx>& x, bool inverse) {
  const std::size_t n = x.size();
  auto plan = bluestein_plan(n);
  std::vector<cplx> a(plan->m, cplx(0.0, 0.0));
  for (std::size_t k = 0; k < n; ++k) {
    cplx c = inverse ? std::conj(plan->chirp[k]) : plan->chirp[k];
    a[k] = x[k] * c;
  }
  fft_pow2(a, false);
  if (inverse) {
    for (std::size_t k = 0; k < plan->m; ++k) a[k] *= std::conj(plan->kernel_fft[k]);
  } else {
    for (std::size_t k = 0; k < plan->m; ++k) a[k] *= plan->kernel_fft[k];
  }
  fft_pow2(a, true);
  for (std::size_t k = 0; k < n; ++k) {
    cplx c = inverse ? std::conj(plan->chirp[k]) : plan->chirp[k];
    x[k] = a[k] * c;
  }
  if (inverse) {
    const double s = 1.0 / static_cast<double>(n);
    for (auto& v : x) v *= s;
  }
}

}  // namespace detail

/// In-place DFT of arbitrary length (radix-2 when possible, Bluestein otherwise).
inline void fft_inplace(std::vector<cplx>& a, bool inverse = false) {
  if (a.empty()) throw std::invalid_argument("fft: empty input");
  if (detail::is_pow2(a.size()))
    detail::fft_pow2(a, inverse);
  else
    detail::fft_bluestein(a, inverse);
}

inline std::vector<cplx> fft(std::vector<cplx> a, bool inverse = false) {
  fft_inplace(a, inverse);
  return a;
}

inline std::vector<cplx> fft_real(const std::vector<double>& x) {
  std::vector<cplx> a(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) a[i] = cplx(x[i], 0.0);
  fft_inplace(a, false);
  return a;
}

/// Exact DFT bin k of an N-point sequence (Goertzel recurrence).
inline cplx goertzel(const std::vector<double>& x, std::size_t k) {
  const std::size_t n = x.size();
  if (n == 0) throw std::invalid_argument("goertzel: empty input");
  const double w = 2.0 * kPi * static_cast<double>(k) / static_cast<double>(n);
  const double c = 2.0 * std::cos(w);
  double s0 = 0.0, s1 = 0.0, s2 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    s0 = x[i] + c * s1 - s2;
    s2 = s1;
    s1 = s0;
  }
  // X_k = s1 * e^{j w} - s2, valid because w*n is a whole number of turns.
  return cplx(s1 * std::cos(w) - s2, s1 * std::sin(w));
}

}  // namespace gearline
