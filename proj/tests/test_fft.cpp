#include <catch2/catch_amalgamated.hpp>

#include <complex>
#include <vector>

#include "gearline/fft.hpp"
#include "gearline/rng.hpp"
#include "oracles.hpp"

using gearline::cplx;

namespace {

double max_abs_diff(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST_CASE("fft matches the direct DFT for power-of-two and general lengths") {
  gearline::Rng rng(42);
  for (std::size_t n : {2u, 8u, 16u, 7u, 12u, 440u, 1190u, 100u}) {
    std::vector<cplx> x(n);
    for (auto& v : x) v = cplx(rng.uniform(-1, 1), rng.uniform(-1, 1));
    auto got = gearline::fft(x);
    auto want = oracle::dft(x);
    INFO("n=" << n);
    CHECK(max_abs_diff(got, want) < 1e-9 * static_cast<double>(n));
  }
}

TEST_CASE("inverse fft undoes the forward transform") {
  gearline::Rng rng(7);
  for (std::size_t n : {64u, 37u, 440u}) {
    std::vector<cplx> x(n);
    for (auto& v : x) v = cplx(rng.uniform(-1, 1), rng.uniform(-1, 1));
    auto y = gearline::fft(x);
    auto back = gearline::fft(y, true);
    CHECK(max_abs_diff(back, x) < 1e-10);
  }
}

TEST_CASE("goertzel equals the DFT bin") {
  gearline::Rng rng(3);
  std::vector<double> x(123);
  for (auto& v : x) v = rng.uniform(-1, 1);
  auto ref = oracle::dft_real(x);
  for (std::size_t k : {0u, 1u, 5u, 61u, 122u}) {
    auto g = gearline::goertzel(x, k);
    CHECK(std::abs(g - ref[k]) < 1e-9);
  }
}
