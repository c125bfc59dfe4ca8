#include <catch2/catch_amalgamated.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>

#include "gearline/dataset.hpp"
#include "gearline/rng.hpp"

using gearline::Label;
using gearline::Manifest;
using gearline::read_wav;
using gearline::TimeSignal;
using gearline::validate_measurement;
using gearline::write_wav;

namespace {

std::filesystem::path tmp_file(const char* name) {
  return std::filesystem::temp_directory_path() / name;
}

}  // namespace

TEST_CASE("float32 wav roundtrip is bitwise stable") {
  TimeSignal sig;
  sig.sample_rate_hz = 50000.0;
  gearline::Rng rng(1);
  sig.samples.resize(4096);
  for (auto& v : sig.samples) v = static_cast<float>(rng.uniform(-1, 1));

  const auto path = tmp_file("gearline_rt.wav");
  write_wav(path.string(), sig);
  auto back = read_wav(path.string());
  REQUIRE(back.samples.size() == sig.samples.size());
  CHECK(back.sample_rate_hz == 50000.0);
  for (std::size_t i = 0; i < sig.samples.size(); ++i) CHECK(back.samples[i] == sig.samples[i]);

  // A second write of the same data produces identical bytes.
  const auto path2 = tmp_file("gearline_rt2.wav");
  write_wav(path2.string(), back);
  std::ifstream a(path, std::ios::binary), b(path2, std::ios::binary);
  std::string sa((std::istreambuf_iterator<char>(a)), std::istreambuf_iterator<char>());
  std::string sb((std::istreambuf_iterator<char>(b)), std::istreambuf_iterator<char>());
  CHECK(sa == sb);
  std::filesystem::remove(path);
  std::filesystem::remove(path2);
}

TEST_CASE("16-bit samples scale by the full-scale value") {
  TimeSignal sig;
  sig.sample_rate_hz = 16000.0;
  sig.samples = {1.0, -1.0, 0.0, 0.5};
  const auto path = tmp_file("gearline_i16.wav");
  gearline::write_wav_int16(path.string(), sig);
  auto back = read_wav(path.string());
  REQUIRE(back.samples.size() == 4);
  CHECK(back.samples[0] == Catch::Approx(32767.0 / 32768.0));
  CHECK(back.samples[1] == -1.0);
  CHECK(back.samples[2] == 0.0);
  CHECK(back.samples[3] == Catch::Approx(0.5).margin(1e-4));
  std::filesystem::remove(path);
}

TEST_CASE("stereo and malformed files are rejected") {
  // Hand-built stereo header.
  std::string bytes;
  auto put32 = [&](std::uint32_t v) {
    for (int i = 0; i < 4; ++i) bytes.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
  };
  auto put16 = [&](std::uint16_t v) {
    bytes.push_back(static_cast<char>(v & 0xFF));
    bytes.push_back(static_cast<char>((v >> 8) & 0xFF));
  };
  bytes += "RIFF";
  put32(36 + 8);
  bytes += "WAVE";
  bytes += "fmt ";
  put32(16);
  put16(1);
  put16(2);  // stereo
  put32(16000);
  put32(16000 * 4);
  put16(4);
  put16(16);
  bytes += "data";
  put32(8);
  bytes.append(8, '\0');
  const auto path = tmp_file("gearline_stereo.wav");
  {
    std::ofstream f(path, std::ios::binary);
    f << bytes;
  }
  CHECK_THROWS_AS(read_wav(path.string()), std::runtime_error);

  // Truncated data chunk.
  std::string cut = bytes.substr(0, bytes.size() - 4);
  const auto path2 = tmp_file("gearline_trunc.wav");
  {
    std::ofstream f(path2, std::ios::binary);
    f << cut;
  }
  CHECK_THROWS_AS(read_wav(path2.string()), std::runtime_error);

  const auto path3 = tmp_file("gearline_nota.wav");
  {
    std::ofstream f(path3, std::ios::binary);
    f << "hello world, definitely not audio";
  }
  CHECK_THROWS_AS(read_wav(path3.string()), std::runtime_error);
  std::filesystem::remove(path);
  std::filesystem::remove(path2);
  std::filesystem::remove(path3);
}

TEST_CASE("measurement validation modes") {
  TimeSignal contract;
  contract.sample_rate_hz = 50000.0;
  contract.samples.assign(262144, 0.0);
  CHECK_NOTHROW(validate_measurement(contract));

  TimeSignal other;
  other.sample_rate_hz = 48000.0;
  other.samples.assign(262144, 0.0);
  CHECK_THROWS_AS(validate_measurement(other), std::invalid_argument);
  CHECK_NOTHROW(validate_measurement(other, 50000.0, 262144, false));

  // Lenient window recomputation stays seconds-based.
  const auto lenient = validate_measurement(other, 50000.0, 262144, false);
  CHECK(static_cast<std::size_t>(std::llround(0.0088 * lenient.sample_rate_hz)) == 422);

  TimeSignal low;
  low.sample_rate_hz = 8000.0;
  low.samples.assign(40000, 0.0);
  CHECK_THROWS_AS(validate_measurement(low, 50000.0, 262144, false), std::invalid_argument);

  TimeSignal brief;
  brief.sample_rate_hz = 50000.0;
  brief.samples.assign(50000, 0.0);  // one second
  CHECK_THROWS_AS(validate_measurement(brief, 50000.0, 262144, false), std::invalid_argument);
}

TEST_CASE("manifest io and validation") {
  Manifest m;
  m.records.push_back({"a.wav", Label::good, "none", "train", {}});
  m.records.push_back({"b.wav", Label::error, "hammer", "disturbance", {}});
  const auto path = tmp_file("gearline_manifest.json");
  gearline::write_manifest(m, path.string());
  auto back = gearline::read_manifest(path.string());
  REQUIRE(back.records.size() == 2);
  CHECK(back.records[0].path == "a.wav");
  CHECK(back.records[1].label == Label::error);
  CHECK(back.records[1].noise == "hammer");
  CHECK(back.split("train").size() == 1);

  Manifest dup;
  dup.records.push_back({"a.wav", Label::good, "none", "train", {}});
  dup.records.push_back({"a.wav", Label::good, "none", "validation", {}});
  CHECK_THROWS_AS(gearline::validate(dup), std::invalid_argument);

  Manifest bad;
  bad.records.push_back({"c.wav", Label::good, "none", "test", {}});
  CHECK_THROWS_AS(gearline::validate(bad), std::invalid_argument);
  std::filesystem::remove(path);
}
