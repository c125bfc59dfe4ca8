#pragma once

#include <algorithm>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "gearline/evaluation.hpp"
#include "gearline/types.hpp"

namespace gearline {

namespace detail {

inline void put_u32(std::string& out, std::uint32_t v) {
  out.push_back(static_cast<char>(v & 0xFF));
  out.push_back(static_cast<char>((v >> 8) & 0xFF));
  out.push_back(static_cast<char>((v >> 16) & 0xFF));
  out.push_back(static_cast<char>((v >> 24) & 0xFF));
}

inline void put_u16(std::string& out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xFF));
  out.push_back(static_cast<char>((v >> 8) & 0xFF));
}

inline std::uint32_t get_u32(const std::string& s, std::size_t off) {
  return static_cast<std::uint32_t>(static_cast<unsigned char>(s[off])) |
         (static_cast<std::uint32_t>(static_cast<unsigned char>(s[off + 1])) << 8) |
         (static_cast<std::uint32_t>(static_cast<unsigned char>(s[off + 2])) << 16) |
         (static_cast<std::uint32_t>(static_cast<unsigned char>(s[off + 3])) << 24);
}

inline std::uint16_t get_u16(const std::string& s, std::size_t off) {
  return static_cast<std::uint16_t>(static_cast<unsigned char>(s[off]) |
                                    (static_cast<unsigned char>(s[off + 1]) << 8));
}

}  // namespace detail

/// Mono 32-bit float PCM writer (the synthetic-record contract).
inline void write_wav(const std::string& path, const TimeSignal& signal) {
  require_valid(signal, "write_wav");
  std::string out;
  const auto n = static_cast<std::uint32_t>(signal.samples.size());
  const std::uint32_t data_bytes = n * 4;
  out.reserve(44 + data_bytes);
  out += "RIFF";
  detail::put_u32(out, 36 + data_bytes);
  out += "WAVE";
  out += "fmt ";
  detail::put_u32(out, 16);
  detail::put_u16(out, 3);  // IEEE float
  detail::put_u16(out, 1);  // mono
  const auto rate = static_cast<std::uint32_t>(signal.sample_rate_hz);
  detail::put_u32(out, rate);
  detail::put_u32(out, rate * 4);
  detail::put_u16(out, 4);
  detail::put_u16(out, 32);
  out += "data";
  detail::put_u32(out, data_bytes);
  for (double v : signal.samples) {
    const auto f = static_cast<float>(v);
    char buf[4];
    std::memcpy(buf, &f, 4);
    out.append(buf, 4);
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("write_wav: cannot open " + path);
  file.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!file) throw std::runtime_error("write_wav: short write to " + path);
}

/// Mono 16-bit integer PCM writer; values clipped to [-1, 1).
inline void write_wav_int16(const std::string& path, const TimeSignal& signal) {
  require_valid(signal, "write_wav_int16");
  std::string out;
  const auto n = static_cast<std::uint32_t>(signal.samples.size());
  const std::uint32_t data_bytes = n * 2;
  out += "RIFF";
  detail::put_u32(out, 36 + data_bytes);
  out += "WAVE";
  out += "fmt ";
  detail::put_u32(out, 16);
  detail::put_u16(out, 1);  // integer PCM
  detail::put_u16(out, 1);
  const auto rate = static_cast<std::uint32_t>(signal.sample_rate_hz);
  detail::put_u32(out, rate);
  detail::put_u32(out, rate * 2);
  detail::put_u16(out, 2);
  detail::put_u16(out, 16);
  out += "data";
  detail::put_u32(out, data_bytes);
  for (double v : signal.samples) {
    const double clamped = std::clamp(v, -1.0, 32767.0 / 32768.0);
    const auto q = static_cast<std::int16_t>(std::lround(clamped * 32768.0));
    detail::put_u16(out, static_cast<std::uint16_t>(q));
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("write_wav_int16: cannot open " + path);
  file.write(out.data(), static_cast<std::streamsize>(out.size()));
}

/// RIFF reader for mono 16-bit integer or 32-bit float PCM. Integer samples
/// are scaled by the full-scale value into [-1, 1).
inline TimeSignal read_wav(const std::string& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("read_wav: cannot open " + path);
  std::string bytes((std::istreambuf_iterator<char>(file)), std::istreambuf_iterator<char>());
  if (bytes.size() < 44 || bytes.substr(0, 4) != "RIFF" || bytes.substr(8, 4) != "WAVE")
    throw std::runtime_error("read_wav: not a RIFF/WAVE file: " + path);

  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  bool have_fmt = false;
  std::size_t off = 12;
  while (off + 8 <= bytes.size()) {
    const std::string id = bytes.substr(off, 4);
    const std::uint32_t len = detail::get_u32(bytes, off + 4);
    const std::size_t body = off + 8;
    if (body + len > bytes.size()) throw std::runtime_error("read_wav: truncated chunk in " + path);
    if (id == "fmt ") {
      if (len < 16) throw std::runtime_error("read_wav: malformed fmt chunk in " + path);
      format = detail::get_u16(bytes, body);
      channels = detail::get_u16(bytes, body + 2);
      rate = detail::get_u32(bytes, body + 4);
      bits = detail::get_u16(bytes, body + 14);
      have_fmt = true;
    } else if (id == "data") {
      if (!have_fmt) throw std::runtime_error("read_wav: data before fmt in " + path);
      if (channels != 1) throw std::runtime_error("read_wav: only mono supported: " + path);
      TimeSignal out;
      out.sample_rate_hz = static_cast<double>(rate);
      if (format == 1 && bits == 16) {
        const std::size_t count = len / 2;
        out.samples.resize(count);
        for (std::size_t i = 0; i < count; ++i) {
          const auto raw = static_cast<std::int16_t>(detail::get_u16(bytes, body + 2 * i));
          out.samples[i] = static_cast<double>(raw) / 32768.0;
        }
      } else if (format == 3 && bits == 32) {
        const std::size_t count = len / 4;
        out.samples.resize(count);
        for (std::size_t i = 0; i < count; ++i) {
          float f;
          std::memcpy(&f, bytes.data() + body + 4 * i, 4);
          out.samples[i] = static_cast<double>(f);
        }
      } else {
        throw std::runtime_error("read_wav: unsupported encoding in " + path);
      }
      if (out.samples.size() < 2) throw std::runtime_error("read_wav: too few samples in " + path);
      return out;
    }
    off = body + len + (len % 2);
  }
  throw std::runtime_error("read_wav: no data chunk in " + path);
}

/// Strict mode pins the paper's record geometry; lenient mode accepts any
/// rate >= 16 kHz (the band must stay below Nyquist) and >= 2 s of audio.
inline TimeSignal validate_measurement(TimeSignal signal, double expected_rate_hz = 50000.0,
                                       std::size_t expected_len = 262144, bool strict = true) {
  require_valid(signal, "validate_measurement");
  if (strict) {
    if (signal.sample_rate_hz != expected_rate_hz)
      throw std::invalid_argument("validate_measurement: sample rate mismatch");
    if (signal.samples.size() != expected_len)
      throw std::invalid_argument("validate_measurement: record length mismatch");
  } else {
    if (signal.sample_rate_hz < 16000.0)
      throw std::invalid_argument("validate_measurement: rate below the 16 kHz floor");
    if (signal.duration_s() < 2.0)
      throw std::invalid_argument("validate_measurement: record shorter than 2 s");
  }
  return signal;
}

struct ManifestRecord {
  std::string path;
  Label label = Label::good;
  std::string noise = "none";  // none | low | loud | disturbance kind
  std::string split = "train"; // train | validation | disturbance
  nlohmann::json recipes;
};

struct Manifest {
  std::vector<ManifestRecord> records;

  std::vector<const ManifestRecord*> split(const std::string& name) const {
    std::vector<const ManifestRecord*> out;
    for (const auto& r : records)
      if (r.split == name) out.push_back(&r);
    return out;
  }
};

inline void validate(const Manifest& m) {
  std::set<std::string> paths;
  for (const auto& r : m.records) {
    if (!paths.insert(r.path).second)
      throw std::invalid_argument("manifest: duplicate path " + r.path);
    if (r.split != "train" && r.split != "validation" && r.split != "disturbance")
      throw std::invalid_argument("manifest: unknown split " + r.split);
  }
}

inline void write_manifest(const Manifest& m, const std::string& path) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : m.records) {
    nlohmann::json obj;
    obj["path"] = r.path;
    obj["label"] = to_string(r.label);
    obj["noise"] = r.noise;
    obj["split"] = r.split;
    if (!r.recipes.is_null()) obj["recipes"] = r.recipes;
    arr.push_back(obj);
  }
  std::ofstream file(path);
  if (!file) throw std::runtime_error("write_manifest: cannot open " + path);
  file << arr.dump(2) << "\n";
}

inline Manifest read_manifest(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw std::runtime_error("read_manifest: cannot open " + path);
  nlohmann::json arr = nlohmann::json::parse(file);
  Manifest m;
  for (const auto& obj : arr) {
    ManifestRecord r;
    r.path = obj.at("path").get<std::string>();
    r.label = label_from_string(obj.at("label").get<std::string>());
    r.noise = obj.at("noise").get<std::string>();
    r.split = obj.at("split").get<std::string>();
    if (obj.contains("recipes")) r.recipes = obj.at("recipes");
    m.records.push_back(std::move(r));
  }
  validate(m);
  return m;
}

}  // namespace gearline
