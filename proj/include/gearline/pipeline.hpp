#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "gearline/dataset.hpp"
#include "gearline/envelope.hpp"
#include "gearline/evaluation.hpp"
#include "gearline/kinematics.hpp"
#include "gearline/occ.hpp"
#include "gearline/preprocess.hpp"
#include "gearline/psycho.hpp"
#include "gearline/signal.hpp"
#include "gearline/spectral.hpp"
#include "gearline/synth.hpp"
#include "gearline/types.hpp"

namespace gearline {

enum class FeatureSetKind { les_limited, les_ff, lms_pca, les_spectral, pa, palff };

inline const char* to_string(FeatureSetKind k) {
  switch (k) {
    case FeatureSetKind::les_limited: return "les_limited";
    case FeatureSetKind::les_ff: return "les_ff";
    case FeatureSetKind::lms_pca: return "lms_pca";
    case FeatureSetKind::les_spectral: return "les_spectral";
    case FeatureSetKind::pa: return "pa";
    case FeatureSetKind::palff: return "palff";
  }
  return "?";
}

inline FeatureSetKind feature_set_from_string(const std::string& s) {
  if (s == "les_limited") return FeatureSetKind::les_limited;
  if (s == "les_ff") return FeatureSetKind::les_ff;
  if (s == "lms_pca") return FeatureSetKind::lms_pca;
  if (s == "les_spectral") return FeatureSetKind::les_spectral;
  if (s == "pa") return FeatureSetKind::pa;
  if (s == "palff") return FeatureSetKind::palff;
  throw std::invalid_argument("unknown feature set: " + s);
}

enum class PreprocKind { none, scaler, pca };

inline const char* to_string(PreprocKind k) {
  switch (k) {
    case PreprocKind::none: return "none";
    case PreprocKind::scaler: return "scaler";
    case PreprocKind::pca: return "pca";
  }
  return "?";
}

inline PreprocKind preproc_from_string(const std::string& s) {
  if (s == "none") return PreprocKind::none;
  if (s == "scaler") return PreprocKind::scaler;
  if (s == "pca") return PreprocKind::pca;
  throw std::invalid_argument("unknown preprocessor: " + s);
}

/// The combinations the study uses: scaled fault-frequency and psychoacoustic
/// blocks, PCA for the log-mel set, raw spectra otherwise.
inline PreprocKind default_preprocessor(FeatureSetKind k) {
  switch (k) {
    case FeatureSetKind::les_ff:
    case FeatureSetKind::pa:
    case FeatureSetKind::palff: return PreprocKind::scaler;
    case FeatureSetKind::lms_pca: return PreprocKind::pca;
    case FeatureSetKind::les_limited:
    case FeatureSetKind::les_spectral: return PreprocKind::none;
  }
  return PreprocKind::none;
}

inline const char* to_string(OccKind k) {
  switch (k) {
    case OccKind::ocsvm: return "ocsvm";
    case OccKind::iforest: return "iforest";
    case OccKind::brm: return "brm";
  }
  return "?";
}

inline OccKind occ_kind_from_string(const std::string& s) {
  if (s == "ocsvm") return OccKind::ocsvm;
  if (s == "iforest") return OccKind::iforest;
  if (s == "brm") return OccKind::brm;
  throw std::invalid_argument("unknown occ kind: " + s);
}

struct RunConfig {
  GearTrain train = reference_gear_train();
  BandSpec band{1150.0, 5100.0};
  FeatureSetKind feature_set = FeatureSetKind::palff;
  PreprocKind preprocessor = PreprocKind::scaler;
  bool allow_custom_preprocessor = false;
  OccKind occ_kind = OccKind::iforest;
  OccConfig occ;
  std::vector<double> nu_sweep{0.1, 0.2, 0.3, 0.4, 0.5};
  int run_count = 5;
  bool strict_io = true;
  double les_lo_hz = 10.0;
  double les_hi_hz = 555.5;
  double variance_target = 0.90;
  EnvelopeSpectrogramConfig envelope_spectrogram;
  LogMelConfig log_mel;
  ModulationModelConfig psycho = default_modulation_config();
};

inline void validate(const RunConfig& cfg) {
  require_valid(cfg.train, "run config");
  if (!cfg.allow_custom_preprocessor && cfg.preprocessor != default_preprocessor(cfg.feature_set))
    throw std::invalid_argument(
        std::string("run config: feature set ") + to_string(cfg.feature_set) +
        " is bound to preprocessor " + to_string(default_preprocessor(cfg.feature_set)) +
        "; set allow_custom_preprocessor to override");
  if (cfg.run_count < 1) throw std::invalid_argument("run config: run_count must be positive");
  if (cfg.occ_kind == OccKind::ocsvm && static_cast<int>(cfg.nu_sweep.size()) < cfg.run_count)
    throw std::invalid_argument("run config: nu sweep shorter than run count");
}

// --------------------------------------------------------------------------
// JSON round trip. Missing fields keep their defaults, so a config file only
// states what it changes.

inline nlohmann::json to_json(const RunConfig& cfg) {
  nlohmann::json j;
  j["gear_train"] = {{"motor_speed_hz", cfg.train.motor_speed_hz},
                     {"tooth_counts", cfg.train.tooth_counts},
                     {"speed_tolerance_frac", cfg.train.speed_tolerance_frac}};
  j["band"] = {{"low_hz", cfg.band.low_hz}, {"high_hz", cfg.band.high_hz}};
  j["feature_set"] = to_string(cfg.feature_set);
  j["preprocessor"] = to_string(cfg.preprocessor);
  j["allow_custom_preprocessor"] = cfg.allow_custom_preprocessor;
  j["occ"] = {{"kind", to_string(cfg.occ_kind)},
              {"ensemble_size", cfg.occ.ensemble_size},
              {"rbf_gamma", cfg.occ.rbf_gamma},
              {"iforest_subsample", cfg.occ.iforest_subsample},
              {"brm_sample_frac", cfg.occ.brm_sample_frac},
              {"seed", cfg.occ.seed}};
  j["nu_sweep"] = cfg.nu_sweep;
  j["run_count"] = cfg.run_count;
  j["strict_io"] = cfg.strict_io;
  j["les_domain"] = {cfg.les_lo_hz, cfg.les_hi_hz};
  j["variance_target"] = cfg.variance_target;
  j["envelope_spectrogram"] = {{"window_s", cfg.envelope_spectrogram.window_s},
                               {"overlap_frac", cfg.envelope_spectrogram.overlap_frac},
                               {"min_env_hz", cfg.envelope_spectrogram.min_env_hz},
                               {"pool_factor", cfg.envelope_spectrogram.pool_factor}};
  j["log_mel"] = {{"n_filters", cfg.log_mel.n_filters},
                  {"f_lo_hz", cfg.log_mel.f_lo_hz},
                  {"f_hi_hz", cfg.log_mel.f_hi_hz},
                  {"overlap_frac", cfg.log_mel.overlap_frac}};
  j["psycho"] = {{"band_edges_hz", cfg.psycho.band_edges_hz},
                 {"roughness_weight",
                  {{"peak_hz", cfg.psycho.roughness_weight.peak_hz},
                   {"half_power_lo_hz", cfg.psycho.roughness_weight.half_power_lo_hz},
                   {"half_power_hi_hz", cfg.psycho.roughness_weight.half_power_hi_hz}}},
                 {"fluctuation_weight",
                  {{"peak_hz", cfg.psycho.fluctuation_weight.peak_hz},
                   {"half_power_lo_hz", cfg.psycho.fluctuation_weight.half_power_lo_hz},
                   {"half_power_hi_hz", cfg.psycho.fluctuation_weight.half_power_hi_hz}}},
                 {"roughness_frame_s", cfg.psycho.roughness_frame_s},
                 {"roughness_hop_s", cfg.psycho.roughness_hop_s},
                 {"fluctuation_frame_s", cfg.psycho.fluctuation_frame_s},
                 {"fluctuation_hop_s", cfg.psycho.fluctuation_hop_s},
                 {"calibration_gain_r", cfg.psycho.calibration_gain_r},
                 {"calibration_gain_f", cfg.psycho.calibration_gain_f}};
  return j;
}

inline RunConfig run_config_from_json(const nlohmann::json& j) {
  RunConfig cfg;
  if (j.contains("gear_train")) {
    const auto& t = j.at("gear_train");
    if (t.contains("motor_speed_hz")) cfg.train.motor_speed_hz = t.at("motor_speed_hz");
    if (t.contains("tooth_counts")) {
      auto counts = t.at("tooth_counts").get<std::vector<int>>();
      if (counts.size() != 4)
        throw std::invalid_argument("config: tooth_counts needs exactly 4 entries");
      std::copy(counts.begin(), counts.end(), cfg.train.tooth_counts.begin());
    }
    if (t.contains("speed_tolerance_frac"))
      cfg.train.speed_tolerance_frac = t.at("speed_tolerance_frac");
  }
  if (j.contains("band")) {
    cfg.band.low_hz = j.at("band").value("low_hz", cfg.band.low_hz);
    cfg.band.high_hz = j.at("band").value("high_hz", cfg.band.high_hz);
  }
  if (j.contains("feature_set")) cfg.feature_set = feature_set_from_string(j.at("feature_set"));
  cfg.preprocessor = default_preprocessor(cfg.feature_set);
  if (j.contains("preprocessor")) {
    const std::string p = j.at("preprocessor");
    if (p != "auto") cfg.preprocessor = preproc_from_string(p);
  }
  cfg.allow_custom_preprocessor = j.value("allow_custom_preprocessor", false);
  if (j.contains("occ")) {
    const auto& o = j.at("occ");
    if (o.contains("kind")) cfg.occ_kind = occ_kind_from_string(o.at("kind"));
    cfg.occ.ensemble_size = o.value("ensemble_size", cfg.occ.ensemble_size);
    cfg.occ.rbf_gamma = o.value("rbf_gamma", cfg.occ.rbf_gamma);
    cfg.occ.iforest_subsample = o.value("iforest_subsample", cfg.occ.iforest_subsample);
    cfg.occ.brm_sample_frac = o.value("brm_sample_frac", cfg.occ.brm_sample_frac);
    cfg.occ.seed = o.value("seed", cfg.occ.seed);
  }
  if (j.contains("nu_sweep")) cfg.nu_sweep = j.at("nu_sweep").get<std::vector<double>>();
  cfg.run_count = j.value("run_count", cfg.run_count);
  cfg.strict_io = j.value("strict_io", cfg.strict_io);
  if (j.contains("les_domain")) {
    cfg.les_lo_hz = j.at("les_domain").at(0);
    cfg.les_hi_hz = j.at("les_domain").at(1);
  }
  cfg.variance_target = j.value("variance_target", cfg.variance_target);
  if (j.contains("envelope_spectrogram")) {
    const auto& e = j.at("envelope_spectrogram");
    cfg.envelope_spectrogram.window_s = e.value("window_s", cfg.envelope_spectrogram.window_s);
    cfg.envelope_spectrogram.overlap_frac =
        e.value("overlap_frac", cfg.envelope_spectrogram.overlap_frac);
    cfg.envelope_spectrogram.min_env_hz = e.value("min_env_hz", cfg.envelope_spectrogram.min_env_hz);
    cfg.envelope_spectrogram.pool_factor =
        e.value("pool_factor", cfg.envelope_spectrogram.pool_factor);
  }
  if (j.contains("log_mel")) {
    const auto& m = j.at("log_mel");
    cfg.log_mel.n_filters = m.value("n_filters", cfg.log_mel.n_filters);
    cfg.log_mel.f_lo_hz = m.value("f_lo_hz", cfg.log_mel.f_lo_hz);
    cfg.log_mel.f_hi_hz = m.value("f_hi_hz", cfg.log_mel.f_hi_hz);
    cfg.log_mel.overlap_frac = m.value("overlap_frac", cfg.log_mel.overlap_frac);
  }
  if (j.contains("psycho")) {
    const auto& p = j.at("psycho");
    if (p.contains("band_edges_hz"))
      cfg.psycho.band_edges_hz = p.at("band_edges_hz").get<std::vector<double>>();
    auto read_weight = [&](const char* key, ModulationWeight& w) {
      if (!p.contains(key)) return;
      const auto& v = p.at(key);
      w.peak_hz = v.value("peak_hz", w.peak_hz);
      w.half_power_lo_hz = v.value("half_power_lo_hz", w.half_power_lo_hz);
      w.half_power_hi_hz = v.value("half_power_hi_hz", w.half_power_hi_hz);
    };
    read_weight("roughness_weight", cfg.psycho.roughness_weight);
    read_weight("fluctuation_weight", cfg.psycho.fluctuation_weight);
    cfg.psycho.roughness_frame_s = p.value("roughness_frame_s", cfg.psycho.roughness_frame_s);
    cfg.psycho.roughness_hop_s = p.value("roughness_hop_s", cfg.psycho.roughness_hop_s);
    cfg.psycho.fluctuation_frame_s = p.value("fluctuation_frame_s", cfg.psycho.fluctuation_frame_s);
    cfg.psycho.fluctuation_hop_s = p.value("fluctuation_hop_s", cfg.psycho.fluctuation_hop_s);
    cfg.psycho.calibration_gain_r = p.value("calibration_gain_r", cfg.psycho.calibration_gain_r);
    cfg.psycho.calibration_gain_f = p.value("calibration_gain_f", cfg.psycho.calibration_gain_f);
  }
  validate(cfg);
  return cfg;
}

inline RunConfig load_run_config(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw std::runtime_error("cannot open config " + path);
  return run_config_from_json(nlohmann::json::parse(file));
}

inline std::uint64_t config_hash(const RunConfig& cfg) {
  const std::string dump = to_json(cfg).dump();
  return fnv1a(dump.data(), dump.size());
}

// --------------------------------------------------------------------------
// Feature extraction.

class FeatureExtractor {
 public:
  explicit FeatureExtractor(const RunConfig& cfg) : cfg_(cfg) {
    validate(cfg_);
    fault_frequencies_ = fault_frequency_set(cfg_.train, cfg_.les_lo_hz, cfg_.les_hi_hz);
  }

  /// Band-pass filter then extract the configured feature set.
  FeatureVector extract(const TimeSignal& signal) const {
    const auto& kernel = kernel_for(signal.sample_rate_hz);
    auto filtered = filter_forward_backward(signal, kernel);
    switch (cfg_.feature_set) {
      case FeatureSetKind::les_limited:
        return les_limited(log_envelope_spectrum(filtered, cfg_.band, false), cfg_.les_lo_hz,
                           cfg_.les_hi_hz);
      case FeatureSetKind::les_ff:
        return les_ff_features(filtered);
      case FeatureSetKind::lms_pca:
        return log_mel_features(filtered, cfg_.train, cfg_.log_mel);
      case FeatureSetKind::les_spectral:
        return log_envelope_spectrogram_features(filtered, cfg_.train, cfg_.band,
                                                 cfg_.envelope_spectrogram);
      case FeatureSetKind::pa:
        return pa_features(filtered, cfg_.psycho);
      case FeatureSetKind::palff: {
        auto pa = pa_features(filtered, cfg_.psycho);
        auto ff = les_ff_features(filtered);
        // Raw concatenation; the robust scaler downstream scales per column,
        // which matches scaling the two blocks separately.
        FeatureVector out = pa;
        out.names.insert(out.names.end(), ff.names.begin(), ff.names.end());
        out.values.insert(out.values.end(), ff.values.begin(), ff.values.end());
        return out;
      }
    }
    throw std::invalid_argument("extract: unknown feature set");
  }

  const std::vector<FaultFrequency>& fault_frequencies() const { return fault_frequencies_; }

 private:
  FeatureVector les_ff_features(const TimeSignal& filtered) const {
    auto les = log_envelope_spectrum(filtered, cfg_.band, false);
    return les_ff(les, fault_frequencies_, cfg_.train.speed_tolerance_frac);
  }

  const FirKernel& kernel_for(double rate) const {
    auto it = kernels_.find(rate);
    if (it == kernels_.end())
      it = kernels_.emplace(rate, design_bandpass_fir(cfg_.band, rate)).first;
    return it->second;
  }

  RunConfig cfg_;
  std::vector<FaultFrequency> fault_frequencies_;
  mutable std::map<double, FirKernel> kernels_;
};

// --------------------------------------------------------------------------
// Feature store: CSV keyed by record path, full double precision.

struct FeatureStore {
  std::vector<std::string> names;
  std::vector<std::string> paths;
  std::vector<std::vector<double>> rows;

  const std::vector<double>& row_for(const std::string& path) const {
    for (std::size_t i = 0; i < paths.size(); ++i)
      if (paths[i] == path) return rows[i];
    throw std::runtime_error("feature store: no row for " + path);
  }
};

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline void write_feature_store(const FeatureStore& store, const std::string& path) {
  std::ofstream file(path);
  if (!file) throw std::runtime_error("cannot open feature store " + path);
  file << "path";
  for (const auto& n : store.names) {
    if (n.find(',') != std::string::npos)
      throw std::invalid_argument("feature name contains a comma: " + n);
    file << ',' << n;
  }
  file << '\n';
  for (std::size_t i = 0; i < store.paths.size(); ++i) {
    file << store.paths[i];
    for (double v : store.rows[i]) file << ',' << format_double(v);
    file << '\n';
  }
}

inline FeatureStore read_feature_store(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw std::runtime_error("cannot open feature store " + path);
  FeatureStore store;
  std::string line;
  if (!std::getline(file, line)) throw std::runtime_error("empty feature store " + path);
  std::stringstream header(line);
  std::string field;
  bool first = true;
  while (std::getline(header, field, ',')) {
    if (first)
      first = false;
    else
      store.names.push_back(field);
  }
  while (std::getline(file, line)) {
    if (line.empty()) continue;
    std::stringstream row(line);
    std::getline(row, field, ',');
    store.paths.push_back(field);
    std::vector<double> values;
    values.reserve(store.names.size());
    while (std::getline(row, field, ',')) values.push_back(std::stod(field));
    if (values.size() != store.names.size())
      throw std::runtime_error("feature store row width mismatch in " + path);
    store.rows.push_back(std::move(values));
  }
  return store;
}

// --------------------------------------------------------------------------
// Preprocessor fitted on the training split only. The wrapper type is the
// only constructor path, so validation rows cannot leak into the fit.

struct TrainingMatrix {
  FeatureMatrix matrix;
};

struct FittedPreprocessor {
  PreprocKind kind = PreprocKind::none;
  RobustScalerModel scaler;
  PcaModel pca;

  std::vector<double> apply(const std::vector<double>& x) const {
    switch (kind) {
      case PreprocKind::none: return x;
      case PreprocKind::scaler: return apply_robust_scaler(scaler, x);
      case PreprocKind::pca: return apply_pca(pca, x);
    }
    throw std::invalid_argument("preprocessor: unknown kind");
  }
};

inline FittedPreprocessor fit_preprocessor(const TrainingMatrix& train, PreprocKind kind,
                                           double variance_target) {
  FittedPreprocessor p;
  p.kind = kind;
  if (kind == PreprocKind::scaler) p.scaler = fit_robust_scaler(train.matrix);
  if (kind == PreprocKind::pca) p.pca = fit_pca(train.matrix, variance_target);
  return p;
}

}  // namespace gearline
