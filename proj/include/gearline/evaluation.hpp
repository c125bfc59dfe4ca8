#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "gearline/types.hpp"

namespace gearline {

enum class Label { good, warning, error };

inline const char* to_string(Label l) {
  switch (l) {
    case Label::good: return "good";
    case Label::warning: return "warning";
    case Label::error: return "error";
  }
  return "?";
}

inline Label label_from_string(const std::string& s) {
  if (s == "good") return Label::good;
  if (s == "warning") return Label::warning;
  if (s == "error") return Label::error;
  throw std::invalid_argument("unknown label: " + s);
}

struct LabeledScore {
  double score = 0.0;       // similarity, higher = more normal
  Label label = Label::good;
  std::string noise_tag;    // "none", "low", "loud" or a disturbance kind
};

struct RocPoint {
  double fpr = 0.0;
  double tpr = 0.0;
};

/// Note on naming: the paper reads its axes as "false positive rate tracks
/// missed faults / true positive rate tracks absence of pseudo-faults"; the
/// computation below is the conventional accept-if-score>=t sweep.
struct RocCurve {
  std::vector<RocPoint> points;
  double auc = 0.0;
};

/// Threshold sweep over all distinct scores, acceptance rule score >= t.
/// TPR counts the accept-set labels, FPR the complement.
inline RocCurve roc(const std::vector<LabeledScore>& scores, const std::vector<Label>& accept_set) {
  auto accepts = [&](Label l) {
    return std::find(accept_set.begin(), accept_set.end(), l) != accept_set.end();
  };
  std::size_t n_pos = 0, n_neg = 0;
  for (const auto& s : scores) (accepts(s.label) ? n_pos : n_neg)++;
  if (n_pos == 0 || n_neg == 0)
    throw std::invalid_argument("roc: accept set and complement must both be nonempty");

  std::vector<LabeledScore> sorted = scores;
  std::sort(sorted.begin(), sorted.end(),
            [](const LabeledScore& a, const LabeledScore& b) { return a.score > b.score; });

  RocCurve curve;
  curve.points.push_back({0.0, 0.0});
  std::size_t tp = 0, fp = 0;
  double auc = 0.0;
  std::size_t i = 0;
  while (i < sorted.size()) {
    const double value = sorted[i].score;
    while (i < sorted.size() && sorted[i].score == value) {
      (accepts(sorted[i].label) ? tp : fp)++;
      ++i;
    }
    const RocPoint prev = curve.points.back();
    const RocPoint next{static_cast<double>(fp) / static_cast<double>(n_neg),
                        static_cast<double>(tp) / static_cast<double>(n_pos)};
    auc += (next.fpr - prev.fpr) * (next.tpr + prev.tpr) * 0.5;
    curve.points.push_back(next);
  }
  curve.auc = auc;
  return curve;
}

inline RocCurve roc_good(const std::vector<LabeledScore>& scores) {
  return roc(scores, {Label::good});
}

inline RocCurve roc_good_warning(const std::vector<LabeledScore>& scores) {
  return roc(scores, {Label::good, Label::warning});
}

/// Similarity cutoffs: below t_e is 'error', below t_w is 'warning'.
struct ThresholdPair {
  double t_e = 0.0;
  double t_w = 0.0;
};

/// Two-threshold extraction on validation scores:
///   t_e: the largest threshold accepting every 'good' sample (their minimum);
///   t_w: with 'error' samples removed, the n-th largest remaining score where
///        n is the 'good' count, so exactly n samples read as 'good'.
inline ThresholdPair extract_thresholds(const std::vector<LabeledScore>& validation) {
  std::size_t n_good = 0, n_error = 0;
  for (const auto& s : validation) {
    if (s.label == Label::good) ++n_good;
    if (s.label == Label::error) ++n_error;
  }
  if (n_good == 0 || n_error == 0)
    throw std::invalid_argument("extract_thresholds: validation needs 'good' and 'error' samples");

  double t_e = 1e300;
  for (const auto& s : validation)
    if (s.label == Label::good) t_e = std::min(t_e, s.score);

  std::vector<double> remaining;
  for (const auto& s : validation)
    if (s.label != Label::error) remaining.push_back(s.score);
  std::sort(remaining.begin(), remaining.end(), std::greater<>());
  double t_w = remaining[n_good - 1];
  t_w = std::max(t_w, t_e);
  return {t_e, t_w};
}

inline Label classify(double score, const ThresholdPair& th) {
  if (!(th.t_e <= th.t_w)) throw std::invalid_argument("classify: thresholds out of order");
  if (score < th.t_e) return Label::error;
  if (score < th.t_w) return Label::warning;
  return Label::good;
}

struct Metrics {
  int missed_faults = 0;   // 'error' samples not predicted 'error'
  int pseudo_faults = 0;   // 'good' samples predicted 'error'
  double accuracy = 0.0;
};

inline Metrics metrics(const std::vector<Label>& predictions, const std::vector<Label>& labels) {
  if (predictions.size() != labels.size())
    throw std::invalid_argument("metrics: length mismatch");
  if (predictions.empty()) throw std::invalid_argument("metrics: empty input");
  Metrics m;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == Label::error && predictions[i] != Label::error) ++m.missed_faults;
    if (labels[i] == Label::good && predictions[i] == Label::error) ++m.pseudo_faults;
    if (labels[i] == predictions[i]) ++hits;
  }
  m.accuracy = static_cast<double>(hits) / static_cast<double>(labels.size());
  return m;
}

}  // namespace gearline
