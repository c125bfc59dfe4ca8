#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <variant>
#include <vector>

#include "gearline/rng.hpp"
#include "gearline/types.hpp"

namespace gearline {

enum class OccKind { ocsvm, iforest, brm };

struct OccConfig {
  int ensemble_size = 100;
  double contamination_nu = 0.5;   // OC-SVM only
  double rbf_gamma = 0.0;          // <= 0 selects the median heuristic
  int iforest_subsample = 256;
  double brm_sample_frac = 1.0;    // bootstrap size as a fraction of n
  std::uint64_t seed = 1;
};

namespace detail {

inline double sq_distance(const std::vector<double>& a, const std::vector<double>& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return acc;
}

inline void require_finite_rows(const FeatureMatrix& X, const char* where) {
  for (const auto& row : X.values)
    for (double v : row)
      if (!std::isfinite(v)) throw std::invalid_argument(std::string(where) + ": non-finite feature");
}

}  // namespace detail

// ---------------------------------------------------------------------------
// nu-parameterized one-class SVM with RBF kernel, solved by a deterministic
// SMO-style pairwise optimizer on the dual:
//   min 1/2 a^T Q a   s.t.  0 <= a_i <= 1/(nu n),  sum a = 1.

struct OcSvmModel {
  double gamma = 0.0;
  double rho = 0.0;
  std::vector<std::vector<double>> support_vectors;
  std::vector<double> alphas;
};

inline double median_heuristic_gamma(const FeatureMatrix& X) {
  std::vector<double> dists;
  const std::size_t n = X.rows();
  dists.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      dists.push_back(std::sqrt(detail::sq_distance(X.values[i], X.values[j])));
  if (dists.empty()) return 1.0;
  std::nth_element(dists.begin(), dists.begin() + dists.size() / 2, dists.end());
  const double med = dists[dists.size() / 2];
  return med > 0.0 ? 1.0 / (2.0 * med * med) : 1.0;
}

inline OcSvmModel ocsvm_fit_impl(const FeatureMatrix& X, const OccConfig& cfg) {
  const std::size_t n = X.rows();
  if (n < 10) throw std::invalid_argument("ocsvm_fit: needs at least 10 rows");
  detail::require_finite_rows(X, "ocsvm_fit");
  const double nu = cfg.contamination_nu;
  if (!(nu > 0.0) || !(nu < 1.0)) throw std::invalid_argument("ocsvm_fit: nu must be in (0,1)");

  const double gamma = cfg.rbf_gamma > 0.0 ? cfg.rbf_gamma : median_heuristic_gamma(X);
  const double ub = 1.0 / (nu * static_cast<double>(n));

  std::vector<double> Q(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    Q[i * n + i] = 1.0;
    for (std::size_t j = i + 1; j < n; ++j) {
      const double k = std::exp(-gamma * detail::sq_distance(X.values[i], X.values[j]));
      Q[i * n + j] = k;
      Q[j * n + i] = k;
    }
  }

  // Feasible start: the first floor(nu n) points at the upper bound.
  std::vector<double> alpha(n, 0.0);
  {
    const auto full = static_cast<std::size_t>(std::floor(nu * static_cast<double>(n)));
    double remaining = 1.0;
    for (std::size_t i = 0; i < full && i < n; ++i) {
      alpha[i] = ub;
      remaining -= ub;
    }
    if (remaining > 0.0 && full < n) alpha[full] = remaining;
  }

  std::vector<double> g(n, 0.0);  // g = Q alpha
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) acc += Q[i * n + j] * alpha[j];
    g[i] = acc;
  }

  const double tol = 1e-6;
  const double bound_eps = 1e-12;
  const std::size_t max_iter = 200000 + 2000 * n;
  for (std::size_t it = 0; it < max_iter; ++it) {
    std::size_t up = n, down = n;
    double g_up = 1e300, g_down = -1e300;
    for (std::size_t i = 0; i < n; ++i) {
      if (alpha[i] < ub - bound_eps && g[i] < g_up) {
        g_up = g[i];
        up = i;
      }
      if (alpha[i] > bound_eps && g[i] > g_down) {
        g_down = g[i];
        down = i;
      }
    }
    if (up == n || down == n || g_down - g_up < tol) break;
    const double curv = std::max(Q[up * n + up] + Q[down * n + down] - 2.0 * Q[up * n + down], 1e-12);
    double delta = (g_down - g_up) / curv;
    delta = std::min(delta, ub - alpha[up]);
    delta = std::min(delta, alpha[down]);
    alpha[up] += delta;
    alpha[down] -= delta;
    for (std::size_t i = 0; i < n; ++i) g[i] += delta * (Q[i * n + up] - Q[i * n + down]);
  }

  // rho from the free support vectors (fallback: bound midpoint).
  double rho = 0.0;
  std::size_t free_count = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (alpha[i] > bound_eps && alpha[i] < ub - bound_eps) {
      rho += g[i];
      ++free_count;
    }
  }
  if (free_count > 0) {
    rho /= static_cast<double>(free_count);
  } else {
    double lo = 1e300, hi = -1e300;
    for (std::size_t i = 0; i < n; ++i) {
      if (alpha[i] < ub - bound_eps) lo = std::min(lo, g[i]);
      if (alpha[i] > bound_eps) hi = std::max(hi, g[i]);
    }
    rho = 0.5 * (lo + hi);
  }

  OcSvmModel m;
  m.gamma = gamma;
  m.rho = rho;
  for (std::size_t i = 0; i < n; ++i) {
    if (alpha[i] > bound_eps) {
      m.support_vectors.push_back(X.values[i]);
      m.alphas.push_back(alpha[i]);
    }
  }
  return m;
}

inline double ocsvm_score(const OcSvmModel& m, const std::vector<double>& x) {
  double acc = 0.0;
  for (std::size_t i = 0; i < m.support_vectors.size(); ++i)
    acc += m.alphas[i] * std::exp(-m.gamma * detail::sq_distance(m.support_vectors[i], x));
  return acc - m.rho;
}

// ---------------------------------------------------------------------------
// Isolation forest. Subsampling and all split draws derive from row content,
// so reordering the training rows reproduces identical trees.

struct IForestNode {
  int feature = -1;          // -1 marks a leaf
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double leaf_value = 0.0;   // depth + credit at the leaf
};

struct IForestTree {
  std::vector<IForestNode> nodes;
};

struct IForestModel {
  std::vector<IForestTree> trees;
  std::size_t dim = 0;
  std::size_t subsample = 0;
};

/// Average unsuccessful-search credit c(m) = 2 H(m-1) - 2 (m-1)/m, c(<=1) = 0.
inline double path_length_credit(std::size_t m) {
  if (m <= 1) return 0.0;
  double h = 0.0;
  for (std::size_t i = 1; i <= m - 1; ++i) h += 1.0 / static_cast<double>(i);
  return 2.0 * h - 2.0 * static_cast<double>(m - 1) / static_cast<double>(m);
}

namespace detail {

inline bool row_less(const std::vector<double>& a, const std::vector<double>& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

struct IForestBuilder {
  const std::vector<const std::vector<double>*>& rows;
  std::size_t dim;
  std::size_t depth_ceiling;
  Rng& rng;
  IForestTree& tree;

  int build(std::vector<std::size_t>& idx, std::size_t depth) {
    const auto node_id = static_cast<int>(tree.nodes.size());
    tree.nodes.emplace_back();
    if (idx.size() <= 1 || depth >= depth_ceiling) {
      tree.nodes[static_cast<std::size_t>(node_id)].leaf_value =
          static_cast<double>(depth) + path_length_credit(idx.size());
      return node_id;
    }
    // Uniform feature draw; fall back to the features that actually spread.
    std::size_t feature = rng.below(dim);
    double lo = (*rows[idx[0]])[feature], hi = lo;
    for (std::size_t r : idx) {
      lo = std::min(lo, (*rows[r])[feature]);
      hi = std::max(hi, (*rows[r])[feature]);
    }
    if (!(hi > lo)) {
      std::vector<std::size_t> spread;
      for (std::size_t f = 0; f < dim; ++f) {
        double a = (*rows[idx[0]])[f], b = a;
        for (std::size_t r : idx) {
          a = std::min(a, (*rows[r])[f]);
          b = std::max(b, (*rows[r])[f]);
        }
        if (b > a) spread.push_back(f);
      }
      if (spread.empty()) {
        tree.nodes[static_cast<std::size_t>(node_id)].leaf_value =
            static_cast<double>(depth) + path_length_credit(idx.size());
        return node_id;
      }
      feature = spread[rng.below(spread.size())];
      lo = (*rows[idx[0]])[feature];
      hi = lo;
      for (std::size_t r : idx) {
        lo = std::min(lo, (*rows[r])[feature]);
        hi = std::max(hi, (*rows[r])[feature]);
      }
    }
    const double threshold = rng.uniform(lo, hi);
    std::vector<std::size_t> left, right;
    for (std::size_t r : idx) ((*rows[r])[feature] < threshold ? left : right).push_back(r);
    if (left.empty() || right.empty()) {
      tree.nodes[static_cast<std::size_t>(node_id)].leaf_value =
          static_cast<double>(depth) + path_length_credit(idx.size());
      return node_id;
    }
    tree.nodes[static_cast<std::size_t>(node_id)].feature = static_cast<int>(feature);
    tree.nodes[static_cast<std::size_t>(node_id)].threshold = threshold;
    const int l = build(left, depth + 1);
    tree.nodes[static_cast<std::size_t>(node_id)].left = l;
    const int r = build(right, depth + 1);
    tree.nodes[static_cast<std::size_t>(node_id)].right = r;
    return node_id;
  }
};

}  // namespace detail

inline IForestModel iforest_fit_impl(const FeatureMatrix& X, const OccConfig& cfg) {
  const std::size_t n = X.rows();
  if (n < 8) throw std::invalid_argument("iforest_fit: needs at least 8 rows");
  detail::require_finite_rows(X, "iforest_fit");
  const std::size_t d = X.cols();
  const auto m = std::min<std::size_t>(static_cast<std::size_t>(cfg.iforest_subsample), n);

  std::vector<std::uint64_t> row_hashes(n);
  for (std::size_t i = 0; i < n; ++i) row_hashes[i] = hash_doubles(X.values[i]);

  IForestModel model;
  model.dim = d;
  model.subsample = m;
  model.trees.resize(static_cast<std::size_t>(cfg.ensemble_size));
  const auto depth_ceiling = static_cast<std::size_t>(
      std::ceil(std::log2(std::max<double>(2.0, static_cast<double>(m)))));

  for (int t = 0; t < cfg.ensemble_size; ++t) {
    const std::uint64_t tree_seed = mix_u64(cfg.seed, static_cast<std::uint64_t>(t));

    // Content-keyed subsample: the m rows with the smallest per-tree keys.
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::vector<std::uint64_t> keys(n);
    for (std::size_t i = 0; i < n; ++i) keys[i] = mix_u64(tree_seed, row_hashes[i]);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      if (keys[a] != keys[b]) return keys[a] < keys[b];
      return detail::row_less(X.values[a], X.values[b]);
    });
    order.resize(m);

    std::uint64_t content = 0xCBF29CE484222325ull;
    for (std::size_t i : order) content = mix_u64(content, row_hashes[i]);
    Rng rng(mix_u64(tree_seed, content));

    std::vector<const std::vector<double>*> rows(m);
    for (std::size_t i = 0; i < m; ++i) rows[i] = &X.values[order[i]];
    std::vector<std::size_t> idx(m);
    for (std::size_t i = 0; i < m; ++i) idx[i] = i;

    auto& tree = model.trees[static_cast<std::size_t>(t)];
    detail::IForestBuilder builder{rows, d, depth_ceiling, rng, tree};
    builder.build(idx, 0);
  }
  return model;
}

/// Mean path length across trees; deeper paths mean the sample resembles the
/// training data (higher = more normal).
inline double iforest_mean_path(const IForestModel& m, const std::vector<double>& x) {
  double total = 0.0;
  for (const auto& tree : m.trees) {
    std::size_t node = 0;
    while (tree.nodes[node].feature >= 0) {
      node = x[static_cast<std::size_t>(tree.nodes[node].feature)] < tree.nodes[node].threshold
                 ? static_cast<std::size_t>(tree.nodes[node].left)
                 : static_cast<std::size_t>(tree.nodes[node].right);
    }
    total += tree.nodes[node].leaf_value;
  }
  return total / static_cast<double>(m.trees.size());
}

/// Conventional anomaly score 2^(-E[h]/c(m)); exposed as a diagnostic only.
inline double iforest_anomaly_score(const IForestModel& m, const std::vector<double>& x) {
  return std::pow(2.0, -iforest_mean_path(m, x) / path_length_credit(m.subsample));
}

// ---------------------------------------------------------------------------
// Bagging random miner: bootstrap center sets scored by nearest-center
// distance through a Gaussian kernel.

struct BrmClassifier {
  std::vector<std::vector<double>> centers;
  double sigma = 1.0;
};

struct BrmModel {
  std::vector<BrmClassifier> classifiers;
  std::size_t dim = 0;
};

inline BrmModel brm_fit_impl(const FeatureMatrix& X, const OccConfig& cfg) {
  const std::size_t n = X.rows();
  if (n < 4) throw std::invalid_argument("brm_fit: needs at least 4 rows");
  detail::require_finite_rows(X, "brm_fit");
  const auto sample_size = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::llround(cfg.brm_sample_frac * static_cast<double>(n))));

  BrmModel model;
  model.dim = X.cols();
  model.classifiers.resize(static_cast<std::size_t>(cfg.ensemble_size));
  for (int t = 0; t < cfg.ensemble_size; ++t) {
    auto rng = rng_stream(cfg.seed, static_cast<std::uint64_t>(t));
    auto& cls = model.classifiers[static_cast<std::size_t>(t)];
    cls.centers.reserve(sample_size);
    for (std::size_t i = 0; i < sample_size; ++i)
      cls.centers.push_back(X.values[rng.below(n)]);

    // sigma: mean nearest-other-center distance, with degenerate fallbacks.
    double acc = 0.0;
    double smallest_positive = 1e300;
    for (std::size_t i = 0; i < cls.centers.size(); ++i) {
      double best = 1e300;
      for (std::size_t j = 0; j < cls.centers.size(); ++j) {
        if (i == j) continue;
        best = std::min(best, detail::sq_distance(cls.centers[i], cls.centers[j]));
      }
      const double dist = cls.centers.size() > 1 ? std::sqrt(best) : 0.0;
      acc += dist;
      if (dist > 0.0) smallest_positive = std::min(smallest_positive, dist);
    }
    const double mean = acc / static_cast<double>(cls.centers.size());
    if (mean > 0.0)
      cls.sigma = mean;
    else if (smallest_positive < 1e300)
      cls.sigma = smallest_positive;
    else
      cls.sigma = 1.0;
  }
  return model;
}

inline double brm_score(const BrmModel& m, const std::vector<double>& x) {
  double acc = 0.0;
  for (const auto& cls : m.classifiers) {
    double best = 1e300;
    for (const auto& c : cls.centers) best = std::min(best, detail::sq_distance(c, x));
    acc += std::exp(-0.5 * best / (cls.sigma * cls.sigma));
  }
  return acc / static_cast<double>(m.classifiers.size());
}

// ---------------------------------------------------------------------------

/// Fitted one-class scorer; higher score = more similar to the training data.
struct OccModel {
  OccKind kind = OccKind::iforest;
  std::size_t dim = 0;
  std::variant<OcSvmModel, IForestModel, BrmModel> impl;
};

inline OccModel ocsvm_fit(const FeatureMatrix& X, const OccConfig& cfg) {
  return {OccKind::ocsvm, X.cols(), ocsvm_fit_impl(X, cfg)};
}

inline OccModel iforest_fit(const FeatureMatrix& X, const OccConfig& cfg) {
  return {OccKind::iforest, X.cols(), iforest_fit_impl(X, cfg)};
}

inline OccModel brm_fit(const FeatureMatrix& X, const OccConfig& cfg) {
  return {OccKind::brm, X.cols(), brm_fit_impl(X, cfg)};
}

inline OccModel occ_fit(OccKind kind, const FeatureMatrix& X, const OccConfig& cfg) {
  switch (kind) {
    case OccKind::ocsvm: return ocsvm_fit(X, cfg);
    case OccKind::iforest: return iforest_fit(X, cfg);
    case OccKind::brm: return brm_fit(X, cfg);
  }
  throw std::invalid_argument("occ_fit: unknown kind");
}

inline double score(const OccModel& m, const std::vector<double>& x) {
  if (x.size() != m.dim) throw std::invalid_argument("score: dimension mismatch");
  switch (m.kind) {
    case OccKind::ocsvm: return ocsvm_score(std::get<OcSvmModel>(m.impl), x);
    case OccKind::iforest: return iforest_mean_path(std::get<IForestModel>(m.impl), x);
    case OccKind::brm: return brm_score(std::get<BrmModel>(m.impl), x);
  }
  throw std::invalid_argument("score: unknown kind");
}

}  // namespace gearline
