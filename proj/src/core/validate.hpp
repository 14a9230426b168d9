// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "core/cluster.hpp"
#include "core/matrix.hpp"

namespace kpic {

enum class IndexKind { CalinskiHarabasz, DaviesBouldin, Silhouette };

const char* to_string(IndexKind k);
IndexKind index_from_string(const std::string& s);

/// True when larger scores are better for this index.
inline bool index_maximizes(IndexKind k) { return k != IndexKind::DaviesBouldin; }

struct SilhouetteBreakdown {
  std::vector<double> a;  // mean intra-cluster distance
  std::vector<double> b;  // min mean distance to another cluster
  std::vector<double> s;  // per-point silhouette, 0 for singletons and a=b=0
};

/// Mean silhouette from a precomputed distance matrix.
double silhouette_mean(const Matrix& dists, std::span<const int> labels, size_t k,
                       SilhouetteBreakdown* breakdown = nullptr);

std::pair<double, SilhouetteBreakdown> silhouette(const Matrix& x, std::span<const int> labels,
                                                  size_t k, Metric metric);

struct ChScore {
  double value = 0.0;  // +inf when ss_w == 0
  double ss_b = 0.0;
  double ss_w = 0.0;
};

/// Variance-ratio criterion on squared Euclidean scatter:
/// (ss_b / ss_w) * (N - K) / (K - 1).
ChScore calinski_harabasz(const Matrix& x, std::span<const int> labels, size_t k);

/// Mean over clusters of the worst (S_k + S_l) / d(u_k, u_l) ratio, with
/// S = mean Euclidean distance of members to their centroid. Coincident
/// centroids make the index undefined (Errc::UndefinedIndex).
double davies_bouldin(const Matrix& x, std::span<const int> labels, size_t k);

/// Direction-aware optimum over a sweep; missing entries are skipped and ties
/// resolve to the smallest K.
std::pair<size_t, double> select_optimal_k(const std::map<size_t, std::optional<double>>& scores,
                                           IndexKind kind);

}  // namespace kpic
