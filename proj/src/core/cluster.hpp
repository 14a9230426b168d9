// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "core/matrix.hpp"

namespace kpic {

enum class Metric { Euclidean, Manhattan, Cosine };
enum class Linkage { Ward, Average, Complete, Single };

const char* to_string(Metric m);
const char* to_string(Linkage l);
Metric metric_from_string(const std::string& s);
Linkage linkage_from_string(const std::string& s);

/// Euclidean / Manhattan / Cosine distance. Cosine uses the convention
/// d = 0 when both vectors are zero and d = 1 when exactly one is zero, so
/// fully degenerate feature rows do not abort a sweep.
double distance(std::span<const double> a, std::span<const double> b, Metric metric);

/// Symmetric N x N matrix of row distances.
Matrix pairwise_distances(const Matrix& x, Metric metric);

struct KMeansOptions {
  uint64_t seed = 0;
  unsigned restarts = 10;
  unsigned max_iter = 300;
  double tol = 1e-6;  // max centroid shift
};

struct KMeansResult {
  std::vector<int> labels;
  size_t k = 0;
  double inertia = 0.0;  // sum of squared distances to final centroids
  Matrix centroids;      // k x D
  // Inertia measured after each assignment step, one series per restart.
  std::vector<std::vector<double>> inertia_trace;
};

/// Lloyd iterations from k-means++ seeding; `restarts` independent runs with
/// the best inertia kept. Empty clusters are repaired by reseeding from the
/// point farthest from its centroid. Deterministic given the seed.
KMeansResult kmeans(const Matrix& x, size_t k, const KMeansOptions& opts);

struct Merge {
  size_t left = 0;   // smaller subtree id (leaves are 0..N-1, step s creates id N+s)
  size_t right = 0;
  double height = 0.0;
  size_t size = 0;  // leaves in the merged cluster
};

struct Dendrogram {
  size_t leaves = 0;
  std::vector<Merge> merges;  // N-1 steps
};

/// Full bottom-up merge tree. Inter-cluster distances are recomputed from the
/// original pairwise matrix (or cluster centroids for Ward) in canonical
/// member order, so results are exactly reproducible. Ties break on the
/// smallest (left id, right id) pair.
Dendrogram agglomerative(const Matrix& x, Metric metric, Linkage linkage);

/// Same, reusing a precomputed distance matrix. `x` is required for Ward
/// (ignored otherwise; may be null).
Dendrogram agglomerative_from_distances(const Matrix& dists, Linkage linkage, const Matrix* x);

/// Undoes the last k-1 merges. Labels are assigned by ascending smallest leaf
/// index per cluster.
std::vector<int> cut_dendrogram(const Dendrogram& d, size_t k);

}  // namespace kpic
