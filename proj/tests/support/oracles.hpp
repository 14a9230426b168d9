// SPDX-License-Identifier: Apache-2.0
//
// Brute-force reference implementations used to cross-check the library.
// Everything here is a direct transcription with naive nested loops and its
// own distance code, kept independent of the implementation paths it checks.
#pragma once

#include <vector>

#include "core/cluster.hpp"
#include "core/matrix.hpp"
#include "core/rng.hpp"

namespace oracle {

double point_distance(const kpic::Matrix& x, size_t i, size_t j, kpic::Metric metric);

double silhouette(const kpic::Matrix& x, const std::vector<int>& labels, size_t k,
                  kpic::Metric metric);
double calinski_harabasz(const kpic::Matrix& x, const std::vector<int>& labels, size_t k);
double davies_bouldin(const kpic::Matrix& x, const std::vector<int>& labels, size_t k);

struct Merge {
  size_t left = 0;
  size_t right = 0;
  double height = 0.0;
  size_t size = 0;
};

/// Naive agglomerative clustering: recomputes every inter-cluster distance
/// from scratch at every step; ties break on the smallest (left id, right id)
/// pair.
std::vector<Merge> agglomerative(const kpic::Matrix& x, kpic::Metric metric,
                                 kpic::Linkage linkage);

/// Sorted edge weights of a minimum spanning tree (Prim).
std::vector<double> mst_edge_weights(const kpic::Matrix& x, kpic::Metric metric);

/// Cyclic Jacobi eigendecomposition of a symmetric matrix; eigenvalues
/// descending, eigenvectors as matrix columns.
void jacobi_eigen(std::vector<std::vector<double>> a, std::vector<double>& eigenvalues,
                  std::vector<std::vector<double>>& eigenvectors);

/// Minimum k=2 inertia over every 2-partition (exhaustive).
double best_two_partition_inertia(const kpic::Matrix& x);

/// Random test instance: Gaussian rows with a valid labeling (every cluster
/// non-empty, k <= n-1).
struct Instance {
  kpic::Matrix x;
  std::vector<int> labels;
  size_t k = 0;
};

Instance random_instance(kpic::Rng& rng, size_t max_n, size_t max_d, size_t max_k);

}  // namespace oracle
