// SPDX-License-Identifier: Apache-2.0
#include "core/validate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "core/error.hpp"

namespace kpic {

const char* to_string(IndexKind k) {
  switch (k) {
    case IndexKind::CalinskiHarabasz: return "calinski_harabasz";
    case IndexKind::DaviesBouldin: return "davies_bouldin";
    case IndexKind::Silhouette: return "silhouette";
  }
  return "unknown";
}

IndexKind index_from_string(const std::string& s) {
  if (s == "calinski_harabasz" || s == "ch") return IndexKind::CalinskiHarabasz;
  if (s == "davies_bouldin" || s == "db") return IndexKind::DaviesBouldin;
  if (s == "silhouette") return IndexKind::Silhouette;
  fail(Errc::Config, "unknown validation index: " + s);
}

namespace {

std::vector<size_t> cluster_sizes(std::span<const int> labels, size_t k, size_t n) {
  if (labels.size() != n) fail(Errc::InvalidArg, "labels size mismatch");
  if (k < 2 || k > n - 1) fail(Errc::UndefinedIndex, "index undefined for this K");
  std::vector<size_t> sizes(k, 0);
  for (int l : labels) {
    if (l < 0 || static_cast<size_t>(l) >= k) fail(Errc::InvalidArg, "label out of range");
    ++sizes[static_cast<size_t>(l)];
  }
  for (size_t c = 0; c < k; ++c)
    if (sizes[c] == 0) fail(Errc::InvalidArg, "empty cluster in labeling");
  return sizes;
}

// Per-cluster centroids accumulated in point order, so any relabeling of the
// same partition yields bit-identical values.
Matrix centroids_of(const Matrix& x, std::span<const int> labels, const std::vector<size_t>& sizes) {
  Matrix c(sizes.size(), x.cols);
  for (size_t i = 0; i < x.rows; ++i) {
    auto row = x.row(i);
    auto acc = c.row(static_cast<size_t>(labels[i]));
    for (size_t j = 0; j < x.cols; ++j) acc[j] += row[j];
  }
  for (size_t l = 0; l < sizes.size(); ++l) {
    auto acc = c.row(l);
    for (size_t j = 0; j < x.cols; ++j) acc[j] /= static_cast<double>(sizes[l]);
  }
  return c;
}

double euclid(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    double d = a[i] - b[i];
    acc += d * d;
  }
  return std::sqrt(acc);
}

}  // namespace

double silhouette_mean(const Matrix& dists, std::span<const int> labels, size_t k,
                       SilhouetteBreakdown* breakdown) {
  const size_t n = dists.rows;
  auto sizes = cluster_sizes(labels, k, n);
  if (breakdown) {
    breakdown->a.assign(n, 0.0);
    breakdown->b.assign(n, 0.0);
    breakdown->s.assign(n, 0.0);
  }
  std::vector<double> sums(k);
  double mean = 0.0;
  for (size_t i = 0; i < n; ++i) {
    std::fill(sums.begin(), sums.end(), 0.0);
    auto row = dists.row(i);
    for (size_t j = 0; j < n; ++j) sums[static_cast<size_t>(labels[j])] += row[j];
    size_t own = static_cast<size_t>(labels[i]);
    double a = sizes[own] > 1 ? sums[own] / static_cast<double>(sizes[own] - 1) : 0.0;
    double b = std::numeric_limits<double>::infinity();
    for (size_t c = 0; c < k; ++c)
      if (c != own) b = std::min(b, sums[c] / static_cast<double>(sizes[c]));
    double s = 0.0;
    if (sizes[own] > 1) {
      double denom = std::max(a, b);
      s = denom > 0.0 ? (b - a) / denom : 0.0;
    }
    if (breakdown) {
      breakdown->a[i] = a;
      breakdown->b[i] = b;
      breakdown->s[i] = s;
    }
    mean += s;
  }
  return mean / static_cast<double>(n);
}

std::pair<double, SilhouetteBreakdown> silhouette(const Matrix& x, std::span<const int> labels,
                                                  size_t k, Metric metric) {
  Matrix d = pairwise_distances(x, metric);
  SilhouetteBreakdown breakdown;
  double mean = silhouette_mean(d, labels, k, &breakdown);
  return {mean, std::move(breakdown)};
}

ChScore calinski_harabasz(const Matrix& x, std::span<const int> labels, size_t k) {
  const size_t n = x.rows;
  auto sizes = cluster_sizes(labels, k, n);
  Matrix cent = centroids_of(x, labels, sizes);

  std::vector<double> grand(x.cols, 0.0);
  for (size_t i = 0; i < n; ++i) {
    auto row = x.row(i);
    for (size_t j = 0; j < x.cols; ++j) grand[j] += row[j];
  }
  for (double& v : grand) v /= static_cast<double>(n);

  ChScore score;
  for (size_t i = 0; i < n; ++i) {
    auto c = cent.row(static_cast<size_t>(labels[i]));
    double w = 0.0, b = 0.0;
    auto row = x.row(i);
    for (size_t j = 0; j < x.cols; ++j) {
      double dw = row[j] - c[j];
      double db = c[j] - grand[j];
      w += dw * dw;
      b += db * db;
    }
    score.ss_w += w;
    score.ss_b += b;
  }
  if (score.ss_w == 0.0) {
    score.value = std::numeric_limits<double>::infinity();
  } else {
    score.value = (score.ss_b / score.ss_w) *
                  (static_cast<double>(n - k) / static_cast<double>(k - 1));
  }
  return score;
}

double davies_bouldin(const Matrix& x, std::span<const int> labels, size_t k) {
  const size_t n = x.rows;
  auto sizes = cluster_sizes(labels, k, n);
  Matrix cent = centroids_of(x, labels, sizes);

  std::vector<double> scatter(k, 0.0);
  for (size_t i = 0; i < n; ++i)
    scatter[static_cast<size_t>(labels[i])] += euclid(x.row(i), cent.row(static_cast<size_t>(labels[i])));
  for (size_t c = 0; c < k; ++c) scatter[c] /= static_cast<double>(sizes[c]);

  std::vector<double> worst(k, 0.0);
  for (size_t a = 0; a < k; ++a)
    for (size_t b = a + 1; b < k; ++b) {
      double d = euclid(cent.row(a), cent.row(b));
      if (d == 0.0) fail(Errc::UndefinedIndex, "davies_bouldin: coincident centroids");
      double r = (scatter[a] + scatter[b]) / d;
      worst[a] = std::max(worst[a], r);
      worst[b] = std::max(worst[b], r);
    }
  // summing in sorted order keeps the result exactly label-permutation
  // invariant
  std::sort(worst.begin(), worst.end());
  double total = 0.0;
  for (double v : worst) total += v;
  return total / static_cast<double>(k);
}

std::pair<size_t, double> select_optimal_k(const std::map<size_t, std::optional<double>>& scores,
                                           IndexKind kind) {
  bool have = false;
  size_t best_k = 0;
  double best = 0.0;
  const bool maximize = index_maximizes(kind);
  for (const auto& [k, v] : scores) {
    if (!v.has_value() || std::isnan(*v)) continue;
    if (!have || (maximize ? *v > best : *v < best)) {
      have = true;
      best_k = k;
      best = *v;
    }
  }
  if (!have) fail(Errc::UndefinedIndex, "select_optimal_k: no defined scores");
  return {best_k, best};
}

}  // namespace kpic
