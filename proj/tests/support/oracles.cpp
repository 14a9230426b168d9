// SPDX-License-Identifier: Apache-2.0
#include "support/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace oracle {

using kpic::Matrix;

double point_distance(const Matrix& x, size_t i, size_t j, kpic::Metric metric) {
  const size_t d = x.cols;
  if (metric == kpic::Metric::Euclidean) {
    double acc = 0.0;
    for (size_t c = 0; c < d; ++c) {
      double diff = x.at(i, c) - x.at(j, c);
      acc += diff * diff;
    }
    return std::sqrt(acc);
  }
  if (metric == kpic::Metric::Manhattan) {
    double acc = 0.0;
    for (size_t c = 0; c < d; ++c) acc += std::abs(x.at(i, c) - x.at(j, c));
    return acc;
  }
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (size_t c = 0; c < d; ++c) {
    dot += x.at(i, c) * x.at(j, c);
    na += x.at(i, c) * x.at(i, c);
    nb += x.at(j, c) * x.at(j, c);
  }
  if (na == 0.0 && nb == 0.0) return 0.0;
  if (na == 0.0 || nb == 0.0) return 1.0;
  double v = 1.0 - dot / (std::sqrt(na) * std::sqrt(nb));
  if (v < 0.0) return 0.0;
  if (v > 2.0) return 2.0;
  return v;
}

double silhouette(const Matrix& x, const std::vector<int>& labels, size_t k,
                  kpic::Metric metric) {
  const size_t n = x.rows;
  double total = 0.0;
  for (size_t i = 0; i < n; ++i) {
    int own = labels[i];
    size_t own_count = 0;
    for (size_t j = 0; j < n; ++j)
      if (labels[j] == own) ++own_count;
    if (own_count == 1) continue;  // s(i) = 0 for singletons

    double a = 0.0;
    for (size_t j = 0; j < n; ++j)
      if (j != i && labels[j] == own) a += point_distance(x, i, j, metric);
    a /= static_cast<double>(own_count - 1);

    double b = std::numeric_limits<double>::infinity();
    for (size_t c = 0; c < k; ++c) {
      if (static_cast<int>(c) == own) continue;
      double sum = 0.0;
      size_t count = 0;
      for (size_t j = 0; j < n; ++j)
        if (labels[j] == static_cast<int>(c)) {
          sum += point_distance(x, i, j, metric);
          ++count;
        }
      if (count > 0) b = std::min(b, sum / static_cast<double>(count));
    }
    double denom = std::max(a, b);
    if (denom > 0.0) total += (b - a) / denom;
  }
  return total / static_cast<double>(n);
}

namespace {

std::vector<std::vector<double>> centroids_by_cluster(const Matrix& x,
                                                      const std::vector<int>& labels, size_t k,
                                                      std::vector<size_t>& counts) {
  std::vector<std::vector<double>> cent(k, std::vector<double>(x.cols, 0.0));
  counts.assign(k, 0);
  for (size_t c = 0; c < k; ++c) {
    for (size_t i = 0; i < x.rows; ++i) {
      if (labels[i] != static_cast<int>(c)) continue;
      ++counts[c];
      for (size_t j = 0; j < x.cols; ++j) cent[c][j] += x.at(i, j);
    }
    for (size_t j = 0; j < x.cols; ++j) cent[c][j] /= static_cast<double>(counts[c]);
  }
  return cent;
}

}  // namespace

double calinski_harabasz(const Matrix& x, const std::vector<int>& labels, size_t k) {
  const size_t n = x.rows;
  std::vector<size_t> counts;
  auto cent = centroids_by_cluster(x, labels, k, counts);

  std::vector<double> grand(x.cols, 0.0);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < x.cols; ++j) grand[j] += x.at(i, j);
  for (size_t j = 0; j < x.cols; ++j) grand[j] /= static_cast<double>(n);

  double ss_b = 0.0;
  for (size_t c = 0; c < k; ++c) {
    double d2 = 0.0;
    for (size_t j = 0; j < x.cols; ++j) {
      double d = cent[c][j] - grand[j];
      d2 += d * d;
    }
    ss_b += static_cast<double>(counts[c]) * d2;
  }
  double ss_w = 0.0;
  for (size_t c = 0; c < k; ++c)
    for (size_t i = 0; i < n; ++i) {
      if (labels[i] != static_cast<int>(c)) continue;
      for (size_t j = 0; j < x.cols; ++j) {
        double d = x.at(i, j) - cent[c][j];
        ss_w += d * d;
      }
    }
  if (ss_w == 0.0) return std::numeric_limits<double>::infinity();
  return (ss_b / ss_w) * (static_cast<double>(n - k) / static_cast<double>(k - 1));
}

double davies_bouldin(const Matrix& x, const std::vector<int>& labels, size_t k) {
  std::vector<size_t> counts;
  auto cent = centroids_by_cluster(x, labels, k, counts);

  std::vector<double> scatter(k, 0.0);
  for (size_t c = 0; c < k; ++c) {
    for (size_t i = 0; i < x.rows; ++i) {
      if (labels[i] != static_cast<int>(c)) continue;
      double d2 = 0.0;
      for (size_t j = 0; j < x.cols; ++j) {
        double d = x.at(i, j) - cent[c][j];
        d2 += d * d;
      }
      scatter[c] += std::sqrt(d2);
    }
    scatter[c] /= static_cast<double>(counts[c]);
  }

  double total = 0.0;
  for (size_t a = 0; a < k; ++a) {
    double worst = 0.0;
    for (size_t b = 0; b < k; ++b) {
      if (a == b) continue;
      double d2 = 0.0;
      for (size_t j = 0; j < x.cols; ++j) {
        double d = cent[a][j] - cent[b][j];
        d2 += d * d;
      }
      double dist = std::sqrt(d2);
      if (dist == 0.0) throw std::runtime_error("oracle DB: coincident centroids");
      worst = std::max(worst, (scatter[a] + scatter[b]) / dist);
    }
    total += worst;
  }
  return total / static_cast<double>(k);
}

namespace {

struct Cluster {
  size_t id;
  std::vector<size_t> members;  // ascending
};

double cluster_distance(const Matrix& x, const Cluster& a, const Cluster& b,
                        kpic::Metric metric, kpic::Linkage linkage) {
  switch (linkage) {
    case kpic::Linkage::Single: {
      double best = std::numeric_limits<double>::infinity();
      for (size_t i : a.members)
        for (size_t j : b.members) best = std::min(best, point_distance(x, i, j, metric));
      return best;
    }
    case kpic::Linkage::Complete: {
      double best = 0.0;
      for (size_t i : a.members)
        for (size_t j : b.members) best = std::max(best, point_distance(x, i, j, metric));
      return best;
    }
    case kpic::Linkage::Average: {
      double sum = 0.0;
      for (size_t i : a.members)
        for (size_t j : b.members) sum += point_distance(x, i, j, metric);
      return sum / (static_cast<double>(a.members.size()) * static_cast<double>(b.members.size()));
    }
    case kpic::Linkage::Ward: {
      std::vector<double> ca(x.cols, 0.0), cb(x.cols, 0.0);
      for (size_t i : a.members)
        for (size_t j = 0; j < x.cols; ++j) ca[j] += x.at(i, j);
      for (double& v : ca) v /= static_cast<double>(a.members.size());
      for (size_t i : b.members)
        for (size_t j = 0; j < x.cols; ++j) cb[j] += x.at(i, j);
      for (double& v : cb) v /= static_cast<double>(b.members.size());
      double d2 = 0.0;
      for (size_t j = 0; j < x.cols; ++j) {
        double d = ca[j] - cb[j];
        d2 += d * d;
      }
      double na = static_cast<double>(a.members.size());
      double nb = static_cast<double>(b.members.size());
      return std::sqrt(2.0 * na * nb / (na + nb)) * std::sqrt(d2);
    }
  }
  throw std::runtime_error("oracle: bad linkage");
}

}  // namespace

std::vector<Merge> agglomerative(const Matrix& x, kpic::Metric metric, kpic::Linkage linkage) {
  const size_t n = x.rows;
  std::vector<Cluster> clusters;
  for (size_t i = 0; i < n; ++i) clusters.push_back({i, {i}});

  std::vector<Merge> merges;
  for (size_t step = 0; step + 1 < n; ++step) {
    size_t bi = 0, bj = 1;
    double best = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i + 1 < clusters.size(); ++i)
      for (size_t j = i + 1; j < clusters.size(); ++j) {
        double d = cluster_distance(x, clusters[i], clusters[j], metric, linkage);
        if (d < best) {
          best = d;
          bi = i;
          bj = j;
        }
      }
    Cluster merged;
    merged.id = n + step;
    merged.members = clusters[bi].members;
    merged.members.insert(merged.members.end(), clusters[bj].members.begin(),
                          clusters[bj].members.end());
    std::sort(merged.members.begin(), merged.members.end());
    merges.push_back({clusters[bi].id, clusters[bj].id, best, merged.members.size()});
    clusters.erase(clusters.begin() + static_cast<ptrdiff_t>(bj));
    clusters.erase(clusters.begin() + static_cast<ptrdiff_t>(bi));
    clusters.push_back(std::move(merged));
    std::sort(clusters.begin(), clusters.end(),
              [](const Cluster& a, const Cluster& b) { return a.id < b.id; });
  }
  return merges;
}

std::vector<double> mst_edge_weights(const Matrix& x, kpic::Metric metric) {
  const size_t n = x.rows;
  std::vector<uint8_t> in_tree(n, 0);
  std::vector<double> best(n, std::numeric_limits<double>::infinity());
  in_tree[0] = 1;
  for (size_t j = 1; j < n; ++j) best[j] = point_distance(x, 0, j, metric);

  std::vector<double> weights;
  for (size_t added = 1; added < n; ++added) {
    size_t pick = n;
    double w = std::numeric_limits<double>::infinity();
    for (size_t j = 0; j < n; ++j)
      if (!in_tree[j] && best[j] < w) {
        w = best[j];
        pick = j;
      }
    in_tree[pick] = 1;
    weights.push_back(w);
    for (size_t j = 0; j < n; ++j)
      if (!in_tree[j]) best[j] = std::min(best[j], point_distance(x, pick, j, metric));
  }
  std::sort(weights.begin(), weights.end());
  return weights;
}

void jacobi_eigen(std::vector<std::vector<double>> a, std::vector<double>& eigenvalues,
                  std::vector<std::vector<double>>& eigenvectors) {
  const size_t n = a.size();
  eigenvectors.assign(n, std::vector<double>(n, 0.0));
  for (size_t i = 0; i < n; ++i) eigenvectors[i][i] = 1.0;

  for (int sweep = 0; sweep < 200; ++sweep) {
    double off = 0.0;
    for (size_t p = 0; p < n; ++p)
      for (size_t q = p + 1; q < n; ++q) off += a[p][q] * a[p][q];
    if (off < 1e-26) break;
    for (size_t p = 0; p + 1 < n; ++p)
      for (size_t q = p + 1; q < n; ++q) {
        if (a[p][q] == 0.0) continue;
        double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        double t = (theta >= 0.0 ? 1.0 : -1.0) /
                   (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        double c = 1.0 / std::sqrt(t * t + 1.0);
        double s = t * c;
        for (size_t i = 0; i < n; ++i) {
          double aip = a[i][p], aiq = a[i][q];
          a[i][p] = c * aip - s * aiq;
          a[i][q] = s * aip + c * aiq;
        }
        for (size_t i = 0; i < n; ++i) {
          double api = a[p][i], aqi = a[q][i];
          a[p][i] = c * api - s * aqi;
          a[q][i] = s * api + c * aqi;
        }
        for (size_t i = 0; i < n; ++i) {
          double vip = eigenvectors[i][p], viq = eigenvectors[i][q];
          eigenvectors[i][p] = c * vip - s * viq;
          eigenvectors[i][q] = s * vip + c * viq;
        }
      }
  }
  eigenvalues.resize(n);
  for (size_t i = 0; i < n; ++i) eigenvalues[i] = a[i][i];

  // sort descending, permuting eigenvector columns alongside
  std::vector<size_t> order(n);
  for (size_t i = 0; i < n; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](size_t l, size_t r) { return eigenvalues[l] > eigenvalues[r]; });
  std::vector<double> ev(n);
  std::vector<std::vector<double>> vec(n, std::vector<double>(n, 0.0));
  for (size_t i = 0; i < n; ++i) {
    ev[i] = eigenvalues[order[i]];
    for (size_t r = 0; r < n; ++r) vec[r][i] = eigenvectors[r][order[i]];
  }
  eigenvalues = std::move(ev);
  eigenvectors = std::move(vec);
}

double best_two_partition_inertia(const Matrix& x) {
  const size_t n = x.rows;
  if (n < 2 || n > 20) throw std::runtime_error("oracle: exhaustive search needs 2 <= n <= 20");
  double best = std::numeric_limits<double>::infinity();
  for (uint32_t mask = 1; mask + 1 < (1u << n); ++mask) {
    std::vector<double> c0(x.cols, 0.0), c1(x.cols, 0.0);
    size_t n0 = 0, n1 = 0;
    for (size_t i = 0; i < n; ++i) {
      if (mask & (1u << i)) {
        ++n1;
        for (size_t j = 0; j < x.cols; ++j) c1[j] += x.at(i, j);
      } else {
        ++n0;
        for (size_t j = 0; j < x.cols; ++j) c0[j] += x.at(i, j);
      }
    }
    for (size_t j = 0; j < x.cols; ++j) {
      c0[j] /= static_cast<double>(n0);
      c1[j] /= static_cast<double>(n1);
    }
    double inertia = 0.0;
    for (size_t i = 0; i < n; ++i) {
      const auto& c = (mask & (1u << i)) ? c1 : c0;
      for (size_t j = 0; j < x.cols; ++j) {
        double d = x.at(i, j) - c[j];
        inertia += d * d;
      }
    }
    best = std::min(best, inertia);
  }
  return best;
}

Instance random_instance(kpic::Rng& rng, size_t max_n, size_t max_d, size_t max_k) {
  Instance inst;
  size_t n = 4 + kpic::rand_index(rng, max_n - 3);
  size_t d = 1 + kpic::rand_index(rng, max_d);
  inst.k = 2 + kpic::rand_index(rng, std::min(max_k, n - 1) - 1);
  inst.x = Matrix(n, d);
  for (double& v : inst.x.data) v = kpic::rand_normal(rng) * 3.0;
  inst.labels.resize(n);
  // guarantee non-empty clusters, then fill the rest uniformly
  for (size_t c = 0; c < inst.k; ++c) inst.labels[c] = static_cast<int>(c);
  for (size_t i = inst.k; i < n; ++i) inst.labels[i] = static_cast<int>(kpic::rand_index(rng, inst.k));
  return inst;
}

}  // namespace oracle
