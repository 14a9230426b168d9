// SPDX-License-Identifier: Apache-2.0
#include "core/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "core/error.hpp"
#include "core/rng.hpp"

namespace kpic {

const char* to_string(Metric m) {
  switch (m) {
    case Metric::Euclidean: return "euclidean";
    case Metric::Manhattan: return "manhattan";
    case Metric::Cosine: return "cosine";
  }
  return "unknown";
}

const char* to_string(Linkage l) {
  switch (l) {
    case Linkage::Ward: return "ward";
    case Linkage::Average: return "average";
    case Linkage::Complete: return "complete";
    case Linkage::Single: return "single";
  }
  return "unknown";
}

Metric metric_from_string(const std::string& s) {
  if (s == "euclidean") return Metric::Euclidean;
  if (s == "manhattan") return Metric::Manhattan;
  if (s == "cosine") return Metric::Cosine;
  fail(Errc::Config, "unknown metric: " + s);
}

Linkage linkage_from_string(const std::string& s) {
  if (s == "ward") return Linkage::Ward;
  if (s == "average") return Linkage::Average;
  if (s == "complete") return Linkage::Complete;
  if (s == "single") return Linkage::Single;
  fail(Errc::Config, "unknown linkage: " + s);
}

double distance(std::span<const double> a, std::span<const double> b, Metric metric) {
  if (a.size() != b.size()) fail(Errc::InvalidArg, "distance: length mismatch");
  const size_t n = a.size();
  switch (metric) {
    case Metric::Euclidean: {
      double acc = 0.0;
      for (size_t i = 0; i < n; ++i) {
        double d = a[i] - b[i];
        acc += d * d;
      }
      return std::sqrt(acc);
    }
    case Metric::Manhattan: {
      double acc = 0.0;
      for (size_t i = 0; i < n; ++i) acc += std::abs(a[i] - b[i]);
      return acc;
    }
    case Metric::Cosine: {
      double dot = 0.0, na = 0.0, nb = 0.0;
      for (size_t i = 0; i < n; ++i) {
        dot += a[i] * b[i];
        na += a[i] * a[i];
        nb += b[i] * b[i];
      }
      if (na == 0.0 && nb == 0.0) return 0.0;
      if (na == 0.0 || nb == 0.0) return 1.0;
      double v = 1.0 - dot / (std::sqrt(na) * std::sqrt(nb));
      return std::clamp(v, 0.0, 2.0);
    }
  }
  fail(Errc::Internal, "distance: bad metric");
}

Matrix pairwise_distances(const Matrix& x, Metric metric) {
  Matrix d(x.rows, x.rows);
  for (size_t i = 0; i < x.rows; ++i)
    for (size_t j = i + 1; j < x.rows; ++j) {
      double v = distance(x.row(i), x.row(j), metric);
      d.at(i, j) = v;
      d.at(j, i) = v;
    }
  return d;
}

namespace {

double sq_dist(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (size_t i = 0; i < a.size(); ++i) {
    double d = a[i] - b[i];
    acc += d * d;
  }
  return acc;
}

// k-means++ seeding; falls back to the first unchosen point when all
// remaining weights are zero (coincident points).
Matrix kmeanspp(const Matrix& x, size_t k, Rng& rng) {
  const size_t n = x.rows;
  Matrix centers(k, x.cols);
  std::vector<uint8_t> chosen(n, 0);
  std::vector<double> d2(n, std::numeric_limits<double>::infinity());

  size_t first = static_cast<size_t>(rand_index(rng, n));
  std::copy_n(x.row(first).data(), x.cols, centers.row(0).data());
  chosen[first] = 1;
  for (size_t i = 0; i < n; ++i) d2[i] = sq_dist(x.row(i), centers.row(0));

  for (size_t c = 1; c < k; ++c) {
    double total = 0.0;
    for (size_t i = 0; i < n; ++i) total += d2[i];
    size_t pick = n;
    if (total > 0.0) {
      double r = rand_unit(rng) * total;
      double cum = 0.0;
      for (size_t i = 0; i < n; ++i) {
        cum += d2[i];
        if (cum > r) {
          pick = i;
          break;
        }
      }
      if (pick == n) {  // numeric edge: fall back to the last positive weight
        for (size_t i = n; i-- > 0;)
          if (d2[i] > 0.0) {
            pick = i;
            break;
          }
      }
    }
    if (pick == n) {
      for (size_t i = 0; i < n; ++i)
        if (!chosen[i]) {
          pick = i;
          break;
        }
    }
    std::copy_n(x.row(pick).data(), x.cols, centers.row(c).data());
    chosen[pick] = 1;
    for (size_t i = 0; i < n; ++i) d2[i] = std::min(d2[i], sq_dist(x.row(i), centers.row(c)));
  }
  return centers;
}

struct LloydRun {
  std::vector<int> labels;
  Matrix centroids;
  double inertia = 0.0;
  std::vector<double> trace;
};

LloydRun lloyd(const Matrix& x, size_t k, const KMeansOptions& opts, Rng& rng) {
  const size_t n = x.rows;
  const size_t dim = x.cols;
  LloydRun run;
  run.centroids = kmeanspp(x, k, rng);
  run.labels.assign(n, 0);
  std::vector<double> best_d2(n, 0.0);
  std::vector<size_t> counts(k, 0);

  for (unsigned iter = 0; iter < opts.max_iter; ++iter) {
    // assignment (ties go to the lowest centroid index)
    std::fill(counts.begin(), counts.end(), 0);
    for (size_t i = 0; i < n; ++i) {
      int best = 0;
      double bd = sq_dist(x.row(i), run.centroids.row(0));
      for (size_t c = 1; c < k; ++c) {
        double d = sq_dist(x.row(i), run.centroids.row(c));
        if (d < bd) {
          bd = d;
          best = static_cast<int>(c);
        }
      }
      run.labels[i] = best;
      best_d2[i] = bd;
      ++counts[static_cast<size_t>(best)];
    }

    // repair empty clusters from the farthest point of a non-singleton cluster
    for (size_t c = 0; c < k; ++c) {
      if (counts[c] != 0) continue;
      size_t far = n;
      double far_d = -1.0;
      for (size_t i = 0; i < n; ++i) {
        if (counts[static_cast<size_t>(run.labels[i])] < 2) continue;
        if (best_d2[i] > far_d) {
          far_d = best_d2[i];
          far = i;
        }
      }
      if (far == n) fail(Errc::Internal, "kmeans: no donor point for empty cluster");
      --counts[static_cast<size_t>(run.labels[far])];
      run.labels[far] = static_cast<int>(c);
      counts[c] = 1;
      std::copy_n(x.row(far).data(), dim, run.centroids.row(c).data());
      best_d2[far] = 0.0;
    }

    double inertia = 0.0;
    for (size_t i = 0; i < n; ++i) inertia += best_d2[i];
    run.trace.push_back(inertia);

    // update step
    Matrix next(k, dim);
    for (size_t i = 0; i < n; ++i) {
      auto row = x.row(i);
      auto acc = next.row(static_cast<size_t>(run.labels[i]));
      for (size_t j = 0; j < dim; ++j) acc[j] += row[j];
    }
    double shift = 0.0;
    for (size_t c = 0; c < k; ++c) {
      auto acc = next.row(c);
      for (size_t j = 0; j < dim; ++j) acc[j] /= static_cast<double>(counts[c]);
      shift = std::max(shift, std::sqrt(sq_dist(acc, run.centroids.row(c))));
    }
    run.centroids = std::move(next);
    if (shift < opts.tol) break;
  }

  run.inertia = 0.0;
  for (size_t i = 0; i < n; ++i)
    run.inertia += sq_dist(x.row(i), run.centroids.row(static_cast<size_t>(run.labels[i])));
  return run;
}

}  // namespace

KMeansResult kmeans(const Matrix& x, size_t k, const KMeansOptions& opts) {
  if (x.rows < 1 || x.cols < 1) fail(Errc::InvalidArg, "kmeans: empty input");
  if (k < 2 || k > x.rows) fail(Errc::InvalidArg, "kmeans: k out of range");
  if (opts.restarts < 1) fail(Errc::InvalidArg, "kmeans: restarts must be >= 1");

  KMeansResult result;
  result.k = k;
  bool have = false;
  for (unsigned r = 0; r < opts.restarts; ++r) {
    Rng rng(mix_seed(opts.seed, r));
    LloydRun run = lloyd(x, k, opts, rng);
    result.inertia_trace.push_back(run.trace);
    if (!have || run.inertia < result.inertia) {
      have = true;
      result.inertia = run.inertia;
      result.labels = std::move(run.labels);
      result.centroids = std::move(run.centroids);
    }
  }
  return result;
}

namespace {

struct ClusterNode {
  size_t id;
  std::vector<size_t> members;   // ascending leaf indices
  std::vector<double> centroid;  // Ward only
};

std::vector<double> mean_of_rows(const Matrix& x, const std::vector<size_t>& members) {
  std::vector<double> c(x.cols, 0.0);
  for (size_t m : members) {
    auto row = x.row(m);
    for (size_t j = 0; j < x.cols; ++j) c[j] += row[j];
  }
  for (double& v : c) v /= static_cast<double>(members.size());
  return c;
}

double linkage_distance(const ClusterNode& a, const ClusterNode& b, const Matrix& dists,
                        Linkage linkage) {
  switch (linkage) {
    case Linkage::Single: {
      double best = std::numeric_limits<double>::infinity();
      for (size_t i : a.members)
        for (size_t j : b.members) best = std::min(best, dists.at(i, j));
      return best;
    }
    case Linkage::Complete: {
      double best = 0.0;
      for (size_t i : a.members)
        for (size_t j : b.members) best = std::max(best, dists.at(i, j));
      return best;
    }
    case Linkage::Average: {
      double sum = 0.0;
      for (size_t i : a.members)
        for (size_t j : b.members) sum += dists.at(i, j);
      return sum / (static_cast<double>(a.members.size()) * static_cast<double>(b.members.size()));
    }
    case Linkage::Ward: {
      double na = static_cast<double>(a.members.size());
      double nb = static_cast<double>(b.members.size());
      double d2 = 0.0;
      for (size_t j = 0; j < a.centroid.size(); ++j) {
        double d = a.centroid[j] - b.centroid[j];
        d2 += d * d;
      }
      return std::sqrt(2.0 * na * nb / (na + nb)) * std::sqrt(d2);
    }
  }
  fail(Errc::Internal, "linkage_distance: bad linkage");
}

}  // namespace

Dendrogram agglomerative_from_distances(const Matrix& dists, Linkage linkage, const Matrix* x) {
  const size_t n = dists.rows;
  if (n < 2) fail(Errc::InvalidArg, "agglomerative: need at least 2 points");
  if (linkage == Linkage::Ward && x == nullptr)
    fail(Errc::InvalidArg, "agglomerative: Ward needs the data matrix");

  std::vector<ClusterNode> active;
  active.reserve(n);
  for (size_t i = 0; i < n; ++i) {
    ClusterNode c{i, {i}, {}};
    if (linkage == Linkage::Ward) c.centroid = mean_of_rows(*x, c.members);
    active.push_back(std::move(c));
  }

  // current inter-cluster distances, parallel to `active`
  std::vector<std::vector<double>> cd(n);
  for (size_t i = 0; i < n; ++i) {
    cd[i].resize(n);
    for (size_t j = 0; j < n; ++j) cd[i][j] = dists.at(i, j);
  }

  Dendrogram out;
  out.leaves = n;
  out.merges.reserve(n - 1);

  for (size_t step = 0; step + 1 < n; ++step) {
    // `active` stays sorted by cluster id, so the first strict minimum is the
    // smallest (left id, right id) pair.
    size_t bi = 0, bj = 1;
    double best = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i + 1 < active.size(); ++i)
      for (size_t j = i + 1; j < active.size(); ++j)
        if (cd[i][j] < best) {
          best = cd[i][j];
          bi = i;
          bj = j;
        }

    ClusterNode merged;
    merged.id = n + step;
    merged.members.resize(active[bi].members.size() + active[bj].members.size());
    std::merge(active[bi].members.begin(), active[bi].members.end(), active[bj].members.begin(),
               active[bj].members.end(), merged.members.begin());
    if (linkage == Linkage::Ward) merged.centroid = mean_of_rows(*x, merged.members);

    out.merges.push_back({active[bi].id, active[bj].id, best, merged.members.size()});

    // drop bj then bi, append the merged cluster and its distances
    auto erase_at = [&](size_t idx) {
      active.erase(active.begin() + static_cast<ptrdiff_t>(idx));
      cd.erase(cd.begin() + static_cast<ptrdiff_t>(idx));
      for (auto& row : cd) row.erase(row.begin() + static_cast<ptrdiff_t>(idx));
    };
    erase_at(bj);
    erase_at(bi);

    // pair members iterate as (lower id, higher id) so sums accumulate in the
    // same order a from-scratch recomputation would use
    std::vector<double> row(active.size() + 1, 0.0);
    for (size_t i = 0; i < active.size(); ++i) {
      row[i] = linkage_distance(active[i], merged, dists, linkage);
      cd[i].push_back(row[i]);
    }
    cd.push_back(std::move(row));
    active.push_back(std::move(merged));
  }
  return out;
}

Dendrogram agglomerative(const Matrix& x, Metric metric, Linkage linkage) {
  if (linkage == Linkage::Ward && metric != Metric::Euclidean)
    fail(Errc::Config, "Ward linkage requires the Euclidean metric");
  Matrix d = pairwise_distances(x, metric);
  return agglomerative_from_distances(d, linkage, &x);
}

std::vector<int> cut_dendrogram(const Dendrogram& d, size_t k) {
  const size_t n = d.leaves;
  if (k < 1 || k > n) fail(Errc::InvalidArg, "cut_dendrogram: k out of range");
  if (d.merges.size() + 1 != n) fail(Errc::InvalidArg, "cut_dendrogram: malformed dendrogram");

  std::vector<size_t> parent(n);
  for (size_t i = 0; i < n; ++i) parent[i] = i;
  auto find = [&](size_t a) {
    while (parent[a] != a) {
      parent[a] = parent[parent[a]];
      a = parent[a];
    }
    return a;
  };

  // representative leaf per subtree id
  std::vector<size_t> rep(n + d.merges.size());
  for (size_t i = 0; i < n; ++i) rep[i] = i;
  for (size_t s = 0; s + k < n; ++s) {
    const Merge& m = d.merges[s];
    size_t ra = find(rep[m.left]);
    size_t rb = find(rep[m.right]);
    parent[std::max(ra, rb)] = std::min(ra, rb);
    rep[n + s] = std::min(ra, rb);
  }
  for (size_t s = 0; s + k < n; ++s) rep[n + s] = find(rep[n + s]);

  std::vector<int> labels(n, -1);
  std::vector<int> root_label(n, -1);
  int next = 0;
  for (size_t i = 0; i < n; ++i) {
    size_t r = find(i);
    if (root_label[r] < 0) root_label[r] = next++;
    labels[i] = root_label[r];
  }
  if (static_cast<size_t>(next) != k) fail(Errc::Internal, "cut_dendrogram: wrong cluster count");
  return labels;
}

}  // namespace kpic
