// SPDX-License-Identifier: Apache-2.0
#include "core/experiment.hpp"

#include <algorithm>
#include <cmath>

#include "core/error.hpp"
#include "core/parallel.hpp"

namespace kpic {

const char* to_string(Algorithm a) {
  return a == Algorithm::KMeans ? "kmeans" : "agglomerative";
}

Algorithm algorithm_from_string(const std::string& s) {
  if (s == "kmeans") return Algorithm::KMeans;
  if (s == "agglomerative") return Algorithm::Agglomerative;
  fail(Errc::Config, "unknown algorithm: " + s);
}

std::string MethodKey::label() const {
  if (is_kmeans()) return "kmeans_euclidean";
  return std::string("agg_") + to_string(metric) + "_" + to_string(linkage);
}

namespace {

template <typename T>
bool contains(const std::vector<T>& v, T x) {
  return std::find(v.begin(), v.end(), x) != v.end();
}

}  // namespace

void validate_config(const SweepConfig& config) {
  if (config.algorithms.empty()) fail(Errc::Config, "no clustering algorithm selected");
  if (config.indices.empty()) fail(Errc::Config, "no validation index selected");
  if (config.k_min < 2) fail(Errc::Config, "k_min must be >= 2");
  if (config.k_min > config.k_max) fail(Errc::Config, "k_min exceeds k_max");
  if (config.t_len < 2) fail(Errc::Config, "resample length must be >= 2");
  if (config.restarts < 1) fail(Errc::Config, "restarts must be >= 1");
  if (contains(config.algorithms, Algorithm::Agglomerative)) {
    if (config.metrics.empty()) fail(Errc::Config, "agglomerative clustering needs a metric");
    if (config.linkages.empty()) fail(Errc::Config, "agglomerative clustering needs a linkage");
    bool any = false;
    for (Metric m : config.metrics)
      for (Linkage l : config.linkages)
        if (l != Linkage::Ward || m == Metric::Euclidean) any = true;
    if (!any) fail(Errc::Config, "Ward linkage is admissible only with the Euclidean metric");
  }
}

std::vector<MethodKey> enumerate_methods(const SweepConfig& config) {
  validate_config(config);
  std::vector<MethodKey> methods;
  if (contains(config.algorithms, Algorithm::KMeans))
    methods.push_back({Algorithm::KMeans, Metric::Euclidean, Linkage::Average});
  if (contains(config.algorithms, Algorithm::Agglomerative)) {
    for (Metric m : {Metric::Cosine, Metric::Euclidean, Metric::Manhattan}) {
      if (!contains(config.metrics, m)) continue;
      for (Linkage l : {Linkage::Ward, Linkage::Average, Linkage::Complete, Linkage::Single}) {
        if (!contains(config.linkages, l)) continue;
        if (l == Linkage::Ward && m != Metric::Euclidean) continue;
        methods.push_back({Algorithm::Agglomerative, m, l});
      }
    }
  }
  return methods;
}

namespace {

CellScores score_partition(const Matrix& x, const Matrix& dists, const std::vector<int>& labels,
                           size_t k, const SweepConfig& config) {
  CellScores cell;
  for (IndexKind idx : config.indices) {
    switch (idx) {
      case IndexKind::Silhouette:
        cell.silhouette = silhouette_mean(dists, labels, k);
        break;
      case IndexKind::CalinskiHarabasz:
        cell.calinski_harabasz = calinski_harabasz(x, labels, k).value;
        break;
      case IndexKind::DaviesBouldin:
        try {
          cell.davies_bouldin = davies_bouldin(x, labels, k);
        } catch (const Error& e) {
          if (e.code() != Errc::UndefinedIndex) throw;
        }
        break;
    }
  }
  return cell;
}

void fill_optimal(MethodSweep& sweep, const SweepConfig& config) {
  for (IndexKind idx : config.indices) {
    std::map<size_t, std::optional<double>> series;
    for (const auto& [k, cell] : sweep.by_k) series[k] = cell.get(idx);
    try {
      sweep.optimal[idx] = select_optimal_k(series, idx);
    } catch (const Error& e) {
      if (e.code() != Errc::UndefinedIndex) throw;
    }
  }
}

}  // namespace

SweepResult run_sweep_matrix(const Matrix& x, const SweepConfig& config,
                             std::vector<std::string> kpis) {
  std::vector<MethodKey> methods = enumerate_methods(config);
  const size_t n = x.rows;
  if (n < 3) fail(Errc::InvalidArg, "run_sweep: need at least 3 feature vectors");
  for (double v : x.data)
    if (!std::isfinite(v)) fail(Errc::InvalidArg, "run_sweep: non-finite feature value");

  SweepResult result;
  result.n_samples = n;
  result.feature_len = x.cols;
  result.k_min = config.k_min;
  result.k_max_requested = config.k_max;
  result.k_max_effective = std::min(config.k_max, n - 1);
  result.seed = config.seed;
  result.t_len = config.t_len;
  result.restarts = config.restarts;
  result.kpis = std::move(kpis);
  if (config.k_min > result.k_max_effective)
    fail(Errc::Config, "sweep range is empty after capping k_max at N-1");

  result.methods.resize(methods.size());
  parallel_for(methods.size(), config.threads, [&](size_t mi) {
    const MethodKey& method = methods[mi];
    MethodSweep sweep;
    sweep.method = method;
    const bool need_silhouette = contains(config.indices, IndexKind::Silhouette);
    Matrix dists;
    if (need_silhouette || !method.is_kmeans()) dists = pairwise_distances(x, method.metric);

    if (method.is_kmeans()) {
      KMeansOptions opts{config.seed, config.restarts, config.max_iter, config.tol};
      for (size_t k = config.k_min; k <= result.k_max_effective; ++k) {
        KMeansResult km = kmeans(x, k, opts);
        sweep.by_k[k] = score_partition(x, dists, km.labels, k, config);
      }
    } else {
      Dendrogram tree = agglomerative_from_distances(dists, method.linkage, &x);
      for (size_t k = config.k_min; k <= result.k_max_effective; ++k) {
        std::vector<int> labels = cut_dendrogram(tree, k);
        sweep.by_k[k] = score_partition(x, dists, labels, k, config);
      }
    }
    fill_optimal(sweep, config);
    result.methods[mi] = std::move(sweep);
  });
  return result;
}

SweepResult run_sweep(const std::vector<FeatureVector>& features, const SweepConfig& config) {
  if (features.size() < 3) fail(Errc::InvalidArg, "run_sweep: need at least 3 feature vectors");
  const size_t len = features.front().data.size();
  Matrix x(features.size(), len);
  for (size_t i = 0; i < features.size(); ++i) {
    if (features[i].data.size() != len)
      fail(Errc::InvalidArg, "run_sweep: feature vectors of mixed length");
    std::copy(features[i].data.begin(), features[i].data.end(), x.row(i).data());
  }
  return run_sweep_matrix(x, config, features.front().kpis);
}

SweepResult experiment_one(const ProcessedJobs& processed, const SweepConfig& config) {
  return run_sweep(features_combined(processed), config);
}

std::map<std::string, SweepResult> experiment_two(const ProcessedJobs& processed,
                                                  const SweepConfig& config) {
  std::map<std::string, SweepResult> out;
  for (const auto& kpi : processed.catalog)
    out.emplace(kpi.name, run_sweep(features_single(processed, kpi), config));
  return out;
}

namespace {

std::optional<BestEntry> best_for_index(const std::string& kpi, const SweepResult& sweep,
                                        IndexKind idx) {
  std::optional<BestEntry> best;
  const bool maximize = index_maximizes(idx);
  for (const auto& method : sweep.methods) {
    auto it = method.optimal.find(idx);
    if (it == method.optimal.end()) continue;
    double score = it->second.second;
    if (!best || (maximize ? score > best->score : score < best->score))
      best = BestEntry{kpi, method.method.label(), it->second.first, score};
  }
  return best;
}

}  // namespace

KpiRanking compare_kpis(const std::map<std::string, SweepResult>& per_kpi) {
  if (per_kpi.empty()) fail(Errc::InvalidArg, "compare_kpis: no sweeps");
  KpiRanking out;
  std::vector<IndexKind> kinds{IndexKind::CalinskiHarabasz, IndexKind::DaviesBouldin,
                               IndexKind::Silhouette};
  for (IndexKind idx : kinds) {
    std::vector<BestEntry> entries;
    for (const auto& [kpi, sweep] : per_kpi) {
      auto best = best_for_index(kpi, sweep, idx);
      if (best) entries.push_back(*best);
    }
    if (entries.empty()) continue;
    const bool maximize = index_maximizes(idx);
    std::stable_sort(entries.begin(), entries.end(), [&](const BestEntry& a, const BestEntry& b) {
      if (a.score != b.score) return maximize ? a.score > b.score : a.score < b.score;
      return a.kpi < b.kpi;
    });
    double top = entries.front().score;
    for (const auto& e : entries)
      if (e.score == top) out.index_winners[idx].push_back(e.kpi);
    for (const auto& w : out.index_winners[idx]) ++out.wins[w];
    out.ranking[idx] = std::move(entries);
  }
  int most = 0;
  for (const auto& [kpi, count] : out.wins) most = std::max(most, count);
  for (const auto& [kpi, count] : out.wins)
    if (count == most) out.winners.push_back(kpi);
  return out;
}

ValidationResult validation_harness(const ProcessedJobs& processed,
                                    const std::vector<std::string>& selected_kpis,
                                    const SweepConfig& config) {
  if (selected_kpis.empty()) fail(Errc::Config, "validation run: no KPIs selected");
  ValidationResult out;
  for (const auto& name : selected_kpis) {
    auto it = std::find_if(processed.catalog.begin(), processed.catalog.end(),
                           [&](const KpiId& k) { return k.name == name; });
    if (it == processed.catalog.end())
      fail(Errc::Config, "selected KPI not in catalog: " + name);
    out.per_kpi.emplace(name, run_sweep(features_single(processed, *it), config));
  }
  out.comparison.ranking = compare_kpis(out.per_kpi);

  // a KPI dominates when it is the outright winner of every index that
  // produced a ranking
  const auto& winners = out.comparison.ranking.index_winners;
  if (!winners.empty()) {
    std::optional<std::string> candidate;
    bool dominated = true;
    for (const auto& [idx, list] : winners) {
      if (list.size() != 1) {
        dominated = false;
        break;
      }
      if (!candidate)
        candidate = list.front();
      else if (*candidate != list.front()) {
        dominated = false;
        break;
      }
    }
    if (dominated) out.comparison.dominant_kpi = candidate;
  }
  return out;
}

}  // namespace kpic
