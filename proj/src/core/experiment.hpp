// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "core/cluster.hpp"
#include "core/dataset.hpp"
#include "core/validate.hpp"

namespace kpic {

enum class Algorithm { KMeans, Agglomerative };

const char* to_string(Algorithm a);
Algorithm algorithm_from_string(const std::string& s);

/// One clustering configuration row: K-means (always Euclidean) or an
/// agglomerative (metric, linkage) pair.
struct MethodKey {
  Algorithm algorithm = Algorithm::KMeans;
  Metric metric = Metric::Euclidean;
  Linkage linkage = Linkage::Average;  // unused for K-means

  bool is_kmeans() const { return algorithm == Algorithm::KMeans; }
  std::string label() const;
};

struct SweepConfig {
  std::vector<Algorithm> algorithms{Algorithm::KMeans, Algorithm::Agglomerative};
  std::vector<Metric> metrics{Metric::Cosine, Metric::Euclidean, Metric::Manhattan};
  std::vector<Linkage> linkages{Linkage::Ward, Linkage::Average, Linkage::Complete, Linkage::Single};
  size_t k_min = 2;
  size_t k_max = 200;
  std::vector<IndexKind> indices{IndexKind::CalinskiHarabasz, IndexKind::DaviesBouldin,
                                 IndexKind::Silhouette};
  uint64_t seed = 0;
  size_t t_len = 128;
  unsigned restarts = 10;
  unsigned max_iter = 300;
  double tol = 1e-6;
  unsigned threads = 1;
};

/// Throws Errc::Config on inadmissible settings (K-means is Euclidean-only,
/// Ward pairs only with Euclidean, k_min >= 2, ...).
void validate_config(const SweepConfig& config);

/// Fixed-order configuration rows: K-means first, then agglomerative by
/// metric (cosine, euclidean, manhattan) and linkage (ward, average,
/// complete, single); Ward appears only under Euclidean.
std::vector<MethodKey> enumerate_methods(const SweepConfig& config);

struct CellScores {
  std::optional<double> calinski_harabasz;
  std::optional<double> davies_bouldin;
  std::optional<double> silhouette;

  std::optional<double> get(IndexKind k) const {
    switch (k) {
      case IndexKind::CalinskiHarabasz: return calinski_harabasz;
      case IndexKind::DaviesBouldin: return davies_bouldin;
      case IndexKind::Silhouette: return silhouette;
    }
    return std::nullopt;
  }
};

struct MethodSweep {
  MethodKey method;
  std::map<size_t, CellScores> by_k;
  std::map<IndexKind, std::pair<size_t, double>> optimal;  // absent when all scores missing
};

struct SweepResult {
  std::vector<MethodSweep> methods;
  size_t n_samples = 0;
  size_t feature_len = 0;
  size_t k_min = 2;
  size_t k_max_requested = 200;
  size_t k_max_effective = 0;
  uint64_t seed = 0;
  size_t t_len = 0;
  unsigned restarts = 0;
  std::vector<std::string> kpis;
};

/// Runs every configuration over [k_min, min(k_max, N-1)], scoring each
/// partition with the requested indices. One dendrogram per agglomerative
/// configuration, cut at every K.
SweepResult run_sweep(const std::vector<FeatureVector>& features, const SweepConfig& config);
SweepResult run_sweep_matrix(const Matrix& x, const SweepConfig& config,
                             std::vector<std::string> kpis);

/// Experiment one: all catalog KPIs combined into one feature row per job.
SweepResult experiment_one(const ProcessedJobs& processed, const SweepConfig& config);

/// Experiment two: one independent sweep per KPI.
std::map<std::string, SweepResult> experiment_two(const ProcessedJobs& processed,
                                                  const SweepConfig& config);

struct BestEntry {
  std::string kpi;
  std::string method;  // configuration label
  size_t k = 0;
  double score = 0.0;
};

struct KpiRanking {
  // per index: KPIs ordered best-first by their best score over all methods
  std::map<IndexKind, std::vector<BestEntry>> ranking;
  std::map<IndexKind, std::vector<std::string>> index_winners;
  std::map<std::string, int> wins;
  std::vector<std::string> winners;  // KPIs with the most index wins
};

/// Ranks KPIs per index by their best sweep score and applies the
/// majority-of-indices winner rule; exact ties co-win.
KpiRanking compare_kpis(const std::map<std::string, SweepResult>& per_kpi);

struct ValidationComparison {
  KpiRanking ranking;
  std::optional<std::string> dominant_kpi;  // set when one KPI wins every index outright
};

/// Validation run: per-KPI sweeps over a second dataset restricted to the
/// selected KPIs, plus the dominance comparison.
struct ValidationResult {
  std::map<std::string, SweepResult> per_kpi;
  ValidationComparison comparison;
};

ValidationResult validation_harness(const ProcessedJobs& processed,
                                    const std::vector<std::string>& selected_kpis,
                                    const SweepConfig& config);

}  // namespace kpic
