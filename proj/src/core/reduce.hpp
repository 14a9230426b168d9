// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "core/matrix.hpp"
#include "core/preprocess.hpp"
#include "core/types.hpp"

namespace kpic {

/// Two-component PCA of one standardized (job, KPI) matrix.
struct PcaResult {
  std::string job_id;
  KpiId kpi;
  Matrix scores;                   // T x 2 (PC1, PC2 series)
  Matrix components;               // M x 2, orthonormal columns
  std::vector<double> eigenvalues; // all M, descending, clamped >= 0
  double retained = 0.0;           // (l1 + l2) / sum(l)
};

/// Eigendecomposition of the M x M population covariance (X^T X / T) with a
/// deterministic sign convention: each component's largest-magnitude loading
/// is positive (first such index on ties).
PcaResult pca2(const TimeNodeMatrix& standardized);

inline constexpr std::array<const char*, 6> kRetainedBucketLabels{">=95", "90-95", "85-90",
                                                                  "80-85", "75-80", "<75"};

/// Buckets per-job retained-information values (percent ranges, lower edge
/// inclusive).
std::array<size_t, 6> retained_info_table(const std::vector<double>& per_job_retained);

/// Per-job retained value used for the table: mean across the job's KPIs.
std::vector<double> mean_retained_per_job(
    const std::map<std::string, std::map<std::string, PcaResult>>& pca_by_job);

/// Flattened per-job clustering row: for each selected KPI (catalog order),
/// the PC1 series then the PC2 series.
struct FeatureVector {
  std::string job_id;
  std::vector<std::string> kpis;
  std::vector<double> data;  // 2 * T * |kpis|
};

FeatureVector flatten_job(const std::map<std::string, PcaResult>& results, const Catalog& selection);

}  // namespace kpic
