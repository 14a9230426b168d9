// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "core/ingest.hpp"
#include "core/reduce.hpp"
#include "core/types.hpp"

namespace kpic {

/// Raw inputs for one monitoring window: per-KPI record lists plus the
/// operational flags.
struct Dataset {
  Catalog catalog;
  std::map<std::string, std::vector<KpiRecord>> records;  // KPI name -> records
  std::map<std::string, bool> flags;
  std::map<std::string, size_t> parse_skips;  // KPI name -> skipped rows
};

Catalog catalog_from_json(const std::string& text);
std::string catalog_to_json(const Catalog& catalog);
Catalog load_catalog_file(const std::filesystem::path& path);
std::map<std::string, bool> load_flags_file(const std::filesystem::path& path);

/// Reads `<kpi.name>.csv` for every catalog KPI from a directory.
Dataset load_dataset(const std::filesystem::path& kpi_dir, const Catalog& catalog,
                     const std::map<std::string, bool>& flags);

/// Eligible jobs taken through assembly, standardization and PCA.
struct ProcessedJobs {
  Catalog catalog;
  size_t t_len = 0;
  FilterReport report;
  std::array<size_t, 5> node_hist{};
  std::vector<std::string> job_ids;  // processed jobs, sorted
  std::map<std::string, std::map<std::string, PcaResult>> pca;  // job -> KPI -> result
  std::array<size_t, 6> retained_hist{};
  std::vector<std::string> dropped;  // degenerate jobs with reasons
};

/// Runs the preprocessing + reduction stages for every eligible job. Jobs that
/// turn out degenerate during assembly (too few usable nodes, zero span) are
/// dropped and recorded. Per-job work runs in parallel.
ProcessedJobs process_dataset(const Dataset& ds, size_t t_len, unsigned threads);

/// Per-job rows over the full catalog (experiment one layout).
std::vector<FeatureVector> features_combined(const ProcessedJobs& p);

/// Per-job rows over a single KPI (experiment two layout).
std::vector<FeatureVector> features_single(const ProcessedJobs& p, const KpiId& kpi);

}  // namespace kpic
