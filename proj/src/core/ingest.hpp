// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <istream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "core/types.hpp"

namespace kpic {

struct ParsedKpi {
  std::vector<KpiRecord> records;
  size_t skipped = 0;  // malformed or non-finite rows
};

/// Parses a `timestamp,job_id,node_id,value` CSV stream for one KPI.
/// Bad rows (wrong field count, unparsable numbers, negative timestamps,
/// non-finite values) are counted and skipped; a bad header is fatal.
ParsedKpi parse_kpi_records(std::istream& in, const KpiId& kpi);

struct JobKpiStats {
  std::set<std::string> nodes;
  int64_t min_ts = INT64_MAX;
  int64_t max_ts = INT64_MIN;
};

struct JobInfo {
  bool operational = true;  // jobs missing from the flags file count as operational
  std::map<std::string, JobKpiStats> per_kpi;  // keyed by KPI name
};

struct JobRegistry {
  std::map<std::string, JobInfo> jobs;
};

JobRegistry build_job_registry(const std::map<std::string, std::vector<KpiRecord>>& records_per_kpi,
                               const std::map<std::string, bool>& operational_flags);

/// Outcome of the eligibility filter. Exclusion reasons are applied in fixed
/// priority order (missing KPIs, then single node, then operational) so each
/// job lands under exactly one counter.
struct FilterReport {
  size_t total_jobs = 0;
  size_t excluded_missing_kpis = 0;
  size_t excluded_single_node = 0;
  size_t operational = 0;
  size_t non_operational_eligible = 0;
  std::vector<std::string> eligible_ids;  // sorted lexicographically

  bool operator==(const FilterReport&) const = default;
};

FilterReport filter_jobs(const JobRegistry& registry, const Catalog& catalog);

inline constexpr std::array<const char*, 5> kNodeBucketLabels{"2-5", "6-10", "11-15", "16-20", ">20"};

/// Buckets eligible jobs by node count (max across the job's KPIs).
std::array<size_t, 5> node_count_histogram(const FilterReport& report, const JobRegistry& registry);

}  // namespace kpic
