// SPDX-License-Identifier: Apache-2.0
#include "core/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "core/csv.hpp"
#include "core/error.hpp"

namespace kpic {

namespace {

bool parse_i64(const std::string& s, int64_t& out) {
  auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

bool parse_f64(const std::string& s, double& out) {
  auto res = std::from_chars(s.data(), s.data() + s.size(), out);
  return res.ec == std::errc() && res.ptr == s.data() + s.size();
}

bool blank(const std::string& line) {
  return line.find_first_not_of(" \t\r") == std::string::npos;
}

}  // namespace

ParsedKpi parse_kpi_records(std::istream& in, const KpiId& kpi) {
  if (!in) fail(Errc::Io, "unreadable KPI record stream for " + kpi.name);
  std::string line;
  if (!std::getline(in, line)) {
    if (in.bad()) fail(Errc::Io, "failed reading KPI record stream for " + kpi.name);
    fail(Errc::Format, "missing header in KPI records for " + kpi.name);
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "timestamp,job_id,node_id,value")
    fail(Errc::Format, "bad KPI record header for " + kpi.name + ": '" + line + "'");

  ParsedKpi out;
  while (std::getline(in, line)) {
    if (blank(line)) continue;
    auto f = split_csv(line);
    if (f.size() != 4) {
      ++out.skipped;
      continue;
    }
    KpiRecord r;
    double value;
    if (!parse_i64(f[0], r.timestamp) || r.timestamp < 0 || f[1].empty() || f[2].empty() ||
        !parse_f64(f[3], value) || !std::isfinite(value)) {
      ++out.skipped;
      continue;
    }
    r.job_id = std::move(f[1]);
    r.node_id = std::move(f[2]);
    r.value = value;
    out.records.push_back(std::move(r));
  }
  if (in.bad()) fail(Errc::Io, "failed reading KPI record stream for " + kpi.name);
  return out;
}

JobRegistry build_job_registry(const std::map<std::string, std::vector<KpiRecord>>& records_per_kpi,
                               const std::map<std::string, bool>& operational_flags) {
  JobRegistry reg;
  for (const auto& [kpi_name, records] : records_per_kpi) {
    for (const auto& r : records) {
      auto& stats = reg.jobs[r.job_id].per_kpi[kpi_name];
      stats.nodes.insert(r.node_id);
      stats.min_ts = std::min(stats.min_ts, r.timestamp);
      stats.max_ts = std::max(stats.max_ts, r.timestamp);
    }
  }
  for (auto& [job_id, info] : reg.jobs) {
    auto it = operational_flags.find(job_id);
    info.operational = it == operational_flags.end() ? true : it->second;
  }
  return reg;
}

FilterReport filter_jobs(const JobRegistry& registry, const Catalog& catalog) {
  if (catalog.empty()) fail(Errc::Config, "KPI catalog is empty");
  FilterReport report;
  report.total_jobs = registry.jobs.size();
  for (const auto& [job_id, info] : registry.jobs) {
    bool missing = false;
    bool single_node = false;
    for (const auto& kpi : catalog) {
      auto it = info.per_kpi.find(kpi.name);
      if (it == info.per_kpi.end()) {
        missing = true;
        break;
      }
      if (it->second.nodes.size() < 2) single_node = true;
    }
    if (missing) {
      ++report.excluded_missing_kpis;
    } else if (single_node) {
      ++report.excluded_single_node;
    } else if (info.operational) {
      ++report.operational;
    } else {
      ++report.non_operational_eligible;
      report.eligible_ids.push_back(job_id);
    }
  }
  // std::map iteration is already lexicographic; keep the guarantee explicit.
  std::sort(report.eligible_ids.begin(), report.eligible_ids.end());
  return report;
}

std::array<size_t, 5> node_count_histogram(const FilterReport& report, const JobRegistry& registry) {
  std::array<size_t, 5> buckets{};
  for (const auto& job_id : report.eligible_ids) {
    auto it = registry.jobs.find(job_id);
    if (it == registry.jobs.end()) fail(Errc::InvalidArg, "eligible job missing from registry: " + job_id);
    size_t n = 0;
    for (const auto& [kpi, stats] : it->second.per_kpi) n = std::max(n, stats.nodes.size());
    if (n <= 5)
      ++buckets[0];
    else if (n <= 10)
      ++buckets[1];
    else if (n <= 15)
      ++buckets[2];
    else if (n <= 20)
      ++buckets[3];
    else
      ++buckets[4];
  }
  return buckets;
}

}  // namespace kpic
