// SPDX-License-Identifier: Apache-2.0
#include "core/dataset.hpp"

#include <fstream>
#include <optional>

#include "core/csv.hpp"
#include "core/error.hpp"
#include "core/parallel.hpp"
#include "core/preprocess.hpp"
#include "json.hpp"

namespace kpic {

namespace fs = std::filesystem;

Catalog catalog_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::Format, std::string("catalog JSON parse error: ") + e.what());
  }
  if (!j.is_array() || j.empty()) fail(Errc::Format, "catalog JSON must be a non-empty array");
  Catalog catalog;
  for (const auto& item : j) {
    if (!item.is_object() || !item.contains("name") || !item.contains("category"))
      fail(Errc::Format, "catalog entries need 'name' and 'category'");
    KpiId kpi{item["name"].get<std::string>(), category_from_string(item["category"].get<std::string>())};
    for (const auto& existing : catalog)
      if (existing.name == kpi.name) fail(Errc::Format, "duplicate KPI in catalog: " + kpi.name);
    catalog.push_back(std::move(kpi));
  }
  return catalog;
}

std::string catalog_to_json(const Catalog& catalog) {
  nlohmann::ordered_json j = nlohmann::ordered_json::array();
  for (const auto& kpi : catalog) j.push_back({{"name", kpi.name}, {"category", to_string(kpi.category)}});
  return j.dump(2) + "\n";
}

Catalog load_catalog_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::Io, "cannot open catalog file: " + path.string());
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return catalog_from_json(text);
}

std::map<std::string, bool> load_flags_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::Io, "cannot open flags file: " + path.string());
  std::string line;
  if (!std::getline(in, line)) fail(Errc::Format, "empty flags file: " + path.string());
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "job_id,operational")
    fail(Errc::Format, "bad flags header in " + path.string() + ": '" + line + "'");
  std::map<std::string, bool> flags;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto f = split_csv(line);
    if (f.size() != 2 || f[0].empty() || (f[1] != "true" && f[1] != "false"))
      fail(Errc::Format, "bad flags row in " + path.string() + ": '" + line + "'");
    flags[f[0]] = f[1] == "true";
  }
  if (in.bad()) fail(Errc::Io, "failed reading flags file: " + path.string());
  return flags;
}

Dataset load_dataset(const fs::path& kpi_dir, const Catalog& catalog,
                     const std::map<std::string, bool>& flags) {
  Dataset ds;
  ds.catalog = catalog;
  ds.flags = flags;
  for (const auto& kpi : catalog) {
    fs::path file = kpi_dir / (kpi.name + ".csv");
    std::ifstream in(file);
    if (!in) fail(Errc::Io, "cannot open KPI file: " + file.string());
    ParsedKpi parsed = parse_kpi_records(in, kpi);
    ds.parse_skips[kpi.name] = parsed.skipped;
    ds.records[kpi.name] = std::move(parsed.records);
  }
  return ds;
}

ProcessedJobs process_dataset(const Dataset& ds, size_t t_len, unsigned threads) {
  if (t_len < 2) fail(Errc::Config, "resample length must be >= 2");
  ProcessedJobs out;
  out.catalog = ds.catalog;
  out.t_len = t_len;

  JobRegistry registry = build_job_registry(ds.records, ds.flags);
  out.report = filter_jobs(registry, ds.catalog);
  out.node_hist = node_count_histogram(out.report, registry);

  // group records per (KPI, job) once
  std::map<std::string, std::map<std::string, std::vector<KpiRecord>>> grouped;
  for (const auto& [kpi_name, records] : ds.records) {
    auto& per_job = grouped[kpi_name];
    for (const auto& r : records) per_job[r.job_id].push_back(r);
  }

  const auto& eligible = out.report.eligible_ids;
  struct JobOutcome {
    std::map<std::string, PcaResult> by_kpi;
    std::string drop_reason;  // empty when the job survived
  };
  std::vector<JobOutcome> outcomes(eligible.size());

  parallel_for(eligible.size(), threads, [&](size_t idx) {
    const std::string& job = eligible[idx];
    JobOutcome& slot = outcomes[idx];
    try {
      for (const auto& kpi : ds.catalog) {
        const auto& per_job = grouped.at(kpi.name);
        auto it = per_job.find(job);
        if (it == per_job.end()) fail(Errc::Internal, "eligible job lost its records: " + job);
        TimeNodeMatrix m = assemble_matrix(it->second, t_len);
        m.kpi = kpi;
        PcaResult r = pca2(standardize(std::move(m)));
        slot.by_kpi.emplace(kpi.name, std::move(r));
      }
    } catch (const Error& e) {
      if (e.code() != Errc::Degenerate) throw;
      slot.by_kpi.clear();
      slot.drop_reason = e.what();
    }
  });

  for (size_t i = 0; i < eligible.size(); ++i) {
    if (!outcomes[i].drop_reason.empty()) {
      out.dropped.push_back(outcomes[i].drop_reason);
      continue;
    }
    out.job_ids.push_back(eligible[i]);
    out.pca.emplace(eligible[i], std::move(outcomes[i].by_kpi));
  }
  out.retained_hist = retained_info_table(mean_retained_per_job(out.pca));
  return out;
}

std::vector<FeatureVector> features_combined(const ProcessedJobs& p) {
  std::vector<FeatureVector> features;
  features.reserve(p.job_ids.size());
  for (const auto& job : p.job_ids) features.push_back(flatten_job(p.pca.at(job), p.catalog));
  return features;
}

std::vector<FeatureVector> features_single(const ProcessedJobs& p, const KpiId& kpi) {
  Catalog selection{kpi};
  std::vector<FeatureVector> features;
  features.reserve(p.job_ids.size());
  for (const auto& job : p.job_ids) features.push_back(flatten_job(p.pca.at(job), selection));
  return features;
}

}  // namespace kpic
