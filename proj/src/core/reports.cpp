// SPDX-License-Identifier: Apache-2.0
#include "core/reports.hpp"

#include <cmath>
#include <limits>

#include "core/csv.hpp"
#include "core/error.hpp"
#include "json.hpp"

namespace kpic {

namespace {

using ojson = nlohmann::ordered_json;

// Scores can legitimately be +inf (the Calinski-Harabasz zero-scatter
// sentinel); JSON carries those as the string "inf".
ojson score_json(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double score_from_json(const ojson& j) {
  if (j.is_string()) {
    const auto& s = j.get_ref<const std::string&>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    fail(Errc::Format, "bad score string: " + s);
  }
  return j.get<double>();
}

ojson optional_score_json(const std::optional<double>& v) {
  if (!v) return nullptr;
  return score_json(*v);
}

const std::array<IndexKind, 3> kIndexOrder{IndexKind::CalinskiHarabasz, IndexKind::DaviesBouldin,
                                           IndexKind::Silhouette};

ojson provenance_json(const SweepResult& s) {
  ojson p;
  p["seed"] = s.seed;
  p["resample_len"] = s.t_len;
  p["k_min"] = s.k_min;
  p["k_max"] = s.k_max_requested;
  p["k_max_effective"] = s.k_max_effective;
  p["restarts"] = s.restarts;
  p["n_jobs"] = s.n_samples;
  p["feature_len"] = s.feature_len;
  p["kpis"] = s.kpis;
  return p;
}

ojson method_json(const MethodSweep& m) {
  ojson j;
  j["label"] = m.method.label();
  j["algorithm"] = to_string(m.method.algorithm);
  j["metric"] = to_string(m.method.metric);
  if (m.method.is_kmeans())
    j["linkage"] = nullptr;
  else
    j["linkage"] = to_string(m.method.linkage);
  ojson optimal;
  for (IndexKind idx : kIndexOrder) {
    auto it = m.optimal.find(idx);
    if (it == m.optimal.end())
      optimal[to_string(idx)] = nullptr;
    else
      optimal[to_string(idx)] = ojson{{"k", it->second.first}, {"score", score_json(it->second.second)}};
  }
  j["optimal"] = std::move(optimal);
  ojson scores;
  for (const auto& [k, cell] : m.by_k) {
    ojson row;
    row["calinski_harabasz"] = optional_score_json(cell.calinski_harabasz);
    row["davies_bouldin"] = optional_score_json(cell.davies_bouldin);
    row["silhouette"] = optional_score_json(cell.silhouette);
    scores[fmt_int(static_cast<int64_t>(k))] = std::move(row);
  }
  j["scores"] = std::move(scores);
  return j;
}

ojson sweep_json(const SweepResult& s) {
  ojson j;
  j["provenance"] = provenance_json(s);
  ojson methods = ojson::array();
  for (const auto& m : s.methods) methods.push_back(method_json(m));
  j["methods"] = std::move(methods);
  return j;
}

std::string optimal_cells(const MethodSweep& m) {
  std::string row;
  for (IndexKind idx : kIndexOrder) {
    auto it = m.optimal.find(idx);
    if (it == m.optimal.end()) {
      row += ",,";
    } else {
      row += ',' + fmt_int(static_cast<int64_t>(it->second.first)) + ',' + fmt_double(it->second.second);
    }
  }
  return row;
}

std::string method_columns(const MethodKey& m) {
  return std::string(to_string(m.algorithm)) + "," + to_string(m.metric) + "," +
         (m.is_kmeans() ? "" : to_string(m.linkage));
}

ojson ranking_json(const KpiRanking& ranking) {
  ojson indices;
  for (IndexKind idx : kIndexOrder) {
    auto it = ranking.ranking.find(idx);
    if (it == ranking.ranking.end()) continue;
    ojson entry;
    entry["direction"] = index_maximizes(idx) ? "max" : "min";
    ojson list = ojson::array();
    for (const auto& e : it->second)
      list.push_back({{"kpi", e.kpi}, {"score", score_json(e.score)}, {"k", e.k}, {"method", e.method}});
    entry["ranking"] = std::move(list);
    entry["winners"] = ranking.index_winners.at(idx);
    indices[to_string(idx)] = std::move(entry);
  }
  ojson j;
  j["indices"] = std::move(indices);
  j["wins"] = ranking.wins;
  j["winners"] = ranking.winners;
  return j;
}

}  // namespace

std::string filter_report_json(const FilterReport& report) {
  ojson j;
  j["total_jobs"] = report.total_jobs;
  j["excluded_missing_kpis"] = report.excluded_missing_kpis;
  j["excluded_single_node"] = report.excluded_single_node;
  j["operational"] = report.operational;
  j["non_operational_eligible"] = report.non_operational_eligible;
  j["eligible_ids"] = report.eligible_ids;
  return j.dump(2) + "\n";
}

std::string node_histogram_csv(const std::array<size_t, 5>& buckets) {
  std::string out = "node_range,jobs\n";
  for (size_t i = 0; i < buckets.size(); ++i)
    out += std::string(kNodeBucketLabels[i]) + "," + fmt_int(static_cast<int64_t>(buckets[i])) + "\n";
  return out;
}

std::string retained_table_csv(const std::array<size_t, 6>& buckets) {
  std::string out = "retained_range_percent,jobs\n";
  for (size_t i = 0; i < buckets.size(); ++i)
    out += std::string(kRetainedBucketLabels[i]) + "," + fmt_int(static_cast<int64_t>(buckets[i])) + "\n";
  return out;
}

std::string experiment1_csv(const SweepResult& sweep) {
  std::string out =
      "algorithm,metric,linkage,calinski_harabasz_k,calinski_harabasz_score,"
      "davies_bouldin_k,davies_bouldin_score,silhouette_k,silhouette_score\n";
  for (const auto& m : sweep.methods) out += method_columns(m.method) + optimal_cells(m) + "\n";
  return out;
}

std::string experiment1_json(const SweepResult& sweep) { return sweep_json(sweep).dump(2) + "\n"; }

std::string experiment2_csv(const std::map<std::string, SweepResult>& per_kpi, const Catalog& order) {
  std::string header = "kpi,index";
  if (!per_kpi.empty())
    for (const auto& m : per_kpi.begin()->second.methods) {
      header += ',' + m.method.label() + "_k";
      header += ',' + m.method.label() + "_score";
    }
  std::string out = header + "\n";
  for (const auto& kpi : order) {
    auto it = per_kpi.find(kpi.name);
    if (it == per_kpi.end()) continue;
    for (IndexKind idx : kIndexOrder) {
      std::string row = kpi.name + "," + to_string(idx);
      for (const auto& m : it->second.methods) {
        auto opt = m.optimal.find(idx);
        if (opt == m.optimal.end())
          row += ",,";
        else
          row += ',' + fmt_int(static_cast<int64_t>(opt->second.first)) + ',' +
                 fmt_double(opt->second.second);
      }
      out += row + "\n";
    }
  }
  return out;
}

std::string experiment2_json(const std::map<std::string, SweepResult>& per_kpi, const Catalog& order) {
  ojson j;
  ojson kpis = ojson::array();
  for (const auto& kpi : order) {
    auto it = per_kpi.find(kpi.name);
    if (it == per_kpi.end()) continue;
    ojson entry;
    entry["kpi"] = kpi.name;
    entry["sweep"] = sweep_json(it->second);
    kpis.push_back(std::move(entry));
  }
  j["kpis"] = std::move(kpis);
  return j.dump(2) + "\n";
}

std::string comparison_json(const KpiRanking& ranking) { return ranking_json(ranking).dump(2) + "\n"; }

std::string validation_csv(const ValidationResult& result, const std::vector<std::string>& order) {
  std::string header = "algorithm,metric,linkage";
  for (const auto& kpi : order)
    for (IndexKind idx : kIndexOrder) {
      header += ',' + kpi + "_" + to_string(idx) + "_k";
      header += ',' + kpi + "_" + to_string(idx) + "_score";
    }
  std::string out = header + "\n";
  if (result.per_kpi.empty()) return out;
  const auto& first = result.per_kpi.begin()->second;
  for (size_t mi = 0; mi < first.methods.size(); ++mi) {
    std::string row = method_columns(first.methods[mi].method);
    for (const auto& kpi : order) {
      const auto& sweep = result.per_kpi.at(kpi);
      const auto& m = sweep.methods[mi];
      for (IndexKind idx : kIndexOrder) {
        auto opt = m.optimal.find(idx);
        if (opt == m.optimal.end())
          row += ",,";
        else
          row += ',' + fmt_int(static_cast<int64_t>(opt->second.first)) + ',' +
                 fmt_double(opt->second.second);
      }
    }
    out += row + "\n";
  }
  return out;
}

std::string validation_json(const ValidationResult& result, const std::vector<std::string>& order) {
  ojson j;
  ojson kpis = ojson::array();
  for (const auto& kpi : order) {
    auto it = result.per_kpi.find(kpi);
    if (it == result.per_kpi.end()) continue;
    ojson entry;
    entry["kpi"] = kpi;
    entry["sweep"] = sweep_json(it->second);
    kpis.push_back(std::move(entry));
  }
  j["kpis"] = std::move(kpis);
  ojson cmp = ranking_json(result.comparison.ranking);
  cmp["dominant_kpi"] =
      result.comparison.dominant_kpi ? ojson(*result.comparison.dominant_kpi) : ojson(nullptr);
  j["comparison"] = std::move(cmp);
  return j.dump(2) + "\n";
}

std::string plot_csv(const SweepResult& sweep) {
  std::string out = "method,index,k,score\n";
  for (const auto& m : sweep.methods)
    for (IndexKind idx : kIndexOrder)
      for (const auto& [k, cell] : m.by_k) {
        auto v = cell.get(idx);
        if (!v) continue;
        out += m.method.label() + "," + to_string(idx) + "," + fmt_int(static_cast<int64_t>(k)) +
               "," + fmt_double(*v) + "\n";
      }
  return out;
}

std::string plot_csv_per_kpi(const std::map<std::string, SweepResult>& per_kpi,
                             const std::vector<std::string>& order) {
  std::string out = "kpi,method,index,k,score\n";
  for (const auto& kpi : order) {
    auto it = per_kpi.find(kpi);
    if (it == per_kpi.end()) continue;
    for (const auto& m : it->second.methods)
      for (IndexKind idx : kIndexOrder)
        for (const auto& [k, cell] : m.by_k) {
          auto v = cell.get(idx);
          if (!v) continue;
          out += kpi + "," + m.method.label() + "," + to_string(idx) + "," +
                 fmt_int(static_cast<int64_t>(k)) + "," + fmt_double(*v) + "\n";
        }
  }
  return out;
}

std::map<std::string, SweepResult> sweeps_from_experiment2_json(const std::string& text) {
  ojson j;
  try {
    j = ojson::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::Format, std::string("experiment2 JSON parse error: ") + e.what());
  }
  if (!j.contains("kpis") || !j["kpis"].is_array())
    fail(Errc::Format, "experiment2 JSON lacks a 'kpis' array");
  std::map<std::string, SweepResult> out;
  for (const auto& entry : j["kpis"]) {
    SweepResult sweep;
    const auto& sj = entry.at("sweep");
    const auto& prov = sj.at("provenance");
    sweep.seed = prov.at("seed").get<uint64_t>();
    sweep.t_len = prov.at("resample_len").get<size_t>();
    sweep.k_min = prov.at("k_min").get<size_t>();
    sweep.k_max_requested = prov.at("k_max").get<size_t>();
    sweep.k_max_effective = prov.at("k_max_effective").get<size_t>();
    sweep.restarts = prov.at("restarts").get<unsigned>();
    sweep.n_samples = prov.at("n_jobs").get<size_t>();
    sweep.feature_len = prov.at("feature_len").get<size_t>();
    sweep.kpis = prov.at("kpis").get<std::vector<std::string>>();
    for (const auto& mj : sj.at("methods")) {
      MethodSweep m;
      m.method.algorithm = algorithm_from_string(mj.at("algorithm").get<std::string>());
      m.method.metric = metric_from_string(mj.at("metric").get<std::string>());
      if (!mj.at("linkage").is_null())
        m.method.linkage = linkage_from_string(mj.at("linkage").get<std::string>());
      for (IndexKind idx : kIndexOrder) {
        const auto& oj = mj.at("optimal").at(to_string(idx));
        if (oj.is_null()) continue;
        m.optimal[idx] = {oj.at("k").get<size_t>(), score_from_json(oj.at("score"))};
      }
      for (const auto& [key, cell] : mj.at("scores").items()) {
        size_t k = static_cast<size_t>(std::stoull(key));
        CellScores cs;
        if (!cell.at("calinski_harabasz").is_null())
          cs.calinski_harabasz = score_from_json(cell.at("calinski_harabasz"));
        if (!cell.at("davies_bouldin").is_null())
          cs.davies_bouldin = score_from_json(cell.at("davies_bouldin"));
        if (!cell.at("silhouette").is_null()) cs.silhouette = score_from_json(cell.at("silhouette"));
        m.by_k[k] = cs;
      }
      sweep.methods.push_back(std::move(m));
    }
    out.emplace(entry.at("kpi").get<std::string>(), std::move(sweep));
  }
  if (out.empty()) fail(Errc::Format, "experiment2 JSON holds no KPI sweeps");
  return out;
}

}  // namespace kpic
