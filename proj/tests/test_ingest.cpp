// SPDX-License-Identifier: Apache-2.0
#include <algorithm>
#include <numeric>
#include <sstream>

#include "core/error.hpp"
#include "core/ingest.hpp"
#include "core/rng.hpp"
#include "doctest.h"

using namespace kpic;

namespace {

const KpiId kRx{"interface.bond0.if_octets.rx", KpiCategory::NetworkTraffic};

ParsedKpi parse(const std::string& text) {
  std::istringstream in(text);
  return parse_kpi_records(in, kRx);
}

// registry with one job covering `kpis` on `n_nodes` nodes
void add_job(JobRegistry& reg, const std::string& job, const std::vector<std::string>& kpis,
             size_t n_nodes, bool operational) {
  JobInfo& info = reg.jobs[job];
  info.operational = operational;
  for (const auto& kpi : kpis) {
    auto& stats = info.per_kpi[kpi];
    for (size_t n = 0; n < n_nodes; ++n) stats.nodes.insert("n" + std::to_string(n));
    stats.min_ts = 0;
    stats.max_ts = 100;
  }
}

std::vector<std::string> names(const Catalog& catalog) {
  std::vector<std::string> out;
  for (const auto& kpi : catalog) out.push_back(kpi.name);
  return out;
}

}  // namespace

TEST_CASE("parse: single well-formed row") {
  auto r = parse("timestamp,job_id,node_id,value\n0,j1,n1,2.5");
  REQUIRE(r.records.size() == 1);
  CHECK(r.records[0].timestamp == 0);
  CHECK(r.records[0].job_id == "j1");
  CHECK(r.records[0].node_id == "n1");
  CHECK(r.records[0].value == 2.5);
  CHECK(r.skipped == 0);
}

TEST_CASE("parse: non-finite values are skipped and counted") {
  auto r = parse("timestamp,job_id,node_id,value\n0,j1,n1,nan\n1,j1,n1,inf\n2,j1,n1,1.0");
  CHECK(r.records.size() == 1);
  CHECK(r.skipped == 2);
}

TEST_CASE("parse: malformed rows in a fixture") {
  auto r = parse(
      "timestamp,job_id,node_id,value\n"
      "10,j1,n1,1.0\n"
      "11,j1,n2,not_a_number\n"
      "12,j1,n1,2.0\n"
      "13,j2,n1,3.0\n");
  CHECK(r.records.size() == 3);
  CHECK(r.skipped == 1);
}

TEST_CASE("parse: field-count and timestamp errors are skipped") {
  auto r = parse(
      "timestamp,job_id,node_id,value\n"
      "1,j1,n1\n"
      "-5,j1,n1,1.0\n"
      "x,j1,n1,1.0\n"
      "1,j1,n1,1.0,extra\n"
      "7,j1,n1,1.0\n");
  CHECK(r.records.size() == 1);
  CHECK(r.skipped == 4);
}

TEST_CASE("parse: bad header is a format error") {
  std::istringstream in("time,job,node,value\n1,j,n,1.0");
  CHECK_THROWS_WITH_AS(parse_kpi_records(in, kRx), doctest::Contains("header"), Error);
  std::istringstream empty("");
  CHECK_THROWS_AS(parse_kpi_records(empty, kRx), Error);
}

TEST_CASE("parse: crlf and blank lines are tolerated") {
  auto r = parse("timestamp,job_id,node_id,value\r\n1,j1,n1,1.5\r\n\n");
  CHECK(r.records.size() == 1);
  CHECK(r.records[0].value == 1.5);
  CHECK(r.skipped == 0);
}

TEST_CASE("registry: node sets and spans per (job, KPI)") {
  std::map<std::string, std::vector<KpiRecord>> records;
  records["a"] = {{0, "j1", "n1", 1.0}, {10, "j1", "n2", 2.0}, {5, "j1", "n1", 3.0}};
  auto reg = build_job_registry(records, {{"j1", false}});
  REQUIRE(reg.jobs.count("j1") == 1);
  const auto& stats = reg.jobs["j1"].per_kpi["a"];
  CHECK(stats.nodes.size() == 2);
  CHECK(stats.min_ts == 0);
  CHECK(stats.max_ts == 10);
  CHECK_FALSE(reg.jobs["j1"].operational);
}

TEST_CASE("registry: jobs absent from the flags file default to operational") {
  std::map<std::string, std::vector<KpiRecord>> records;
  records["a"] = {{0, "j1", "n1", 1.0}};
  auto reg = build_job_registry(records, {});
  CHECK(reg.jobs["j1"].operational);
}

TEST_CASE("registry: job missing from one KPI has no entry for it") {
  std::map<std::string, std::vector<KpiRecord>> records;
  records["a"] = {{0, "j1", "n1", 1.0}, {0, "j2", "n1", 1.0}, {0, "j3", "n1", 1.0}};
  records["b"] = {{0, "j1", "n1", 1.0}, {0, "j3", "n1", 1.0}};
  auto reg = build_job_registry(records, {});
  CHECK(reg.jobs["j2"].per_kpi.count("b") == 0);
  CHECK(reg.jobs["j1"].per_kpi.count("b") == 1);
  CHECK(reg.jobs.size() == 3);
}

TEST_CASE("filter: single eligible job") {
  JobRegistry reg;
  Catalog catalog = default_catalog();
  add_job(reg, "j1", names(catalog), 2, false);
  auto report = filter_jobs(reg, catalog);
  CHECK(report.total_jobs == 1);
  CHECK(report.excluded_missing_kpis == 0);
  CHECK(report.excluded_single_node == 0);
  CHECK(report.operational == 0);
  CHECK(report.non_operational_eligible == 1);
  CHECK(report.eligible_ids == std::vector<std::string>{"j1"});
}

TEST_CASE("filter: missing-KPIs precedes single-node in the exclusion order") {
  Catalog catalog = default_catalog();
  auto partial = names(catalog);
  partial.pop_back();  // 10 of 11 KPIs
  JobRegistry reg;
  add_job(reg, "j1", partial, 5, false);
  auto report = filter_jobs(reg, catalog);
  CHECK(report.excluded_missing_kpis == 1);
  CHECK(report.excluded_single_node == 0);
  CHECK(report.non_operational_eligible == 0);
}

TEST_CASE("filter: single-node precedes operational in the exclusion order") {
  Catalog catalog = default_catalog();
  JobRegistry reg;
  add_job(reg, "j1", names(catalog), 1, true);
  auto report = filter_jobs(reg, catalog);
  CHECK(report.excluded_single_node == 1);
  CHECK(report.operational == 0);
}

TEST_CASE("filter: empty catalog is a configuration error") {
  JobRegistry reg;
  CHECK_THROWS_AS(filter_jobs(reg, {}), Error);
}

TEST_CASE("filter: dataset-shaped fixture (1,783 jobs)") {
  // 56 missing a KPI, 144 single-node, 1,281 operational, 302 eligible
  Catalog catalog = default_catalog();
  auto all = names(catalog);
  auto partial = all;
  partial.pop_back();
  JobRegistry reg;
  size_t id = 0;
  auto next_id = [&] {
    char buf[16];
    std::snprintf(buf, sizeof buf, "j%04zu", id++);
    return std::string(buf);
  };
  for (size_t i = 0; i < 56; ++i) add_job(reg, next_id(), partial, 4, false);
  for (size_t i = 0; i < 144; ++i) add_job(reg, next_id(), all, 1, i % 2 == 0);
  for (size_t i = 0; i < 1281; ++i) add_job(reg, next_id(), all, 2 + i % 4, true);
  for (size_t i = 0; i < 302; ++i) add_job(reg, next_id(), all, 2 + i % 4, false);

  auto report = filter_jobs(reg, catalog);
  CHECK(report.total_jobs == 1783);
  CHECK(report.excluded_missing_kpis == 56);
  CHECK(report.excluded_single_node == 144);
  CHECK(report.operational == 1281);
  CHECK(report.non_operational_eligible == 302);
  CHECK(report.eligible_ids.size() == 302);
  CHECK(std::is_sorted(report.eligible_ids.begin(), report.eligible_ids.end()));
}

TEST_CASE("histogram: single eligible 2-node job") {
  Catalog catalog = default_catalog();
  JobRegistry reg;
  add_job(reg, "j1", names(catalog), 2, false);
  auto report = filter_jobs(reg, catalog);
  auto hist = node_count_histogram(report, reg);
  CHECK(hist == std::array<size_t, 5>{1, 0, 0, 0, 0});
}

TEST_CASE("histogram: per-job node count is the max across KPIs") {
  Catalog catalog{{"a", KpiCategory::CpuUsage}, {"b", KpiCategory::CpuUsage}};
  JobRegistry reg;
  JobInfo& info = reg.jobs["j1"];
  info.operational = false;
  for (size_t n = 0; n < 3; ++n) info.per_kpi["a"].nodes.insert("n" + std::to_string(n));
  for (size_t n = 0; n < 7; ++n) info.per_kpi["b"].nodes.insert("n" + std::to_string(n));
  auto report = filter_jobs(reg, catalog);
  auto hist = node_count_histogram(report, reg);
  CHECK(hist == std::array<size_t, 5>{0, 1, 0, 0, 0});
}

namespace {

// exact bucket layouts mirroring the two monitored datasets
void fill_bucketed(JobRegistry& reg, const Catalog& catalog, const std::array<size_t, 5>& counts) {
  const size_t sizes[5] = {3, 8, 12, 17, 25};
  size_t id = 0;
  for (size_t b = 0; b < 5; ++b)
    for (size_t i = 0; i < counts[b]; ++i) {
      char buf[16];
      std::snprintf(buf, sizeof buf, "j%04zu", id++);
      add_job(reg, buf, names(catalog), sizes[b], false);
    }
}

}  // namespace

TEST_CASE("histogram: 302-job bucket layout") {
  Catalog catalog = default_catalog();
  JobRegistry reg;
  fill_bucketed(reg, catalog, {195, 49, 15, 13, 30});
  auto report = filter_jobs(reg, catalog);
  REQUIRE(report.non_operational_eligible == 302);
  auto hist = node_count_histogram(report, reg);
  CHECK(hist == std::array<size_t, 5>{195, 49, 15, 13, 30});
}

TEST_CASE("histogram: 1,500-job bucket layout") {
  Catalog catalog = default_catalog();
  JobRegistry reg;
  fill_bucketed(reg, catalog, {856, 320, 74, 56, 194});
  auto report = filter_jobs(reg, catalog);
  REQUIRE(report.non_operational_eligible == 1500);
  auto hist = node_count_histogram(report, reg);
  CHECK(hist == std::array<size_t, 5>{856, 320, 74, 56, 194});
}

TEST_CASE("property: histogram buckets sum to the eligible count") {
  Rng rng(1234);
  Catalog catalog{{"a", KpiCategory::CpuUsage}, {"b", KpiCategory::SystemLoad}};
  for (int trial = 0; trial < 50; ++trial) {
    JobRegistry reg;
    size_t n = 1 + rand_index(rng, 40);
    for (size_t i = 0; i < n; ++i) {
      std::vector<std::string> kpis = names(catalog);
      if (rand_unit(rng) < 0.2) kpis.pop_back();
      add_job(reg, "j" + std::to_string(i), kpis, 1 + rand_index(rng, 30), rand_unit(rng) < 0.4);
    }
    auto report = filter_jobs(reg, catalog);
    auto hist = node_count_histogram(report, reg);
    size_t total = std::accumulate(hist.begin(), hist.end(), size_t{0});
    CHECK(total == report.non_operational_eligible);
    CHECK(report.non_operational_eligible == report.eligible_ids.size());
  }
}

TEST_CASE("property: filtering is invariant under record order") {
  Rng rng(99);
  Catalog catalog{{"a", KpiCategory::CpuUsage}, {"b", KpiCategory::SystemLoad}};
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<std::pair<std::string, KpiRecord>> flat;  // (kpi, record)
    std::map<std::string, bool> flags;
    size_t n = 2 + rand_index(rng, 15);
    for (size_t i = 0; i < n; ++i) {
      std::string job = "j" + std::to_string(i);
      flags[job] = rand_unit(rng) < 0.3;
      size_t nodes = 1 + rand_index(rng, 5);
      for (const auto& kpi : catalog) {
        if (rand_unit(rng) < 0.15) continue;
        for (size_t m = 0; m < nodes; ++m)
          for (int s = 0; s < 3; ++s)
            flat.push_back({kpi.name,
                            {static_cast<int64_t>(s * 10), job, "n" + std::to_string(m),
                             rand_normal(rng)}});
      }
    }
    auto build = [&](const std::vector<std::pair<std::string, KpiRecord>>& rows) {
      std::map<std::string, std::vector<KpiRecord>> per_kpi;
      for (const auto& [kpi, rec] : rows) per_kpi[kpi].push_back(rec);
      return filter_jobs(build_job_registry(per_kpi, flags), catalog);
    };
    FilterReport base = build(flat);

    std::vector<std::pair<std::string, KpiRecord>> shuffled = flat;
    for (size_t i = shuffled.size(); i > 1; --i)
      std::swap(shuffled[i - 1], shuffled[rand_index(rng, i)]);
    CHECK(build(shuffled) == base);
    CHECK(build(flat) == base);  // idempotent
  }
}

TEST_CASE("property: every eligible job has >= 2 nodes in every catalog KPI") {
  Rng rng(4321);
  Catalog catalog{{"a", KpiCategory::CpuUsage}, {"b", KpiCategory::SystemLoad}};
  for (int trial = 0; trial < 30; ++trial) {
    JobRegistry reg;
    size_t n = 1 + rand_index(rng, 25);
    for (size_t i = 0; i < n; ++i) {
      std::vector<std::string> kpis = names(catalog);
      if (rand_unit(rng) < 0.25) kpis.erase(kpis.begin());
      add_job(reg, "j" + std::to_string(i), kpis, 1 + rand_index(rng, 4), rand_unit(rng) < 0.5);
    }
    auto report = filter_jobs(reg, catalog);
    for (const auto& job : report.eligible_ids) {
      const auto& info = reg.jobs.at(job);
      CHECK_FALSE(info.operational);
      for (const auto& kpi : catalog) {
        REQUIRE(info.per_kpi.count(kpi.name) == 1);
        CHECK(info.per_kpi.at(kpi.name).nodes.size() >= 2);
      }
    }
  }
}
