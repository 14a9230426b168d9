// SPDX-License-Identifier: Apache-2.0
#include "core/pipeline.hpp"

#include <charconv>
#include <chrono>
#include <fstream>
#include <set>
#include <thread>

#include "core/csv.hpp"
#include "core/error.hpp"
#include "core/reports.hpp"
#include "json.hpp"

namespace kpic {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

namespace {

const std::set<std::string> kKnownKeys = {
    "kpi_dir", "catalog", "flags", "out", "resample_len", "k_min", "k_max", "algorithms",
    "metrics", "linkages", "indices", "seed", "restarts", "jobs_parallel", "dump_matrices",
    "select_kpis", "experiment2_json", "synth_jobs", "synth_groups", "synth_proportions",
    "synth_node_buckets", "synth_kpis", "synth_signal_kpis", "synth_duration_min",
    "synth_duration_max", "synth_sample_interval", "synth_noise_sigma", "synth_operational",
    "synth_missing_kpi", "synth_single_node"};

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  size_t start = 0;
  while (start <= s.size()) {
    size_t pos = s.find(',', start);
    std::string item = s.substr(start, pos == std::string::npos ? std::string::npos : pos - start);
    if (!item.empty()) out.push_back(item);
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

uint64_t parse_u64(const std::string& key, const std::string& s) {
  uint64_t v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    fail(Errc::Config, "bad integer for " + key + ": '" + s + "'");
  return v;
}

double parse_double(const std::string& key, const std::string& s) {
  double v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    fail(Errc::Config, "bad number for " + key + ": '" + s + "'");
  return v;
}

bool parse_bool(const std::string& key, const std::string& s) {
  if (s == "true" || s == "1") return true;
  if (s == "false" || s == "0") return false;
  fail(Errc::Config, "bad boolean for " + key + ": '" + s + "'");
}

std::string iso_now() {
  auto now = std::chrono::system_clock::now();
  std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

/// Collects written artifact paths so a failing command can clean up after
/// itself; the manifest is written last.
class ArtifactSink {
 public:
  explicit ArtifactSink(fs::path dir) : dir_(std::move(dir)) {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec) fail(Errc::Io, "cannot create output directory: " + dir_.string());
  }

  void write(const fs::path& rel, const std::string& content) {
    fs::path path = dir_ / rel;
    if (rel.has_parent_path()) {
      std::error_code ec;
      fs::create_directories(path.parent_path(), ec);
      if (ec) fail(Errc::Io, "cannot create directory: " + path.parent_path().string());
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(Errc::Io, "cannot write " + path.string());
    out << content;
    out.close();
    if (!out) fail(Errc::Io, "failed writing " + path.string());
    written_.push_back(rel);
  }

  void adopt(const std::vector<fs::path>& absolute) {
    for (const auto& p : absolute) written_.push_back(fs::relative(p, dir_));
  }

  void discard_all() {
    std::error_code ec;
    for (const auto& rel : written_) fs::remove(dir_ / rel, ec);
    written_.clear();
  }

  const std::vector<fs::path>& artifacts() const { return written_; }
  const fs::path& dir() const { return dir_; }

 private:
  fs::path dir_;
  std::vector<fs::path> written_;
};

struct Timing {
  std::string started_at = iso_now();
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
};

void write_manifest(ArtifactSink& sink, const std::string& command, const RunOptions& opts,
                    const Timing& timing, ojson extra = ojson::object()) {
  ojson m;
  m["command"] = command;
  m["version"] = kVersion;
  m["seed"] = opts.sweep.seed;
  ojson cfg;
  for (const auto& [k, v] : opts.raw) cfg[k] = v;
  m["config"] = std::move(cfg);
  ojson artifacts = ojson::array();
  for (const auto& p : sink.artifacts()) artifacts.push_back(p.generic_string());
  m["artifacts"] = std::move(artifacts);
  for (auto& [k, v] : extra.items()) m[k] = v;
  double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - timing.t0).count();
  m["timing"] = ojson{{"started_at", timing.started_at},
                      {"finished_at", iso_now()},
                      {"duration_ms", ms}};
  sink.write(command + "_manifest.json", m.dump(2) + "\n");
}

template <typename Fn>
void with_cleanup(ArtifactSink& sink, Fn&& fn) {
  try {
    fn();
  } catch (...) {
    sink.discard_all();
    throw;
  }
}

Catalog resolve_catalog(const RunOptions& opts) {
  return opts.catalog_file.empty() ? default_catalog() : load_catalog_file(opts.catalog_file);
}

void require(bool ok, const std::string& what) {
  if (!ok) fail(Errc::Config, "missing required option: " + what);
}

ProcessedJobs load_and_process(const RunOptions& opts, const Catalog& catalog) {
  require(!opts.kpi_dir.empty(), "kpi_dir");
  require(!opts.flags_file.empty(), "flags");
  auto flags = load_flags_file(opts.flags_file);
  Dataset ds = load_dataset(opts.kpi_dir, catalog, flags);
  return process_dataset(ds, opts.resample_len, opts.sweep.threads);
}

ojson dataset_summary(const ProcessedJobs& p) {
  ojson j;
  j["eligible_jobs"] = p.report.non_operational_eligible;
  j["processed_jobs"] = p.job_ids.size();
  j["dropped_degenerate"] = p.dropped;
  return j;
}

std::string matrix_dump_csv(const TimeNodeMatrix& m) {
  std::string out = "grid";
  for (const auto& node : m.node_ids) out += "," + node;
  out += "\n";
  for (size_t i = 0; i < m.t_len(); ++i) {
    out += fmt_double(m.grid[i]);
    for (size_t c = 0; c < m.node_count(); ++c) out += "," + fmt_double(m.values.at(i, c));
    out += "\n";
  }
  return out;
}

}  // namespace

RunOptions RunOptions::parse(const std::map<std::string, std::string>& kv) {
  RunOptions o;
  o.raw = kv;
  for (const auto& [key, value] : kv)
    if (!kKnownKeys.count(key)) fail(Errc::Config, "unknown configuration key: " + key);

  auto get = [&](const char* key) -> const std::string* {
    auto it = kv.find(key);
    return it == kv.end() ? nullptr : &it->second;
  };

  if (auto* v = get("kpi_dir")) o.kpi_dir = *v;
  if (auto* v = get("catalog")) o.catalog_file = *v;
  if (auto* v = get("flags")) o.flags_file = *v;
  if (auto* v = get("out")) o.out_dir = *v;
  if (auto* v = get("resample_len")) o.resample_len = parse_u64("resample_len", *v);
  if (o.resample_len < 2) fail(Errc::Config, "resample_len must be >= 2");
  o.sweep.t_len = o.resample_len;

  if (auto* v = get("k_min")) o.sweep.k_min = parse_u64("k_min", *v);
  if (auto* v = get("k_max")) o.sweep.k_max = parse_u64("k_max", *v);
  if (auto* v = get("seed")) o.sweep.seed = parse_u64("seed", *v);
  if (auto* v = get("restarts")) o.sweep.restarts = static_cast<unsigned>(parse_u64("restarts", *v));
  if (auto* v = get("jobs_parallel"))
    o.sweep.threads = static_cast<unsigned>(parse_u64("jobs_parallel", *v));
  else
    o.sweep.threads = std::max(1u, std::thread::hardware_concurrency());
  if (auto* v = get("dump_matrices")) o.dump_matrices = parse_bool("dump_matrices", *v);
  if (auto* v = get("select_kpis")) o.select_kpis = split_list(*v);
  if (auto* v = get("experiment2_json")) o.experiment2_json_path = *v;

  if (auto* v = get("algorithms")) {
    o.sweep.algorithms.clear();
    for (const auto& s : split_list(*v)) o.sweep.algorithms.push_back(algorithm_from_string(s));
  }
  if (auto* v = get("metrics")) {
    o.sweep.metrics.clear();
    for (const auto& s : split_list(*v)) o.sweep.metrics.push_back(metric_from_string(s));
  }
  if (auto* v = get("linkages")) {
    o.sweep.linkages.clear();
    for (const auto& s : split_list(*v)) o.sweep.linkages.push_back(linkage_from_string(s));
  }
  if (auto* v = get("indices")) {
    o.sweep.indices.clear();
    for (const auto& s : split_list(*v)) o.sweep.indices.push_back(index_from_string(s));
  }
  validate_config(o.sweep);

  if (auto* v = get("synth_jobs")) o.synth.n_jobs = parse_u64("synth_jobs", *v);
  if (auto* v = get("synth_groups")) o.synth.groups = parse_u64("synth_groups", *v);
  if (auto* v = get("synth_proportions")) {
    o.synth.proportions.clear();
    for (const auto& s : split_list(*v)) o.synth.proportions.push_back(parse_double("synth_proportions", s));
  }
  if (auto* v = get("synth_node_buckets")) {
    auto parts = split_list(*v);
    if (parts.size() != 5) fail(Errc::Config, "synth_node_buckets needs 5 probabilities");
    for (size_t i = 0; i < 5; ++i) o.synth.node_buckets[i] = parse_double("synth_node_buckets", parts[i]);
  }
  if (auto* v = get("synth_kpis")) {
    Catalog full = o.catalog_file.empty() ? default_catalog() : load_catalog_file(o.catalog_file);
    o.synth.kpis.clear();
    for (const auto& name : split_list(*v)) {
      bool found = false;
      for (const auto& kpi : full)
        if (kpi.name == name) {
          o.synth.kpis.push_back(kpi);
          found = true;
        }
      if (!found) fail(Errc::Config, "synth_kpis entry not in catalog: " + name);
    }
  }
  if (auto* v = get("synth_signal_kpis")) o.synth.signal_kpis = split_list(*v);
  if (auto* v = get("synth_duration_min")) o.synth.duration_min = parse_double("synth_duration_min", *v);
  if (auto* v = get("synth_duration_max")) o.synth.duration_max = parse_double("synth_duration_max", *v);
  if (auto* v = get("synth_sample_interval"))
    o.synth.sample_interval = parse_double("synth_sample_interval", *v);
  if (auto* v = get("synth_noise_sigma")) o.synth.noise_sigma = parse_double("synth_noise_sigma", *v);
  if (auto* v = get("synth_operational")) o.synth.n_operational = parse_u64("synth_operational", *v);
  if (auto* v = get("synth_missing_kpi")) o.synth.n_missing_kpi = parse_u64("synth_missing_kpi", *v);
  if (auto* v = get("synth_single_node")) o.synth.n_single_node = parse_u64("synth_single_node", *v);
  o.synth.seed = o.sweep.seed;
  return o;
}

void run_synth(const RunOptions& opts) {
  require(!opts.out_dir.empty(), "out");
  Timing timing;
  ArtifactSink sink(opts.out_dir);
  with_cleanup(sink, [&] {
    if (!opts.catalog_file.empty() && opts.synth.kpis.empty()) {
      RunOptions patched = opts;
      patched.synth.kpis = load_catalog_file(opts.catalog_file);
      SynthData data = generate(patched.synth);
      sink.adopt(write_dataset(data, opts.out_dir));
    } else {
      SynthData data = generate(opts.synth);
      sink.adopt(write_dataset(data, opts.out_dir));
    }
    ojson extra;
    extra["n_jobs"] = opts.synth.n_jobs;
    extra["groups"] = opts.synth.groups;
    write_manifest(sink, "synth", opts, timing, std::move(extra));
  });
}

void run_ingest(const RunOptions& opts) {
  require(!opts.out_dir.empty(), "out");
  require(!opts.kpi_dir.empty(), "kpi_dir");
  require(!opts.flags_file.empty(), "flags");
  Timing timing;
  ArtifactSink sink(opts.out_dir);
  with_cleanup(sink, [&] {
    Catalog catalog = resolve_catalog(opts);
    auto flags = load_flags_file(opts.flags_file);
    Dataset ds = load_dataset(opts.kpi_dir, catalog, flags);
    JobRegistry registry = build_job_registry(ds.records, ds.flags);
    FilterReport report = filter_jobs(registry, catalog);
    auto hist = node_count_histogram(report, registry);

    sink.write("filter_report.json", filter_report_json(report));
    sink.write("node_histogram.csv", node_histogram_csv(hist));
    ojson extra;
    extra["parse_skips"] = ds.parse_skips;
    write_manifest(sink, "ingest", opts, timing, std::move(extra));
  });
}

void run_preprocess(const RunOptions& opts) {
  require(!opts.out_dir.empty(), "out");
  Timing timing;
  ArtifactSink sink(opts.out_dir);
  with_cleanup(sink, [&] {
    Catalog catalog = resolve_catalog(opts);
    require(!opts.kpi_dir.empty(), "kpi_dir");
    require(!opts.flags_file.empty(), "flags");
    auto flags = load_flags_file(opts.flags_file);
    Dataset ds = load_dataset(opts.kpi_dir, catalog, flags);
    ProcessedJobs processed = process_dataset(ds, opts.resample_len, opts.sweep.threads);

    sink.write("filter_report.json", filter_report_json(processed.report));
    sink.write("node_histogram.csv", node_histogram_csv(processed.node_hist));
    sink.write("retained_info.csv", retained_table_csv(processed.retained_hist));

    if (opts.dump_matrices) {
      std::map<std::string, std::map<std::string, std::vector<KpiRecord>>> grouped;
      for (const auto& [kpi_name, records] : ds.records)
        for (const auto& r : records) grouped[kpi_name][r.job_id].push_back(r);
      for (const auto& job : processed.job_ids)
        for (const auto& kpi : catalog) {
          TimeNodeMatrix m = assemble_matrix(grouped.at(kpi.name).at(job), opts.resample_len);
          m.kpi = kpi;
          m = standardize(std::move(m));
          sink.write(fs::path("matrices") / (job + "__" + kpi.name + ".csv"), matrix_dump_csv(m));
        }
    }
    write_manifest(sink, "preprocess", opts, timing, dataset_summary(processed));
  });
}

void run_experiment1(const RunOptions& opts) {
  require(!opts.out_dir.empty(), "out");
  Timing timing;
  ArtifactSink sink(opts.out_dir);
  with_cleanup(sink, [&] {
    Catalog catalog = resolve_catalog(opts);
    ProcessedJobs processed = load_and_process(opts, catalog);
    SweepResult sweep = experiment_one(processed, opts.sweep);

    sink.write("experiment1.csv", experiment1_csv(sweep));
    sink.write("experiment1.json", experiment1_json(sweep));
    sink.write("experiment1_plot.csv", plot_csv(sweep));
    sink.write("retained_info.csv", retained_table_csv(processed.retained_hist));
    write_manifest(sink, "experiment1", opts, timing, dataset_summary(processed));
  });
}

void run_experiment2(const RunOptions& opts) {
  require(!opts.out_dir.empty(), "out");
  Timing timing;
  ArtifactSink sink(opts.out_dir);
  with_cleanup(sink, [&] {
    Catalog catalog = resolve_catalog(opts);
    ProcessedJobs processed = load_and_process(opts, catalog);
    auto sweeps = experiment_two(processed, opts.sweep);

    std::vector<std::string> order;
    for (const auto& kpi : catalog) order.push_back(kpi.name);
    sink.write("experiment2.csv", experiment2_csv(sweeps, catalog));
    sink.write("experiment2.json", experiment2_json(sweeps, catalog));
    sink.write("experiment2_plot.csv", plot_csv_per_kpi(sweeps, order));
    sink.write("retained_info.csv", retained_table_csv(processed.retained_hist));
    write_manifest(sink, "experiment2", opts, timing, dataset_summary(processed));
  });
}

void run_compare(const RunOptions& opts) {
  require(!opts.out_dir.empty(), "out");
  Timing timing;
  ArtifactSink sink(opts.out_dir);
  with_cleanup(sink, [&] {
    fs::path src = opts.experiment2_json_path.empty() ? opts.out_dir / "experiment2.json"
                                                      : opts.experiment2_json_path;
    std::ifstream in(src);
    if (!in) fail(Errc::Io, "cannot open experiment2 JSON: " + src.string());
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    auto sweeps = sweeps_from_experiment2_json(text);
    KpiRanking ranking = compare_kpis(sweeps);
    sink.write("comparison.json", comparison_json(ranking));
    ojson extra;
    extra["source"] = src.generic_string();
    write_manifest(sink, "compare", opts, timing, std::move(extra));
  });
}

void run_validation(const RunOptions& opts) {
  require(!opts.out_dir.empty(), "out");
  Timing timing;
  ArtifactSink sink(opts.out_dir);
  with_cleanup(sink, [&] {
    Catalog catalog = resolve_catalog(opts);
    ProcessedJobs processed = load_and_process(opts, catalog);

    std::vector<std::string> selection = opts.select_kpis;
    if (selection.empty()) {
      // default: the network-traffic KPIs
      for (const auto& kpi : catalog)
        if (kpi.category == KpiCategory::NetworkTraffic) selection.push_back(kpi.name);
    }
    ValidationResult result = validation_harness(processed, selection, opts.sweep);

    sink.write("validation.csv", validation_csv(result, selection));
    sink.write("validation.json", validation_json(result, selection));
    sink.write("validation_plot.csv", plot_csv_per_kpi(result.per_kpi, selection));
    ojson extra = dataset_summary(processed);
    extra["selected_kpis"] = selection;
    extra["dominant_kpi"] = result.comparison.dominant_kpi
                                ? ojson(*result.comparison.dominant_kpi)
                                : ojson(nullptr);
    write_manifest(sink, "validation", opts, timing, std::move(extra));
  });
}

}  // namespace kpic
