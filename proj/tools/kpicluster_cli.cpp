// SPDX-License-Identifier: Apache-2.0
//
// Command-line front door for the kpicluster shared library. Every
// subcommand maps its flags onto the library's key/value configuration and
// invokes the matching kpic_run_* entry point; the C API owns validation,
// the pipeline work and all artifact writing.

#include <cstdio>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "kpicluster.h"

namespace {

struct ConfigDeleter {
  void operator()(kpic_config* cfg) const { kpic_config_free(cfg); }
};
using ConfigPtr = std::unique_ptr<kpic_config, ConfigDeleter>;

std::string json_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  return out;
}

int fail_with(kpic_status status) {
  std::fprintf(stderr, "{\"error\":\"%s\",\"message\":\"%s\"}\n", kpic_status_name(status),
               json_escape(kpic_last_error()).c_str());
  return static_cast<int>(status);
}

// Options shared by the commands; empty strings mean "not set".
struct Flags {
  std::string kpi_dir, catalog, flags, out;
  std::string algorithms, metrics, linkages, indices, select_kpis, experiment2_json;
  std::string synth_proportions, synth_node_buckets, synth_kpis, synth_signal_kpis;
  uint64_t resample_len = 0, k_min = 0, k_max = 0, seed = 0, restarts = 0, jobs_parallel = 0;
  bool has_seed = false, dump_matrices = false;
  uint64_t synth_jobs = 0, synth_groups = 0, synth_operational = 0, synth_missing_kpi = 0,
           synth_single_node = 0;
  double synth_duration_min = 0, synth_duration_max = 0, synth_sample_interval = 0,
         synth_noise_sigma = -1;
};

void add_io_flags(CLI::App* cmd, Flags& f, bool need_inputs) {
  if (need_inputs) {
    cmd->add_option("--kpi-dir", f.kpi_dir, "Directory of per-KPI CSV files")->required();
    cmd->add_option("--flags", f.flags, "Jobs metadata CSV (job_id,operational)")->required();
  }
  cmd->add_option("--catalog", f.catalog, "KPI catalog JSON (default: built-in 11-KPI catalog)");
  cmd->add_option("--out", f.out, "Output directory")->required();
}

void add_sweep_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--resample-len", f.resample_len, "Time grid length T (default 128)");
  cmd->add_option("--k-min", f.k_min, "Smallest cluster count (default 2)");
  cmd->add_option("--k-max", f.k_max, "Largest cluster count (default 200)");
  cmd->add_option("--algorithms", f.algorithms, "Comma list: kmeans,agglomerative");
  cmd->add_option("--metrics", f.metrics, "Comma list: euclidean,manhattan,cosine");
  cmd->add_option("--linkages", f.linkages, "Comma list: ward,average,complete,single");
  cmd->add_option("--indices", f.indices,
                  "Comma list: calinski_harabasz,davies_bouldin,silhouette");
  cmd->add_option("--seed", f.seed, "RNG seed (default 0)")->each([&](const std::string&) {
    f.has_seed = true;
  });
  cmd->add_option("--restarts", f.restarts, "K-means restarts (default 10)");
  cmd->add_option("--jobs-parallel", f.jobs_parallel, "Worker threads (default: hardware)");
}

void add_synth_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--jobs", f.synth_jobs, "Number of jobs (default 300)");
  cmd->add_option("--groups", f.synth_groups, "Planted group count (default 3)");
  cmd->add_option("--proportions", f.synth_proportions, "Comma list of group weights");
  cmd->add_option("--node-buckets", f.synth_node_buckets,
                  "Probabilities for node buckets 2-5,6-10,11-15,16-20,>20");
  cmd->add_option("--kpis", f.synth_kpis, "Comma list of catalog KPI names to emit");
  cmd->add_option("--signal-kpis", f.synth_signal_kpis, "KPIs carrying group structure");
  cmd->add_option("--duration-min", f.synth_duration_min, "Shortest job duration, seconds");
  cmd->add_option("--duration-max", f.synth_duration_max, "Longest job duration, seconds");
  cmd->add_option("--sample-interval", f.synth_sample_interval, "Sampling period, seconds");
  cmd->add_option("--noise-sigma", f.synth_noise_sigma, "Gaussian noise level");
  cmd->add_option("--operational", f.synth_operational, "Jobs flagged operational");
  cmd->add_option("--missing-kpi", f.synth_missing_kpi, "Jobs missing one KPI");
  cmd->add_option("--single-node", f.synth_single_node, "Jobs running on one node");
  cmd->add_option("--seed", f.seed, "RNG seed (default 0)")->each([&](const std::string&) {
    f.has_seed = true;
  });
}

ConfigPtr build_config(CLI::App* cmd, const Flags& f) {
  ConfigPtr cfg(kpic_config_new());
  auto set = [&](const char* key, const std::string& value) {
    kpic_config_set(cfg.get(), key, value.c_str());
  };
  auto set_if = [&](const char* flag, const char* key, const std::string& value) {
    const CLI::Option* opt = cmd->get_option_no_throw(flag);
    if (opt != nullptr && opt->count() > 0) set(key, value);
  };
  set_if("--kpi-dir", "kpi_dir", f.kpi_dir);
  set_if("--catalog", "catalog", f.catalog);
  set_if("--flags", "flags", f.flags);
  set_if("--out", "out", f.out);
  set_if("--resample-len", "resample_len", std::to_string(f.resample_len));
  set_if("--k-min", "k_min", std::to_string(f.k_min));
  set_if("--k-max", "k_max", std::to_string(f.k_max));
  set_if("--algorithms", "algorithms", f.algorithms);
  set_if("--metrics", "metrics", f.metrics);
  set_if("--linkages", "linkages", f.linkages);
  set_if("--indices", "indices", f.indices);
  set_if("--seed", "seed", std::to_string(f.seed));
  set_if("--restarts", "restarts", std::to_string(f.restarts));
  set_if("--jobs-parallel", "jobs_parallel", std::to_string(f.jobs_parallel));
  if (f.dump_matrices) set("dump_matrices", "true");
  set_if("--select-kpis", "select_kpis", f.select_kpis);
  set_if("--experiment2", "experiment2_json", f.experiment2_json);
  {
    const CLI::Option* opt = cmd->get_option_no_throw("--noise-sigma");
    if (opt != nullptr && opt->count() > 0) set("synth_noise_sigma", std::to_string(f.synth_noise_sigma));
  }
  set_if("--jobs", "synth_jobs", std::to_string(f.synth_jobs));
  set_if("--groups", "synth_groups", std::to_string(f.synth_groups));
  set_if("--proportions", "synth_proportions", f.synth_proportions);
  set_if("--node-buckets", "synth_node_buckets", f.synth_node_buckets);
  set_if("--kpis", "synth_kpis", f.synth_kpis);
  set_if("--signal-kpis", "synth_signal_kpis", f.synth_signal_kpis);
  set_if("--duration-min", "synth_duration_min", std::to_string(f.synth_duration_min));
  set_if("--duration-max", "synth_duration_max", std::to_string(f.synth_duration_max));
  set_if("--sample-interval", "synth_sample_interval", std::to_string(f.synth_sample_interval));
  set_if("--operational", "synth_operational", std::to_string(f.synth_operational));
  set_if("--missing-kpi", "synth_missing_kpi", std::to_string(f.synth_missing_kpi));
  set_if("--single-node", "synth_single_node", std::to_string(f.synth_single_node));
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"kpicluster — cluster multi-node jobs by their KPI time series"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kpic_version());

  Flags f;
  struct Command {
    CLI::App* cmd;
    kpic_status (*run)(const kpic_config*);
  };
  std::vector<Command> commands;

  auto* synth = app.add_subcommand("synth", "Generate a synthetic monitoring dataset");
  synth->add_option("--out", f.out, "Output directory")->required();
  synth->add_option("--catalog", f.catalog, "KPI catalog JSON to draw names from");
  add_synth_flags(synth, f);
  commands.push_back({synth, kpic_run_synth});

  auto* ingest = app.add_subcommand("ingest", "Parse records, filter jobs, write bookkeeping");
  add_io_flags(ingest, f, true);
  ingest->add_option("--jobs-parallel", f.jobs_parallel, "Worker threads");
  commands.push_back({ingest, kpic_run_ingest});

  auto* preprocess =
      app.add_subcommand("preprocess", "Assemble, standardize and reduce eligible jobs");
  add_io_flags(preprocess, f, true);
  preprocess->add_option("--resample-len", f.resample_len, "Time grid length T (default 128)");
  preprocess->add_option("--jobs-parallel", f.jobs_parallel, "Worker threads");
  preprocess->add_flag("--dump-matrices", f.dump_matrices,
                       "Also dump standardized time x nodes matrices as CSV");
  commands.push_back({preprocess, kpic_run_preprocess});

  auto* exp1 = app.add_subcommand("experiment1", "K sweep over the combined-KPI features");
  add_io_flags(exp1, f, true);
  add_sweep_flags(exp1, f);
  commands.push_back({exp1, kpic_run_experiment1});

  auto* exp2 = app.add_subcommand("experiment2", "Independent K sweep per KPI");
  add_io_flags(exp2, f, true);
  add_sweep_flags(exp2, f);
  commands.push_back({exp2, kpic_run_experiment2});

  auto* compare = app.add_subcommand("compare", "Rank KPIs from an experiment2 report");
  compare->add_option("--out", f.out, "Output directory")->required();
  compare->add_option("--experiment2", f.experiment2_json,
                      "experiment2.json path (default: <out>/experiment2.json)");
  commands.push_back({compare, kpic_run_compare});

  auto* validate = app.add_subcommand("validate-run", "Sweep a second dataset on selected KPIs");
  add_io_flags(validate, f, true);
  add_sweep_flags(validate, f);
  validate->add_option("--select-kpis", f.select_kpis,
                       "Comma list of KPIs (default: network-traffic KPIs)");
  commands.push_back({validate, kpic_run_validation});

  for (auto& c : commands) c.cmd->set_config("--config", "", "Key-value config file; flags win");

  CLI11_PARSE(app, argc, argv);

  for (auto& c : commands) {
    if (!c.cmd->parsed()) continue;
    ConfigPtr cfg = build_config(c.cmd, f);
    kpic_status status = c.run(cfg.get());
    if (status != KPIC_OK) return fail_with(status);
    return 0;
  }
  return 0;
}
