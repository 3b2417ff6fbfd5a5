// adx: generate datasets, upload them to a simulated cluster and run job sequences.

#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "adx/datagen.hpp"
#include "adx/workload.hpp"

namespace {

int gen(bool uservisits, std::uint64_t rows, std::uint64_t seed, const std::string& out) {
  adx::Table t = uservisits ? adx::gen_uservisits(rows, seed) : adx::gen_synthetic(rows, seed);
  adx::write_csv(t, out);
  std::cout << "wrote " << t.rows() << " rows to " << out << '\n';
  return 0;
}

int upload(const std::string& config_path, const std::string& root, const std::string& data,
           const std::vector<std::string>& index_attributes) {
  adx::ClusterConfig config = adx::load_cluster_config(config_path, root);
  if (!root.empty()) config.storage_root = root;
  adx::Table table = adx::read_csv(data);
  auto cluster = adx::Cluster::create(config);
  cluster->upload(table, index_attributes);
  const auto dataset = cluster->registry().dataset();
  std::cout << "uploaded " << table.rows() << " rows as " << dataset.blocks.size() << " blocks, r="
            << int(config.replication) << ", root " << cluster->root().string() << '\n';
  return 0;
}

void print_table(const adx::WorkloadReport& report, std::ostream& out) {
  out << std::left << std::setw(10) << "job" << std::setw(8) << "attr" << std::setw(7) << "index" << std::setw(7)
      << "full" << std::setw(10) << "indexed" << std::setw(8) << "rho" << std::setw(12) << "predicted"
      << std::setw(12) << "simulated" << std::setw(12) << "records" << "bytes\n";
  out << std::fixed;
  for (const auto& j : report.jobs) {
    std::ostringstream idx;
    idx << j.indexed_after << '/' << j.blocks_total;
    out << std::setw(10) << j.job_id << std::setw(8) << j.attribute << std::setw(7) << j.index_tasks << std::setw(7)
        << j.full_tasks << std::setw(10) << idx.str() << std::setw(8) << std::setprecision(3) << j.rho
        << std::setw(12) << std::setprecision(2) << j.predicted_seconds << std::setw(12) << j.simulated_seconds
        << std::setw(12) << j.records_out << j.bytes_read;
    if (!j.success) out << "  FAILED: " << j.error;
    out << '\n';
  }
}

int run(const std::string& root, const std::string& config_path, const std::string& jobs_path,
        const std::string& csv_path, const std::string& json_path, bool plan_dump) {
  std::optional<adx::ClusterConfig> overrides;
  if (!config_path.empty()) overrides = adx::load_cluster_config(config_path, root);
  auto cluster = adx::Cluster::open(root, overrides);
  auto jobs = adx::load_jobs(jobs_path, cluster->registry().schema());

  adx::RunOptions options;
  if (plan_dump) options.plan_sink = [](const std::string& dump) { std::cerr << dump; };
  adx::WorkloadReport report = adx::run_workload(*cluster, jobs, options);

  if (!csv_path.empty()) {
    std::ofstream out(csv_path);
    adx::write_report_csv(report, out);
  }
  if (!json_path.empty()) std::ofstream(json_path) << adx::report_to_json(report) << '\n';
  print_table(report, std::cout);
  return report.success() ? 0 : 1;
}

int report(const std::string& json_path, bool csv) {
  std::ifstream in(json_path);
  if (!in) throw adx::ConfigError("cannot read " + json_path);
  std::stringstream ss;
  ss << in.rdbuf();
  auto r = adx::report_from_json(ss.str());
  if (csv)
    adx::write_report_csv(r, std::cout);
  else
    print_table(r, std::cout);
  return r.success() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive block-level indexing on a simulated cluster"};
  app.require_subcommand(1);

  std::uint64_t rows = 0, seed = 1;
  std::string out;
  auto* syn = app.add_subcommand("gen-synthetic", "Six int64 attributes; the first is skewed over 1..10");
  syn->add_option("--rows", rows, "Number of rows")->required();
  syn->add_option("--seed", seed, "Random seed")->capture_default_str();
  syn->add_option("--out", out, "Output CSV")->required();

  auto* uv = app.add_subcommand("gen-uservisits", "Nine web-log attributes, mostly fixed-width strings");
  uv->add_option("--rows", rows, "Number of rows")->required();
  uv->add_option("--seed", seed, "Random seed")->capture_default_str();
  uv->add_option("--out", out, "Output CSV")->required();

  std::string config, root, data, jobs, csv_out, json_out;
  std::vector<std::string> index_attributes;
  auto* up = app.add_subcommand("upload", "Create a cluster root and upload a dataset");
  up->add_option("--config", config, "Cluster config (JSON)")->required()->check(CLI::ExistingFile);
  up->add_option("--root", root, "Storage root (overrides the config)");
  up->add_option("--data", data, "Dataset CSV")->required()->check(CLI::ExistingFile);
  up->add_option("--index", index_attributes, "Attribute to index at upload, one per replica");

  bool plan_dump = false;
  auto* rn = app.add_subcommand("run", "Run a jobs file against an uploaded cluster");
  rn->add_option("--root", root, "Storage root")->required()->check(CLI::ExistingDirectory);
  rn->add_option("--config", config, "Config whose policy/timing settings replace the stored ones")
      ->check(CLI::ExistingFile);
  rn->add_option("--jobs", jobs, "Jobs file (JSON array or JSON lines)")->required()->check(CLI::ExistingFile);
  rn->add_option("--csv", csv_out, "Write the per-job report as CSV");
  rn->add_option("--json", json_out, "Write the per-job report as JSON");
  rn->add_flag("--plan-dump", plan_dump, "Print each job's plan to stderr");

  bool as_csv = false;
  std::string report_path;
  auto* rp = app.add_subcommand("report", "Print a JSON report written by 'run'");
  rp->add_option("report", report_path, "Report JSON")->required()->check(CLI::ExistingFile);
  rp->add_flag("--csv", as_csv, "Print CSV instead of a table");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*syn) return gen(false, rows, seed, out);
    if (*uv) return gen(true, rows, seed, out);
    if (*up) return upload(config, root, data, index_attributes);
    if (*rn) return run(root, config, jobs, csv_out, json_out, plan_dump);
    if (*rp) return report(report_path, as_csv);
  } catch (const std::exception& e) {
    std::cerr << "adx: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
