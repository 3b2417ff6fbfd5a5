#include "adx/workload.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>

#include "json.hpp"

namespace adx {

using nlohmann::json;

namespace {

Value typed_bound(const json& j, const Attribute& a) {
  switch (a.type.tag) {
    case TypeTag::int64:
      if (!j.is_number_integer()) throw ConfigError("bound for '" + a.name + "' must be an integer");
      return j.get<std::int64_t>();
    case TypeTag::float64:
      if (!j.is_number()) throw ConfigError("bound for '" + a.name + "' must be a number");
      return j.get<double>();
    case TypeTag::fixed_string:
      if (!j.is_string()) throw ConfigError("bound for '" + a.name + "' must be a string");
      return j.get<std::string>();
  }
  throw ConfigError("unsupported attribute type");
}

JobSpec job_from_json(const json& j, const Schema& schema, std::size_t position) {
  JobSpec job;
  job.id = j.contains("id") ? j.at("id").get<std::string>() : "job" + std::to_string(position + 1);
  const json& p = j.at("predicate");
  job.predicate.attribute = p.at("attr").get<std::string>();
  const Attribute& a = schema.attribute(job.predicate.attribute);
  job.predicate.low = typed_bound(p.at("low"), a);
  job.predicate.high = typed_bound(p.at("high"), a);
  if (j.contains("projection"))
    job.projection = j.at("projection").get<std::set<std::string>>();
  else
    job.projection = schema.name_set();

  int modes = 0;
  if (j.contains("offer_rate")) {
    job.policy = JobPolicy::constant;
    job.offer_rate = j.at("offer_rate").get<double>();
    ++modes;
  }
  if (j.contains("eager") && j.at("eager").get<bool>()) {
    job.policy = JobPolicy::eager;
    ++modes;
  }
  if (j.contains("selectivity_threshold")) {
    job.policy = JobPolicy::selectivity;
    job.selectivity_threshold = j.at("selectivity_threshold").get<double>();
    ++modes;
  }
  if (modes > 1) throw ConfigError("job " + job.id + ": choose one of offer_rate, eager, selectivity_threshold");
  job.validate(schema);
  return job;
}

}  // namespace

std::vector<JobSpec> parse_jobs(const std::string& text, const Schema& schema) {
  std::vector<json> docs;
  try {
    auto first = text.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return {};
    if (text[first] == '[') {
      for (const auto& d : json::parse(text)) docs.push_back(d);
    } else {
      std::istringstream in(text);
      std::string line;
      while (std::getline(in, line))
        if (line.find_first_not_of(" \t\r") != std::string::npos) docs.push_back(json::parse(line));
    }
    std::vector<JobSpec> jobs;
    for (std::size_t i = 0; i < docs.size(); ++i) jobs.push_back(job_from_json(docs[i], schema, i));
    return jobs;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("jobs file: ") + e.what());
  }
}

std::vector<JobSpec> load_jobs(const std::filesystem::path& path, const Schema& schema) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read jobs file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_jobs(ss.str(), schema);
}

bool WorkloadReport::success() const {
  for (const auto& j : jobs)
    if (!j.success) return false;
  return true;
}

WorkloadReport run_workload(Cluster& cluster, const std::vector<JobSpec>& jobs, const RunOptions& options) {
  Engine engine(cluster, options);
  WorkloadReport report;
  for (const auto& job : jobs) {
    report.jobs.push_back(engine.run(job));
    if (!report.jobs.back().success) break;
  }
  return report;
}

const char* const kReportCsvHeader =
    "job_id,attribute,policy,success,index_tasks,full_tasks,index_waves,full_waves,blocks_total,indexed_before,"
    "indexed_after,indexed_fraction,rho,quota,offered,rejected,rejected_selectivity,T_is,t_fsw,t_idx_overhead,"
    "predicted_s,simulated_s,records_read,records_out,bytes_read,network_bytes,error";

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

}  // namespace

void write_report_csv(const WorkloadReport& report, std::ostream& out) {
  out << kReportCsvHeader << '\n';
  out << std::setprecision(10);
  for (const auto& j : report.jobs) {
    out << csv_field(j.job_id) << ',' << j.attribute << ',' << to_string(j.policy) << ',' << (j.success ? 1 : 0)
        << ',' << j.index_tasks << ',' << j.full_tasks << ',' << j.index_waves << ',' << j.full_waves << ','
        << j.blocks_total << ',' << j.indexed_before << ',' << j.indexed_after << ',' << j.indexed_fraction() << ','
        << j.rho << ',' << j.quota << ',' << j.offered << ',' << j.rejected << ',' << j.rejected_selectivity << ','
        << j.T_is << ',' << j.t_fsw << ',' << j.t_idx_overhead << ',' << j.predicted_seconds << ','
        << j.simulated_seconds << ',' << j.records_read << ',' << j.records_out << ',' << j.bytes_read << ','
        << j.network_bytes << ',' << csv_field(j.error) << '\n';
  }
}

std::string report_to_json(const WorkloadReport& report) {
  json jobs = json::array();
  for (const auto& j : report.jobs) {
    jobs.push_back({{"job_id", j.job_id},
                    {"attribute", j.attribute},
                    {"policy", to_string(j.policy)},
                    {"success", j.success},
                    {"error", j.error},
                    {"index_tasks", j.index_tasks},
                    {"full_tasks", j.full_tasks},
                    {"index_waves", j.index_waves},
                    {"full_waves", j.full_waves},
                    {"blocks_total", j.blocks_total},
                    {"indexed_before", j.indexed_before},
                    {"indexed_after", j.indexed_after},
                    {"indexed_fraction", j.indexed_fraction()},
                    {"rho", j.rho},
                    {"quota", j.quota},
                    {"offered", j.offered},
                    {"rejected", j.rejected},
                    {"rejected_selectivity", j.rejected_selectivity},
                    {"eager_fallback", j.eager_fallback},
                    {"T_is", j.T_is},
                    {"t_fsw", j.t_fsw},
                    {"t_idx_overhead", j.t_idx_overhead},
                    {"predicted_s", j.predicted_seconds},
                    {"simulated_s", j.simulated_seconds},
                    {"records_read", j.records_read},
                    {"records_out", j.records_out},
                    {"bytes_read", j.bytes_read},
                    {"network_bytes", j.network_bytes},
                    {"completion_requests", j.completion_requests}});
  }
  return json{{"success", report.success()}, {"jobs", jobs}}.dump(2);
}

WorkloadReport report_from_json(const std::string& text) {
  WorkloadReport report;
  try {
    const json doc = json::parse(text);
    for (const auto& j : doc.at("jobs")) {
      JobReport r;
      r.job_id = j.at("job_id").get<std::string>();
      r.attribute = j.at("attribute").get<std::string>();
      const auto policy = j.at("policy").get<std::string>();
      r.policy = policy == "eager" ? PolicyMode::eager
                 : policy == "selectivity" ? PolicyMode::selectivity
                                           : PolicyMode::constant;
      r.success = j.at("success").get<bool>();
      r.error = j.value("error", "");
      r.index_tasks = j.at("index_tasks").get<std::size_t>();
      r.full_tasks = j.at("full_tasks").get<std::size_t>();
      r.index_waves = j.at("index_waves").get<std::size_t>();
      r.full_waves = j.at("full_waves").get<std::size_t>();
      r.blocks_total = j.at("blocks_total").get<std::size_t>();
      r.indexed_before = j.at("indexed_before").get<std::size_t>();
      r.indexed_after = j.at("indexed_after").get<std::size_t>();
      r.rho = j.at("rho").get<double>();
      r.quota = j.at("quota").get<std::size_t>();
      r.offered = j.at("offered").get<std::size_t>();
      r.rejected = j.at("rejected").get<std::size_t>();
      r.rejected_selectivity = j.at("rejected_selectivity").get<std::size_t>();
      r.eager_fallback = j.value("eager_fallback", false);
      r.T_is = j.at("T_is").get<double>();
      r.t_fsw = j.at("t_fsw").get<double>();
      r.t_idx_overhead = j.at("t_idx_overhead").get<double>();
      r.predicted_seconds = j.at("predicted_s").get<double>();
      r.simulated_seconds = j.at("simulated_s").get<double>();
      r.records_read = j.at("records_read").get<std::uint64_t>();
      r.records_out = j.at("records_out").get<std::uint64_t>();
      r.bytes_read = j.at("bytes_read").get<std::uint64_t>();
      r.network_bytes = j.at("network_bytes").get<std::uint64_t>();
      r.completion_requests = j.value("completion_requests", std::uint64_t{0});
      report.jobs.push_back(std::move(r));
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("report: ") + e.what());
  }
  return report;
}

}  // namespace adx
