#pragma once

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "adx/engine.hpp"

namespace adx {

/// Jobs file: a JSON array of job documents or one document per line.
///   {"id": "q1", "predicate": {"attr": "a", "low": 1, "high": 5},
///    "projection": ["b", "c"], "offer_rate": 0.25 | "eager": true | "selectivity_threshold": 0.8}
/// Bounds are typed by the predicate attribute. A missing projection means every attribute.
std::vector<JobSpec> parse_jobs(const std::string& text, const Schema& schema);
std::vector<JobSpec> load_jobs(const std::filesystem::path& path, const Schema& schema);

struct WorkloadReport {
  std::vector<JobReport> jobs;
  bool success() const;
};

/// Runs jobs in order and stops at the first failed job.
WorkloadReport run_workload(Cluster& cluster, const std::vector<JobSpec>& jobs, const RunOptions& options = {});

/// Fixed column order:
/// job_id,attribute,policy,success,index_tasks,full_tasks,index_waves,full_waves,
/// blocks_total,indexed_before,indexed_after,indexed_fraction,rho,quota,offered,
/// rejected,rejected_selectivity,T_is,t_fsw,t_idx_overhead,predicted_s,simulated_s,
/// records_read,records_out,bytes_read,network_bytes,error
extern const char* const kReportCsvHeader;

void write_report_csv(const WorkloadReport& report, std::ostream& out);
std::string report_to_json(const WorkloadReport& report);
WorkloadReport report_from_json(const std::string& text);

}  // namespace adx
