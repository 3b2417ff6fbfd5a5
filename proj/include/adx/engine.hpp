#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "adx/cluster.hpp"
#include "adx/cost_model.hpp"
#include "adx/job.hpp"
#include "adx/scheduler.hpp"

namespace adx {

struct JobReport {
  std::string job_id;
  std::string attribute;
  PolicyMode policy = PolicyMode::constant;
  bool success = true;
  std::string error;

  std::size_t blocks_total = 0;
  std::size_t indexed_before = 0;
  std::size_t indexed_after = 0;
  std::size_t index_tasks = 0;
  std::size_t full_tasks = 0;
  std::size_t index_waves = 0;
  std::size_t full_waves = 0;

  double rho = 0;            ///< rate used; NaN-free, 0 in selectivity mode
  std::size_t quota = 0;     ///< blocks the policy would offer
  std::size_t offered = 0;   ///< accepted by the indexer queues
  std::size_t rejected = 0;  ///< queue full
  std::size_t rejected_selectivity = 0;
  bool eager_fallback = false;  ///< eager mode without calibration ran at constant rate

  double T_is = 0;
  double t_fsw = 0;
  double t_idx_overhead = 0;
  double predicted_seconds = 0;
  double simulated_seconds = 0;

  std::uint64_t records_read = 0;
  std::uint64_t records_out = 0;
  std::uint64_t bytes_read = 0;
  std::uint64_t network_bytes = 0;
  std::uint64_t completion_requests = 0;

  std::vector<TaskResult> tasks;
  std::vector<std::string> output;

  double indexed_fraction() const {
    return blocks_total ? static_cast<double>(indexed_after) / static_cast<double>(blocks_total) : 1.0;
  }
};

struct RunOptions {
  bool collect_output = false;
  bool keep_tasks = false;
  /// Drain the indexers after every wave so queue rejections do not depend on thread timing.
  bool sync_indexers_each_wave = true;
  /// Receives the plan dump of each job when set.
  std::function<void(const std::string&)> plan_sink;
};

/// Runs jobs one after another on a cluster. Index-scan tasks run first and
/// their waves give T_is; the offer rate is fixed next; full-scan tasks follow
/// with the offered blocks packed into the earliest waves. Waits for the
/// indexers before returning, so the next job sees every new index.
class Engine {
 public:
  explicit Engine(Cluster& cluster, RunOptions options = {});

  JobReport run(const JobSpec& job);

  const Calibration& calibration() const { return calibration_; }

 private:
  PolicyMode mode_for(const JobSpec& job) const;

  Cluster& cluster_;
  RunOptions options_;
  Calibration calibration_;
};

}  // namespace adx
