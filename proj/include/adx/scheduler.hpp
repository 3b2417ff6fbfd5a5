#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "adx/cluster.hpp"
#include "adx/job.hpp"

namespace adx {

/// How an unindexed block was placed, kept for replay checks.
struct PlacementDecision {
  BlockId block{};
  std::vector<NodeId> candidates;    ///< ascending
  std::vector<std::size_t> counts;   ///< index count per candidate at decision time
  NodeId chosen{};
};

struct JobPlan {
  std::vector<TaskAssignment> index_tasks;
  std::vector<TaskAssignment> full_tasks;  ///< ascending block id; scan_ordinal = position
  std::vector<PlacementDecision> decisions;

  std::size_t indexed_blocks() const;
  std::size_t unindexed_blocks() const { return full_tasks.size(); }
  /// One line per block: "block=<id> node=<k> kind=<index|full>".
  std::string dump() const;
};

struct SchedulerOptions {
  std::uint32_t max_blocks_per_split = 16;
  IndexCountMode count_mode = IndexCountMode::per_attribute;
};

/// Indexed blocks are grouped per hosting node into index-scan splits of at
/// most max_blocks_per_split blocks. Each unindexed block becomes a full-scan
/// task on the normal-replica node with the fewest indexes, counting indexes
/// already registered plus full-scan tasks placed earlier in this plan.
/// Blocks are visited in ascending id; ties go to the lowest node id.
JobPlan plan_job(const JobSpec& job, const ReplicaRegistry& registry, const SchedulerOptions& options);

}  // namespace adx
