#pragma once

#include <set>
#include <string>

#include "adx/cluster.hpp"
#include "adx/job.hpp"
#include "adx/offer_policy.hpp"

namespace adx {

struct ScanContext {
  Cluster& cluster;
  const JobSpec& job;
  OfferPolicyState* policy = nullptr;  ///< null: nothing is offered
  bool collect_output = false;
};

/// Attributes a full scan reads. Blocks that will be offered are read with
/// every attribute so their pseudo replica is complete; the map function
/// still sees only the job's projection.
std::set<std::string> invisible_projection_columns(const JobSpec& job, const Schema& schema, bool will_offer);

/// Runs one map task. Full scans read the block from the node's normal
/// replica, apply the predicate and offer the block afterwards. Index scans
/// look up the page directory of the node's index replica and read only the
/// qualifying rows. Throws when a replica file is missing.
TaskResult record_reader_scan(const TaskAssignment& task, ScanContext& ctx);

}  // namespace adx
