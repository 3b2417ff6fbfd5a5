#include "adx/scheduler.hpp"

#include <algorithm>
#include <sstream>

namespace adx {

std::size_t JobPlan::indexed_blocks() const {
  std::size_t n = 0;
  for (const auto& t : index_tasks) n += t.split.blocks.size();
  return n;
}

std::string JobPlan::dump() const {
  std::ostringstream out;
  for (const auto& t : index_tasks)
    for (auto b : t.split.blocks) out << "block=" << b << " node=" << t.node << " kind=index\n";
  for (const auto& t : full_tasks)
    for (auto b : t.split.blocks) out << "block=" << b << " node=" << t.node << " kind=full\n";
  return out.str();
}

JobPlan plan_job(const JobSpec& job, const ReplicaRegistry& registry, const SchedulerOptions& options) {
  if (options.max_blocks_per_split == 0) throw PlanningError("max_blocks_per_split must be positive");
  const DatasetInfo dataset = registry.dataset();
  const std::string& attr = job.predicate.attribute;
  const std::optional<std::string> count_attr =
      options.count_mode == IndexCountMode::per_attribute ? std::optional<std::string>(attr) : std::nullopt;

  JobPlan plan;
  std::map<NodeId, std::vector<BlockId>> indexed_by_node;
  std::map<NodeId, std::size_t> counts;

  for (BlockId block : dataset.blocks) {
    if (auto hit = registry.find_index(block, attr)) {
      indexed_by_node[hit->node].push_back(block);
      continue;
    }
    PlacementDecision d;
    d.block = block;
    for (const auto& r : registry.lookup(block))
      if (r.kind == ReplicaKind::normal) d.candidates.push_back(r.node);
    if (d.candidates.empty()) throw PlanningError("block " + std::to_string(to_u64(block)) + " has no replica");
    std::sort(d.candidates.begin(), d.candidates.end());
    std::size_t best = 0;
    for (std::size_t i = 0; i < d.candidates.size(); ++i) {
      NodeId node = d.candidates[i];
      auto it = counts.find(node);
      if (it == counts.end()) it = counts.emplace(node, registry.count_pseudo_replicas(node, count_attr)).first;
      d.counts.push_back(it->second);
      if (d.counts[i] < d.counts[best]) best = i;
    }
    d.chosen = d.candidates[best];
    ++counts[d.chosen];

    TaskAssignment t;
    t.node = d.chosen;
    t.split = InputSplit{d.chosen, {block}, ScanKind::full_scan};
    t.scan_ordinal = plan.full_tasks.size();
    plan.full_tasks.push_back(std::move(t));
    plan.decisions.push_back(std::move(d));
  }

  for (auto& [node, blocks] : indexed_by_node) {
    for (std::size_t i = 0; i < blocks.size(); i += options.max_blocks_per_split) {
      TaskAssignment t;
      t.node = node;
      t.split.node = node;
      t.split.scan_kind = ScanKind::index_scan;
      const std::size_t end = std::min(blocks.size(), i + options.max_blocks_per_split);
      t.split.blocks.assign(blocks.begin() + static_cast<std::ptrdiff_t>(i), blocks.begin() + static_cast<std::ptrdiff_t>(end));
      plan.index_tasks.push_back(std::move(t));
    }
  }
  return plan;
}

}  // namespace adx
