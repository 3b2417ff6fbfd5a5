#include "adx/record_reader.hpp"

#include <algorithm>

#include "adx/block_file.hpp"
#include "adx/index_builder.hpp"

namespace adx {

std::set<std::string> invisible_projection_columns(const JobSpec& job, const Schema& schema, bool will_offer) {
  if (will_offer) return schema.name_set();
  std::set<std::string> cols = job.projection;
  cols.insert(job.predicate.attribute);
  return cols;
}

namespace {

std::vector<std::size_t> projection_ordinals(const DataBlock& block, const std::set<std::string>& projection) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < block.schema.size(); ++i)
    if (projection.contains(block.schema.at(i).name)) out.push_back(i);
  return out;
}

void emit(const DataBlock& block, std::size_t row, const std::vector<std::size_t>& ordinals, ScanContext& ctx,
          TaskResult& result) {
  RecordView view(block, ordinals, row);
  std::optional<std::string> out = ctx.job.map_fn ? ctx.job.map_fn(view) : std::optional(identity_record(view));
  if (!out) return;
  ++result.records_emitted;
  if (ctx.collect_output) result.output.push_back(std::move(*out));
}

const BlockReplicaInfo& require_replica(const std::vector<BlockReplicaInfo>& replicas, BlockId block,
                                        const std::function<bool(const BlockReplicaInfo&)>& pred) {
  for (const auto& r : replicas)
    if (pred(r)) return r;
  throw IoError("no suitable replica of block " + std::to_string(to_u64(block)));
}

void full_scan(BlockId block_id, const TaskAssignment& task, ScanContext& ctx, TaskResult& result) {
  const Schema schema = ctx.cluster.registry().schema();
  const auto replicas = ctx.cluster.registry().lookup(block_id);
  const auto& replica = require_replica(replicas, block_id, [&](const BlockReplicaInfo& r) {
    return r.kind == ReplicaKind::normal && r.node == task.node;
  });

  const bool will_offer = ctx.policy && ctx.policy->will_offer(task.scan_ordinal);
  const bool lazy = ctx.cluster.config().projection == ProjectionMode::lazy;
  const auto columns = invisible_projection_columns(ctx.job, schema, will_offer && !lazy);

  BlockReader reader(replica.path);
  DataBlock block = reader.read(columns);
  result.bytes_read += reader.bytes_read();
  result.records_read += block.record_count;

  const Column& key = block.column(ctx.job.predicate.attribute);
  const auto ordinals = projection_ordinals(block, ctx.job.projection);
  std::uint64_t qualifying = 0;
  for (std::size_t row = 0; row < block.record_count; ++row) {
    if (!ctx.job.predicate.matches(key, row)) continue;
    ++qualifying;
    emit(block, row, ordinals, ctx, result);
  }
  if (!will_offer) return;

  // The map function is done with the block; only now may the indexer own it.
  const double fraction = block.record_count ? static_cast<double>(qualifying) / block.record_count : 0.0;
  AdaptiveIndexer& indexer = ctx.cluster.indexer(task.node);
  std::optional<IndexRequest> request;
  OfferOutcome outcome = ctx.policy->offer(task.scan_ordinal, fraction, [&] {
    request.emplace();
    request->checksum = block.checksum();
    request->attribute = ctx.job.predicate.attribute;
    request->block = std::move(block);
    return indexer.try_offer(*request);
  });
  switch (outcome) {
    case OfferOutcome::accepted:
      ++result.blocks_offered;
      result.offered_blocks.push_back(block_id);
      break;
    case OfferOutcome::rejected_queue_full:
      ++result.blocks_rejected;
      break;
    case OfferOutcome::rejected_selectivity:
      ++result.blocks_rejected_selectivity;
      break;
    case OfferOutcome::rejected_quota:
      break;
  }
}

void index_scan(BlockId block_id, const TaskAssignment& task, ScanContext& ctx, TaskResult& result) {
  const std::string& attr = ctx.job.predicate.attribute;
  const auto replicas = ctx.cluster.registry().lookup(block_id);
  const auto& replica = require_replica(replicas, block_id, [&](const BlockReplicaInfo& r) {
    return r.node == task.node && r.indexed_attribute == attr;
  });

  BlockReader reader(replica.path);
  if (!reader.index()) throw FormatError(replica.path.string() + ": index replica without index");
  const RowRange candidate = reader.index()->candidate_range(ctx.job.predicate.low, ctx.job.predicate.high);
  RowRange exact{candidate.begin, candidate.begin};
  if (candidate.size() > 0) {
    Column keys = reader.read_column(attr, candidate);
    exact = narrow_range(keys, candidate, ctx.job.predicate.low, ctx.job.predicate.high);
  }

  const auto available = reader.attributes();
  std::set<std::string> present, missing;
  for (const auto& p : ctx.job.projection) (available.contains(p) ? present : missing).insert(p);

  DataBlock block;
  if (exact.size() > 0) {
    if (!present.empty()) block = reader.read(present, exact);
    if (!missing.empty()) {
      // Partial replica: fetch missing columns from a normal replica and
      // reorder them through the stored permutation vector.
      const PermutationVector inverse = reader.read_permutation().inverse();
      std::vector<std::uint64_t> old_rows(inverse.perm.begin() + static_cast<std::ptrdiff_t>(exact.begin),
                                          inverse.perm.begin() + static_cast<std::ptrdiff_t>(exact.end));
      const BlockReplicaInfo* normal = nullptr;
      for (const auto& r : replicas)
        if (r.kind == ReplicaKind::normal && (!normal || r.node == task.node)) normal = &r;
      if (!normal) throw IoError("no normal replica of block " + std::to_string(to_u64(block_id)));
      BlockReader normal_reader(normal->path);
      DataBlock extra = normal_reader.read(missing);
      if (normal->node == task.node)
        result.bytes_read += normal_reader.bytes_read();
      else
        result.network_bytes += normal_reader.bytes_read();

      const Schema schema = ctx.cluster.registry().schema();
      DataBlock merged;
      merged.id = block_id;
      merged.schema = schema.project(ctx.job.projection);
      merged.record_count = exact.size();
      for (const auto& a : merged.schema.attributes())
        merged.columns.push_back(block.has(a.name) ? std::move(block.column(a.name))
                                                   : extra.column(a.name).gathered(old_rows));
      block = std::move(merged);
    }
    block.record_count = exact.size();
  }
  result.bytes_read += reader.bytes_read();
  result.records_read += exact.size();

  if (!missing.empty() && replica.kind == ReplicaKind::partial_pseudo) {
    bool local = false;
    for (const auto& r : replicas) local = local || (r.kind == ReplicaKind::normal && r.node == task.node);
    if (local) {
      CompletionRequest req{block_id, attr, ctx.job.projection};
      ctx.cluster.indexer(task.node).try_complete(req);
      ++result.completion_requests;
    }
  }

  if (exact.size() == 0) return;
  const auto ordinals = projection_ordinals(block, ctx.job.projection);
  for (std::size_t row = 0; row < exact.size(); ++row) emit(block, row, ordinals, ctx, result);
}

}  // namespace

TaskResult record_reader_scan(const TaskAssignment& task, ScanContext& ctx) {
  TaskResult result;
  result.scan_kind = task.split.scan_kind;
  result.node = task.node;
  result.blocks = task.split.blocks;
  if (task.split.scan_kind == ScanKind::full_scan && task.split.blocks.size() != 1)
    throw PlanningError("full-scan splits hold exactly one block");
  for (BlockId b : task.split.blocks) {
    if (task.split.scan_kind == ScanKind::full_scan)
      full_scan(b, task, ctx, result);
    else
      index_scan(b, task, ctx, result);
  }
  const TimingConfig& t = ctx.cluster.config().timing;
  result.scan_seconds = t.task_startup + static_cast<double>(result.bytes_read + result.network_bytes) * t.seconds_per_byte;
  result.elapsed = result.scan_seconds + t.index_overhead_per_block * static_cast<double>(result.blocks_offered);
  return result;
}

}  // namespace adx
