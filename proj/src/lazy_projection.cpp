#include "adx/lazy_projection.hpp"

#include <system_error>

#include "adx/index_builder.hpp"
#include "adx/paths.hpp"

namespace adx {

namespace fs = std::filesystem;

std::string to_string(CompletionOutcome outcome) {
  switch (outcome) {
    case CompletionOutcome::unchanged:
      return "unchanged";
    case CompletionOutcome::appended:
      return "appended";
    case CompletionOutcome::completed:
      return "completed";
    case CompletionOutcome::skipped_no_local_replica:
      return "skipped_no_local_replica";
    case CompletionOutcome::failed:
      return "failed";
  }
  return "?";
}

WriteOutcome build_partial(const DataBlock& block, const std::string& attribute, const fs::path& storage_root,
                           NodeId node, ReplicaRegistry& registry, std::uint32_t page_size_records,
                           std::uint64_t nonce, const TempWriteHook& hook) {
  BuiltIndex built = build_index(block, attribute, page_size_records);
  built.block.permutation = std::move(built.permutation);
  return write_pseudo_replica(std::move(built.block), storage_root, node, registry, nonce, hook);
}

namespace {

std::optional<BlockReplicaInfo> local_normal_replica(const ReplicaRegistry& registry, BlockId block, NodeId node) {
  for (const auto& r : registry.lookup(block))
    if (r.kind == ReplicaKind::normal && r.node == node) return r;
  return std::nullopt;
}

}  // namespace

CompletionOutcome complete_partial(const fs::path& storage_root, NodeId node, BlockId block,
                                   const std::string& attribute, const std::set<std::string>& wanted,
                                   ReplicaRegistry& registry, std::uint64_t nonce, IoCounter* io) {
  std::optional<BlockReplicaInfo> current;
  for (const auto& r : registry.lookup(block))
    if (r.node == node && r.kind != ReplicaKind::normal && r.indexed_attribute == attribute) current = r;
  if (!current || current->kind != ReplicaKind::partial_pseudo) return CompletionOutcome::unchanged;

  const Schema dataset_schema = registry.schema();
  std::set<std::string> missing;
  for (const auto& name : wanted)
    if (dataset_schema.contains(name) && !current->available_attributes.contains(name)) missing.insert(name);
  if (missing.empty()) return CompletionOutcome::unchanged;

  auto normal = local_normal_replica(registry, block, node);
  if (!normal) return CompletionOutcome::skipped_no_local_replica;

  const fs::path temp = pseudo_temp_path(storage_root, node, block, attribute, nonce);
  std::error_code ec;
  try {
    BlockReader partial_reader(current->path, io);
    DataBlock partial = partial_reader.read(partial_reader.attributes());
    PermutationVector perm = partial_reader.read_permutation();

    BlockReader normal_reader(normal->path, io);
    DataBlock extra = normal_reader.read(missing);
    if (extra.record_count != partial.record_count) throw FormatError("normal and partial replica sizes differ");

    std::set<std::string> names = partial.schema.name_set();
    names.insert(missing.begin(), missing.end());
    DataBlock merged;
    merged.id = block;
    merged.schema = dataset_schema.project(names);
    merged.record_count = partial.record_count;
    for (const auto& a : merged.schema.attributes()) {
      if (partial.has(a.name))
        merged.columns.push_back(std::move(partial.column(a.name)));
      else
        merged.columns.push_back(align(extra.column(a.name), perm));
    }
    merged.sort_attribute = partial.sort_attribute;
    merged.index = partial.index;

    BlockReplicaInfo info = *current;
    info.available_attributes = names;
    const bool complete = names == dataset_schema.name_set();
    if (complete) {
      info.kind = ReplicaKind::pseudo;
      info.has_permutation_vector = false;
    } else {
      merged.permutation = std::move(perm);
    }

    write_block(merged, temp);
    fs::rename(temp, current->path);
    registry.update_index_replica(block, info);
    return complete ? CompletionOutcome::completed : CompletionOutcome::appended;
  } catch (const std::exception&) {
    fs::remove(temp, ec);
    return CompletionOutcome::failed;
  }
}

}  // namespace adx
