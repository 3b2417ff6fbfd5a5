#include "adx/index_writer.hpp"

#include <atomic>
#include <system_error>

#include "adx/block_file.hpp"
#include "adx/paths.hpp"

namespace adx {

namespace fs = std::filesystem;

std::string to_string(WriteOutcome outcome) {
  switch (outcome) {
    case WriteOutcome::won:
      return "won";
    case WriteOutcome::lost:
      return "lost";
    case WriteOutcome::failed:
      return "failed";
  }
  return "?";
}

std::uint64_t next_write_nonce() {
  static std::atomic<std::uint64_t> counter{1};
  return counter.fetch_add(1);
}

WriteOutcome write_pseudo_replica(DataBlock sorted, const fs::path& storage_root, NodeId node,
                                  ReplicaRegistry& registry, std::uint64_t nonce, const TempWriteHook& hook) {
  if (!sorted.sort_attribute || !sorted.index) throw FormatError("pseudo replicas must be sorted and indexed");
  const std::string attribute = *sorted.sort_attribute;
  const Schema dataset_schema = registry.schema();

  BlockReplicaInfo info;
  info.node = node;
  info.indexed_attribute = attribute;
  info.available_attributes = sorted.schema.name_set();
  if (dataset_schema.empty() || info.available_attributes == dataset_schema.name_set()) {
    info.kind = ReplicaKind::pseudo;
    sorted.permutation.reset();
  } else {
    if (!sorted.permutation) throw FormatError("partial pseudo replicas need their permutation vector");
    info.kind = ReplicaKind::partial_pseudo;
    info.has_permutation_vector = true;
  }

  const fs::path target = pseudo_replica_path(storage_root, node, sorted.id, attribute);
  const fs::path temp = pseudo_temp_path(storage_root, node, sorted.id, attribute, nonce);
  info.path = target;

  std::error_code ec;
  try {
    fs::create_directories(target.parent_path());
    write_block(sorted, temp);
    if (hook) hook(temp);
  } catch (const std::exception&) {
    fs::remove(temp, ec);
    return WriteOutcome::failed;
  }

  // Hard links fail with EEXIST, so only the first writer on this node commits.
  fs::create_hard_link(temp, target, ec);
  std::error_code ignored;
  fs::remove(temp, ignored);
  if (ec) return ec == std::errc::file_exists ? WriteOutcome::lost : WriteOutcome::failed;

  // Writers on other nodes use other paths; the registry decides between them.
  try {
    if (registry.register_replica(sorted.id, info)) return WriteOutcome::won;
  } catch (const std::exception&) {
    fs::remove(target, ignored);
    return WriteOutcome::failed;
  }
  fs::remove(target, ignored);
  return WriteOutcome::lost;
}

}  // namespace adx
