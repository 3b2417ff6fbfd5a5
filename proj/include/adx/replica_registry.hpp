#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <set>
#include <shared_mutex>
#include <string>
#include <vector>

#include "adx/schema.hpp"
#include "adx/types.hpp"

namespace adx {

enum class ReplicaKind : std::uint8_t { normal, pseudo, partial_pseudo };

std::string to_string(ReplicaKind kind);
ReplicaKind parse_replica_kind(const std::string& text);

struct BlockReplicaInfo {
  NodeId node{};
  ReplicaKind kind = ReplicaKind::normal;
  std::optional<std::string> indexed_attribute;
  std::set<std::string> available_attributes;
  std::filesystem::path path;
  bool has_permutation_vector = false;

  bool operator==(const BlockReplicaInfo&) const = default;
};

struct DatasetInfo {
  Schema schema;
  std::uint8_t replication = 3;
  std::vector<BlockId> blocks;  ///< ascending
  std::map<BlockId, std::uint64_t> record_counts;
};

/// NameNode-like mapping block_id -> replicas. Thread-safe; every mutation is
/// appended to an optional journal so a cluster root can be reopened.
class ReplicaRegistry {
 public:
  ReplicaRegistry() = default;
  /// Replays `journal` when it exists and appends further events to it.
  explicit ReplicaRegistry(std::filesystem::path journal);

  ReplicaRegistry(const ReplicaRegistry&) = delete;
  ReplicaRegistry& operator=(const ReplicaRegistry&) = delete;

  void set_dataset(const Schema& schema, std::uint8_t replication);
  void add_block(BlockId block, std::uint64_t record_count);

  /// Returns false (and changes nothing) when an equivalent replica is already
  /// registered: the same node for normal replicas, the same indexed attribute
  /// for pseudo and partial pseudo replicas. Throws RegistryError for unknown blocks
  /// and when the block already has `replication` normal replicas.
  bool register_replica(BlockId block, const BlockReplicaInfo& info);

  /// Replaces the pseudo/partial replica of (block, info.indexed_attribute).
  /// Throws RegistryError when there is nothing to replace.
  void update_index_replica(BlockId block, const BlockReplicaInfo& info);

  std::vector<BlockReplicaInfo> lookup(BlockId block) const;

  /// Replica indexed on `attribute`, preferring normal > pseudo > partial pseudo,
  /// then the lowest node id.
  std::optional<BlockReplicaInfo> find_index(BlockId block, const std::string& attribute) const;

  /// Pseudo and partial pseudo replicas on `node`; restricted to `attribute` when given.
  std::size_t count_pseudo_replicas(NodeId node, const std::optional<std::string>& attribute) const;

  std::size_t count_indexed_blocks(const std::string& attribute) const;

  bool knows(BlockId block) const;
  DatasetInfo dataset() const;
  Schema schema() const;

 private:
  void append(const std::string& line);
  void apply_register(BlockId block, const BlockReplicaInfo& info);

  mutable std::shared_mutex mu_;
  DatasetInfo dataset_;
  std::map<BlockId, std::vector<BlockReplicaInfo>> replicas_;
  std::filesystem::path journal_path_;
  std::ofstream journal_;
};

}  // namespace adx
