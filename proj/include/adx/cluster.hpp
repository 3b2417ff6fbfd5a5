#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "adx/adaptive_indexer.hpp"
#include "adx/offer_policy.hpp"
#include "adx/replica_registry.hpp"
#include "adx/table.hpp"

namespace adx {

enum class PolicyMode { constant, eager, selectivity };
enum class ProjectionMode { invisible, lazy };
enum class IndexCountMode { per_attribute, total };

std::string to_string(PolicyMode mode);
std::string to_string(ProjectionMode mode);

struct PolicyConfig {
  PolicyMode mode = PolicyMode::constant;
  double rho = 0.1;  ///< constant rate, and the first-job rate in eager mode
  std::optional<double> target_seconds;
  std::optional<double> t_fsw;
  std::optional<double> t_idx_overhead;
  double selectivity_threshold = 0.8;
  SelectivityComparison selectivity_comparison = SelectivityComparison::at_least;
};

/// Deterministic simulated time. A task costs `task_startup` plus
/// `seconds_per_byte` for every byte it reads, plus `index_overhead_per_block`
/// for every block it hands to the indexer.
struct TimingConfig {
  double task_startup = 0.5;
  double seconds_per_byte = 1e-8;
  double index_overhead_per_block = 1.0;
};

struct ClusterConfig {
  std::uint16_t node_count = 4;
  std::uint16_t slots_per_node = 2;
  std::uint8_t replication = 3;
  std::filesystem::path storage_root;
  std::uint64_t block_records = 262144;
  std::uint32_t max_blocks_per_split = 16;
  IndexerConfig indexer;
  ProjectionMode projection = ProjectionMode::invisible;
  IndexCountMode index_count = IndexCountMode::per_attribute;
  PolicyConfig policy;
  TimingConfig timing;

  std::uint32_t n_slots() const { return std::uint32_t{node_count} * slots_per_node; }
  /// Throws ConfigError.
  void validate() const;
};

/// Reads the JSON config. Unknown keys are rejected; `storage_root` defaults
/// to `default_root` when the file leaves it out.
ClusterConfig load_cluster_config(const std::filesystem::path& path,
                                  const std::filesystem::path& default_root = {});
ClusterConfig parse_cluster_config(const std::string& json_text, const std::filesystem::path& default_root = {});
std::string cluster_config_to_json(const ClusterConfig& config);

/// Nodes are directories below one storage root. The cluster owns the replica
/// registry (journaled to <root>/registry.journal) and one Adaptive Indexer per node.
class Cluster {
 public:
  /// Initializes an empty root. Throws ConfigError when the root already holds a cluster.
  static std::unique_ptr<Cluster> create(const ClusterConfig& config);
  /// Reopens a root written by create(), replaying the registry journal.
  /// Settings in `overrides` other than the root replace the stored ones.
  static std::unique_ptr<Cluster> open(const std::filesystem::path& root,
                                       const std::optional<ClusterConfig>& overrides = {});

  ~Cluster();

  const ClusterConfig& config() const { return config_; }
  const std::filesystem::path& root() const { return config_.storage_root; }
  ReplicaRegistry& registry() { return *registry_; }
  const ReplicaRegistry& registry() const { return *registry_; }
  AdaptiveIndexer& indexer(NodeId node);

  /// Splits `table` into blocks of `block_records` records and stores r normal
  /// replicas per block on nodes (b + j) mod n. Replica j is sorted and indexed
  /// on index_attributes[j] when given.
  void upload(const Table& table, const std::vector<std::string>& index_attributes = {});

  /// Waits for every node's indexer to drain.
  void flush_indexers();

  /// Nodes holding a normal replica of `block`, ascending.
  std::vector<NodeId> replica_nodes(BlockId block) const;

  std::filesystem::path calibration_path() const { return root() / "calibration.json"; }

 private:
  explicit Cluster(ClusterConfig config);

  ClusterConfig config_;
  std::unique_ptr<ReplicaRegistry> registry_;
  std::vector<std::unique_ptr<AdaptiveIndexer>> indexers_;
};

/// Runs `tasks` in consecutive waves of at most `slots` tasks. Tasks of one
/// wave run on their own threads and the wave ends when all of them have
/// returned. `after_wave` runs on the calling thread between waves.
template <typename Result>
std::vector<Result> run_waves(std::size_t task_count, std::size_t slots, const std::function<Result(std::size_t)>& task,
                              const std::function<void(std::size_t wave)>& after_wave = {});

}  // namespace adx

#include "adx/detail/run_waves.hpp"
