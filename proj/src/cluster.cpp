#include "adx/cluster.hpp"

#include <fstream>
#include <sstream>

#include "adx/block_file.hpp"
#include "adx/index_builder.hpp"
#include "adx/paths.hpp"
#include "json.hpp"

namespace adx {

namespace fs = std::filesystem;
using nlohmann::json;

std::string to_string(PolicyMode mode) {
  switch (mode) {
    case PolicyMode::constant:
      return "constant";
    case PolicyMode::eager:
      return "eager";
    case PolicyMode::selectivity:
      return "selectivity";
  }
  return "?";
}

std::string to_string(ProjectionMode mode) { return mode == ProjectionMode::lazy ? "lazy" : "invisible"; }

void ClusterConfig::validate() const {
  if (node_count == 0) throw ConfigError("nodes must be at least 1");
  if (slots_per_node == 0) throw ConfigError("slots_per_node must be at least 1");
  if (replication == 0) throw ConfigError("replication must be at least 1");
  if (replication > node_count)
    throw ConfigError("replication " + std::to_string(replication) + " needs at least as many nodes, have " +
                      std::to_string(node_count));
  if (block_records == 0) throw ConfigError("block_records must be positive");
  if (max_blocks_per_split == 0) throw ConfigError("max_blocks_per_split must be positive");
  if (indexer.build_queue_capacity == 0 || indexer.write_queue_capacity == 0)
    throw ConfigError("indexer queues need room for at least one block");
  if (indexer.page_size_records == 0) throw ConfigError("page_size_records must be positive");
  if (policy.rho < 0 || policy.rho > 1) throw ConfigError("rho must lie in [0, 1]");
  if (timing.task_startup < 0 || timing.seconds_per_byte < 0 || timing.index_overhead_per_block < 0)
    throw ConfigError("timing parameters must be non-negative");
}

namespace {

template <typename T>
void take(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

template <typename T>
void take(const json& j, const char* key, std::optional<T>& out) {
  if (j.contains(key) && !j.at(key).is_null()) out = j.at(key).get<T>();
}

void reject_unknown(const json& j, std::initializer_list<const char*> known, const std::string& where) {
  for (const auto& [key, _] : j.items()) {
    bool ok = false;
    for (const char* k : known) ok = ok || key == k;
    if (!ok) throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

PolicyMode parse_policy_mode(const std::string& s) {
  if (s == "constant") return PolicyMode::constant;
  if (s == "eager") return PolicyMode::eager;
  if (s == "selectivity") return PolicyMode::selectivity;
  throw ConfigError("policy mode must be constant, eager or selectivity, got '" + s + "'");
}

}  // namespace

ClusterConfig parse_cluster_config(const std::string& json_text, const fs::path& default_root) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("cluster config is not valid JSON: ") + e.what());
  }
  ClusterConfig c;
  c.storage_root = default_root;
  try {
    reject_unknown(j,
                   {"nodes", "slots_per_node", "replication", "block_records", "storage_root", "max_blocks_per_split",
                    "indexer", "projection", "index_count", "policy", "timing"},
                   "cluster config");
    take(j, "nodes", c.node_count);
    take(j, "slots_per_node", c.slots_per_node);
    take(j, "replication", c.replication);
    take(j, "block_records", c.block_records);
    take(j, "max_blocks_per_split", c.max_blocks_per_split);
    if (j.contains("storage_root")) c.storage_root = j.at("storage_root").get<std::string>();
    if (j.contains("projection")) {
      auto p = j.at("projection").get<std::string>();
      if (p != "invisible" && p != "lazy") throw ConfigError("projection must be invisible or lazy");
      c.projection = p == "lazy" ? ProjectionMode::lazy : ProjectionMode::invisible;
    }
    if (j.contains("index_count")) {
      auto p = j.at("index_count").get<std::string>();
      if (p != "per_attribute" && p != "total") throw ConfigError("index_count must be per_attribute or total");
      c.index_count = p == "total" ? IndexCountMode::total : IndexCountMode::per_attribute;
    }
    if (j.contains("indexer")) {
      const auto& ij = j.at("indexer");
      reject_unknown(ij, {"build_queue", "write_queue", "page_size_records"}, "indexer");
      take(ij, "build_queue", c.indexer.build_queue_capacity);
      take(ij, "write_queue", c.indexer.write_queue_capacity);
      take(ij, "page_size_records", c.indexer.page_size_records);
    }
    if (j.contains("policy")) {
      const auto& pj = j.at("policy");
      reject_unknown(pj,
                     {"mode", "rho", "target_seconds", "t_fsw", "t_idx_overhead", "selectivity_threshold",
                      "selectivity_comparison"},
                     "policy");
      if (pj.contains("mode")) c.policy.mode = parse_policy_mode(pj.at("mode").get<std::string>());
      take(pj, "rho", c.policy.rho);
      take(pj, "target_seconds", c.policy.target_seconds);
      take(pj, "t_fsw", c.policy.t_fsw);
      take(pj, "t_idx_overhead", c.policy.t_idx_overhead);
      take(pj, "selectivity_threshold", c.policy.selectivity_threshold);
      if (pj.contains("selectivity_comparison")) {
        auto s = pj.at("selectivity_comparison").get<std::string>();
        if (s != "at_least" && s != "at_most") throw ConfigError("selectivity_comparison must be at_least or at_most");
        c.policy.selectivity_comparison =
            s == "at_most" ? SelectivityComparison::at_most : SelectivityComparison::at_least;
      }
    }
    if (j.contains("timing")) {
      const auto& tj = j.at("timing");
      reject_unknown(tj, {"task_startup", "seconds_per_byte", "index_overhead_per_block"}, "timing");
      take(tj, "task_startup", c.timing.task_startup);
      take(tj, "seconds_per_byte", c.timing.seconds_per_byte);
      take(tj, "index_overhead_per_block", c.timing.index_overhead_per_block);
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("cluster config: ") + e.what());
  }
  c.validate();
  return c;
}

ClusterConfig load_cluster_config(const fs::path& path, const fs::path& default_root) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read cluster config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_cluster_config(ss.str(), default_root);
}

std::string cluster_config_to_json(const ClusterConfig& c) {
  json j;
  j["nodes"] = c.node_count;
  j["slots_per_node"] = c.slots_per_node;
  j["replication"] = c.replication;
  j["block_records"] = c.block_records;
  j["storage_root"] = c.storage_root.string();
  j["max_blocks_per_split"] = c.max_blocks_per_split;
  j["projection"] = to_string(c.projection);
  j["index_count"] = c.index_count == IndexCountMode::total ? "total" : "per_attribute";
  j["indexer"] = {{"build_queue", c.indexer.build_queue_capacity},
                  {"write_queue", c.indexer.write_queue_capacity},
                  {"page_size_records", c.indexer.page_size_records}};
  json p;
  p["mode"] = to_string(c.policy.mode);
  p["rho"] = c.policy.rho;
  if (c.policy.target_seconds) p["target_seconds"] = *c.policy.target_seconds;
  if (c.policy.t_fsw) p["t_fsw"] = *c.policy.t_fsw;
  if (c.policy.t_idx_overhead) p["t_idx_overhead"] = *c.policy.t_idx_overhead;
  p["selectivity_threshold"] = c.policy.selectivity_threshold;
  p["selectivity_comparison"] =
      c.policy.selectivity_comparison == SelectivityComparison::at_most ? "at_most" : "at_least";
  j["policy"] = p;
  j["timing"] = {{"task_startup", c.timing.task_startup},
                 {"seconds_per_byte", c.timing.seconds_per_byte},
                 {"index_overhead_per_block", c.timing.index_overhead_per_block}};
  return j.dump(2);
}

Cluster::Cluster(ClusterConfig config) : config_(std::move(config)) {
  config_.validate();
  registry_ = std::make_unique<ReplicaRegistry>(config_.storage_root / "registry.journal");
  for (std::uint16_t k = 0; k < config_.node_count; ++k)
    indexers_.push_back(std::make_unique<AdaptiveIndexer>(NodeId{k}, config_.storage_root, *registry_, config_.indexer));
}

Cluster::~Cluster() = default;

std::unique_ptr<Cluster> Cluster::create(const ClusterConfig& config) {
  if (config.storage_root.empty()) throw ConfigError("storage_root is not set");
  config.validate();
  if (fs::exists(config.storage_root / "cluster.json"))
    throw ConfigError(config.storage_root.string() + " already holds a cluster");
  fs::create_directories(config.storage_root);
  ClusterConfig stored = config;
  stored.storage_root = fs::absolute(config.storage_root).lexically_normal();
  for (std::uint16_t k = 0; k < stored.node_count; ++k) {
    fs::create_directories(node_root(stored.storage_root, NodeId{k}) / "blocks");
    fs::create_directories(node_root(stored.storage_root, NodeId{k}) / "pseudo");
  }
  std::ofstream(stored.storage_root / "cluster.json") << cluster_config_to_json(stored) << '\n';
  return std::unique_ptr<Cluster>(new Cluster(stored));
}

std::unique_ptr<Cluster> Cluster::open(const fs::path& root, const std::optional<ClusterConfig>& overrides) {
  const fs::path abs = fs::absolute(root).lexically_normal();
  if (!fs::exists(abs / "cluster.json")) throw ConfigError(abs.string() + " holds no cluster");
  ClusterConfig stored = load_cluster_config(abs / "cluster.json");
  stored.storage_root = abs;
  if (overrides) {
    ClusterConfig merged = *overrides;
    merged.storage_root = abs;
    if (merged.node_count != stored.node_count || merged.replication != stored.replication ||
        merged.block_records != stored.block_records)
      throw ConfigError("nodes, replication and block_records are fixed once a cluster is created");
    stored = merged;
  }
  return std::unique_ptr<Cluster>(new Cluster(stored));
}

AdaptiveIndexer& Cluster::indexer(NodeId node) {
  if (to_u16(node) >= indexers_.size()) throw ConfigError("no node " + std::to_string(to_u16(node)));
  return *indexers_[to_u16(node)];
}

void Cluster::flush_indexers() {
  for (auto& ix : indexers_) ix->flush();
}

std::vector<NodeId> Cluster::replica_nodes(BlockId block) const {
  std::vector<NodeId> nodes;
  for (const auto& r : registry_->lookup(block))
    if (r.kind == ReplicaKind::normal) nodes.push_back(r.node);
  std::sort(nodes.begin(), nodes.end());
  return nodes;
}

void Cluster::upload(const Table& table, const std::vector<std::string>& index_attributes) {
  if (index_attributes.size() > config_.replication)
    throw ConfigError("at most one upload index per replica (" + std::to_string(config_.replication) + ")");
  for (const auto& a : index_attributes) table.schema.ordinal(a);
  if (!registry_->dataset().blocks.empty()) throw ConfigError("this cluster already holds a dataset");
  registry_->set_dataset(table.schema, config_.replication);

  const std::uint64_t rows = table.rows();
  const std::uint64_t n = config_.node_count;
  std::uint64_t b = 0;
  for (std::uint64_t begin = 0; begin < rows; begin += config_.block_records, ++b) {
    const RowRange range{begin, std::min(rows, begin + config_.block_records)};
    DataBlock block;
    block.id = BlockId{b};
    block.schema = table.schema;
    block.record_count = range.size();
    for (const auto& c : table.columns) block.columns.push_back(c.slice(range));
    registry_->add_block(block.id, block.record_count);

    for (std::uint64_t j = 0; j < config_.replication; ++j) {
      const NodeId node{static_cast<std::uint16_t>((b + j) % n)};
      BlockReplicaInfo info;
      info.node = node;
      info.kind = ReplicaKind::normal;
      info.available_attributes = table.schema.name_set();
      info.path = normal_replica_path(config_.storage_root, node, block.id);
      if (j < index_attributes.size()) {
        BuiltIndex built = build_index(block, index_attributes[j], config_.indexer.page_size_records);
        write_block(built.block, info.path);
        info.indexed_attribute = index_attributes[j];
      } else {
        write_block(block, info.path);
      }
      registry_->register_replica(block.id, info);
    }
  }
}

}  // namespace adx
