#include "adx/replica_registry.hpp"

#include <algorithm>

#include "json.hpp"

namespace adx {

using nlohmann::json;

std::string to_string(ReplicaKind kind) {
  switch (kind) {
    case ReplicaKind::normal:
      return "normal";
    case ReplicaKind::pseudo:
      return "pseudo";
    case ReplicaKind::partial_pseudo:
      return "partial_pseudo";
  }
  return "?";
}

ReplicaKind parse_replica_kind(const std::string& text) {
  if (text == "normal") return ReplicaKind::normal;
  if (text == "pseudo") return ReplicaKind::pseudo;
  if (text == "partial_pseudo") return ReplicaKind::partial_pseudo;
  throw RegistryError("unknown replica kind '" + text + "'");
}

namespace {

json to_json(const BlockReplicaInfo& info) {
  json j;
  j["node"] = to_u16(info.node);
  j["kind"] = to_string(info.kind);
  j["indexed"] = info.indexed_attribute ? json(*info.indexed_attribute) : json(nullptr);
  j["available"] = info.available_attributes;
  j["path"] = info.path.string();
  j["perm"] = info.has_permutation_vector;
  return j;
}

BlockReplicaInfo replica_from_json(const json& j) {
  BlockReplicaInfo info;
  info.node = NodeId{j.at("node").get<std::uint16_t>()};
  info.kind = parse_replica_kind(j.at("kind").get<std::string>());
  if (!j.at("indexed").is_null()) info.indexed_attribute = j.at("indexed").get<std::string>();
  info.available_attributes = j.at("available").get<std::set<std::string>>();
  info.path = j.at("path").get<std::string>();
  info.has_permutation_vector = j.at("perm").get<bool>();
  return info;
}

json schema_to_json(const Schema& schema) {
  json attrs = json::array();
  for (const auto& a : schema.attributes()) attrs.push_back({{"name", a.name}, {"type", to_string(a.type)}});
  return attrs;
}

Schema schema_from_json(const json& j) {
  std::vector<Attribute> attrs;
  for (const auto& a : j) attrs.push_back({a.at("name").get<std::string>(), parse_attribute_type(a.at("type").get<std::string>())});
  return Schema(std::move(attrs));
}

bool is_index_replica(const BlockReplicaInfo& r) { return r.kind != ReplicaKind::normal; }

void check_replica_invariants(const BlockReplicaInfo& info, const Schema& schema) {
  switch (info.kind) {
    case ReplicaKind::normal:
      if (info.has_permutation_vector) throw RegistryError("normal replicas carry no permutation vector");
      if (!schema.empty() && info.available_attributes != schema.name_set())
        throw RegistryError("normal replicas hold the full schema");
      break;
    case ReplicaKind::pseudo:
      if (!info.indexed_attribute) throw RegistryError("pseudo replica without indexed attribute");
      if (!schema.empty() && info.available_attributes != schema.name_set())
        throw RegistryError("pseudo replicas hold the full schema");
      break;
    case ReplicaKind::partial_pseudo:
      if (!info.indexed_attribute || !info.available_attributes.contains(*info.indexed_attribute))
        throw RegistryError("partial pseudo replica must contain its indexed attribute");
      if (!info.has_permutation_vector) throw RegistryError("partial pseudo replica without permutation vector");
      break;
  }
}

}  // namespace

ReplicaRegistry::ReplicaRegistry(std::filesystem::path journal) : journal_path_(std::move(journal)) {
  std::ifstream in(journal_path_);
  std::string line;
  std::size_t line_no = 0;
  while (in && std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      json ev = json::parse(line);
      const auto type = ev.at("event").get<std::string>();
      if (type == "dataset") {
        dataset_.schema = schema_from_json(ev.at("schema"));
        dataset_.replication = ev.at("replication").get<std::uint8_t>();
      } else if (type == "block") {
        BlockId id{ev.at("block").get<std::uint64_t>()};
        dataset_.blocks.push_back(id);
        dataset_.record_counts[id] = ev.at("records").get<std::uint64_t>();
        replicas_[id];
      } else if (type == "register") {
        apply_register(BlockId{ev.at("block").get<std::uint64_t>()}, replica_from_json(ev.at("replica")));
      } else if (type == "update") {
        BlockId id{ev.at("block").get<std::uint64_t>()};
        auto info = replica_from_json(ev.at("replica"));
        for (auto& r : replicas_[id])
          if (is_index_replica(r) && r.indexed_attribute == info.indexed_attribute) r = info;
      } else {
        throw RegistryError("unknown event '" + type + "'");
      }
    } catch (const json::exception& e) {
      throw RegistryError(journal_path_.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  std::sort(dataset_.blocks.begin(), dataset_.blocks.end());
  journal_.open(journal_path_, std::ios::app);
  if (!journal_) throw IoError("cannot open registry journal " + journal_path_.string());
}

void ReplicaRegistry::append(const std::string& line) {
  if (!journal_.is_open()) return;
  journal_ << line << '\n';
  journal_.flush();
  if (!journal_) throw IoError("registry journal write failed");
}

void ReplicaRegistry::set_dataset(const Schema& schema, std::uint8_t replication) {
  std::unique_lock lock(mu_);
  if (replication == 0) throw RegistryError("replication factor must be positive");
  dataset_.schema = schema;
  dataset_.replication = replication;
  append(json{{"event", "dataset"}, {"schema", schema_to_json(schema)}, {"replication", replication}}.dump());
}

void ReplicaRegistry::add_block(BlockId block, std::uint64_t record_count) {
  std::unique_lock lock(mu_);
  if (replicas_.contains(block)) throw RegistryError("block " + std::to_string(to_u64(block)) + " already known");
  replicas_[block];
  dataset_.blocks.insert(std::upper_bound(dataset_.blocks.begin(), dataset_.blocks.end(), block), block);
  dataset_.record_counts[block] = record_count;
  append(json{{"event", "block"}, {"block", to_u64(block)}, {"records", record_count}}.dump());
}

void ReplicaRegistry::apply_register(BlockId block, const BlockReplicaInfo& info) { replicas_[block].push_back(info); }

bool ReplicaRegistry::register_replica(BlockId block, const BlockReplicaInfo& info) {
  std::unique_lock lock(mu_);
  auto it = replicas_.find(block);
  if (it == replicas_.end()) throw RegistryError("unknown block " + std::to_string(to_u64(block)));
  check_replica_invariants(info, dataset_.schema);
  auto& list = it->second;
  if (info.kind == ReplicaKind::normal) {
    if (std::any_of(list.begin(), list.end(),
                    [&](const auto& r) { return r.kind == ReplicaKind::normal && r.node == info.node; }))
      return false;
    auto normals = std::count_if(list.begin(), list.end(), [](const auto& r) { return r.kind == ReplicaKind::normal; });
    if (static_cast<std::size_t>(normals) >= dataset_.replication)
      throw RegistryError("block " + std::to_string(to_u64(block)) + " already has " +
                          std::to_string(dataset_.replication) + " normal replicas");
  } else if (std::any_of(list.begin(), list.end(), [&](const auto& r) {
               return is_index_replica(r) && r.indexed_attribute == info.indexed_attribute;
             })) {
    return false;
  }
  apply_register(block, info);
  append(json{{"event", "register"}, {"block", to_u64(block)}, {"replica", to_json(info)}}.dump());
  return true;
}

void ReplicaRegistry::update_index_replica(BlockId block, const BlockReplicaInfo& info) {
  std::unique_lock lock(mu_);
  if (info.kind == ReplicaKind::normal) throw RegistryError("only pseudo replicas can be updated");
  check_replica_invariants(info, dataset_.schema);
  auto it = replicas_.find(block);
  if (it == replicas_.end()) throw RegistryError("unknown block " + std::to_string(to_u64(block)));
  for (auto& r : it->second) {
    if (is_index_replica(r) && r.indexed_attribute == info.indexed_attribute) {
      r = info;
      append(json{{"event", "update"}, {"block", to_u64(block)}, {"replica", to_json(info)}}.dump());
      return;
    }
  }
  throw RegistryError("no pseudo replica to update for block " + std::to_string(to_u64(block)));
}

std::vector<BlockReplicaInfo> ReplicaRegistry::lookup(BlockId block) const {
  std::shared_lock lock(mu_);
  auto it = replicas_.find(block);
  if (it == replicas_.end()) return {};
  return it->second;
}

std::optional<BlockReplicaInfo> ReplicaRegistry::find_index(BlockId block, const std::string& attribute) const {
  std::shared_lock lock(mu_);
  auto it = replicas_.find(block);
  if (it == replicas_.end()) return std::nullopt;
  const BlockReplicaInfo* best = nullptr;
  for (const auto& r : it->second) {
    if (r.indexed_attribute != attribute) continue;
    if (!best || r.kind < best->kind || (r.kind == best->kind && r.node < best->node)) best = &r;
  }
  if (!best) return std::nullopt;
  return *best;
}

std::size_t ReplicaRegistry::count_pseudo_replicas(NodeId node, const std::optional<std::string>& attribute) const {
  std::shared_lock lock(mu_);
  std::size_t n = 0;
  for (const auto& [_, list] : replicas_)
    for (const auto& r : list)
      if (is_index_replica(r) && r.node == node && (!attribute || r.indexed_attribute == attribute)) ++n;
  return n;
}

std::size_t ReplicaRegistry::count_indexed_blocks(const std::string& attribute) const {
  std::shared_lock lock(mu_);
  std::size_t n = 0;
  for (const auto& [_, list] : replicas_)
    if (std::any_of(list.begin(), list.end(), [&](const auto& r) { return r.indexed_attribute == attribute; })) ++n;
  return n;
}

bool ReplicaRegistry::knows(BlockId block) const {
  std::shared_lock lock(mu_);
  return replicas_.contains(block);
}

DatasetInfo ReplicaRegistry::dataset() const {
  std::shared_lock lock(mu_);
  return dataset_;
}

Schema ReplicaRegistry::schema() const {
  std::shared_lock lock(mu_);
  return dataset_.schema;
}

}  // namespace adx
