#include "adx/paths.hpp"

namespace adx {

std::filesystem::path node_root(const std::filesystem::path& storage_root, NodeId node) {
  return storage_root / ("node_" + std::to_string(to_u16(node)));
}

std::filesystem::path normal_replica_path(const std::filesystem::path& storage_root, NodeId node, BlockId block) {
  return node_root(storage_root, node) / "blocks" / ("blk_" + std::to_string(to_u64(block)));
}

std::filesystem::path pseudo_replica_path(const std::filesystem::path& storage_root, NodeId node, BlockId block,
                                          const std::string& attribute) {
  return node_root(storage_root, node) / "pseudo" / ("blk_" + std::to_string(to_u64(block))) / attribute;
}

std::filesystem::path pseudo_temp_path(const std::filesystem::path& storage_root, NodeId node, BlockId block,
                                       const std::string& attribute, std::uint64_t nonce) {
  return pseudo_replica_path(storage_root, node, block, attribute).parent_path() /
         ("." + attribute + ".tmp." + std::to_string(nonce));
}

}  // namespace adx
