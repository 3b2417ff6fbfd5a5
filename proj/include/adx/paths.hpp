#pragma once

#include <filesystem>
#include <string>

#include "adx/types.hpp"

namespace adx {

// <root>/node_<k>/blocks/blk_<id>
// <root>/node_<k>/pseudo/blk_<id>/<attr>

std::filesystem::path node_root(const std::filesystem::path& storage_root, NodeId node);
std::filesystem::path normal_replica_path(const std::filesystem::path& storage_root, NodeId node, BlockId block);
std::filesystem::path pseudo_replica_path(const std::filesystem::path& storage_root, NodeId node, BlockId block,
                                          const std::string& attribute);
/// pseudo/blk_<id>/.<attr>.tmp.<nonce>
std::filesystem::path pseudo_temp_path(const std::filesystem::path& storage_root, NodeId node, BlockId block,
                                       const std::string& attribute, std::uint64_t nonce);

}  // namespace adx
