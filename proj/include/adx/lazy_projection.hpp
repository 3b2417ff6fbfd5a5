#pragma once

#include <cstdint>
#include <filesystem>
#include <set>
#include <string>

#include "adx/block_file.hpp"
#include "adx/index_writer.hpp"

namespace adx {

/// Sorts a block holding a subset of the dataset attributes on `attribute` and
/// stores it as a partial pseudo replica carrying its permutation vector. A
/// block with every attribute becomes an ordinary pseudo replica.
WriteOutcome build_partial(const DataBlock& block, const std::string& attribute,
                           const std::filesystem::path& storage_root, NodeId node, ReplicaRegistry& registry,
                           std::uint32_t page_size_records, std::uint64_t nonce, const TempWriteHook& hook = {});

enum class CompletionOutcome { unchanged, appended, completed, skipped_no_local_replica, failed };

std::string to_string(CompletionOutcome outcome);

/// Adds `wanted` attributes missing from the partial replica of
/// (block, attribute) on `node`. Missing columns come from the node's normal
/// replica and are reordered with the stored permutation vector. The replica
/// is rewritten to a temporary file and renamed over the old one. Once every
/// attribute is present the permutation vector is dropped and the registry
/// entry becomes a plain pseudo replica.
CompletionOutcome complete_partial(const std::filesystem::path& storage_root, NodeId node, BlockId block,
                                   const std::string& attribute, const std::set<std::string>& wanted,
                                   ReplicaRegistry& registry, std::uint64_t nonce, IoCounter* io = nullptr);

}  // namespace adx
