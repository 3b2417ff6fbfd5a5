#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>

#include "adx/data_block.hpp"
#include "adx/replica_registry.hpp"

namespace adx {

enum class WriteOutcome { won, lost, failed };

std::string to_string(WriteOutcome outcome);

/// Test seam: called after the temporary file is written and before the
/// commit. Throwing from it simulates a storage failure.
using TempWriteHook = std::function<void(const std::filesystem::path& temp)>;

/// Persists a sorted (and indexed) block as a pseudo replica on `node` using
/// the write-once protocol: write pseudo/blk_<id>/.<attr>.tmp.<nonce>, then
/// link it to pseudo/blk_<id>/<attr> without replacing, then claim the
/// (block, attribute) slot in the registry. Losers remove what they wrote.
/// A block whose attribute set is the full dataset schema becomes a pseudo
/// replica and drops any permutation vector; a subset becomes a partial
/// pseudo replica and must carry its permutation vector.
/// Storage failures are reported as `failed`, never thrown.
WriteOutcome write_pseudo_replica(DataBlock sorted, const std::filesystem::path& storage_root, NodeId node,
                                  ReplicaRegistry& registry, std::uint64_t nonce, const TempWriteHook& hook = {});

/// Process-wide unique nonce for temporary file names.
std::uint64_t next_write_nonce();

}  // namespace adx
