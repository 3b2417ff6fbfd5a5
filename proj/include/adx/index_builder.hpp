#pragma once

#include <cstdint>
#include <string>

#include "adx/data_block.hpp"

namespace adx {

inline constexpr std::uint32_t kDefaultPageSizeRecords = 1024;

struct BuiltIndex {
  DataBlock block;  ///< sorted on the attribute, with sort_attribute and index set
  PermutationVector permutation;
  SparseClusteredIndex index;
};

/// Stable sort order of `column`: the permutation with new[perm[i]] = old[i].
PermutationVector sort_permutation(const Column& column);

/// Sorts `block` on `attribute`, aligns every other present attribute through
/// the permutation vector and builds the page directory. Works on partial
/// blocks: only the attributes present are reordered.
BuiltIndex build_index(const DataBlock& block, const std::string& attribute,
                       std::uint32_t page_size_records = kDefaultPageSizeRecords);

/// Reorders a column of the original block so that it lines up with a block
/// sorted by `perm`.
Column align(const Column& original, const PermutationVector& perm);

}  // namespace adx
