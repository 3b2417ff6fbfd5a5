#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "adx/column.hpp"
#include "adx/types.hpp"

namespace adx {

/// Page directory over a sorted column: one (first key, first record) entry
/// per page of `page_size_records` records. Entry k covers records
/// [start_record_k, start_record_{k+1}); the last entry runs to record_count.
struct SparseClusteredIndex {
  struct Entry {
    Value first_key;
    std::uint64_t start_record = 0;
    bool operator==(const Entry&) const = default;
  };

  std::string attribute;
  std::uint32_t page_size_records = 1024;
  std::vector<Entry> entries;
  std::uint64_t record_count = 0;

  static SparseClusteredIndex build(const std::string& attribute, const Column& sorted,
                                    std::uint32_t page_size_records);

  /// Records of the pages that may hold keys in [low, high]. Never misses a
  /// qualifying record; may include non-qualifying ones at page edges.
  RowRange candidate_range(const Value& low, const Value& high) const;

  /// Checks the type invariants against the column the index was built on.
  bool consistent_with(const Column& sorted) const;

  bool operator==(const SparseClusteredIndex&) const = default;
};

/// Exact qualifying range inside `candidate` of a sorted column.
/// `column` holds only the candidate rows (row 0 = candidate.begin).
RowRange narrow_range(const Column& column, RowRange candidate, const Value& low, const Value& high);

}  // namespace adx
