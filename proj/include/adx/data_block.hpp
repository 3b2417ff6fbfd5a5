#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "adx/column.hpp"
#include "adx/schema.hpp"
#include "adx/sparse_index.hpp"
#include "adx/types.hpp"

namespace adx {

/// Old position i moves to new position perm[i].
struct PermutationVector {
  std::vector<std::uint64_t> perm;

  std::size_t size() const { return perm.size(); }
  bool is_bijection() const;
  PermutationVector inverse() const;
  static PermutationVector identity(std::size_t n);

  bool operator==(const PermutationVector&) const = default;
};

/// In-memory PAX block. `schema` lists the attributes actually present, which
/// for projected reads and partial replicas is a subset of the dataset schema.
struct DataBlock {
  BlockId id{};
  Schema schema;
  std::uint64_t record_count = 0;
  std::vector<Column> columns;  ///< parallel to schema.attributes()
  std::optional<std::string> sort_attribute;
  std::optional<SparseClusteredIndex> index;
  std::optional<PermutationVector> permutation;  ///< only on partial pseudo replicas

  const Column& column(std::string_view name) const { return columns[schema.ordinal(name)]; }
  Column& column(std::string_view name) { return columns[schema.ordinal(name)]; }
  bool has(std::string_view name) const { return schema.contains(name); }

  /// Throws SchemaError / FormatError describing the first violated invariant.
  void validate() const;

  /// Copy restricted to `names` (schema order kept).
  DataBlock project(const std::set<std::string>& names) const;

  /// FNV-1a digest of names and column bytes; used to check hand-offs.
  std::uint64_t checksum() const;

  bool operator==(const DataBlock&) const = default;
};

}  // namespace adx
