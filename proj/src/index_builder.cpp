#include "adx/index_builder.hpp"

#include <algorithm>
#include <numeric>

namespace adx {

PermutationVector sort_permutation(const Column& column) {
  std::vector<std::uint64_t> order(column.size());
  std::iota(order.begin(), order.end(), std::uint64_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::uint64_t a, std::uint64_t b) { return column.compare_rows(a, b) < 0; });
  // order[new] = old; invert into old -> new.
  PermutationVector p;
  p.perm.resize(order.size());
  for (std::size_t j = 0; j < order.size(); ++j) p.perm[order[j]] = j;
  return p;
}

Column align(const Column& original, const PermutationVector& perm) { return original.permuted(perm.perm); }

BuiltIndex build_index(const DataBlock& block, const std::string& attribute, std::uint32_t page_size_records) {
  if (!block.has(attribute)) throw SchemaError("cannot index on absent attribute '" + attribute + "'");
  BuiltIndex out;
  out.permutation = sort_permutation(block.column(attribute));

  out.block.id = block.id;
  out.block.schema = block.schema;
  out.block.record_count = block.record_count;
  out.block.columns.reserve(block.columns.size());
  for (const auto& c : block.columns) out.block.columns.push_back(align(c, out.permutation));

  out.index = SparseClusteredIndex::build(attribute, out.block.column(attribute), page_size_records);
  out.block.sort_attribute = attribute;
  out.block.index = out.index;
  return out;
}

}  // namespace adx
