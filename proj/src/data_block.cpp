#include "adx/data_block.hpp"

#include <numeric>

namespace adx {

bool PermutationVector::is_bijection() const {
  std::vector<bool> seen(perm.size(), false);
  for (auto p : perm) {
    if (p >= perm.size() || seen[p]) return false;
    seen[p] = true;
  }
  return true;
}

PermutationVector PermutationVector::inverse() const {
  PermutationVector inv;
  inv.perm.resize(perm.size());
  for (std::size_t i = 0; i < perm.size(); ++i) inv.perm[perm[i]] = i;
  return inv;
}

PermutationVector PermutationVector::identity(std::size_t n) {
  PermutationVector p;
  p.perm.resize(n);
  std::iota(p.perm.begin(), p.perm.end(), std::uint64_t{0});
  return p;
}

void DataBlock::validate() const {
  if (schema.empty()) throw SchemaError("block has no attributes");
  if (columns.size() != schema.size()) throw FormatError("column count does not match block schema");
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (!(columns[i].type() == schema.at(i).type))
      throw FormatError("column '" + schema.at(i).name + "' has the wrong type");
    if (columns[i].size() != record_count)
      throw FormatError("column '" + schema.at(i).name + "' does not have record_count entries");
  }
  if (sort_attribute) {
    const Column& c = column(*sort_attribute);
    for (std::size_t r = 1; r < record_count; ++r)
      if (c.compare_rows(r - 1, r) > 0) throw FormatError("sort attribute '" + *sort_attribute + "' is not sorted");
  }
  if (index) {
    if (!sort_attribute || *sort_attribute != index->attribute)
      throw FormatError("index attribute must be the sort attribute");
    if (!index->consistent_with(column(index->attribute))) throw FormatError("sparse index does not match column");
  }
  if (permutation) {
    if (permutation->size() != record_count || !permutation->is_bijection())
      throw FormatError("permutation vector is not a bijection over the block");
  }
}

DataBlock DataBlock::project(const std::set<std::string>& names) const {
  DataBlock out;
  out.id = id;
  out.record_count = record_count;
  out.schema = schema.project(names);
  for (const auto& a : out.schema.attributes()) out.columns.push_back(column(a.name));
  if (sort_attribute && names.contains(*sort_attribute)) {
    out.sort_attribute = sort_attribute;
    out.index = index;
  }
  return out;
}

std::uint64_t DataBlock::checksum() const {
  // FNV-1a over every column, mixed with the attribute name.
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&](std::byte b) {
    h ^= static_cast<std::uint64_t>(b);
    h *= 1099511628211ULL;
  };
  for (std::size_t i = 0; i < columns.size(); ++i) {
    for (char ch : schema.at(i).name) mix(static_cast<std::byte>(ch));
    for (std::byte b : columns[i].bytes()) mix(b);
  }
  return h;
}

}  // namespace adx
