#include "adx/sparse_index.hpp"

#include <algorithm>

namespace adx {

SparseClusteredIndex SparseClusteredIndex::build(const std::string& attribute, const Column& sorted,
                                                 std::uint32_t page_size_records) {
  if (page_size_records == 0) throw SchemaError("page size must be positive");
  SparseClusteredIndex index;
  index.attribute = attribute;
  index.page_size_records = page_size_records;
  index.record_count = sorted.size();
  for (std::uint64_t start = 0; start < index.record_count; start += page_size_records)
    index.entries.push_back({sorted.value_at(start), start});
  return index;
}

RowRange SparseClusteredIndex::candidate_range(const Value& low, const Value& high) const {
  if (entries.empty() || compare_values(low, high) > 0) return {0, 0};
  // First page whose first key is >= low; the page before it may still end with keys == low.
  auto first_ge = std::partition_point(entries.begin(), entries.end(),
                                       [&](const Entry& e) { return compare_values(e.first_key, low) < 0; });
  std::size_t first_page = first_ge == entries.begin() ? 0 : static_cast<std::size_t>(first_ge - entries.begin()) - 1;
  // Pages starting above `high` hold nothing qualifying.
  auto first_gt = std::partition_point(entries.begin(), entries.end(),
                                       [&](const Entry& e) { return compare_values(e.first_key, high) <= 0; });
  if (first_gt == entries.begin()) return {0, 0};
  std::size_t last_page = static_cast<std::size_t>(first_gt - entries.begin()) - 1;
  if (last_page < first_page) return {0, 0};
  std::uint64_t end = last_page + 1 < entries.size() ? entries[last_page + 1].start_record : record_count;
  return {entries[first_page].start_record, end};
}

bool SparseClusteredIndex::consistent_with(const Column& sorted) const {
  if (record_count != sorted.size()) return false;
  if (record_count == 0) return entries.empty();
  if (entries.empty() || entries.front().start_record != 0) return false;
  for (std::size_t k = 0; k < entries.size(); ++k) {
    const auto& e = entries[k];
    if (e.start_record >= record_count) return false;
    if (sorted.compare(e.start_record, e.first_key) != 0) return false;
    if (k > 0) {
      if (e.start_record <= entries[k - 1].start_record) return false;
      if (compare_values(entries[k - 1].first_key, e.first_key) > 0) return false;
    }
  }
  return true;
}

RowRange narrow_range(const Column& column, RowRange candidate, const Value& low, const Value& high) {
  std::size_t n = column.size();
  std::size_t lo = 0, hi = n;
  // lower bound of low
  while (lo < hi) {
    std::size_t mid = lo + (hi - lo) / 2;
    if (column.compare(mid, low) < 0)
      lo = mid + 1;
    else
      hi = mid;
  }
  std::size_t begin = lo;
  hi = n;
  // upper bound of high
  while (lo < hi) {
    std::size_t mid = lo + (hi - lo) / 2;
    if (column.compare(mid, high) <= 0)
      lo = mid + 1;
    else
      hi = mid;
  }
  return {candidate.begin + begin, candidate.begin + lo};
}

}  // namespace adx
