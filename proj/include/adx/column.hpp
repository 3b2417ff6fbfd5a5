#pragma once

#include <cstddef>
#include <cstdint>
#include <cstring>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "adx/schema.hpp"
#include "adx/types.hpp"

namespace adx {

/// Half-open record range [begin, end).
struct RowRange {
  std::uint64_t begin = 0;
  std::uint64_t end = 0;

  std::uint64_t size() const { return end > begin ? end - begin : 0; }
  bool operator==(const RowRange&) const = default;
};

/// Contiguous fixed-width values of one attribute, stored exactly as they
/// appear in the columnar data section of a block file (little-endian).
class Column {
 public:
  Column() = default;
  Column(AttributeType type, std::vector<std::byte> bytes);
  explicit Column(AttributeType type, std::size_t rows = 0);

  static Column from_int64(std::span<const std::int64_t> values);
  static Column from_float64(std::span<const double> values);
  static Column from_strings(std::uint16_t width, std::span<const std::string> values);

  const AttributeType& type() const { return type_; }
  std::size_t size() const { return type_.width == 0 ? 0 : bytes_.size() / type_.width; }
  std::size_t byte_size() const { return bytes_.size(); }
  std::span<const std::byte> bytes() const { return bytes_; }
  std::span<std::byte> mutable_bytes() { return bytes_; }

  std::int64_t int64_at(std::size_t row) const {
    std::int64_t v;
    std::memcpy(&v, bytes_.data() + row * 8, 8);
    return v;
  }
  double float64_at(std::size_t row) const {
    double v;
    std::memcpy(&v, bytes_.data() + row * 8, 8);
    return v;
  }
  /// String value without trailing NUL padding.
  std::string_view string_at(std::size_t row) const;

  Value value_at(std::size_t row) const;
  void set(std::size_t row, const Value& value);
  void push_back(const Value& value);

  /// Three-way comparison of row `row` against `value` (which must match the column type).
  int compare(std::size_t row, const Value& value) const;
  /// Three-way comparison of two rows of this column.
  int compare_rows(std::size_t a, std::size_t b) const;

  Column slice(RowRange range) const;
  /// Scatter: result[perm[i]] = (*this)[i].
  Column permuted(std::span<const std::uint64_t> perm) const;
  /// Gather: result[j] = (*this)[rows[j]].
  Column gathered(std::span<const std::uint64_t> rows) const;

  bool operator==(const Column&) const = default;

 private:
  AttributeType type_;
  std::vector<std::byte> bytes_;
};

int compare_values(const Value& a, const Value& b);

}  // namespace adx
