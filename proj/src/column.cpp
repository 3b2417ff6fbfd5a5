#include "adx/column.hpp"

#include <algorithm>
#include <bit>

namespace adx {

static_assert(std::endian::native == std::endian::little, "block files are written in host byte order");

namespace {

template <typename T>
int three_way(const T& a, const T& b) {
  return a < b ? -1 : (b < a ? 1 : 0);
}

}  // namespace

int compare_values(const Value& a, const Value& b) {
  if (a.index() != b.index()) throw SchemaError("comparing values of different types");
  return std::visit(
      [&](const auto& lhs) {
        using T = std::decay_t<decltype(lhs)>;
        return three_way<T>(lhs, std::get<T>(b));
      },
      a);
}

Column::Column(AttributeType type, std::vector<std::byte> bytes) : type_(type), bytes_(std::move(bytes)) {
  if (type_.width == 0 || bytes_.size() % type_.width != 0)
    throw FormatError("column byte length is not a multiple of the element width");
}

Column::Column(AttributeType type, std::size_t rows) : type_(type), bytes_(rows * type.width) {}

Column Column::from_int64(std::span<const std::int64_t> values) {
  Column c(AttributeType::int64(), values.size());
  if (!values.empty()) std::memcpy(c.bytes_.data(), values.data(), values.size_bytes());
  return c;
}

Column Column::from_float64(std::span<const double> values) {
  Column c(AttributeType::float64(), values.size());
  if (!values.empty()) std::memcpy(c.bytes_.data(), values.data(), values.size_bytes());
  return c;
}

Column Column::from_strings(std::uint16_t width, std::span<const std::string> values) {
  Column c(AttributeType::fixed_string(width), values.size());
  for (std::size_t i = 0; i < values.size(); ++i) c.set(i, values[i]);
  return c;
}

std::string_view Column::string_at(std::size_t row) const {
  const char* p = reinterpret_cast<const char*>(bytes_.data() + row * type_.width);
  std::size_t n = type_.width;
  while (n > 0 && p[n - 1] == '\0') --n;
  return {p, n};
}

Value Column::value_at(std::size_t row) const {
  switch (type_.tag) {
    case TypeTag::int64:
      return int64_at(row);
    case TypeTag::float64:
      return float64_at(row);
    case TypeTag::fixed_string:
      return std::string(string_at(row));
  }
  return {};
}

void Column::set(std::size_t row, const Value& value) {
  std::byte* dst = bytes_.data() + row * type_.width;
  switch (type_.tag) {
    case TypeTag::int64: {
      auto v = std::get<std::int64_t>(value);
      std::memcpy(dst, &v, 8);
      break;
    }
    case TypeTag::float64: {
      auto v = std::get<double>(value);
      std::memcpy(dst, &v, 8);
      break;
    }
    case TypeTag::fixed_string: {
      const auto& s = std::get<std::string>(value);
      if (s.size() > type_.width)
        throw SchemaError("string '" + s + "' exceeds width " + std::to_string(type_.width));
      std::memset(dst, 0, type_.width);
      std::memcpy(dst, s.data(), s.size());
      break;
    }
  }
}

void Column::push_back(const Value& value) {
  bytes_.resize(bytes_.size() + type_.width);
  set(size() - 1, value);
}

int Column::compare(std::size_t row, const Value& value) const {
  switch (type_.tag) {
    case TypeTag::int64:
      return three_way(int64_at(row), std::get<std::int64_t>(value));
    case TypeTag::float64:
      return three_way(float64_at(row), std::get<double>(value));
    case TypeTag::fixed_string: {
      int c = string_at(row).compare(std::get<std::string>(value));
      return c < 0 ? -1 : (c > 0 ? 1 : 0);
    }
  }
  return 0;
}

int Column::compare_rows(std::size_t a, std::size_t b) const {
  switch (type_.tag) {
    case TypeTag::int64:
      return three_way(int64_at(a), int64_at(b));
    case TypeTag::float64:
      return three_way(float64_at(a), float64_at(b));
    case TypeTag::fixed_string: {
      // NUL padding sorts before any character, so raw bytes order like the trimmed strings.
      int c = std::memcmp(bytes_.data() + a * type_.width, bytes_.data() + b * type_.width, type_.width);
      return c < 0 ? -1 : (c > 0 ? 1 : 0);
    }
  }
  return 0;
}

Column Column::slice(RowRange range) const {
  range.end = std::min<std::uint64_t>(range.end, size());
  if (range.begin >= range.end) return Column(type_, 0);
  auto first = bytes_.begin() + static_cast<std::ptrdiff_t>(range.begin * type_.width);
  auto last = bytes_.begin() + static_cast<std::ptrdiff_t>(range.end * type_.width);
  return Column(type_, std::vector<std::byte>(first, last));
}

Column Column::permuted(std::span<const std::uint64_t> perm) const {
  if (perm.size() != size()) throw SchemaError("permutation length does not match column length");
  Column out(type_, size());
  const std::size_t w = type_.width;
  for (std::size_t i = 0; i < perm.size(); ++i)
    std::memcpy(out.bytes_.data() + perm[i] * w, bytes_.data() + i * w, w);
  return out;
}

Column Column::gathered(std::span<const std::uint64_t> rows) const {
  Column out(type_, rows.size());
  const std::size_t w = type_.width;
  for (std::size_t j = 0; j < rows.size(); ++j)
    std::memcpy(out.bytes_.data() + j * w, bytes_.data() + rows[j] * w, w);
  return out;
}

}  // namespace adx
