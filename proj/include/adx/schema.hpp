#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "adx/types.hpp"

namespace adx {

enum class TypeTag : std::uint8_t { int64 = 1, float64 = 2, fixed_string = 3 };

struct AttributeType {
  TypeTag tag = TypeTag::int64;
  std::uint16_t width = 8;  ///< element width in bytes; the string length for fixed_string

  static AttributeType int64() { return {TypeTag::int64, 8}; }
  static AttributeType float64() { return {TypeTag::float64, 8}; }
  static AttributeType fixed_string(std::uint16_t n) { return {TypeTag::fixed_string, n}; }

  bool operator==(const AttributeType&) const = default;
};

std::string to_string(const AttributeType& type);

/// Parses "int64", "float64" or "string(<n>)".
AttributeType parse_attribute_type(std::string_view text);

struct Attribute {
  std::string name;
  AttributeType type;

  bool operator==(const Attribute&) const = default;
};

/// Ordered attribute list. Names are unique and the list is never empty.
class Schema {
 public:
  Schema() = default;
  explicit Schema(std::vector<Attribute> attributes);

  const std::vector<Attribute>& attributes() const { return attributes_; }
  std::size_t size() const { return attributes_.size(); }
  bool empty() const { return attributes_.empty(); }

  const Attribute& at(std::size_t ordinal) const { return attributes_.at(ordinal); }
  std::optional<std::size_t> find(std::string_view name) const;
  /// Throws SchemaError for unknown names.
  std::size_t ordinal(std::string_view name) const;
  const Attribute& attribute(std::string_view name) const { return attributes_[ordinal(name)]; }
  bool contains(std::string_view name) const { return find(name).has_value(); }

  std::vector<std::string> names() const;
  std::set<std::string> name_set() const;
  /// Sum of all attribute widths.
  std::size_t record_width() const;

  /// Keeps schema order; throws SchemaError when a name is unknown.
  Schema project(const std::set<std::string>& names) const;

  bool operator==(const Schema&) const = default;

 private:
  std::vector<Attribute> attributes_;
};

}  // namespace adx
