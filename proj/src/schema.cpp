#include "adx/schema.hpp"

#include <charconv>
#include <sstream>

namespace adx {

std::string to_string(const Value& v) {
  if (const auto* i = std::get_if<std::int64_t>(&v)) return std::to_string(*i);
  if (const auto* d = std::get_if<double>(&v)) {
    std::ostringstream out;
    out.precision(17);
    out << *d;
    return out.str();
  }
  return std::get<std::string>(v);
}

std::string to_string(const AttributeType& type) {
  switch (type.tag) {
    case TypeTag::int64:
      return "int64";
    case TypeTag::float64:
      return "float64";
    case TypeTag::fixed_string:
      return "string(" + std::to_string(type.width) + ")";
  }
  return "?";
}

AttributeType parse_attribute_type(std::string_view text) {
  if (text == "int64") return AttributeType::int64();
  if (text == "float64") return AttributeType::float64();
  if (text.starts_with("string(") && text.ends_with(")")) {
    auto digits = text.substr(7, text.size() - 8);
    unsigned width = 0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), width);
    if (ec == std::errc{} && ptr == digits.data() + digits.size() && width > 0 && width <= 65535)
      return AttributeType::fixed_string(static_cast<std::uint16_t>(width));
  }
  throw SchemaError("unknown attribute type '" + std::string(text) + "'");
}

Schema::Schema(std::vector<Attribute> attributes) : attributes_(std::move(attributes)) {
  if (attributes_.empty()) throw SchemaError("schema must have at least one attribute");
  std::set<std::string> seen;
  for (const auto& a : attributes_) {
    if (a.name.empty()) throw SchemaError("attribute names must be non-empty");
    if (!seen.insert(a.name).second) throw SchemaError("duplicate attribute '" + a.name + "'");
    if (a.type.width == 0) throw SchemaError("attribute '" + a.name + "' has zero width");
    if (a.type.tag != TypeTag::fixed_string && a.type.width != 8)
      throw SchemaError("numeric attribute '" + a.name + "' must be 8 bytes wide");
  }
}

std::optional<std::size_t> Schema::find(std::string_view name) const {
  for (std::size_t i = 0; i < attributes_.size(); ++i)
    if (attributes_[i].name == name) return i;
  return std::nullopt;
}

std::size_t Schema::ordinal(std::string_view name) const {
  if (auto i = find(name)) return *i;
  throw SchemaError("unknown attribute '" + std::string(name) + "'");
}

std::vector<std::string> Schema::names() const {
  std::vector<std::string> out;
  out.reserve(attributes_.size());
  for (const auto& a : attributes_) out.push_back(a.name);
  return out;
}

std::set<std::string> Schema::name_set() const {
  std::set<std::string> out;
  for (const auto& a : attributes_) out.insert(a.name);
  return out;
}

std::size_t Schema::record_width() const {
  std::size_t w = 0;
  for (const auto& a : attributes_) w += a.type.width;
  return w;
}

Schema Schema::project(const std::set<std::string>& names) const {
  for (const auto& n : names) ordinal(n);
  std::vector<Attribute> kept;
  for (const auto& a : attributes_)
    if (names.contains(a.name)) kept.push_back(a);
  return Schema(std::move(kept));
}

}  // namespace adx
