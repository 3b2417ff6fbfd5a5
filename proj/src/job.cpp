#include "adx/job.hpp"

namespace adx {

Value RecordView::get(std::string_view name) const {
  for (std::size_t i = 0; i < ordinals_.size(); ++i)
    if (block_.schema.at(ordinals_[i]).name == name) return get(i);
  throw SchemaError("attribute '" + std::string(name) + "' is not projected");
}

std::span<const std::byte> RecordView::bytes(std::size_t i) const {
  const Column& c = block_.columns[ordinals_[i]];
  const std::size_t w = c.type().width;
  return c.bytes().subspan(row_ * w, w);
}

std::string identity_record(const RecordView& record) {
  std::string out;
  for (std::size_t i = 0; i < record.size(); ++i) {
    auto b = record.bytes(i);
    out.append(reinterpret_cast<const char*>(b.data()), b.size());
  }
  return out;
}

void JobSpec::validate(const Schema& schema) const {
  const Attribute& a = schema.attribute(predicate.attribute);
  auto fits = [&](const Value& v) {
    switch (a.type.tag) {
      case TypeTag::int64:
        return std::holds_alternative<std::int64_t>(v);
      case TypeTag::float64:
        return std::holds_alternative<double>(v);
      case TypeTag::fixed_string:
        return std::holds_alternative<std::string>(v);
    }
    return false;
  };
  if (!fits(predicate.low) || !fits(predicate.high))
    throw SchemaError("predicate bounds do not match the type of '" + a.name + "'");
  if (compare_values(predicate.low, predicate.high) > 0) throw SchemaError("predicate low bound exceeds high bound");
  for (const auto& p : projection) schema.ordinal(p);
  if (offer_rate && (*offer_rate < 0 || *offer_rate > 1)) throw ConfigError("offer_rate must lie in [0, 1]");
}

std::string to_string(ScanKind kind) { return kind == ScanKind::index_scan ? "index" : "full"; }

}  // namespace adx
