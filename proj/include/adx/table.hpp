#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "adx/column.hpp"
#include "adx/schema.hpp"

namespace adx {

/// Whole dataset in columnar form, the input of an upload.
struct Table {
  Schema schema;
  std::vector<Column> columns;  ///< parallel to schema.attributes()

  explicit Table(Schema s = {});

  std::size_t rows() const { return columns.empty() ? 0 : columns.front().size(); }
  const Column& column(std::string_view name) const { return columns[schema.ordinal(name)]; }
  Column& column(std::string_view name) { return columns[schema.ordinal(name)]; }

  /// Record width in bytes over `attributes` (the whole schema when empty).
  std::size_t record_bytes(const std::set<std::string>& attributes = {}) const;
};

/// CSV with a "name:type" header row, e.g. "a:int64,url:string(100)".
void write_csv(const Table& table, const std::filesystem::path& path);
Table read_csv(const std::filesystem::path& path);

}  // namespace adx
