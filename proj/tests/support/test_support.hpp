#pragma once

#include <cstdlib>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "adx/data_block.hpp"
#include "adx/table.hpp"

namespace adx::test {

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  TempDir() {
    std::string tmpl = (std::filesystem::temp_directory_path() / "adx_test_XXXXXX").string();
    if (!mkdtemp(tmpl.data())) throw std::runtime_error("mkdtemp failed");
    path_ = tmpl;
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

inline Schema mixed_schema() {
  return Schema({{"a", AttributeType::int64()},
                 {"b", AttributeType::float64()},
                 {"c", AttributeType::fixed_string(12)},
                 {"d", AttributeType::int64()}});
}

/// Random values; int64 columns draw from [0, key_range) so duplicates occur.
inline Column random_column(std::mt19937_64& rng, const AttributeType& type, std::size_t rows,
                            std::int64_t key_range = 1000) {
  Column c(type, rows);
  for (std::size_t r = 0; r < rows; ++r) {
    switch (type.tag) {
      case TypeTag::int64:
        c.set(r, Value{static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(key_range)) - key_range / 4});
        break;
      case TypeTag::float64:
        c.set(r, Value{static_cast<double>(rng() % 100000) / 7.0 - 1000.0});
        break;
      case TypeTag::fixed_string: {
        std::string s;
        const std::size_t len = rng() % (type.width + 1u);
        for (std::size_t i = 0; i < len; ++i) s.push_back(static_cast<char>('a' + rng() % 4));
        c.set(r, Value{s});
        break;
      }
    }
  }
  return c;
}

inline DataBlock random_block(std::mt19937_64& rng, const Schema& schema, std::size_t rows, std::uint64_t id = 1,
                              std::int64_t key_range = 1000) {
  DataBlock b;
  b.id = BlockId{id};
  b.schema = schema;
  b.record_count = rows;
  for (const auto& a : schema.attributes()) b.columns.push_back(random_column(rng, a.type, rows, key_range));
  return b;
}

inline Table table_from_block(const DataBlock& b) {
  Table t(b.schema);
  t.columns = b.columns;
  return t;
}

/// Raw bytes of row `row` over `names` in schema order, the same shape as the default map output.
inline std::string raw_record(const Table& t, std::size_t row, const std::set<std::string>& names) {
  std::string out;
  for (std::size_t i = 0; i < t.schema.size(); ++i) {
    if (!names.contains(t.schema.at(i).name)) continue;
    const auto w = t.schema.at(i).type.width;
    auto bytes = t.columns[i].bytes().subspan(row * w, w);
    out.append(reinterpret_cast<const char*>(bytes.data()), w);
  }
  return out;
}

}  // namespace adx::test
