#include "adx/table.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace adx {

Table::Table(Schema s) : schema(std::move(s)) {
  for (const auto& a : schema.attributes()) columns.emplace_back(a.type);
}

std::size_t Table::record_bytes(const std::set<std::string>& attributes) const {
  std::size_t n = 0;
  for (const auto& a : schema.attributes())
    if (attributes.empty() || attributes.contains(a.name)) n += a.type.width;
  return n;
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(std::move(cur));
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  out.push_back(std::move(cur));
  return out;
}

void append_double(std::string& out, double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, res.ptr);
}

}  // namespace

void write_csv(const Table& table, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  const auto& attrs = table.schema.attributes();
  std::string line;
  for (std::size_t i = 0; i < attrs.size(); ++i) {
    if (i) line += ',';
    line += attrs[i].name + ":" + to_string(attrs[i].type);
  }
  out << line << '\n';
  for (std::size_t r = 0; r < table.rows(); ++r) {
    line.clear();
    for (std::size_t i = 0; i < attrs.size(); ++i) {
      if (i) line += ',';
      const Column& c = table.columns[i];
      switch (attrs[i].type.tag) {
        case TypeTag::int64:
          line += std::to_string(c.int64_at(r));
          break;
        case TypeTag::float64:
          append_double(line, c.float64_at(r));
          break;
        case TypeTag::fixed_string:
          line += c.string_at(r);
          break;
      }
    }
    out << line << '\n';
  }
  if (!out) throw IoError("write failed: " + path.string());
}

Table read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw FormatError(path.string() + ": missing header row");
  std::vector<Attribute> attrs;
  for (const auto& field : split_line(line)) {
    auto colon = field.find(':');
    if (colon == std::string::npos) throw FormatError(path.string() + ": header field '" + field + "' lacks a type");
    attrs.push_back({field.substr(0, colon), parse_attribute_type(field.substr(colon + 1))});
  }
  Table table{Schema(std::move(attrs))};
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto fields = split_line(line);
    if (fields.size() != table.columns.size())
      throw FormatError(path.string() + ":" + std::to_string(line_no) + ": wrong field count");
    for (std::size_t i = 0; i < fields.size(); ++i) {
      const auto& f = fields[i];
      switch (table.schema.at(i).type.tag) {
        case TypeTag::int64: {
          std::int64_t v = 0;
          auto res = std::from_chars(f.data(), f.data() + f.size(), v);
          if (res.ec != std::errc{} || res.ptr != f.data() + f.size())
            throw FormatError(path.string() + ":" + std::to_string(line_no) + ": bad integer '" + f + "'");
          table.columns[i].push_back(Value{v});
          break;
        }
        case TypeTag::float64:
          table.columns[i].push_back(Value{std::stod(f)});
          break;
        case TypeTag::fixed_string:
          table.columns[i].push_back(Value{f});
          break;
      }
    }
  }
  return table;
}

}  // namespace adx
