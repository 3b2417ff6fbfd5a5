#include "adx/block_file.hpp"

#include <algorithm>
#include <cstring>

namespace adx {

namespace {

class ByteWriter {
 public:
  template <typename T>
  void put(T v) {
    static_assert(std::is_trivially_copyable_v<T>);
    const auto* p = reinterpret_cast<const std::byte*>(&v);
    buf_.insert(buf_.end(), p, p + sizeof(T));
  }
  void put_bytes(const void* data, std::size_t n) {
    const auto* p = static_cast<const std::byte*>(data);
    buf_.insert(buf_.end(), p, p + n);
  }
  void put_key(const Value& key, const AttributeType& type) {
    Column c(type, 1);
    c.set(0, key);
    put_bytes(c.bytes().data(), c.byte_size());
  }
  std::vector<std::byte>& buffer() { return buf_; }

 private:
  std::vector<std::byte> buf_;
};

std::uint64_t fixed_header_size(const DataBlock& block) {
  std::uint64_t n = 4 + 2 + 8 + 8 + 2;
  for (const auto& a : block.schema.attributes()) {
    n += 2 + a.name.size() + 1 + 8 + 8;
    if (a.type.tag == TypeTag::fixed_string) n += 2;
  }
  return n;
}

std::uint64_t index_section_size(const DataBlock& block) {
  std::uint64_t n = 1;
  if (block.index) {
    const auto& key_type = block.schema.attribute(block.index->attribute).type;
    n += 2 + 4 + 8 + block.index->entries.size() * (key_type.width + 8);
  }
  return n;
}

std::uint64_t permutation_section_size(const DataBlock& block) {
  return 1 + (block.permutation ? 8 + 8 * block.permutation->size() : 0);
}

}  // namespace

std::uint64_t serialized_size(const DataBlock& block) {
  std::uint64_t n = fixed_header_size(block) + index_section_size(block) + permutation_section_size(block);
  for (const auto& c : block.columns) n += c.byte_size();
  return n;
}

std::uint64_t write_block(const DataBlock& block, const std::filesystem::path& path) {
  block.validate();
  if (block.sort_attribute && !block.index) throw FormatError("sorted blocks are stored together with their index");
  if (block.schema.size() > 0xFFFF) throw FormatError("too many attributes");

  ByteWriter w;
  w.put_bytes(kBlockMagic, 4);
  w.put<std::uint16_t>(kBlockFormatVersion);
  w.put<std::uint64_t>(to_u64(block.id));
  w.put<std::uint64_t>(block.record_count);
  w.put<std::uint16_t>(static_cast<std::uint16_t>(block.schema.size()));
  std::uint64_t offset = 0;
  for (std::size_t i = 0; i < block.schema.size(); ++i) {
    const auto& a = block.schema.at(i);
    if (a.name.size() > 0xFFFF) throw FormatError("attribute name too long");
    w.put<std::uint16_t>(static_cast<std::uint16_t>(a.name.size()));
    w.put_bytes(a.name.data(), a.name.size());
    w.put<std::uint8_t>(static_cast<std::uint8_t>(a.type.tag));
    if (a.type.tag == TypeTag::fixed_string) w.put<std::uint16_t>(a.type.width);
    w.put<std::uint64_t>(offset);
    w.put<std::uint64_t>(block.columns[i].byte_size());
    offset += block.columns[i].byte_size();
  }

  w.put<std::uint8_t>(block.index ? 1 : 0);
  if (block.index) {
    const auto& idx = *block.index;
    const auto& key_type = block.schema.attribute(idx.attribute).type;
    w.put<std::uint16_t>(static_cast<std::uint16_t>(block.schema.ordinal(idx.attribute)));
    w.put<std::uint32_t>(idx.page_size_records);
    w.put<std::uint64_t>(idx.entries.size());
    for (const auto& e : idx.entries) {
      w.put_key(e.first_key, key_type);
      w.put<std::uint64_t>(e.start_record);
    }
  }

  w.put<std::uint8_t>(block.permutation ? 1 : 0);
  if (block.permutation) {
    w.put<std::uint64_t>(block.permutation->size());
    w.put_bytes(block.permutation->perm.data(), block.permutation->size() * 8);
  }

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  auto& header = w.buffer();
  out.write(reinterpret_cast<const char*>(header.data()), static_cast<std::streamsize>(header.size()));
  std::uint64_t total = header.size();
  for (const auto& c : block.columns) {
    out.write(reinterpret_cast<const char*>(c.bytes().data()), static_cast<std::streamsize>(c.byte_size()));
    total += c.byte_size();
  }
  out.flush();
  if (!out) throw IoError("write to " + path.string() + " failed");
  return total;
}

Schema BlockHeader::schema() const {
  std::vector<Attribute> attrs;
  for (const auto& c : columns) attrs.push_back(c.attribute);
  return Schema(std::move(attrs));
}

BlockReader::BlockReader(const std::filesystem::path& path, IoCounter* counter)
    : path_(path), in_(path, std::ios::binary), counter_(counter) {
  if (!in_) throw IoError("cannot open " + path.string());

  auto get_u8 = [&] { std::uint8_t v; read_exact(&v, 1); return v; };
  auto get_u16 = [&] { std::uint16_t v; read_exact(&v, 2); return v; };
  auto get_u32 = [&] { std::uint32_t v; read_exact(&v, 4); return v; };
  auto get_u64 = [&] { std::uint64_t v; read_exact(&v, 8); return v; };

  char magic[4];
  read_exact(magic, 4);
  if (std::memcmp(magic, kBlockMagic, 4) != 0) throw FormatError(path.string() + ": bad magic");
  if (auto version = get_u16(); version != kBlockFormatVersion)
    throw FormatError(path.string() + ": unsupported format version " + std::to_string(version));
  header_.id = BlockId{get_u64()};
  header_.record_count = get_u64();
  const std::uint16_t attr_count = get_u16();
  if (attr_count == 0) throw FormatError(path.string() + ": block without attributes");
  for (std::uint16_t i = 0; i < attr_count; ++i) {
    ColumnLocation loc;
    std::uint16_t len = get_u16();
    loc.attribute.name.resize(len);
    read_exact(loc.attribute.name.data(), len);
    auto tag = static_cast<TypeTag>(get_u8());
    switch (tag) {
      case TypeTag::int64:
        loc.attribute.type = AttributeType::int64();
        break;
      case TypeTag::float64:
        loc.attribute.type = AttributeType::float64();
        break;
      case TypeTag::fixed_string:
        loc.attribute.type = AttributeType::fixed_string(get_u16());
        break;
      default:
        throw FormatError(path.string() + ": unknown type tag");
    }
    loc.offset = get_u64();
    loc.length = get_u64();
    if (loc.attribute.type.width == 0 || loc.length != header_.record_count * loc.attribute.type.width)
      throw FormatError(path.string() + ": column '" + loc.attribute.name + "' has inconsistent length");
    header_.columns.push_back(std::move(loc));
  }
  header_.header_bytes = bytes_read_;

  if (get_u8() != 0) {
    std::uint16_t ordinal = get_u16();
    if (ordinal >= header_.columns.size()) throw FormatError(path.string() + ": index attribute out of range");
    const auto& key_attr = header_.columns[ordinal].attribute;
    SparseClusteredIndex idx;
    idx.attribute = key_attr.name;
    idx.page_size_records = get_u32();
    idx.record_count = header_.record_count;
    std::uint64_t entry_count = get_u64();
    if (entry_count > header_.record_count) throw FormatError(path.string() + ": too many index entries");
    std::vector<std::byte> key(key_attr.type.width);
    for (std::uint64_t e = 0; e < entry_count; ++e) {
      read_exact(key.data(), key.size());
      Column one(key_attr.type, key);
      idx.entries.push_back({one.value_at(0), get_u64()});
    }
    header_.index_attribute = idx.attribute;
    index_ = std::move(idx);
  }
  header_.index_bytes = bytes_read_ - header_.header_bytes;

  // The permutation vector is skipped here and only read on request.
  std::uint64_t pos = bytes_read_;
  if (get_u8() != 0) {
    std::uint64_t n = get_u64();
    if (n != header_.record_count) throw FormatError(path.string() + ": permutation length mismatch");
    header_.has_permutation = true;
    header_.permutation_offset = pos + 1 + 8;
    header_.data_offset = header_.permutation_offset + 8 * n;
  } else {
    header_.data_offset = pos + 1;
  }

  in_.seekg(0, std::ios::end);
  auto file_size = static_cast<std::uint64_t>(in_.tellg());
  for (const auto& c : header_.columns)
    if (header_.data_offset + c.offset + c.length > file_size)
      throw FormatError(path.string() + ": truncated column '" + c.attribute.name + "'");
}

void BlockReader::read_exact(void* dst, std::size_t n) {
  in_.read(static_cast<char*>(dst), static_cast<std::streamsize>(n));
  if (static_cast<std::size_t>(in_.gcount()) != n) throw FormatError(path_.string() + ": truncated block file");
  bytes_read_ += n;
  if (counter_) counter_->bytes_read += n;
}

void BlockReader::read_at(std::uint64_t offset, void* dst, std::size_t n) {
  if (n == 0) return;
  in_.clear();
  in_.seekg(static_cast<std::streamoff>(offset));
  read_exact(dst, n);
}

std::set<std::string> BlockReader::attributes() const {
  std::set<std::string> out;
  for (const auto& c : header_.columns) out.insert(c.attribute.name);
  return out;
}

Column BlockReader::read_column(const std::string& attribute, RowRange rows) {
  auto it = std::find_if(header_.columns.begin(), header_.columns.end(),
                         [&](const ColumnLocation& c) { return c.attribute.name == attribute; });
  if (it == header_.columns.end()) throw SchemaError(path_.string() + ": attribute '" + attribute + "' not stored");
  rows.end = std::min(rows.end, header_.record_count);
  rows.begin = std::min(rows.begin, rows.end);
  const std::uint64_t w = it->attribute.type.width;
  std::vector<std::byte> bytes(rows.size() * w);
  read_at(header_.data_offset + it->offset + rows.begin * w, bytes.data(), bytes.size());
  return Column(it->attribute.type, std::move(bytes));
}

DataBlock BlockReader::read(const std::set<std::string>& projection, std::optional<RowRange> rows) {
  const RowRange range = rows.value_or(RowRange{0, header_.record_count});
  DataBlock block;
  block.id = header_.id;
  block.schema = header_.schema().project(projection);
  for (const auto& a : block.schema.attributes()) block.columns.push_back(read_column(a.name, range));
  block.record_count = block.columns.front().size();
  if (!rows && header_.index_attribute && projection.contains(*header_.index_attribute)) {
    block.sort_attribute = header_.index_attribute;
    block.index = index_;
  } else if (header_.index_attribute && projection.contains(*header_.index_attribute)) {
    block.sort_attribute = header_.index_attribute;  // a slice of a sorted column stays sorted
  }
  return block;
}

PermutationVector BlockReader::read_permutation() {
  if (!header_.has_permutation) throw FormatError(path_.string() + ": no permutation vector stored");
  PermutationVector p;
  p.perm.resize(header_.record_count);
  read_at(header_.permutation_offset, p.perm.data(), p.perm.size() * 8);
  return p;
}

DataBlock read_block(const std::filesystem::path& path, const std::set<std::string>& projection,
                     std::optional<RowRange> rows, std::uint64_t* bytes_read) {
  BlockReader reader(path);
  DataBlock block = reader.read(projection, rows);
  if (bytes_read) *bytes_read = reader.bytes_read();
  return block;
}

DataBlock read_block(const std::filesystem::path& path) {
  BlockReader reader(path);
  DataBlock block = reader.read(reader.attributes());
  if (reader.header().has_permutation) block.permutation = reader.read_permutation();
  return block;
}

}  // namespace adx
