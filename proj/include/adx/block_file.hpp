#pragma once

// Block file layout (all integers little-endian):
//
//   magic "ADXB" | version u16 | block_id u64 | record_count u64 | attr_count u16
//   per attribute: name_len u16 | name | type tag u8 | [width u16 if string]
//                  | column offset u64 | column length u64
//   index_present u8 | [attr ordinal u16 | page_size u32 | entry_count u64
//                       | entries: key bytes, start_record u64]
//   perm_present u8 | [record_count u64 | u64 * record_count]
//   columnar data
//
// Column offsets are relative to the start of the columnar data section. The
// attribute list names only the stored attributes, so a partial replica is a
// block whose list is a strict subset of the dataset schema.

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "adx/data_block.hpp"

namespace adx {

inline constexpr char kBlockMagic[4] = {'A', 'D', 'X', 'B'};
inline constexpr std::uint16_t kBlockFormatVersion = 1;

/// Shared byte counter for I/O accounting.
struct IoCounter {
  std::atomic<std::uint64_t> bytes_read{0};
  std::atomic<std::uint64_t> bytes_written{0};
};

/// Byte-exact serialized size of `block`.
std::uint64_t serialized_size(const DataBlock& block);

/// Writes `block` to `path`. Validates the block first.
std::uint64_t write_block(const DataBlock& block, const std::filesystem::path& path);

struct ColumnLocation {
  Attribute attribute;
  std::uint64_t offset = 0;  ///< relative to data section
  std::uint64_t length = 0;
};

struct BlockHeader {
  BlockId id{};
  std::uint64_t record_count = 0;
  std::vector<ColumnLocation> columns;
  std::optional<std::string> index_attribute;
  bool has_permutation = false;
  std::uint64_t permutation_offset = 0;  ///< absolute file offset of the u64 entries
  std::uint64_t data_offset = 0;         ///< absolute file offset of the data section
  std::uint64_t header_bytes = 0;        ///< bytes before the index section
  std::uint64_t index_bytes = 0;

  Schema schema() const;
};

/// Opens a block file and parses header and index. Columns are read on
/// demand, so unprojected attributes never leave storage.
class BlockReader {
 public:
  explicit BlockReader(const std::filesystem::path& path, IoCounter* counter = nullptr);

  const BlockHeader& header() const { return header_; }
  const std::optional<SparseClusteredIndex>& index() const { return index_; }
  std::set<std::string> attributes() const;

  /// Reads only the listed attributes, restricted to `rows` when given.
  /// Throws SchemaError for names not stored in this file.
  DataBlock read(const std::set<std::string>& projection, std::optional<RowRange> rows = {});
  Column read_column(const std::string& attribute, RowRange rows);
  PermutationVector read_permutation();

  std::uint64_t bytes_read() const { return bytes_read_; }

 private:
  void read_exact(void* dst, std::size_t n);
  void read_at(std::uint64_t offset, void* dst, std::size_t n);

  std::filesystem::path path_;
  std::ifstream in_;
  IoCounter* counter_;
  BlockHeader header_;
  std::optional<SparseClusteredIndex> index_;
  std::uint64_t bytes_read_ = 0;
};

/// Convenience wrapper: open, read the projected attributes (and optional row
/// range), report bytes read.
DataBlock read_block(const std::filesystem::path& path, const std::set<std::string>& projection,
                     std::optional<RowRange> rows = {}, std::uint64_t* bytes_read = nullptr);

/// Reads every stored attribute, the index and the permutation vector.
DataBlock read_block(const std::filesystem::path& path);

}  // namespace adx
