#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "adx/data_block.hpp"
#include "adx/types.hpp"

namespace adx {

/// Closed range selection on one attribute.
struct Predicate {
  std::string attribute;
  Value low;
  Value high;

  bool matches(const Column& column, std::size_t row) const {
    return column.compare(row, low) >= 0 && column.compare(row, high) <= 0;
  }
};

/// Read access to one record, limited to the job's projection.
class RecordView {
 public:
  RecordView(const DataBlock& block, const std::vector<std::size_t>& ordinals, std::size_t row)
      : block_(block), ordinals_(ordinals), row_(row) {}

  std::size_t size() const { return ordinals_.size(); }
  const std::string& name(std::size_t i) const { return block_.schema.at(ordinals_[i]).name; }
  Value get(std::size_t i) const { return block_.columns[ordinals_[i]].value_at(row_); }
  /// Throws SchemaError for attributes outside the projection.
  Value get(std::string_view name) const;
  /// Raw fixed-width bytes of field i.
  std::span<const std::byte> bytes(std::size_t i) const;

 private:
  const DataBlock& block_;
  const std::vector<std::size_t>& ordinals_;
  std::size_t row_;
};

/// Returns the output record, or nothing to drop the input record.
using MapFn = std::function<std::optional<std::string>(const RecordView&)>;

/// Default map output: the raw bytes of the projected fields in schema order.
std::string identity_record(const RecordView& record);

enum class JobPolicy { config_default, constant, eager, selectivity };

struct JobSpec {
  std::string id;
  Predicate predicate;
  std::set<std::string> projection;
  MapFn map_fn;  ///< identity_record when empty
  JobPolicy policy = JobPolicy::config_default;
  std::optional<double> offer_rate;
  std::optional<double> selectivity_threshold;

  /// Throws SchemaError when the predicate or projection does not fit `schema`.
  void validate(const Schema& schema) const;
};

enum class ScanKind { index_scan, full_scan };

std::string to_string(ScanKind kind);

struct InputSplit {
  NodeId node{};
  std::vector<BlockId> blocks;
  ScanKind scan_kind = ScanKind::full_scan;
};

struct TaskAssignment {
  InputSplit split;
  NodeId node{};
  /// Position among the job's full-scan tasks; drives the offer decision.
  std::size_t scan_ordinal = 0;
};

struct TaskResult {
  ScanKind scan_kind = ScanKind::full_scan;
  NodeId node{};
  std::vector<BlockId> blocks;
  std::uint64_t records_read = 0;
  std::uint64_t records_emitted = 0;
  std::uint64_t bytes_read = 0;
  std::uint64_t network_bytes = 0;
  std::uint64_t blocks_offered = 0;
  std::uint64_t blocks_indexed = 0;
  std::uint64_t blocks_rejected = 0;  ///< indexer queue full
  std::uint64_t blocks_rejected_selectivity = 0;
  std::uint64_t completion_requests = 0;
  std::vector<BlockId> offered_blocks;
  /// Simulated seconds; `scan_seconds` excludes the per-block indexing overhead.
  double elapsed = 0;
  double scan_seconds = 0;
  std::vector<std::string> output;  ///< kept only when the job collects output
};

}  // namespace adx
