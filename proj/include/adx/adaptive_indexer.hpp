#pragma once

#include <atomic>
#include <condition_variable>
#include <cstdint>
#include <filesystem>
#include <mutex>
#include <set>
#include <string>
#include <thread>
#include <variant>

#include "adx/block_file.hpp"
#include "adx/bounded_queue.hpp"
#include "adx/index_builder.hpp"
#include "adx/index_writer.hpp"
#include "adx/lazy_projection.hpp"

namespace adx {

struct IndexerConfig {
  std::size_t build_queue_capacity = 4;
  std::size_t write_queue_capacity = 4;
  std::uint32_t page_size_records = kDefaultPageSizeRecords;
};

/// A scanned block handed over by a map task. `checksum` is taken by the task
/// before the hand-off and verified by the builder.
struct IndexRequest {
  DataBlock block;
  std::string attribute;
  std::uint64_t checksum = 0;
};

/// Ask the writer to add attributes to an existing partial pseudo replica.
struct CompletionRequest {
  BlockId block{};
  std::string attribute;
  std::set<std::string> attributes;
};

struct IndexerStats {
  std::uint64_t accepted = 0;
  std::uint64_t rejected_queue_full = 0;
  std::uint64_t built = 0;
  std::uint64_t checksum_mismatches = 0;
  std::uint64_t build_failures = 0;
  std::uint64_t won = 0;
  std::uint64_t lost = 0;
  std::uint64_t write_failures = 0;
  std::uint64_t completions_appended = 0;
  std::uint64_t completions_completed = 0;
  std::uint64_t completions_skipped = 0;
  std::uint64_t completions_failed = 0;
  std::uint64_t completions_rejected = 0;
};

/// Per-node Adaptive Indexer: a builder thread and a writer thread connected
/// by bounded queues. Map tasks hand blocks in without ever blocking; the
/// builder waits for room in the write queue. Indexing errors are counted,
/// never thrown to the producer.
class AdaptiveIndexer {
 public:
  AdaptiveIndexer(NodeId node, std::filesystem::path storage_root, ReplicaRegistry& registry,
                  IndexerConfig config = {});
  ~AdaptiveIndexer();

  AdaptiveIndexer(const AdaptiveIndexer&) = delete;
  AdaptiveIndexer& operator=(const AdaptiveIndexer&) = delete;

  /// Non-blocking. On rejection `request` is left with the caller.
  bool try_offer(IndexRequest& request);
  /// Non-blocking; goes straight to the writer.
  bool try_complete(CompletionRequest& request);

  /// Blocks until every accepted request has been written or dropped.
  void flush();

  IndexerStats stats() const;
  NodeId node() const { return node_; }
  const IoCounter& io() const { return io_; }

  /// Test seam forwarded to write_pseudo_replica.
  void set_write_hook(TempWriteHook hook);

 private:
  using WriteItem = std::variant<DataBlock, CompletionRequest>;

  void build_loop();
  void write_loop();
  void finish_one();
  void bump(std::uint64_t IndexerStats::*field);

  NodeId node_;
  std::filesystem::path root_;
  ReplicaRegistry& registry_;
  IndexerConfig config_;
  BoundedQueue<IndexRequest> build_queue_;
  BoundedQueue<WriteItem> write_queue_;
  IoCounter io_;

  mutable std::mutex mu_;
  std::condition_variable idle_;
  std::size_t in_flight_ = 0;
  IndexerStats stats_;
  TempWriteHook hook_;

  std::thread builder_;
  std::thread writer_;
};

}  // namespace adx
