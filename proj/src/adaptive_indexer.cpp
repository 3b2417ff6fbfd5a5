#include "adx/adaptive_indexer.hpp"

namespace adx {

AdaptiveIndexer::AdaptiveIndexer(NodeId node, std::filesystem::path storage_root, ReplicaRegistry& registry,
                                 IndexerConfig config)
    : node_(node),
      root_(std::move(storage_root)),
      registry_(registry),
      config_(config),
      build_queue_(config.build_queue_capacity),
      write_queue_(config.write_queue_capacity) {
  builder_ = std::thread([this] { build_loop(); });
  writer_ = std::thread([this] { write_loop(); });
}

AdaptiveIndexer::~AdaptiveIndexer() {
  build_queue_.close();
  builder_.join();
  write_queue_.close();
  writer_.join();
}

void AdaptiveIndexer::bump(std::uint64_t IndexerStats::*field) {
  std::lock_guard lock(mu_);
  ++(stats_.*field);
}

void AdaptiveIndexer::finish_one() {
  std::lock_guard lock(mu_);
  if (--in_flight_ == 0) idle_.notify_all();
}

bool AdaptiveIndexer::try_offer(IndexRequest& request) {
  {
    std::lock_guard lock(mu_);
    ++in_flight_;
  }
  if (build_queue_.try_push(request)) {
    bump(&IndexerStats::accepted);
    return true;
  }
  bump(&IndexerStats::rejected_queue_full);
  finish_one();
  return false;
}

bool AdaptiveIndexer::try_complete(CompletionRequest& request) {
  {
    std::lock_guard lock(mu_);
    ++in_flight_;
  }
  WriteItem item = std::move(request);
  if (write_queue_.try_push(item)) return true;
  request = std::get<CompletionRequest>(std::move(item));
  bump(&IndexerStats::completions_rejected);
  finish_one();
  return false;
}

void AdaptiveIndexer::flush() {
  std::unique_lock lock(mu_);
  idle_.wait(lock, [&] { return in_flight_ == 0; });
}

IndexerStats AdaptiveIndexer::stats() const {
  std::lock_guard lock(mu_);
  return stats_;
}

void AdaptiveIndexer::set_write_hook(TempWriteHook hook) {
  std::lock_guard lock(mu_);
  hook_ = std::move(hook);
}

void AdaptiveIndexer::build_loop() {
  while (auto request = build_queue_.pop()) {
    if (request->block.checksum() != request->checksum) {
      bump(&IndexerStats::checksum_mismatches);
      finish_one();
      continue;
    }
    try {
      BuiltIndex built = build_index(request->block, request->attribute, config_.page_size_records);
      built.block.permutation = std::move(built.permutation);
      bump(&IndexerStats::built);
      // Ownership of the finished block moves to the writer; waiting here is fine.
      if (!write_queue_.push(WriteItem(std::move(built.block)))) finish_one();
    } catch (const std::exception&) {
      bump(&IndexerStats::build_failures);
      finish_one();
    }
  }
}

void AdaptiveIndexer::write_loop() {
  while (auto item = write_queue_.pop()) {
    TempWriteHook hook;
    {
      std::lock_guard lock(mu_);
      hook = hook_;
    }
    if (auto* block = std::get_if<DataBlock>(&*item)) {
      switch (write_pseudo_replica(std::move(*block), root_, node_, registry_, next_write_nonce(), hook)) {
        case WriteOutcome::won:
          bump(&IndexerStats::won);
          break;
        case WriteOutcome::lost:
          bump(&IndexerStats::lost);
          break;
        case WriteOutcome::failed:
          bump(&IndexerStats::write_failures);
          break;
      }
    } else {
      const auto& c = std::get<CompletionRequest>(*item);
      switch (complete_partial(root_, node_, c.block, c.attribute, c.attributes, registry_, next_write_nonce(), &io_)) {
        case CompletionOutcome::unchanged:
          break;
        case CompletionOutcome::appended:
          bump(&IndexerStats::completions_appended);
          break;
        case CompletionOutcome::completed:
          bump(&IndexerStats::completions_completed);
          break;
        case CompletionOutcome::skipped_no_local_replica:
          bump(&IndexerStats::completions_skipped);
          break;
        case CompletionOutcome::failed:
          bump(&IndexerStats::completions_failed);
          break;
      }
    }
    finish_one();
  }
}

}  // namespace adx
