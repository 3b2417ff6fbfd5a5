#pragma once

#include <atomic>
#include <cstddef>
#include <functional>
#include <string>

namespace adx {

enum class OfferOutcome { accepted, rejected_quota, rejected_selectivity, rejected_queue_full };

std::string to_string(OfferOutcome outcome);

enum class SelectivityComparison { at_least, at_most };

/// ⌈rho * blocks⌉ with a small tolerance so that e.g. 0.17 * 100 gives 17.
std::size_t offer_quota(double rho, std::size_t blocks);

/// Per-job offer decisions for the blocks a job full-scans.
///
/// offer_rate: at most ⌈rho * blocks_in_job⌉ blocks (never more than are
/// scanned), picked round-robin over the scan order so that with rho = 0.1
/// every tenth scanned block is offered. The pick is fixed before scanning.
///
/// selectivity: every scanned block is a candidate; it is offered when its
/// qualifying fraction passes the threshold (>= by default).
class OfferPolicyState {
 public:
  static OfferPolicyState offer_rate(double rho, std::size_t blocks_in_job, std::size_t blocks_to_scan);
  static OfferPolicyState selectivity(double threshold, std::size_t blocks_to_scan,
                                      SelectivityComparison cmp = SelectivityComparison::at_least);

  OfferPolicyState(const OfferPolicyState& other);

  bool is_selectivity() const { return selectivity_; }
  std::size_t quota() const { return quota_; }
  double rho() const { return rho_; }
  double threshold() const { return threshold_; }

  /// Known before the scan starts; drives invisible projection.
  bool will_offer(std::size_t scan_ordinal) const;

  /// Decides after the map function consumed the block. `try_enqueue` is the
  /// non-blocking hand-off to the indexer and is only called when the policy
  /// admits the block.
  OfferOutcome offer(std::size_t scan_ordinal, double qualifying_fraction, const std::function<bool()>& try_enqueue);

  std::size_t offered() const { return offered_.load(); }

 private:
  OfferPolicyState() = default;

  bool selectivity_ = false;
  double rho_ = 0;
  double threshold_ = 0.8;
  SelectivityComparison cmp_ = SelectivityComparison::at_least;
  std::size_t quota_ = 0;
  std::size_t scanned_ = 0;
  std::atomic<std::size_t> offered_{0};
};

}  // namespace adx
