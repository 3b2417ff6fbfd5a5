#include "adx/offer_policy.hpp"

#include <algorithm>
#include <cmath>

namespace adx {

std::string to_string(OfferOutcome outcome) {
  switch (outcome) {
    case OfferOutcome::accepted:
      return "accepted";
    case OfferOutcome::rejected_quota:
      return "rejected_quota";
    case OfferOutcome::rejected_selectivity:
      return "rejected_selectivity";
    case OfferOutcome::rejected_queue_full:
      return "rejected_queue_full";
  }
  return "?";
}

std::size_t offer_quota(double rho, std::size_t blocks) {
  if (rho <= 0 || blocks == 0) return 0;
  rho = std::min(rho, 1.0);
  double q = std::ceil(rho * static_cast<double>(blocks) - 1e-9);
  return std::min(blocks, static_cast<std::size_t>(std::max(0.0, q)));
}

OfferPolicyState OfferPolicyState::offer_rate(double rho, std::size_t blocks_in_job, std::size_t blocks_to_scan) {
  OfferPolicyState s;
  s.rho_ = std::clamp(rho, 0.0, 1.0);
  s.scanned_ = blocks_to_scan;
  s.quota_ = std::min(offer_quota(s.rho_, blocks_in_job), blocks_to_scan);
  return s;
}

OfferPolicyState OfferPolicyState::selectivity(double threshold, std::size_t blocks_to_scan,
                                               SelectivityComparison cmp) {
  OfferPolicyState s;
  s.selectivity_ = true;
  s.threshold_ = threshold;
  s.cmp_ = cmp;
  s.scanned_ = blocks_to_scan;
  s.quota_ = blocks_to_scan;
  return s;
}

OfferPolicyState::OfferPolicyState(const OfferPolicyState& other)
    : selectivity_(other.selectivity_),
      rho_(other.rho_),
      threshold_(other.threshold_),
      cmp_(other.cmp_),
      quota_(other.quota_),
      scanned_(other.scanned_),
      offered_(other.offered_.load()) {}

bool OfferPolicyState::will_offer(std::size_t scan_ordinal) const {
  if (scan_ordinal >= scanned_ || quota_ == 0) return false;
  if (selectivity_) return true;
  // Spread `quota_` picks evenly over `scanned_` slots; picks the last slot of each stride.
  const std::size_t j = scan_ordinal;
  return (j + 1) * quota_ / scanned_ > j * quota_ / scanned_;
}

OfferOutcome OfferPolicyState::offer(std::size_t scan_ordinal, double qualifying_fraction,
                                     const std::function<bool()>& try_enqueue) {
  if (!will_offer(scan_ordinal)) return OfferOutcome::rejected_quota;
  if (selectivity_) {
    bool pass = cmp_ == SelectivityComparison::at_least ? qualifying_fraction >= threshold_
                                                        : qualifying_fraction <= threshold_;
    if (!pass) return OfferOutcome::rejected_selectivity;
  }
  if (!try_enqueue()) return OfferOutcome::rejected_queue_full;
  ++offered_;
  return OfferOutcome::accepted;
}

}  // namespace adx
