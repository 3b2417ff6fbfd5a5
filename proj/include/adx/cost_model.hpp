#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>

namespace adx {

/// Inputs of the job runtime model. Durations are simulated seconds.
struct CostModelParams {
  std::uint32_t n_slots = 1;
  std::uint32_t n_blocks = 0;
  std::uint32_t n_idx_blocks = 0;
  double t_fsw = 0;           ///< one full-scan wave
  double t_idx_overhead = 0;  ///< extra time of a wave that indexes its blocks
  double T_is = 0;            ///< index-scan phase
  double T_target = 0;

  /// Throws ConfigError.
  void validate() const;
};

/// Full-scan waves: ceil((n_blocks - n_idx_blocks) / n_slots).
std::uint32_t n_fsw(const CostModelParams& p);

/// Waves needed to scan every block: ceil(n_blocks / n_slots).
std::uint32_t total_waves(const CostModelParams& p);

/// Indexing overhead term: t_idx_overhead * min(rho * total_waves, n_fsw).
double index_overhead(const CostModelParams& p, double rho);

/// T_is + t_fsw * n_fsw + index_overhead(rho).
double predict_T_job(const CostModelParams& p, double rho);

/// Offer rate that spends the time left under T_target on indexing,
/// clamped to [0, 1]. With free indexing any positive budget gives 1.
double compute_rho(const CostModelParams& p);

/// Blocks the rate actually offers: ceil(rho * n_blocks), at most the unindexed ones.
std::uint32_t offered_blocks(const CostModelParams& p, double rho);

/// Measured on the first job that scans and indexes, persisted next to the registry.
struct Calibration {
  std::optional<double> t_fsw;
  std::optional<double> t_idx_overhead;
  std::optional<double> target_seconds;

  bool complete() const { return t_fsw && t_idx_overhead; }

  static Calibration load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;
};

}  // namespace adx
