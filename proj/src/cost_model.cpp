#include "adx/cost_model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "adx/offer_policy.hpp"
#include "adx/types.hpp"
#include "json.hpp"

namespace adx {

void CostModelParams::validate() const {
  if (n_slots == 0) throw ConfigError("n_slots must be at least 1");
  if (n_idx_blocks > n_blocks) throw ConfigError("more indexed blocks than blocks");
  if (t_fsw < 0 || t_idx_overhead < 0 || T_is < 0 || T_target < 0) throw ConfigError("durations must be non-negative");
}

namespace {
std::uint32_t ceil_div(std::uint32_t a, std::uint32_t b) { return (a + b - 1) / b; }
}  // namespace

std::uint32_t n_fsw(const CostModelParams& p) { return ceil_div(p.n_blocks - p.n_idx_blocks, p.n_slots); }

std::uint32_t total_waves(const CostModelParams& p) { return ceil_div(p.n_blocks, p.n_slots); }

double index_overhead(const CostModelParams& p, double rho) {
  return p.t_idx_overhead * std::min(rho * total_waves(p), static_cast<double>(n_fsw(p)));
}

double predict_T_job(const CostModelParams& p, double rho) {
  return p.T_is + p.t_fsw * n_fsw(p) + index_overhead(p, rho);
}

double compute_rho(const CostModelParams& p) {
  const double budget = p.T_target - p.T_is - p.t_fsw * n_fsw(p);
  if (p.t_idx_overhead <= 0) return budget > 0 ? 1.0 : 0.0;
  const std::uint32_t waves = total_waves(p);
  if (waves == 0) return 0.0;
  return std::clamp(budget / (p.t_idx_overhead * waves), 0.0, 1.0);
}

std::uint32_t offered_blocks(const CostModelParams& p, double rho) {
  return static_cast<std::uint32_t>(std::min<std::size_t>(offer_quota(rho, p.n_blocks), p.n_blocks - p.n_idx_blocks));
}

Calibration Calibration::load(const std::filesystem::path& path) {
  Calibration c;
  std::ifstream in(path);
  if (!in) return c;
  try {
    auto j = nlohmann::json::parse(in);
    if (j.contains("t_fsw")) c.t_fsw = j.at("t_fsw").get<double>();
    if (j.contains("t_idx_overhead")) c.t_idx_overhead = j.at("t_idx_overhead").get<double>();
    if (j.contains("target_seconds")) c.target_seconds = j.at("target_seconds").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return c;
}

void Calibration::save(const std::filesystem::path& path) const {
  nlohmann::json j = nlohmann::json::object();
  if (t_fsw) j["t_fsw"] = *t_fsw;
  if (t_idx_overhead) j["t_idx_overhead"] = *t_idx_overhead;
  if (target_seconds) j["target_seconds"] = *target_seconds;
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

}  // namespace adx
