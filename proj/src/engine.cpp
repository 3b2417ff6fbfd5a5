#include "adx/engine.hpp"

#include <algorithm>
#include <numeric>

#include "adx/record_reader.hpp"

namespace adx {

Engine::Engine(Cluster& cluster, RunOptions options)
    : cluster_(cluster), options_(std::move(options)), calibration_(Calibration::load(cluster.calibration_path())) {}

PolicyMode Engine::mode_for(const JobSpec& job) const {
  switch (job.policy) {
    case JobPolicy::constant:
      return PolicyMode::constant;
    case JobPolicy::eager:
      return PolicyMode::eager;
    case JobPolicy::selectivity:
      return PolicyMode::selectivity;
    case JobPolicy::config_default:
      break;
  }
  return cluster_.config().policy.mode;
}

namespace {

struct WaveTimes {
  double total = 0;
  std::size_t waves = 0;
  double scan_sum = 0;  ///< sum over waves of the longest scan part
  std::size_t index_waves = 0;
  double overhead_sum = 0;  ///< sum over indexing waves of (wave time - longest scan part)
};

WaveTimes wave_times(const std::vector<TaskResult>& results, std::size_t slots) {
  WaveTimes w;
  for (std::size_t begin = 0; begin < results.size(); begin += slots) {
    const std::size_t end = std::min(results.size(), begin + slots);
    double longest = 0, longest_scan = 0;
    bool offered = false;
    for (std::size_t i = begin; i < end; ++i) {
      longest = std::max(longest, results[i].elapsed);
      longest_scan = std::max(longest_scan, results[i].scan_seconds);
      offered = offered || results[i].blocks_offered > 0;
    }
    w.total += longest;
    w.scan_sum += longest_scan;
    ++w.waves;
    if (offered) {
      w.overhead_sum += longest - longest_scan;
      ++w.index_waves;
    }
  }
  return w;
}

void accumulate(JobReport& report, std::vector<TaskResult>& results, bool keep_tasks, bool collect) {
  for (auto& r : results) {
    report.records_read += r.records_read;
    report.records_out += r.records_emitted;
    report.bytes_read += r.bytes_read;
    report.network_bytes += r.network_bytes;
    report.offered += r.blocks_offered;
    report.rejected += r.blocks_rejected;
    report.rejected_selectivity += r.blocks_rejected_selectivity;
    report.completion_requests += r.completion_requests;
    if (collect) {
      report.output.insert(report.output.end(), std::make_move_iterator(r.output.begin()),
                           std::make_move_iterator(r.output.end()));
      r.output.clear();
    }
    if (keep_tasks) report.tasks.push_back(std::move(r));
  }
}

}  // namespace

JobReport Engine::run(const JobSpec& job) {
  const ClusterConfig& config = cluster_.config();
  ReplicaRegistry& registry = cluster_.registry();
  const std::string& attr = job.predicate.attribute;
  const std::size_t slots = config.n_slots();

  JobReport report;
  report.job_id = job.id;
  report.attribute = attr;
  report.policy = mode_for(job);

  try {
    job.validate(registry.schema());
    const DatasetInfo dataset = registry.dataset();
    report.blocks_total = dataset.blocks.size();
    report.indexed_before = registry.count_indexed_blocks(attr);

    const JobPlan plan = plan_job(job, registry, {config.max_blocks_per_split, config.index_count});
    if (options_.plan_sink) options_.plan_sink(plan.dump());
    report.index_tasks = plan.index_tasks.size();
    report.full_tasks = plan.full_tasks.size();

    // Index scans first; their waves are T_is.
    ScanContext index_ctx{cluster_, job, nullptr, options_.collect_output};
    auto index_results = run_waves<TaskResult>(plan.index_tasks.size(), slots, [&](std::size_t i) {
      return record_reader_scan(plan.index_tasks[i], index_ctx);
    });
    const WaveTimes index_times = wave_times(index_results, slots);
    report.T_is = index_times.total;
    report.index_waves = index_times.waves;
    accumulate(report, index_results, options_.keep_tasks, options_.collect_output);

    CostModelParams params;
    params.n_slots = static_cast<std::uint32_t>(slots);
    params.n_blocks = static_cast<std::uint32_t>(dataset.blocks.size());
    params.n_idx_blocks = static_cast<std::uint32_t>(plan.indexed_blocks());
    params.T_is = report.T_is;
    params.t_fsw = config.policy.t_fsw.value_or(calibration_.t_fsw.value_or(0));
    params.t_idx_overhead = config.policy.t_idx_overhead.value_or(calibration_.t_idx_overhead.value_or(0));
    const bool calibrated = (config.policy.t_fsw || calibration_.t_fsw) &&
                            (config.policy.t_idx_overhead || calibration_.t_idx_overhead);
    const std::optional<double> target =
        config.policy.target_seconds ? config.policy.target_seconds : calibration_.target_seconds;

    std::optional<OfferPolicyState> policy;
    const std::size_t n_full = plan.full_tasks.size();
    switch (report.policy) {
      case PolicyMode::constant:
        report.rho = job.offer_rate.value_or(config.policy.rho);
        policy.emplace(OfferPolicyState::offer_rate(report.rho, params.n_blocks, n_full));
        break;
      case PolicyMode::eager:
        if (!target) {
          report.rho = job.offer_rate.value_or(config.policy.rho);
        } else if (!calibrated) {
          report.rho = job.offer_rate.value_or(config.policy.rho);
          report.eager_fallback = true;
        } else {
          params.T_target = *target;
          report.rho = compute_rho(params);
        }
        policy.emplace(OfferPolicyState::offer_rate(report.rho, params.n_blocks, n_full));
        break;
      case PolicyMode::selectivity:
        policy.emplace(OfferPolicyState::selectivity(job.selectivity_threshold.value_or(config.policy.selectivity_threshold),
                                               n_full, config.policy.selectivity_comparison));
        break;
    }
    report.quota = policy->quota();

    // Offered blocks go first so they fill the earliest waves.
    std::vector<std::size_t> order(n_full);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_partition(order.begin(), order.end(),
                          [&](std::size_t i) { return policy->will_offer(plan.full_tasks[i].scan_ordinal); });

    ScanContext full_ctx{cluster_, job, &*policy, options_.collect_output};
    std::function<void(std::size_t)> after_wave;
    if (options_.sync_indexers_each_wave) after_wave = [&](std::size_t) { cluster_.flush_indexers(); };
    auto full_results = run_waves<TaskResult>(
        n_full, slots, [&](std::size_t i) { return record_reader_scan(plan.full_tasks[order[i]], full_ctx); },
        after_wave);
    cluster_.flush_indexers();

    const WaveTimes full_times = wave_times(full_results, slots);
    report.full_waves = full_times.waves;

    // Calibrate from the first job that has something to measure.
    bool changed = false;
    if (!calibration_.t_fsw && full_times.waves > 0) {
      calibration_.t_fsw = full_times.scan_sum / static_cast<double>(full_times.waves);
      changed = true;
    }
    if (!calibration_.t_idx_overhead && full_times.index_waves > 0) {
      calibration_.t_idx_overhead = full_times.overhead_sum / static_cast<double>(full_times.index_waves);
      changed = true;
    }
    report.simulated_seconds = index_times.total + full_times.total;
    if (report.policy == PolicyMode::eager && !target) {
      calibration_.target_seconds = report.simulated_seconds;
      changed = true;
    }
    if (changed) calibration_.save(cluster_.calibration_path());

    params.t_fsw = config.policy.t_fsw.value_or(calibration_.t_fsw.value_or(0));
    params.t_idx_overhead = config.policy.t_idx_overhead.value_or(calibration_.t_idx_overhead.value_or(0));
    report.t_fsw = params.t_fsw;
    report.t_idx_overhead = params.t_idx_overhead;
    report.predicted_seconds = predict_T_job(params, report.policy == PolicyMode::selectivity ? 0.0 : report.rho);

    for (auto& r : full_results)
      for (BlockId b : r.offered_blocks)
        if (registry.find_index(b, attr)) ++r.blocks_indexed;
    accumulate(report, full_results, options_.keep_tasks, options_.collect_output);
    report.indexed_after = registry.count_indexed_blocks(attr);
  } catch (const std::exception& e) {
    cluster_.flush_indexers();
    report.success = false;
    report.error = e.what();
    report.indexed_after = registry.count_indexed_blocks(attr);
  }
  return report;
}

}  // namespace adx
