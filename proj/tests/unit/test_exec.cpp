#include <algorithm>
#include <numeric>

#include "adx/datagen.hpp"
#include "adx/engine.hpp"
#include "adx/paths.hpp"
#include "adx/record_reader.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace adx;
using adx::test::TempDir;

namespace {

ClusterConfig config_for(const std::filesystem::path& root, std::uint64_t block_records) {
  ClusterConfig c;
  c.storage_root = root;
  c.node_count = 4;
  c.slots_per_node = 2;
  c.replication = 2;
  c.block_records = block_records;
  c.indexer = {64, 64, 128};
  return c;
}

JobSpec range_job(const std::string& attr, std::int64_t lo, std::int64_t hi, std::set<std::string> projection,
                  double rho) {
  JobSpec j;
  j.id = "q";
  j.predicate = {attr, lo, hi};
  j.projection = std::move(projection);
  j.policy = JobPolicy::constant;
  j.offer_rate = rho;
  return j;
}

std::vector<std::string> oracle(const Table& t, const JobSpec& j) {
  std::vector<std::string> out;
  const Column& key = t.column(j.predicate.attribute);
  const auto lo = std::get<std::int64_t>(j.predicate.low), hi = std::get<std::int64_t>(j.predicate.high);
  for (std::size_t r = 0; r < t.rows(); ++r)
    if (key.int64_at(r) >= lo && key.int64_at(r) <= hi) out.push_back(test::raw_record(t, r, j.projection));
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::string> sorted(std::vector<std::string> v) {
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

TEST_SUITE("invisible projection") {
  TEST_CASE("offered blocks read every attribute") {
    Schema s = gen_synthetic(10, 1).schema;
    JobSpec j = range_job("d", 0, 1, {"b"}, 0.5);
    CHECK(invisible_projection_columns(j, s, true) == s.name_set());
    CHECK(invisible_projection_columns(j, s, false) == std::set<std::string>{"b", "d"});
    j.projection = s.name_set();
    CHECK(invisible_projection_columns(j, s, false) == invisible_projection_columns(j, s, true));
  }

  TEST_CASE("the map function sees only the projection") {
    TempDir dir;
    auto cluster = Cluster::create(config_for(dir / "c", 500));
    cluster->upload(gen_synthetic(2000, 3));
    JobSpec j = range_job("d", 0, std::int64_t{1} << 40, {"b"}, 1.0);
    std::atomic<int> bad{0};
    j.map_fn = [&](const RecordView& r) -> std::optional<std::string> {
      if (r.size() != 1 || r.name(0) != "b") ++bad;
      try {
        r.get("d");
        ++bad;
      } catch (const SchemaError&) {
      }
      return identity_record(r);
    };
    Engine engine(*cluster);
    JobReport rep = engine.run(j);
    REQUIRE(rep.success);
    CHECK(rep.offered == 4);
    CHECK(bad == 0);
    // offered blocks were read in full, so their pseudo replicas are complete
    CHECK(cluster->registry().find_index(BlockId{0}, "d")->kind == ReplicaKind::pseudo);
  }
}

TEST_SUITE("record reader") {
  TEST_CASE("index scan reads only the qualifying rows") {
    TempDir dir;
    ClusterConfig cfg = config_for(dir / "c", 4096);
    cfg.indexer.page_size_records = 1024;
    auto cluster = Cluster::create(cfg);
    Table t = gen_synthetic(4096, 5);
    std::vector<std::int64_t> d(4096);
    std::iota(d.begin(), d.end(), 0);
    std::mt19937_64 rng(1);
    std::shuffle(d.begin(), d.end(), rng);
    t.column("d") = Column::from_int64(d);
    cluster->upload(t);

    RunOptions opts;
    opts.keep_tasks = true;
    Engine engine(*cluster, opts);
    JobSpec j = range_job("d", 1024, 2047, {"a", "b", "c", "d"}, 1.0);
    JobReport first = engine.run(j);
    REQUIRE(first.success);
    CHECK(first.full_tasks == 1);
    CHECK(first.indexed_after == 1);

    JobReport second = engine.run(j);
    REQUIRE(second.success);
    REQUIRE(second.tasks.size() == 1);
    const TaskResult& task = second.tasks[0];
    CHECK(task.scan_kind == ScanKind::index_scan);
    CHECK(task.records_read == 1024);
    CHECK(task.records_emitted == 1024);
    CHECK(task.blocks_offered == 0);
    // at most two key pages plus 1024 rows of four 8-byte columns, plus header and index
    CHECK(task.bytes_read < 2 * 1024 * 8 + 1024 * 32 + 1024);
    CHECK(task.bytes_read < first.tasks.at(0).bytes_read);
    CHECK(sorted(second.output) == sorted(first.output));
  }

  TEST_CASE("a predicate matching nothing still offers the block") {
    TempDir dir;
    auto cluster = Cluster::create(config_for(dir / "c", 1000));
    cluster->upload(gen_synthetic(3000, 6));
    Engine engine(*cluster);
    JobReport rep = engine.run(range_job("b", -10, -1, {"a"}, 1.0));
    REQUIRE(rep.success);
    CHECK(rep.records_out == 0);
    CHECK(rep.offered == 3);
    CHECK(rep.indexed_after == 3);
  }

  TEST_CASE("full scans read every record exactly once") {
    TempDir dir;
    auto cluster = Cluster::create(config_for(dir / "c", 700));
    cluster->upload(gen_synthetic(5000, 7));
    RunOptions opts;
    opts.keep_tasks = true;
    Engine engine(*cluster, opts);
    JobReport rep = engine.run(range_job("c", 0, 1 << 30, {"a"}, 0.0));
    REQUIRE(rep.success);
    std::uint64_t read = 0;
    for (const auto& t : rep.tasks) {
      CHECK(t.scan_kind == ScanKind::full_scan);
      CHECK(t.records_emitted <= t.records_read);
      CHECK(t.records_read == cluster->registry().dataset().record_counts.at(t.blocks.at(0)));
      read += t.records_read;
    }
    CHECK(read == 5000);
    CHECK(rep.full_tasks == 8);
  }

  TEST_CASE("full, mixed and index-only executions emit the same records") {
    TempDir dir;
    auto cluster = Cluster::create(config_for(dir / "c", 1000));
    Table t = gen_synthetic(10000, 8);
    cluster->upload(t);
    RunOptions opts;
    opts.collect_output = true;
    opts.keep_tasks = true;
    Engine engine(*cluster, opts);
    std::mt19937_64 rng(3);
    const std::int64_t max = std::int64_t{1} << 31;
    std::vector<JobSpec> jobs;
    for (int i = 0; i < 6; ++i) {
      std::int64_t lo = static_cast<std::int64_t>(rng() % max), hi = static_cast<std::int64_t>(rng() % max);
      if (lo > hi) std::swap(lo, hi);
      jobs.push_back(range_job("e", lo, hi, {"a", "e", "f"}, 0.0));
    }
    auto run_all = [&](double rho) {
      for (auto& j : jobs) {
        j.offer_rate = 0.0;
        JobReport rep = engine.run(j);
        REQUIRE(rep.success);
        CHECK(sorted(rep.output) == oracle(t, j));
      }
      JobSpec idx = jobs[0];
      idx.offer_rate = rho;
      REQUIRE(engine.run(idx).success);
    };
    run_all(0.5);  // all full scans, then half indexed
    CHECK(cluster->registry().count_indexed_blocks("e") == 5);
    run_all(1.0);  // mixed, then fully indexed
    CHECK(cluster->registry().count_indexed_blocks("e") == 10);
    for (auto& j : jobs) {
      JobReport rep = engine.run(j);
      CHECK(rep.full_tasks == 0);
      CHECK(sorted(rep.output) == oracle(t, j));
      for (const auto& task : rep.tasks) CHECK(task.scan_kind == ScanKind::index_scan);
    }
  }

  TEST_CASE("index scans never read more than the full scan of the same block") {
    TempDir dir;
    auto cluster = Cluster::create(config_for(dir / "c", 2000));
    cluster->upload(gen_synthetic(8000, 9));
    RunOptions opts;
    opts.keep_tasks = true;
    Engine engine(*cluster, opts);
    JobSpec j = range_job("f", 0, std::int64_t{1} << 29, {"a", "b"}, 1.0);
    JobReport full = engine.run(j);
    JobReport idx = engine.run(j);
    REQUIRE(full.success);
    REQUIRE(idx.success);
    CHECK(idx.full_tasks == 0);
    CHECK(idx.bytes_read < full.bytes_read);
  }

  TEST_CASE("a missing replica file fails the job") {
    TempDir dir;
    auto cluster = Cluster::create(config_for(dir / "c", 1000));
    cluster->upload(gen_synthetic(2000, 10));
    for (std::uint16_t n = 0; n < 4; ++n)
      std::filesystem::remove(normal_replica_path(cluster->root(), NodeId{n}, BlockId{1}));
    Engine engine(*cluster);
    JobReport rep = engine.run(range_job("a", 1, 10, {"a"}, 0.0));
    CHECK_FALSE(rep.success);
    CHECK_FALSE(rep.error.empty());
  }

  TEST_CASE("a filtering map function drops records") {
    TempDir dir;
    auto cluster = Cluster::create(config_for(dir / "c", 1000));
    Table t = gen_synthetic(3000, 11);
    cluster->upload(t);
    JobSpec j = range_job("a", 1, 10, {"a", "b"}, 0.0);
    j.map_fn = [](const RecordView& r) -> std::optional<std::string> {
      if (std::get<std::int64_t>(r.get("b")) % 2) return std::nullopt;
      return identity_record(r);
    };
    Engine engine(*cluster);
    JobReport rep = engine.run(j);
    std::uint64_t even = 0;
    for (std::size_t r = 0; r < t.rows(); ++r) even += t.column("b").int64_at(r) % 2 == 0;
    CHECK(rep.records_out == even);
    CHECK(rep.records_read == 3000);
  }
}

TEST_SUITE("engine") {
  TEST_CASE("constant rate converges after ceil(1/rate) jobs") {
    for (double rho : {0.2, 0.34, 1.0}) {
      TempDir dir;
      auto cluster = Cluster::create(config_for(dir / "c", 100));
      cluster->upload(gen_synthetic(2000, 12));
      Engine engine(*cluster);
      const auto expected = static_cast<int>(std::ceil(1.0 / rho - 1e-9));
      int jobs = 0;
      while (cluster->registry().count_indexed_blocks("b") < 20) {
        REQUIRE(engine.run(range_job("b", 0, 1000, {"a"}, rho)).success);
        ++jobs;
        REQUIRE(jobs <= expected);
      }
      CHECK(jobs == expected);
    }
  }

  TEST_CASE("prediction stays within one indexing wave of the simulation") {
    TempDir dir;
    ClusterConfig cfg = config_for(dir / "c", 250);
    cfg.timing = {0.25, 1e-6, 0.75};
    auto cluster = Cluster::create(cfg);
    cluster->upload(gen_synthetic(10000, 13));
    Engine engine(*cluster);
    const auto all = cluster->registry().schema().name_set();
    for (int i = 0; i < 6; ++i) {
      JobReport rep = engine.run(range_job("c", 0, 1 << 20, all, 0.3));
      REQUIRE(rep.success);
      CHECK(rep.t_idx_overhead == doctest::Approx(0.75));
      CHECK(std::abs(rep.predicted_seconds - rep.simulated_seconds) <= rep.t_idx_overhead + 1e-9);
    }
    CHECK(engine.calibration().complete());
    CHECK(Calibration::load(cluster->calibration_path()).complete());
  }

  TEST_CASE("eager mode: first job sets the target, later jobs compute the rate") {
    TempDir dir;
    ClusterConfig cfg = config_for(dir / "c", 250);
    cfg.policy.mode = PolicyMode::eager;
    cfg.policy.rho = 0.1;
    cfg.timing = {0.01, 1e-6, 0.05};
    auto cluster = Cluster::create(cfg);
    cluster->upload(gen_synthetic(10000, 14));
    Engine engine(*cluster);
    JobSpec j = range_job("d", 0, 1 << 20, cluster->registry().schema().name_set(), 0);
    j.policy = JobPolicy::config_default;
    j.offer_rate.reset();
    JobReport first = engine.run(j);
    REQUIRE(first.success);
    CHECK(first.rho == doctest::Approx(0.1));
    CHECK(first.offered == 4);
    REQUIRE(engine.calibration().target_seconds);
    CHECK(*engine.calibration().target_seconds == doctest::Approx(first.simulated_seconds));

    std::size_t indexed = first.indexed_after;
    for (int i = 0; i < 10 && indexed < 40; ++i) {
      JobReport rep = engine.run(j);
      REQUIRE(rep.success);
      CHECK(rep.rho > 0);
      CHECK_FALSE(rep.eager_fallback);
      CHECK(rep.indexed_after > indexed);
      indexed = rep.indexed_after;
    }
    CHECK(indexed == 40);
    JobReport done = engine.run(j);
    CHECK(done.offered == 0);
    CHECK(done.full_tasks == 0);
  }

  TEST_CASE("eager mode without calibration falls back to the constant rate") {
    TempDir dir;
    ClusterConfig cfg = config_for(dir / "c", 500);
    cfg.policy.mode = PolicyMode::eager;
    cfg.policy.rho = 0.0;  // the first job indexes nothing, so no indexing overhead is measured
    auto cluster = Cluster::create(cfg);
    cluster->upload(gen_synthetic(2000, 15));
    Engine engine(*cluster);
    JobSpec j = range_job("d", 0, 100, {"a"}, 0);
    j.policy = JobPolicy::config_default;
    j.offer_rate.reset();
    REQUIRE(engine.run(j).success);
    JobReport second = engine.run(j);
    CHECK(second.eager_fallback);
    CHECK(second.rho == 0);
  }

  TEST_CASE("selectivity policy offers blocks where most rows qualify") {
    TempDir dir;
    auto cluster = Cluster::create(config_for(dir / "c", 1000));
    Table t = gen_synthetic(4000, 16);
    // blocks 0 and 2: all rows have b = 5; blocks 1 and 3: b = row number
    std::vector<std::int64_t> b(4000);
    for (std::size_t r = 0; r < 4000; ++r) b[r] = (r / 1000) % 2 == 0 ? 5 : static_cast<std::int64_t>(r);
    t.column("b") = Column::from_int64(b);
    cluster->upload(t);
    Engine engine(*cluster);
    JobSpec j = range_job("b", 0, 10, {"a"}, 0);
    j.policy = JobPolicy::selectivity;
    j.offer_rate.reset();
    j.selectivity_threshold = 0.8;
    JobReport rep = engine.run(j);
    REQUIRE(rep.success);
    CHECK(rep.offered == 2);
    CHECK(rep.rejected_selectivity == 2);
    CHECK(cluster->registry().find_index(BlockId{0}, "b"));
    CHECK_FALSE(cluster->registry().find_index(BlockId{1}, "b"));
  }

  TEST_CASE("invalid jobs are reported, not thrown") {
    TempDir dir;
    auto cluster = Cluster::create(config_for(dir / "c", 1000));
    cluster->upload(gen_synthetic(1000, 17));
    Engine engine(*cluster);
    CHECK_FALSE(engine.run(range_job("zz", 0, 1, {"a"}, 0)).success);
    CHECK_FALSE(engine.run(range_job("a", 5, 1, {"a"}, 0)).success);
    JobSpec wrong_type = range_job("a", 0, 1, {"a"}, 0);
    wrong_type.predicate.low = std::string("x");
    CHECK_FALSE(engine.run(wrong_type).success);
  }
}
