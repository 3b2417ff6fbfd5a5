#include "adx/cost_model.hpp"
#include "doctest.h"
#include "test_support.hpp"

using namespace adx;

namespace {

CostModelParams example() {
  CostModelParams p;
  p.n_slots = 10;
  p.n_blocks = 100;
  p.n_idx_blocks = 20;
  p.t_fsw = 10;
  p.t_idx_overhead = 2;
  p.T_is = 10;
  p.T_target = 100;
  return p;
}

}  // namespace

TEST_SUITE("cost model") {
  TEST_CASE("full-scan waves") {
    CostModelParams p = example();
    CHECK(n_fsw(p) == 8);
    p.n_idx_blocks = 100;
    CHECK(n_fsw(p) == 0);
    p.n_blocks = 101;
    p.n_idx_blocks = 0;
    CHECK(n_fsw(p) == 11);
  }

  TEST_CASE("predicted job time") {
    CostModelParams p = example();
    CHECK(predict_T_job(p, 0) == doctest::Approx(10 + 80));
    CHECK(predict_T_job(p, 0.5) == doctest::Approx(100));
    // rho = 1: min(10, 8) caps the overhead at n_fsw waves
    CHECK(predict_T_job(p, 1.0) == doctest::Approx(10 + 80 + 2 * 8));
  }

  TEST_CASE("offer rate from the runtime budget") {
    CostModelParams p = example();
    CHECK(compute_rho(p) == doctest::Approx(0.5));
    p.T_target = 85;
    CHECK(compute_rho(p) == 0);
    p.T_target = 1000;
    CHECK(compute_rho(p) == 1);
    p.t_idx_overhead = 0;
    CHECK(compute_rho(p) == 1);
    p.T_target = 50;
    CHECK(compute_rho(p) == 0);
  }

  TEST_CASE("offered blocks never exceed unindexed blocks") {
    CostModelParams p = example();
    CHECK(offered_blocks(p, 1.0) == 80);
    CHECK(offered_blocks(p, 0.5) == 50);
    CHECK(offered_blocks(p, 0.0) == 0);
  }

  TEST_CASE("monotonicity and budget consistency on random parameters") {
    std::mt19937_64 rng(21);
    auto uni = [&](double lo, double hi) { return lo + (hi - lo) * static_cast<double>(rng() % 1000000) / 1e6; };
    for (int i = 0; i < 5000; ++i) {
      CostModelParams p;
      p.n_slots = 1 + static_cast<std::uint32_t>(rng() % 40);
      p.n_blocks = static_cast<std::uint32_t>(rng() % 500);
      p.n_idx_blocks = p.n_blocks ? static_cast<std::uint32_t>(rng() % (p.n_blocks + 1)) : 0;
      p.t_fsw = uni(0, 20);
      p.t_idx_overhead = uni(0.01, 10);
      p.T_is = uni(0, 50);
      p.T_target = uni(0, 400);

      double prev = -1;
      for (double rho = 0; rho <= 1.0001; rho += 0.05) {
        double t = predict_T_job(p, rho);
        REQUIRE(t >= prev - 1e-9);
        prev = t;
      }
      const double rho = compute_rho(p);
      REQUIRE(rho >= 0);
      REQUIRE(rho <= 1);
      CostModelParams slower = p;
      slower.T_is += uni(0, 10);
      REQUIRE(compute_rho(slower) <= rho + 1e-12);
      slower = p;
      slower.t_fsw += uni(0, 5);
      REQUIRE(compute_rho(slower) <= rho + 1e-12);
      if (rho > 0 && rho < 1) REQUIRE(predict_T_job(p, rho) <= p.T_target + p.t_idx_overhead + 1e-9);
    }
  }

  TEST_CASE("calibration persists") {
    test::TempDir dir;
    Calibration c;
    CHECK_FALSE(Calibration::load(dir / "none.json").complete());
    c.t_fsw = 1.25;
    c.t_idx_overhead = 0.5;
    c.target_seconds = 99;
    c.save(dir / "cal.json");
    Calibration back = Calibration::load(dir / "cal.json");
    CHECK(back.complete());
    CHECK(*back.t_fsw == 1.25);
    CHECK(*back.t_idx_overhead == 0.5);
    CHECK(*back.target_seconds == 99);
  }
}
