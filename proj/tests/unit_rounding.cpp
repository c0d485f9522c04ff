#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "restock/branch_and_bound.hpp"
#include "restock/rounding.hpp"
#include "restock/transfer_model.hpp"
#include "test_helpers.hpp"

using namespace restock;

namespace {

Solution solve_relaxed(const Instance& inst, const SolverConfig& cfg, double& opt_total) {
  auto tm = build_transfer_model(inst, cfg, true);
  auto res = solve_milp(tm.model, {});
  REQUIRE(res.status == MilpStatus::Optimal);
  opt_total = res.objective;
  return tm.extract(inst, res.x);
}

}  // namespace

TEST_CASE("arc prices reflect remaining package room") {
  Instance inst = th::fig3_instance();
  std::vector<double> x(9, 0.0), y = {1.0, 0.0, 2.0};
  auto c = rounding_costs(inst, x, y);
  REQUIRE(c.size() == 3);
  CHECK(th::close(c[0], -100.0));  // one package, nothing loaded, avg cost 1
  CHECK(th::close(c[1], 0.0));
  CHECK(th::close(c[2], -200.0));

  x[0 * 3 + 0] = 30;  // 30 units of weight 1 on arc 0
  c = rounding_costs(inst, x, y);
  CHECK(th::close(c[0], -70.0));
}

TEST_CASE("integral relaxed input passes through unchanged") {
  Instance inst = th::fig3_instance();
  SolverConfig cfg;
  auto tm = build_transfer_model(inst, cfg, false);
  auto res = solve_milp(tm.model, {});
  REQUIRE(res.status == MilpStatus::Optimal);
  Solution exact = tm.extract(inst, res.x);

  auto out = round_all(inst, cfg, exact);
  CHECK(out.runs_used == 1);
  CHECK(out.best_run == 0);
  CHECK(out.packages_added == std::vector<int>{0});
  CHECK(th::close(out.terms.total, res.objective, 1e-6));
  for (std::size_t k = 0; k < exact.x.size(); ++k)
    CHECK(out.solution.x[k] == Catch::Approx(exact.x[k]).margin(1e-9));
}

TEST_CASE("rounded solutions stay in the rounding intervals") {
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    GeneratorParams par = th::tiny_params(seed);
    par.num_outlets = 3;
    par.num_skus = 3;
    par.total_stock = 12;
    Instance inst = generate_instance(par);
    SolverConfig cfg;
    cfg.delta = (seed % 2) ? 1.0 : 0.9;
    double opt_total = 0;
    Solution relaxed = solve_relaxed(inst, cfg, opt_total);
    auto out = round_all(inst, cfg, relaxed);
    INFO("seed " << seed);
    CHECK(th::check_rounding_intervals(inst, relaxed.x, out.solution.x));
    // packages are only ever added on top of the relaxed counts
    for (std::size_t k = 0; k < relaxed.y.size(); ++k)
      CHECK(out.solution.y[k] >= std::llround(relaxed.y[k]) - 1e-9);
  }
}

TEST_CASE("rounded output is feasible for the integral model") {
  for (std::uint64_t seed = 20; seed < 32; ++seed) {
    GeneratorParams par = th::tiny_params(seed);
    par.num_outlets = 3;
    par.num_skus = 4;
    par.total_stock = 16;
    Instance inst = generate_instance(par);
    SolverConfig cfg;
    cfg.delta = (seed % 2) ? 0.85 : 1.0;
    double opt_total = 0;
    Solution relaxed = solve_relaxed(inst, cfg, opt_total);
    auto out = round_all(inst, cfg, relaxed);
    INFO("seed " << seed);
    CHECK(out.solution.integral);
    auto viol = check_feasibility(inst, cfg, out.solution);
    CAPTURE(viol.size());
    CHECK(viol.empty());
  }
}

TEST_CASE("rounding never beats the relaxed optimum at full capacity") {
  for (std::uint64_t seed = 40; seed < 52; ++seed) {
    GeneratorParams par = th::tiny_params(seed);
    par.num_outlets = 3;
    par.num_skus = 3;
    par.total_stock = 10;
    Instance inst = generate_instance(par);
    SolverConfig cfg;  // delta 1
    double opt_total = 0;
    Solution relaxed = solve_relaxed(inst, cfg, opt_total);
    auto out = round_all(inst, cfg, relaxed);
    CHECK(out.terms.total >= opt_total - 1e-6 * std::max(1.0, std::fabs(opt_total)));
  }
}

TEST_CASE("rounding is deterministic in its seed") {
  GeneratorParams par = th::tiny_params(9);
  par.num_outlets = 3;
  par.num_skus = 3;
  par.total_stock = 12;
  Instance inst = generate_instance(par);
  SolverConfig cfg;
  cfg.delta = 0.9;
  double opt_total = 0;
  Solution relaxed = solve_relaxed(inst, cfg, opt_total);

  RoundingRunConfig rcfg;
  rcfg.rng_seed = 5;
  auto a = round_all(inst, cfg, relaxed, rcfg);
  auto b = round_all(inst, cfg, relaxed, rcfg);
  CHECK(a.solution.x == b.solution.x);
  CHECK(a.solution.y == b.solution.y);
  CHECK(a.terms.total == b.terms.total);
  CHECK(a.packages_added == b.packages_added);
  CHECK(a.best_run == b.best_run);
}

TEST_CASE("run budget and bookkeeping are respected") {
  GeneratorParams par = th::tiny_params(3);
  par.num_outlets = 3;
  par.num_skus = 3;
  par.total_stock = 12;
  Instance inst = generate_instance(par);
  SolverConfig cfg;
  cfg.delta = 0.85;
  double opt_total = 0;
  Solution relaxed = solve_relaxed(inst, cfg, opt_total);

  RoundingRunConfig rcfg;
  rcfg.max_runs = 4;
  rcfg.stall_limit = 100;  // force the run budget to be the binding stop
  auto out = round_all(inst, cfg, relaxed, rcfg);
  CHECK(out.runs_used <= 4);
  CHECK(out.packages_added.size() == static_cast<std::size_t>(out.runs_used));
  CHECK(out.best_run >= 0);
  CHECK(out.best_run < out.runs_used);
  for (int n : out.packages_added) CHECK(n >= 0);

  RoundingRunConfig one;
  one.max_runs = 1;
  auto single = round_all(inst, cfg, relaxed, one);
  CHECK(single.runs_used == 1);
  CHECK(single.best_run == 0);
}

TEST_CASE("stalling cuts a long run budget short") {
  Instance inst = th::fig3_instance();
  SolverConfig cfg;
  auto tm = build_transfer_model(inst, cfg, false);
  auto res = solve_milp(tm.model, {});
  REQUIRE(res.status == MilpStatus::Optimal);
  Solution exact = tm.extract(inst, res.x);
  exact.integral = false;  // treat as relaxed input; values are already integral

  RoundingRunConfig rcfg;
  rcfg.max_runs = 50;
  rcfg.cost_match_tolerance = -1;  // disable the cost-match early exit
  rcfg.stall_limit = 3;
  auto out = round_all(inst, cfg, exact, rcfg);
  CHECK(out.runs_used <= 10);  // stalls long before the budget
}
