#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "restock/pipeline.hpp"
#include "test_helpers.hpp"

using namespace restock;

TEST_CASE("tp pipeline solves the reference fixture") {
  Instance inst = th::fig3_instance();
  SolverConfig cfg;
  cfg.send_rule = SendRule::ExcessOnly;
  auto rep = run_tp(inst, cfg);
  REQUIRE(rep.status == MilpStatus::Optimal);
  REQUIRE(rep.has_solution);
  CHECK(rep.scheme == "tp");
  CHECK(rep.packed_packages == 3.0);

  cfg.send_rule = SendRule::UpToStock;
  auto rep2 = run_tp(inst, cfg);
  REQUIRE(rep2.status == MilpStatus::Optimal);
  CHECK(rep2.packed_packages == 2.0);
  CHECK(rep2.packed_terms.total <= rep.packed_terms.total + 1e-9);
}

TEST_CASE("pipeline outputs are feasible and consistent") {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    GeneratorParams par = th::tiny_params(seed);
    par.num_outlets = 3;
    par.num_skus = 3;
    par.total_stock = 12;
    Instance inst = generate_instance(par);
    SolverConfig cfg;
    INFO("seed " << seed);

    auto tp = run_tp(inst, cfg);
    REQUIRE(tp.status == MilpStatus::Optimal);
    CHECK(check_feasibility(inst, cfg, tp.milp_solution).empty());
    CHECK(check_feasibility(inst, cfg, tp.packed.solution).empty());
    CHECK(th::close(tp.milp_terms.total, tp.milp_objective, 1e-6));
    CHECK(tp.milp_terms.total ==
          Catch::Approx(tp.milp_terms.transport + tp.milp_terms.shortfall + tp.milp_terms.tiebreak)
              .margin(1e-9));
    // packing assigns items to concrete packages, which is tighter than the
    // aggregate capacity rows, so its transport cost can only be higher
    CHECK(tp.packed_terms.transport >= tp.milp_terms.transport - 1e-9);
    CHECK(tp.packed_terms.shortfall == Catch::Approx(tp.milp_terms.shortfall).margin(1e-9));
    CHECK(tp.packed_terms.tiebreak == Catch::Approx(tp.milp_terms.tiebreak).margin(1e-9));
    CHECK(tp.lower_bound <= tp.upper_bound + 1e-9);
    CHECK(th::close(tp.upper_bound, tp.packed_terms.total, 1e-12));

    cfg.delta = 0.9;
    auto rt = run_rtrp(inst, cfg);
    REQUIRE(rt.status == MilpStatus::Optimal);
    CHECK(rt.delta == 0.9);
    CHECK(check_feasibility(inst, cfg, rt.packed.solution).empty());
    CHECK(rt.rounding_runs >= 1);
    CHECK(rt.rounding_best_run >= 0);
    CHECK(rt.rounding_packages_added.size() == static_cast<std::size_t>(rt.rounding_runs));
    CHECK(th::close(rt.upper_bound, rt.packed_terms.total, 1e-12));
  }
}

TEST_CASE("relaxed scheme only certifies a bound at full capacity") {
  GeneratorParams par = th::tiny_params(21);
  par.num_outlets = 3;
  par.num_skus = 3;
  par.total_stock = 12;
  Instance inst = generate_instance(par);
  SolverConfig cfg;

  cfg.delta = 1.0;
  auto at_one = run_rtrp(inst, cfg);
  REQUIRE(at_one.status == MilpStatus::Optimal);
  CHECK(at_one.lower_bound == at_one.milp_bound);
  CHECK(at_one.lower_bound > -kInf);
  // a genuine relaxation: bound below every integral cost
  auto tp = run_tp(inst, cfg);
  REQUIRE(tp.status == MilpStatus::Optimal);
  CHECK(at_one.lower_bound <= tp.packed_terms.total + 1e-6);
  CHECK(at_one.milp_objective <= tp.milp_objective + 1e-6);

  cfg.delta = 0.9;
  auto at_09 = run_rtrp(inst, cfg);
  REQUIRE(at_09.status == MilpStatus::Optimal);
  CHECK(at_09.lower_bound == -kInf);
}

TEST_CASE("default option mapping carries the time limit only") {
  SolverConfig cfg;
  cfg.time_limit = 42.5;
  cfg.alpha = 3.0;
  auto opt = milp_options_for(cfg);
  CHECK(opt.time_limit == 42.5);
  MilpOptions ref;
  CHECK(opt.node_limit == ref.node_limit);
  CHECK(opt.gap_tol == ref.gap_tol);
  CHECK(opt.int_tol == ref.int_tol);
}

TEST_CASE("pipeline reports serialize with phase blocks") {
  Instance inst = th::fig3_instance();
  SolverConfig cfg;
  auto tp = run_tp(inst, cfg);
  REQUIRE(tp.has_solution);
  json jt = report_to_json(inst, tp);
  CHECK(jt.at("scheme") == "tp");
  CHECK(jt.at("status") == "optimal");
  CHECK(!jt.contains("delta"));
  CHECK(jt.at("phases").contains("milp"));
  CHECK(jt.at("phases").contains("packed"));
  CHECK(!jt.at("phases").contains("rounded"));
  CHECK(jt.at("packages").at("packed").get<double>() == tp.packed_packages);

  cfg.delta = 0.95;
  auto rt = run_rtrp(inst, cfg);
  REQUIRE(rt.has_solution);
  json jr = report_to_json(inst, rt);
  CHECK(jr.at("scheme") == "rtrp");
  CHECK(jr.at("delta").get<double>() == 0.95);
  CHECK(jr.at("phases").contains("rounded"));
  CHECK(jr.at("rounding").at("runs").get<int>() == rt.rounding_runs);
  CHECK(jr.at("milp").at("nodes").get<long long>() == rt.nodes);
}

TEST_CASE("reports without a solution stay truncated") {
  GeneratorParams par = th::tiny_params(2);
  par.num_outlets = 4;
  par.num_skus = 4;
  par.total_stock = 40;
  Instance inst = generate_instance(par);
  SolverConfig cfg;
  MilpOptions opt;
  opt.time_limit = 0.0;
  auto rep = run_tp(inst, cfg, opt);
  CHECK(!rep.has_solution);
  CHECK(rep.packed_packages == 0.0);
  json j = report_to_json(inst, rep);
  CHECK(!j.contains("phases"));
  CHECK(!j.contains("lower_bound"));
  CHECK(j.at("status").get<std::string>() != "optimal");
}

TEST_CASE("shrinking capacity can only raise the relaxed optimum") {
  // any plan feasible under delta stays feasible at full capacity, so the
  // relaxed objective is nonincreasing in delta
  for (std::uint64_t seed : {33ULL, 34ULL, 35ULL}) {
    GeneratorParams par = th::tiny_params(seed);
    par.num_outlets = 3;
    par.num_skus = 3;
    par.total_stock = 15;
    Instance inst = generate_instance(par);
    SolverConfig cfg;
    double prev = kInf;
    for (double d : {0.85, 0.9, 0.95, 1.0}) {
      cfg.delta = d;
      auto rep = run_rtrp(inst, cfg);
      REQUIRE(rep.status == MilpStatus::Optimal);
      CHECK(rep.milp_objective <= prev + 1e-6 * std::max(1.0, std::fabs(prev)));
      prev = rep.milp_objective;
    }
  }
}
