#include <catch2/catch_amalgamated.hpp>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <unistd.h>

#include "restock/branch_and_bound.hpp"
#include "restock/json_io.hpp"
#include "restock/transfer_model.hpp"
#include "test_helpers.hpp"

using namespace restock;

namespace {

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("restock_test_" + std::to_string(::getpid()) + "_" +
            std::to_string(reinterpret_cast<std::uintptr_t>(this)));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("instance survives a JSON round trip") {
  for (std::uint64_t seed : {0ULL, 5ULL, 9ULL}) {
    GeneratorParams par = th::tiny_params(seed);
    par.num_skus = 3;
    par.num_package_types = 2;
    Instance a = generate_instance(par);
    Instance b = instance_from_json(instance_to_json(a));
    CHECK(b.name == a.name);
    CHECK(b.num_facilities == a.num_facilities);
    CHECK(b.num_skus == a.num_skus);
    CHECK(b.num_package_types == a.num_package_types);
    CHECK(b.warehouses == a.warehouses);
    CHECK(b.movements == a.movements);
    CHECK(b.weight == a.weight);
    CHECK(b.capacity == a.capacity);
    CHECK(b.cost == a.cost);
    CHECK(b.initial_stock == a.initial_stock);
    CHECK(b.fixed_demand == a.fixed_demand);
    CHECK(b.variable_demand == a.variable_demand);
    CHECK(b.priority == a.priority);
    CHECK(validate_instance(b).ok());
  }
}

TEST_CASE("solution survives a JSON round trip") {
  Instance inst = th::fig3_instance();
  SolverConfig cfg;
  auto tm = build_transfer_model(inst, cfg, false);
  auto res = solve_milp(tm.model, {});
  REQUIRE(res.status == MilpStatus::Optimal);
  Solution sol = tm.extract(inst, res.x);
  ObjectiveTerms terms = evaluate_objective(inst, cfg, sol);

  json j = solution_to_json(inst, sol, terms);
  Solution back = solution_from_json(inst, j);
  CHECK(back.x == sol.x);
  CHECK(back.y == sol.y);
  CHECK(j.at("objective_terms").at("total").get<double>() == terms.total);
  CHECK(j.at("instance").get<std::string>() == "fig3");
  // sparse encoding: zero entries are dropped
  for (const auto& t : j.at("X")) CHECK(t.at(3).get<double>() != 0.0);
}

TEST_CASE("manifest lists every package with its contents") {
  Instance inst = th::fig3_instance();
  SolverConfig cfg;
  auto tm = build_transfer_model(inst, cfg, false);
  auto res = solve_milp(tm.model, {});
  REQUIRE(res.status == MilpStatus::Optimal);
  auto packed = pack_all(inst, tm.extract(inst, res.x));

  json j = manifest_to_json(packed);
  REQUIRE(j.is_array());
  REQUIRE(j.size() == packed.movements.size());
  for (std::size_t k = 0; k < j.size(); ++k) {
    CHECK(j[k].at("from").get<int>() == packed.movements[k].from);
    CHECK(j[k].at("to").get<int>() == packed.movements[k].to);
    CHECK(j[k].at("exact").get<bool>());
    REQUIRE(j[k].at("packages").is_array());
    CHECK(j[k].at("packages").size() == packed.movements[k].packing.packages.size());
    for (const auto& pkg : j[k].at("packages")) {
      CHECK(pkg.at("type").is_number_integer());
      for (const auto& c : pkg.at("contents")) {
        REQUIRE(c.is_array());
        CHECK(c.size() == 2);
        CHECK(c.at(1).get<long long>() > 0);
      }
    }
  }
}

TEST_CASE("file save and load round trip") {
  TempDir tmp;
  Instance a = generate_instance(th::tiny_params(4));
  save_json(instance_to_json(a), tmp.file("inst.json"));
  Instance b = instance_from_json(load_json(tmp.file("inst.json")));
  CHECK(b.initial_stock == a.initial_stock);
  CHECK(b.cost == a.cost);
  CHECK(b.name == a.name);
}

TEST_CASE("malformed input is rejected loudly") {
  CHECK_THROWS(load_json("/nonexistent/path/foo.json"));

  json good = instance_to_json(th::fig3_instance());

  SECTION("missing section") {
    json j = good;
    j.erase("movements");
    CHECK_THROWS(instance_from_json(j));
  }
  SECTION("cost key off the movement set") {
    json j = good;
    j["cost"]["(2,0,0)"] = 1.0;
    CHECK_THROWS_AS(instance_from_json(j), std::runtime_error);
  }
  SECTION("garbage cost key") {
    json j = good;
    j["cost"]["package0"] = 1.0;
    CHECK_THROWS_AS(instance_from_json(j), std::runtime_error);
  }
  SECTION("demand on a warehouse row") {
    json j = good;
    j["fixed_demand"][0][1] = 3;
    CHECK_THROWS_AS(instance_from_json(j), std::runtime_error);
  }
  SECTION("solution entry off the movement set") {
    Instance inst = th::fig3_instance();
    json s;
    s["X"] = json::array({{2, 0, 0, 1.0}});
    s["Y"] = json::array();
    CHECK_THROWS_AS(solution_from_json(inst, s), std::runtime_error);
  }
  SECTION("unwritable path") {
    CHECK_THROWS_AS(save_json(good, "/nonexistent/dir/inst.json"), std::runtime_error);
  }
}

TEST_CASE("json round trip keeps solver results intact") {
  GeneratorParams par = th::tiny_params(12);
  Instance inst = generate_instance(par);
  Instance copy = instance_from_json(instance_to_json(inst));
  SolverConfig cfg;
  auto r1 = solve_milp(build_transfer_model(inst, cfg, false).model, {});
  auto r2 = solve_milp(build_transfer_model(copy, cfg, false).model, {});
  REQUIRE(r1.status == MilpStatus::Optimal);
  REQUIRE(r2.status == MilpStatus::Optimal);
  CHECK(r1.objective == Catch::Approx(r2.objective).margin(1e-9));
}
