#include <catch2/catch_amalgamated.hpp>
#include <cmath>
#include <numeric>

#include "restock/generator.hpp"
#include "test_helpers.hpp"

using namespace restock;

TEST_CASE("partition adds up and stays within one unit of quota") {
  Rng rng(42);
  for (int trial = 0; trial < 500; ++trial) {
    std::size_t n = 1 + rng.below(12);
    long long total = static_cast<long long>(rng.below(5000));
    std::vector<double> w(n);
    double sum = 0;
    for (auto& v : w) {
      v = rng.u01() * 10;
      sum += v;
    }
    if (sum <= 0) w[0] = 1, sum = 1;
    auto part = partition(total, w);
    REQUIRE(part.size() == n);
    long long got = std::accumulate(part.begin(), part.end(), 0LL);
    CHECK(got == total);
    for (std::size_t k = 0; k < n; ++k) {
      double quota = static_cast<double>(total) * (w[k] / sum);
      CHECK(part[k] >= static_cast<long long>(std::floor(quota)));
      CHECK(part[k] <= static_cast<long long>(std::ceil(quota)));
      CHECK(part[k] >= 0);
    }
  }
}

TEST_CASE("partition rejects bad input") {
  CHECK_THROWS_AS(partition(-1, {1.0}), std::invalid_argument);
  CHECK_THROWS_AS(partition(5, {}), std::invalid_argument);
  CHECK_THROWS_AS(partition(5, {0.0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(partition(5, {-1.0, 2.0}), std::invalid_argument);
  CHECK(partition(0, {0.0, 0.0}) == std::vector<long long>{0, 0});
}

TEST_CASE("generated instances validate and match requested sizes") {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    GeneratorParams par = preset_params("desk");
    par.seed = seed;
    Instance inst = generate_instance(par);
    CHECK(validate_instance(inst).ok());
    CHECK(inst.num_facilities == 6);
    CHECK(inst.num_outlets() == 5);
    CHECK(inst.num_skus == 5);
    CHECK(inst.num_package_types == 2);
    CHECK(inst.num_movements() == 30);  // GR on six facilities
    long long total = 0;
    for (int s = 0; s < inst.num_skus; ++s) total += inst.sku_total_stock(s);
    CHECK(total == 100);
  }
}

TEST_CASE("generation is deterministic in the seed") {
  GeneratorParams par = th::tiny_params(7);
  Instance a = generate_instance(par);
  Instance b = generate_instance(par);
  CHECK(a.name == b.name);
  CHECK(a.initial_stock == b.initial_stock);
  CHECK(a.fixed_demand == b.fixed_demand);
  CHECK(a.variable_demand == b.variable_demand);
  CHECK(a.cost == b.cost);
  CHECK(a.weight == b.weight);
  CHECK(a.capacity == b.capacity);

  par.seed = 8;
  Instance c = generate_instance(par);
  CHECK(a.initial_stock != c.initial_stock);
}

TEST_CASE("warehouse stock share is the ceiling of 40 percent") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    GeneratorParams par = preset_params("small");
    par.seed = seed;
    par.total_stock = 997;  // odd total so the split is not exact
    Instance inst = generate_instance(par);
    long long ware = 0, total = 0;
    for (int i = 0; i < inst.num_facilities; ++i)
      for (int s = 0; s < inst.num_skus; ++s) {
        total += inst.stock(i, s);
        if (inst.is_warehouse(i)) ware += inst.stock(i, s);
      }
    CHECK(total == 997);
    CHECK(ware == static_cast<long long>(std::ceil(0.4 * 997)));
    CHECK(total - ware == static_cast<long long>(std::floor(0.6 * 997)));
  }
}

TEST_CASE("fixed demand never exceeds the per-SKU stock") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    GeneratorParams par = preset_params("desk");
    par.seed = 100 + seed;
    Instance inst = generate_instance(par);
    for (int s = 0; s < inst.num_skus; ++s) {
      long long need = 0;
      for (int o = 0; o < inst.num_outlets(); ++o)
        need += inst.fixed_demand[static_cast<std::size_t>(o) * inst.num_skus + s];
      CHECK(need <= inst.sku_total_stock(s));
    }
  }
}

TEST_CASE("presets cover the published ladder") {
  GeneratorParams small = preset_params("small");
  CHECK(small.num_skus == 10);
  CHECK(small.num_package_types == 2);
  CHECK(small.num_outlets == 10);
  CHECK(small.total_stock == 1000);

  GeneratorParams medium = preset_params("medium");
  CHECK(medium.num_skus == 30);
  CHECK(medium.total_stock == 9000);

  GeneratorParams large = preset_params("large");
  CHECK(large.num_outlets == 100);
  CHECK(large.total_stock == 100000);

  for (int k = 1; k <= 10; ++k) {
    GeneratorParams g = preset_params("g" + std::to_string(k));
    int n = 60 + 20 * k;
    CHECK(g.num_skus == n);
    CHECK(g.num_outlets == n);
    CHECK(g.num_package_types == 2);
    CHECK(g.total_stock == 10LL * n * n);
  }

  CHECK_THROWS_AS(preset_params("g11"), std::invalid_argument);
  CHECK_THROWS_AS(preset_params("huge"), std::invalid_argument);
}

TEST_CASE("instance names encode policy, size and seed") {
  GeneratorParams par = preset_params("small");
  par.seed = 0;
  CHECK(generate_instance(par).name == "gr_o10_s10_seed0");
  par.policy = MovementPolicy::CR;
  par.seed = 3;
  CHECK(generate_instance(par).name == "cr_o10_s10_seed3");
}

TEST_CASE("generator rejects nonsense sizes") {
  GeneratorParams par;
  par.num_outlets = 0;
  CHECK_THROWS_AS(generate_instance(par), std::invalid_argument);
  par = GeneratorParams{};
  par.total_stock = -5;
  CHECK_THROWS_AS(generate_instance(par), std::invalid_argument);
}
