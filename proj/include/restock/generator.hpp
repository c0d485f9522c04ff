#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "restock/instance.hpp"
#include "restock/rng.hpp"

namespace restock {

struct GeneratorParams {
  int num_skus = 10;
  int num_package_types = 2;
  int num_outlets = 10;
  long long total_stock = 1000;
  int num_warehouses = 1;
  MovementPolicy policy = MovementPolicy::GR;

  double warehouses_prop = 0.4;  // share of stock held at warehouses
  double min_weight = 0.0, max_weight = 1.0;
  double min_cost = 10.0, max_cost = 100.0;
  double m_factor = 0.5;    // lower bound of the per-movement cost factor
  double mp_factor = 0.8;   // lower bound of the per-package cost factor
  double min_cap = 2.0, max_cap = 10.0;
  double min_fix_dem_factor = 0.5, max_fix_dem_factor = 1.0;
  double min_var_dem_factor = 0.25, max_var_dem_factor = 0.5;
  double min_priority = 1.0, max_priority = 1.0;
  double ware_pack_cost_factor = 1.0;  // extra factor on movements touching a warehouse
  std::uint64_t seed = 0;
};

// Split an integer total into integer parts proportional to the given
// nonnegative weights. Largest-remainder rule; ties go to the lower index.
// Each part differs from its exact quota by less than one unit and the
// parts always add up to the total.
inline std::vector<long long> partition(long long total, const std::vector<double>& weights) {
  if (total < 0) throw std::invalid_argument("partition: negative total");
  const std::size_t n = weights.size();
  if (n == 0) throw std::invalid_argument("partition: no weights");
  double sum = 0;
  for (double w : weights) {
    if (w < 0 || !std::isfinite(w)) throw std::invalid_argument("partition: bad weight");
    sum += w;
  }
  std::vector<long long> part(n, 0);
  if (total == 0) return part;
  if (sum <= 0) throw std::invalid_argument("partition: weights sum to zero");
  std::vector<double> frac(n);
  long long assigned = 0;
  for (std::size_t k = 0; k < n; ++k) {
    double quota = static_cast<double>(total) * (weights[k] / sum);
    double base = std::floor(quota);
    part[k] = static_cast<long long>(base);
    frac[k] = quota - base;
    assigned += part[k];
  }
  long long leftover = total - assigned;
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&frac](std::size_t a, std::size_t b) { return frac[a] > frac[b]; });
  for (long long k = 0; k < leftover; ++k) part[order[static_cast<std::size_t>(k)]] += 1;
  return part;
}

namespace gen_detail {
// Substream ids; one independent stream per generation procedure.
enum Stream : std::uint64_t {
  kWeights = 0,
  kCapacities = 1,
  kCosts = 2,
  kStock = 3,
  kFixedDemand = 4,
  kVariableDemand = 5,
  kPriorities = 6,
};
}  // namespace gen_detail

inline std::vector<double> gen_costs(const GeneratorParams& par,
                                     const std::vector<std::pair<int, int>>& movements,
                                     const std::vector<double>& capacity, int num_warehouses,
                                     Rng& rng) {
  const int P = static_cast<int>(capacity.size());
  double cap_max = *std::max_element(capacity.begin(), capacity.end());
  // Cheapest possible draw for the smallest package anchors the cost scale.
  double ini_min_cost = par.min_cost + (par.max_cost - par.min_cost) * par.m_factor * par.mp_factor;
  std::vector<double> ini_cost(P);
  for (int p = 0; p < P; ++p)
    ini_cost[p] = ini_min_cost + (par.max_cost - ini_min_cost) * capacity[p] / cap_max;
  std::vector<double> cost(movements.size() * static_cast<std::size_t>(P));
  for (std::size_t a = 0; a < movements.size(); ++a) {
    double m_cost = rng.uniform(par.m_factor, 1.0);
    bool ware = movements[a].first < num_warehouses || movements[a].second < num_warehouses;
    for (int p = 0; p < P; ++p) {
      double mp = rng.uniform(par.mp_factor, 1.0);
      double c = mp * m_cost * ini_cost[p];
      if (ware) c *= par.ware_pack_cost_factor;
      cost[a * static_cast<std::size_t>(P) + p] = c;
    }
  }
  return cost;
}

inline std::vector<long long> gen_initial_stock(const GeneratorParams& par, int num_facilities,
                                                Rng& rng) {
  const int F = num_facilities, S = par.num_skus, W = par.num_warehouses;
  long long t_ware = static_cast<long long>(
      std::ceil(static_cast<double>(par.total_stock) * par.warehouses_prop));
  t_ware = std::min(t_ware, par.total_stock);
  long long t_out = par.total_stock - t_ware;
  std::vector<double> f(static_cast<std::size_t>(F) * S);
  for (auto& v : f) v = rng.u01();
  std::vector<double> fw(f.begin(), f.begin() + static_cast<std::size_t>(W) * S);
  std::vector<double> fo(f.begin() + static_cast<std::size_t>(W) * S, f.end());
  std::vector<long long> stock(static_cast<std::size_t>(F) * S);
  auto ware_part = partition(t_ware, fw);
  auto out_part = partition(t_out, fo);
  std::copy(ware_part.begin(), ware_part.end(), stock.begin());
  std::copy(out_part.begin(), out_part.end(), stock.begin() + static_cast<std::size_t>(W) * S);
  return stock;
}

inline std::vector<long long> gen_fixed_demand(const GeneratorParams& par,
                                               const std::vector<long long>& stock,
                                               int num_facilities, Rng& rng) {
  const int F = num_facilities, S = par.num_skus, W = par.num_warehouses, O = F - W;
  std::vector<long long> fd(static_cast<std::size_t>(O) * S, 0);
  std::vector<double> f(O);
  for (int s = 0; s < S; ++s) {
    for (int o = 0; o < O; ++o) f[o] = rng.u01();
    long long t_sku = 0;
    for (int i = 0; i < F; ++i) t_sku += stock[static_cast<std::size_t>(i) * S + s];
    long long want = std::llround(
        rng.uniform(par.min_fix_dem_factor, par.max_fix_dem_factor) * static_cast<double>(t_sku));
    want = std::min(want, t_sku);
    auto col = partition(want, f);
    for (int o = 0; o < O; ++o) fd[static_cast<std::size_t>(o) * S + s] = col[o];
  }
  return fd;
}

inline std::vector<long long> gen_variable_demand(const GeneratorParams& par, int num_outlets,
                                                  Rng& rng) {
  const int O = num_outlets, S = par.num_skus;
  std::vector<double> f(static_cast<std::size_t>(O) * S);
  for (auto& v : f) v = rng.u01();
  long long want = std::llround(rng.uniform(par.min_var_dem_factor, par.max_var_dem_factor) *
                                static_cast<double>(par.total_stock));
  return partition(want, f);
}

inline std::vector<double> gen_priorities(const GeneratorParams& par, int num_outlets, Rng& rng) {
  std::vector<double> pri(static_cast<std::size_t>(num_outlets) * par.num_skus);
  for (auto& v : pri) v = rng.uniform(par.min_priority, par.max_priority);
  return pri;
}

inline Instance generate_instance(const GeneratorParams& par) {
  if (par.num_skus <= 0 || par.num_package_types <= 0 || par.num_outlets <= 0 ||
      par.num_warehouses <= 0 || par.total_stock < 0)
    throw std::invalid_argument("generate_instance: bad sizes");
  Instance inst;
  inst.num_facilities = par.num_warehouses + par.num_outlets;
  inst.num_skus = par.num_skus;
  inst.num_package_types = par.num_package_types;
  inst.warehouses.resize(par.num_warehouses);
  std::iota(inst.warehouses.begin(), inst.warehouses.end(), 0);
  inst.movements = movements_for_policy(inst.num_facilities, inst.warehouses, par.policy);

  Rng r_weight = substream(par.seed, gen_detail::kWeights);
  inst.weight.resize(par.num_skus);
  for (auto& w : inst.weight) w = r_weight.uniform(par.min_weight, par.max_weight);

  Rng r_cap = substream(par.seed, gen_detail::kCapacities);
  inst.capacity.resize(par.num_package_types);
  for (auto& c : inst.capacity) c = r_cap.uniform(par.min_cap, par.max_cap);

  Rng r_cost = substream(par.seed, gen_detail::kCosts);
  inst.cost = gen_costs(par, inst.movements, inst.capacity, par.num_warehouses, r_cost);

  Rng r_stock = substream(par.seed, gen_detail::kStock);
  inst.initial_stock = gen_initial_stock(par, inst.num_facilities, r_stock);

  Rng r_fd = substream(par.seed, gen_detail::kFixedDemand);
  inst.fixed_demand = gen_fixed_demand(par, inst.initial_stock, inst.num_facilities, r_fd);

  Rng r_vd = substream(par.seed, gen_detail::kVariableDemand);
  inst.variable_demand = gen_variable_demand(par, par.num_outlets, r_vd);

  Rng r_pri = substream(par.seed, gen_detail::kPriorities);
  inst.priority = gen_priorities(par, par.num_outlets, r_pri);

  inst.name = std::string(to_string(par.policy)) + "_o" + std::to_string(par.num_outlets) + "_s" +
              std::to_string(par.num_skus) + "_seed" + std::to_string(par.seed);
  inst.finalize();
  return inst;
}

// Named sweep presets: three reference sizes plus the g1..g10 growth ladder
// (S = O, P = 2, stock = S^2 * 10).
inline GeneratorParams preset_params(const std::string& name) {
  GeneratorParams par;
  auto sized = [&par](int skus, int packs, int outlets, long long stock) {
    par.num_skus = skus;
    par.num_package_types = packs;
    par.num_outlets = outlets;
    par.total_stock = stock;
  };
  if (name == "small") sized(10, 2, 10, 1000);
  else if (name == "medium") sized(30, 4, 30, 9000);
  else if (name == "large") sized(100, 4, 100, 100000);
  else if (name == "desk") sized(5, 2, 5, 100);
  else if (name.size() >= 2 && name[0] == 'g') {
    int k = std::stoi(name.substr(1));
    if (k < 1 || k > 10) throw std::invalid_argument("unknown preset " + name);
    int n = 60 + 20 * k;
    sized(n, 2, n, 10LL * n * n);
  } else {
    throw std::invalid_argument("unknown preset " + name);
  }
  return par;
}

}  // namespace restock
