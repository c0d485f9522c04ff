#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace restock {

// Movement set policies for a network with warehouse set W and outlet set O:
//   CR: every pair that touches a warehouse (consolidation through W).
//   DR: every pair whose destination is an outlet (direct replenishment).
//   GR: every ordered pair of distinct facilities.
enum class MovementPolicy { CR, DR, GR };

// Send limit applied to outlets. ExcessOnly caps shipments at the stock that
// exceeds the outlet's own fixed demand; UpToStock allows shipping anything
// on hand (replacements may arrive in the same plan).
enum class SendRule { ExcessOnly, UpToStock };

struct SolverConfig {
  double alpha = 10.0;      // weight of the lost-sales (shortfall) term
  double epsilon = 1e-4;    // tie-break weight on total shipped units
  double delta = 1.0;       // capacity fraction used by the relaxed model
  SendRule send_rule = SendRule::ExcessOnly;
  double time_limit = 300.0;  // seconds, applied to the MILP search
  std::uint64_t rng_seed = 0;
};

inline const char* to_string(MovementPolicy p) {
  switch (p) {
    case MovementPolicy::CR: return "cr";
    case MovementPolicy::DR: return "dr";
    default: return "gr";
  }
}

inline const char* to_string(SendRule r) {
  return r == SendRule::ExcessOnly ? "excess" : "stock";
}

struct Instance {
  std::string name;
  int num_facilities = 0;
  int num_skus = 0;
  int num_package_types = 0;
  std::vector<int> warehouses;                  // sorted facility ids
  std::vector<std::pair<int, int>> movements;   // ordered (from, to) pairs

  std::vector<double> weight;    // per SKU
  std::vector<double> capacity;  // per package type
  std::vector<double> cost;      // movements.size() * P, arc-major

  std::vector<long long> initial_stock;    // F x S row-major
  std::vector<long long> fixed_demand;     // O x S, outlet-major
  std::vector<long long> variable_demand;  // O x S
  std::vector<double> priority;            // O x S

  // Derived lookups, filled by finalize().
  std::vector<char> warehouse_mask;  // size F
  std::vector<int> outlet_ids;       // facility ids in file order
  std::vector<int> outlet_index;     // F -> outlet position or -1
  std::vector<int> arc_index;        // F*F -> movement position or -1

  void finalize() {
    warehouse_mask.assign(num_facilities, 0);
    for (int w : warehouses) {
      if (w >= 0 && w < num_facilities) warehouse_mask[w] = 1;
    }
    outlet_ids.clear();
    outlet_index.assign(num_facilities, -1);
    for (int i = 0; i < num_facilities; ++i) {
      if (!warehouse_mask[i]) {
        outlet_index[i] = static_cast<int>(outlet_ids.size());
        outlet_ids.push_back(i);
      }
    }
    arc_index.assign(static_cast<std::size_t>(num_facilities) * num_facilities, -1);
    for (std::size_t a = 0; a < movements.size(); ++a) {
      auto [i, j] = movements[a];
      if (i >= 0 && i < num_facilities && j >= 0 && j < num_facilities)
        arc_index[static_cast<std::size_t>(i) * num_facilities + j] = static_cast<int>(a);
    }
  }

  int num_outlets() const { return static_cast<int>(outlet_ids.size()); }
  int num_movements() const { return static_cast<int>(movements.size()); }
  bool is_warehouse(int i) const { return warehouse_mask[i] != 0; }

  long long stock(int i, int s) const {
    return initial_stock[static_cast<std::size_t>(i) * num_skus + s];
  }
  // demand accessors take a facility id; warehouses carry none
  long long fd(int i, int s) const {
    int o = outlet_index[i];
    return o < 0 ? 0 : fixed_demand[static_cast<std::size_t>(o) * num_skus + s];
  }
  long long vd(int i, int s) const {
    int o = outlet_index[i];
    return o < 0 ? 0 : variable_demand[static_cast<std::size_t>(o) * num_skus + s];
  }
  double pri(int i, int s) const {
    int o = outlet_index[i];
    return o < 0 ? 0.0 : priority[static_cast<std::size_t>(o) * num_skus + s];
  }
  double arc_cost(int a, int p) const {
    return cost[static_cast<std::size_t>(a) * num_package_types + p];
  }
  int arc(int i, int j) const {
    return arc_index[static_cast<std::size_t>(i) * num_facilities + j];
  }
  long long sku_total_stock(int s) const {
    long long t = 0;
    for (int i = 0; i < num_facilities; ++i) t += stock(i, s);
    return t;
  }
};

inline std::vector<std::pair<int, int>> movements_for_policy(
    int num_facilities, const std::vector<int>& warehouses, MovementPolicy policy) {
  if (num_facilities <= 0) throw std::invalid_argument("no facilities");
  if (warehouses.empty()) throw std::invalid_argument("no warehouses");
  std::vector<char> is_w(num_facilities, 0);
  for (int w : warehouses) {
    if (w < 0 || w >= num_facilities) throw std::invalid_argument("warehouse id out of range");
    is_w[w] = 1;
  }
  std::vector<std::pair<int, int>> m;
  for (int i = 0; i < num_facilities; ++i) {
    for (int j = 0; j < num_facilities; ++j) {
      if (i == j) continue;
      bool keep = false;
      switch (policy) {
        case MovementPolicy::CR: keep = is_w[i] || is_w[j]; break;
        case MovementPolicy::DR: keep = !is_w[j]; break;
        case MovementPolicy::GR: keep = true; break;
      }
      if (keep) m.emplace_back(i, j);
    }
  }
  return m;
}

struct DimensionReport {
  long long num_vars = 0;
  long long num_constraints = 0;
  long long num_integer_vars_transfer = 0;
  long long num_integer_vars_relaxed = 0;
};

// Size of the transfer formulation in the reporting convention used
// throughout: variables cover shipments, packages and final stock; the
// constraint count carries one extra row group per SKU.
inline DimensionReport model_dimensions(const Instance& inst) {
  long long F = inst.num_facilities;
  long long O = inst.num_outlets();
  long long S = inst.num_skus;
  long long P = inst.num_package_types;
  long long M = inst.num_movements();
  DimensionReport r;
  r.num_vars = M * (S + P) + F * S;
  r.num_constraints = F * S + 2 * O * S + M + S;
  r.num_integer_vars_transfer = M * (S + P);
  r.num_integer_vars_relaxed = M * P;
  return r;
}

struct ValidationIssue {
  std::string code;
  std::string detail;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;
  bool ok() const { return issues.empty(); }
};

inline ValidationReport validate_instance(const Instance& inst) {
  ValidationReport rep;
  auto add = [&rep](const std::string& code, const std::string& detail) {
    rep.issues.push_back({code, detail});
  };
  const int F = inst.num_facilities, S = inst.num_skus, P = inst.num_package_types;
  if (F <= 0) add("empty_facilities", "instance has no facilities");
  if (S <= 0) add("empty_skus", "instance has no SKUs");
  if (P <= 0) add("empty_package_types", "instance has no package types");
  if (inst.warehouses.empty()) add("empty_warehouses", "instance has no warehouses");
  std::vector<char> seen(std::max(F, 0), 0);
  for (int w : inst.warehouses) {
    if (w < 0 || w >= F) {
      add("warehouse_out_of_range", "warehouse id " + std::to_string(w));
    } else if (seen[w]++) {
      add("duplicate_warehouse", "warehouse id " + std::to_string(w));
    }
  }
  if (!rep.ok()) return rep;  // structural ids broken, stop before indexing

  if (static_cast<int>(inst.warehouses.size()) == F)
    add("no_outlets", "every facility is a warehouse");
  if (inst.weight.size() != static_cast<std::size_t>(S)) add("bad_shape", "weight");
  if (inst.capacity.size() != static_cast<std::size_t>(P)) add("bad_shape", "capacity");
  if (inst.initial_stock.size() != static_cast<std::size_t>(F) * S) add("bad_shape", "initial_stock");
  const std::size_t OS = static_cast<std::size_t>(F - inst.warehouses.size()) * S;
  if (inst.fixed_demand.size() != OS) add("bad_shape", "fixed_demand");
  if (inst.variable_demand.size() != OS) add("bad_shape", "variable_demand");
  if (inst.priority.size() != OS) add("bad_shape", "priority");
  if (inst.cost.size() != inst.movements.size() * static_cast<std::size_t>(P))
    add("bad_shape", "cost");
  if (!rep.ok()) return rep;

  for (int s = 0; s < S; ++s)
    if (inst.weight[s] < 0) add("negative_weight", "sku " + std::to_string(s));
  for (int p = 0; p < P; ++p)
    if (inst.capacity[p] <= 0) add("nonpositive_capacity", "package type " + std::to_string(p));
  std::vector<char> arc_seen(static_cast<std::size_t>(F) * F, 0);
  for (std::size_t a = 0; a < inst.movements.size(); ++a) {
    auto [i, j] = inst.movements[a];
    if (i < 0 || i >= F || j < 0 || j >= F) {
      add("movement_out_of_range", "(" + std::to_string(i) + "," + std::to_string(j) + ")");
      continue;
    }
    if (i == j) add("self_loop", "facility " + std::to_string(i));
    if (arc_seen[static_cast<std::size_t>(i) * F + j]++)
      add("duplicate_movement", "(" + std::to_string(i) + "," + std::to_string(j) + ")");
    for (int p = 0; p < P; ++p)
      if (inst.arc_cost(static_cast<int>(a), p) < 0)
        add("negative_cost", "(" + std::to_string(i) + "," + std::to_string(j) + "," +
                                 std::to_string(p) + ")");
  }
  for (std::size_t k = 0; k < inst.initial_stock.size(); ++k)
    if (inst.initial_stock[k] < 0) { add("negative_stock", "cell " + std::to_string(k)); break; }
  for (std::size_t k = 0; k < inst.fixed_demand.size(); ++k)
    if (inst.fixed_demand[k] < 0) { add("negative_fixed_demand", "cell " + std::to_string(k)); break; }
  for (std::size_t k = 0; k < inst.variable_demand.size(); ++k)
    if (inst.variable_demand[k] < 0) { add("negative_variable_demand", "cell " + std::to_string(k)); break; }
  for (std::size_t k = 0; k < inst.priority.size(); ++k)
    if (inst.priority[k] < 0) { add("negative_priority", "cell " + std::to_string(k)); break; }

  // Per SKU the network must hold at least the committed demand, otherwise
  // no redistribution can satisfy every outlet's fixed demand.
  const int O = F - static_cast<int>(inst.warehouses.size());
  for (int s = 0; s < S; ++s) {
    long long have = inst.sku_total_stock(s);
    long long need = 0;
    for (int o = 0; o < O; ++o)
      need += inst.fixed_demand[static_cast<std::size_t>(o) * S + s];
    if (have < need)
      add("aggregate_infeasible",
          "sku " + std::to_string(s) + ": stock " + std::to_string(have) + " < fixed demand " +
              std::to_string(need));
  }
  return rep;
}

}  // namespace restock
