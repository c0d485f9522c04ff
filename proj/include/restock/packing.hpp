#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "restock/instance.hpp"
#include "restock/solution.hpp"

namespace restock {

struct PackingTask {
  int from = 0, to = 0;
  std::vector<long long> units;  // per SKU
  std::vector<double> weight;    // per SKU
  std::vector<double> cap;       // per package type
  std::vector<double> cost;      // per package type
  std::vector<long long> avail;  // per package type, never binding by construction
};

struct PackedPackage {
  int type = 0;
  std::vector<std::pair<int, long long>> contents;  // (sku, units), sku ascending
};

struct PackingResult {
  std::vector<PackedPackage> packages;
  std::vector<std::pair<int, long long>> loose;  // weightless units with no open package
  double cost = 0;
  bool is_exact = false;
};

namespace packing_detail {

struct Item {
  double weight;
  int sku;
};

inline bool heavier(const Item& a, const Item& b) {
  if (a.weight != b.weight) return a.weight > b.weight;
  return a.sku < b.sku;
}

struct OpenPackage {
  int type;
  double residual;
  std::vector<int> items;  // indices into the item list
};

// First fit decreasing, opening the cheapest-per-capacity type that fits,
// then a pass that swaps each package into a cheaper type it still fits in.
inline void ffd(const PackingTask& task, const std::vector<Item>& items,
                std::vector<OpenPackage>& open, double& total_cost) {
  const int P = static_cast<int>(task.cap.size());
  std::vector<int> pref(P);
  std::iota(pref.begin(), pref.end(), 0);
  std::stable_sort(pref.begin(), pref.end(), [&](int a, int b) {
    double ra = task.cost[a] / task.cap[a], rb = task.cost[b] / task.cap[b];
    if (ra != rb) return ra < rb;
    return task.cost[a] < task.cost[b];
  });

  open.clear();
  total_cost = 0;
  for (int k = 0; k < static_cast<int>(items.size()); ++k) {
    bool placed = false;
    for (auto& pkg : open) {
      if (pkg.residual >= items[k].weight - 1e-12) {
        pkg.residual -= items[k].weight;
        pkg.items.push_back(k);
        placed = true;
        break;
      }
    }
    if (placed) continue;
    int best = -1;
    for (int p : pref)
      if (task.cap[p] >= items[k].weight - 1e-12) {
        best = p;
        break;
      }
    if (best < 0) throw std::runtime_error("unpackable item");
    open.push_back({best, task.cap[best] - items[k].weight, {k}});
    total_cost += task.cost[best];
  }

  std::vector<int> by_cost(P);
  std::iota(by_cost.begin(), by_cost.end(), 0);
  std::stable_sort(by_cost.begin(), by_cost.end(),
                   [&](int a, int b) { return task.cost[a] < task.cost[b]; });
  for (auto& pkg : open) {
    double content = task.cap[pkg.type] - pkg.residual;
    for (int p : by_cost) {
      if (task.cost[p] >= task.cost[pkg.type]) break;
      if (task.cap[p] >= content - 1e-12) {
        total_cost += task.cost[p] - task.cost[pkg.type];
        pkg.type = p;
        pkg.residual = task.cap[p] - content;
        break;
      }
    }
  }
}

struct ExactState {
  const PackingTask* task;
  const std::vector<Item>* items;
  double unit_rate;  // cheapest cost per unit of capacity
  std::vector<double> suffix_weight;
  std::vector<OpenPackage> open;
  double cost = 0;
  std::vector<OpenPackage> best_open;
  double best_cost = std::numeric_limits<double>::infinity();

  void dive(int k, int min_pkg) {
    if (cost >= best_cost - 1e-12) return;
    if (k == static_cast<int>(items->size())) {
      best_cost = cost;
      best_open = open;
      return;
    }
    double open_room = 0;
    for (const auto& pkg : open) open_room += pkg.residual;
    double need = suffix_weight[k] - open_room;
    if (cost + std::max(0.0, need) * unit_rate >= best_cost - 1e-12) return;

    const Item& it = (*items)[k];
    int start = (k > 0 && (*items)[k - 1].weight == it.weight) ? min_pkg : 0;
    for (int q = start; q < static_cast<int>(open.size()); ++q) {
      if (open[q].residual < it.weight - 1e-12) continue;
      bool dup = false;  // identical open packages are interchangeable
      for (int r = start; r < q && !dup; ++r)
        dup = open[r].type == open[q].type && open[r].residual == open[q].residual;
      if (dup) continue;
      open[q].residual -= it.weight;
      open[q].items.push_back(k);
      dive(k + 1, q);
      open[q].items.pop_back();
      open[q].residual += it.weight;
    }
    for (int p = 0; p < static_cast<int>(task->cap.size()); ++p) {
      if (task->cap[p] < it.weight - 1e-12) continue;
      open.push_back({p, task->cap[p] - it.weight, {k}});
      cost += task->cost[p];
      dive(k + 1, static_cast<int>(open.size()) - 1);
      cost -= task->cost[p];
      open.pop_back();
    }
  }
};

}  // namespace packing_detail

// Pack one movement's transfer into concrete packages. Small tasks get an
// exact branch-and-bound over package openings with a capacity-rate lower
// bound; larger ones a first-fit-decreasing heuristic with a cheaper-type
// repack pass. Weightless units ride along without opening anything.
inline PackingResult solve_packing(const PackingTask& task, int exact_threshold = 30) {
  using namespace packing_detail;
  const int S = static_cast<int>(task.units.size());
  const int P = static_cast<int>(task.cap.size());
  if (P == 0) throw std::runtime_error("no package types");

  std::vector<Item> items;
  std::vector<std::pair<int, long long>> weightless;
  for (int s = 0; s < S; ++s) {
    if (task.units[s] <= 0) continue;
    if (task.weight[s] <= 0) {
      weightless.emplace_back(s, task.units[s]);
      continue;
    }
    for (long long u = 0; u < task.units[s]; ++u) items.push_back({task.weight[s], s});
  }
  std::stable_sort(items.begin(), items.end(), heavier);

  std::vector<OpenPackage> open;
  double cost = 0;
  ffd(task, items, open, cost);
  bool exact = items.empty();

  if (!items.empty() && static_cast<long long>(items.size()) <= exact_threshold) {
    ExactState st;
    st.task = &task;
    st.items = &items;
    st.unit_rate = std::numeric_limits<double>::infinity();
    for (int p = 0; p < P; ++p) st.unit_rate = std::min(st.unit_rate, task.cost[p] / task.cap[p]);
    st.suffix_weight.assign(items.size() + 1, 0);
    for (int k = static_cast<int>(items.size()) - 1; k >= 0; --k)
      st.suffix_weight[k] = st.suffix_weight[k + 1] + items[k].weight;
    st.best_open = open;
    st.best_cost = cost;
    st.dive(0, 0);
    open = st.best_open;
    cost = st.best_cost;
    exact = true;
  }

  PackingResult res;
  res.cost = cost;
  res.is_exact = exact;
  for (const auto& pkg : open) {
    std::map<int, long long> per_sku;
    for (int k : pkg.items) per_sku[items[k].sku] += 1;
    PackedPackage out;
    out.type = pkg.type;
    out.contents.assign(per_sku.begin(), per_sku.end());
    res.packages.push_back(std::move(out));
  }
  if (!weightless.empty()) {
    if (res.packages.empty()) {
      res.loose = std::move(weightless);
    } else {
      auto& contents = res.packages.front().contents;
      for (auto [s, u] : weightless) {
        auto it = std::lower_bound(contents.begin(), contents.end(), std::make_pair(s, 0LL));
        if (it != contents.end() && it->first == s) it->second += u;
        else contents.insert(it, {s, u});
      }
    }
  }
  return res;
}

struct PackedMovement {
  int from = 0, to = 0;
  PackingResult packing;
};

struct PackedSolution {
  std::vector<PackedMovement> movements;  // only movements with shipped units
  Solution solution;                      // X unchanged, Y recomputed from packages
  double transport_cost = 0;
  bool all_exact = true;
};

inline PackingTask make_packing_task(const Instance& inst, int arc,
                                     const std::vector<long long>& units) {
  PackingTask task;
  task.from = inst.movements[arc].first;
  task.to = inst.movements[arc].second;
  task.units = units;
  task.weight = inst.weight;
  task.cap = inst.capacity;
  task.cost.resize(inst.num_package_types);
  for (int p = 0; p < inst.num_package_types; ++p) task.cost[p] = inst.arc_cost(arc, p);
  double total_weight = 0;
  for (int s = 0; s < inst.num_skus; ++s)
    total_weight += inst.weight[s] * static_cast<double>(units[s]);
  double min_cap = *std::min_element(task.cap.begin(), task.cap.end());
  long long base = static_cast<long long>(std::ceil(total_weight / std::max(min_cap, 1e-12)));
  task.avail.assign(inst.num_package_types, base + inst.num_package_types);
  return task;
}

inline PackedSolution pack_all(const Instance& inst, const Solution& sol,
                               int exact_threshold = 30) {
  const int M = inst.num_movements(), S = inst.num_skus, P = inst.num_package_types;
  PackedSolution out;
  out.solution.x = sol.x;
  out.solution.y.assign(static_cast<std::size_t>(M) * P, 0.0);
  out.solution.integral = true;
  for (int a = 0; a < M; ++a) {
    std::vector<long long> units(S, 0);
    bool any = false;
    for (int s = 0; s < S; ++s) {
      units[s] = std::llround(sol.x[static_cast<std::size_t>(a) * S + s]);
      any = any || units[s] > 0;
    }
    if (!any) continue;
    PackingResult pr = solve_packing(make_packing_task(inst, a, units), exact_threshold);
    for (const auto& pkg : pr.packages) out.solution.y[a * P + pkg.type] += 1;
    out.transport_cost += pr.cost;
    out.all_exact = out.all_exact && pr.is_exact;
    out.movements.push_back({inst.movements[a].first, inst.movements[a].second, std::move(pr)});
  }
  return out;
}

}  // namespace restock
