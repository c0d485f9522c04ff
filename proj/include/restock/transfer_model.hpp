#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "restock/instance.hpp"
#include "restock/milp_model.hpp"
#include "restock/solution.hpp"

namespace restock {

struct ShortfallVar {
  int outlet;  // facility id
  int sku;
  int col;
};

// Column layout of the transfer MILP; x/y/fs columns are block-contiguous.
struct TransferModel {
  MilpModel model;
  bool relaxed = false;
  double delta = 1.0;
  int x_begin = 0, y_begin = 0, fs_begin = 0, u_begin = 0;
  std::vector<ShortfallVar> shortfalls;

  int x_col(const Instance& inst, int a, int s) const { return x_begin + a * inst.num_skus + s; }
  int y_col(const Instance& inst, int a, int p) const {
    return y_begin + a * inst.num_package_types + p;
  }
  int fs_col(const Instance& inst, int i, int s) const { return fs_begin + i * inst.num_skus + s; }

  Solution extract(const Instance& inst, const std::vector<double>& cols) const {
    Solution sol;
    sol.x.assign(cols.begin() + x_begin,
                 cols.begin() + x_begin + inst.num_movements() * inst.num_skus);
    sol.y.assign(cols.begin() + y_begin,
                 cols.begin() + y_begin + inst.num_movements() * inst.num_package_types);
    sol.integral = !relaxed;
    return sol;
  }
};

// Build the transfer MILP. relaxed=false gives the full integral model at
// full capacity; relaxed=true keeps only the package counts integral and
// shrinks every capacity to delta * Cap.
//
// Shipments are limited per source SKU, final stock is kept nonnegative
// through variable bounds, and unmet fixed-plus-variable demand is priced
// through shortfall columns, so the built model carries one extra row and
// column group beyond the reported reporting-convention dimensions.
inline TransferModel build_transfer_model(const Instance& inst, const SolverConfig& cfg,
                                          bool relaxed) {
  if (relaxed && (cfg.delta <= 0 || cfg.delta > 1))
    throw std::invalid_argument("delta must lie in (0, 1]");
  TransferModel tm;
  tm.relaxed = relaxed;
  tm.delta = relaxed ? cfg.delta : 1.0;
  MilpModel& m = tm.model;
  m.name = inst.name.empty() ? "transfer" : inst.name;
  const int F = inst.num_facilities, S = inst.num_skus, P = inst.num_package_types;
  const int M = inst.num_movements();

  std::vector<long long> total(S);
  double total_weight = 0;
  for (int s = 0; s < S; ++s) {
    total[s] = inst.sku_total_stock(s);
    total_weight += inst.weight[s] * static_cast<double>(total[s]);
  }

  tm.x_begin = m.num_vars();
  for (int a = 0; a < M; ++a) {
    auto [i, j] = inst.movements[a];
    for (int s = 0; s < S; ++s)
      m.add_var("X_" + std::to_string(i) + "_" + std::to_string(j) + "_" + std::to_string(s), 0,
                static_cast<double>(total[s]), cfg.epsilon, !relaxed);
  }
  tm.y_begin = m.num_vars();
  for (int a = 0; a < M; ++a) {
    auto [i, j] = inst.movements[a];
    for (int p = 0; p < P; ++p) {
      double eff_cap = tm.delta * inst.capacity[p];
      double ub = total_weight > 0 ? std::ceil(total_weight / eff_cap) : 0.0;
      m.add_var("Y_" + std::to_string(i) + "_" + std::to_string(j) + "_" + std::to_string(p), 0,
                ub, inst.arc_cost(a, p), true);
    }
  }
  tm.fs_begin = m.num_vars();
  for (int i = 0; i < F; ++i)
    for (int s = 0; s < S; ++s)
      m.add_var("FS_" + std::to_string(i) + "_" + std::to_string(s), 0,
                static_cast<double>(total[s]), 0, false);
  tm.u_begin = m.num_vars();
  for (int o = 0; o < inst.num_outlets(); ++o) {
    int i = inst.outlet_ids[o];
    for (int s = 0; s < S; ++s) {
      double cap = static_cast<double>(inst.fd(i, s) + inst.vd(i, s));
      int col = m.add_var("U_" + std::to_string(i) + "_" + std::to_string(s), 0, cap,
                          cfg.alpha * inst.pri(i, s), false);
      tm.shortfalls.push_back({i, s, col});
    }
  }

  // stock flow definition
  for (int i = 0; i < F; ++i)
    for (int s = 0; s < S; ++s) {
      std::vector<std::pair<int, double>> terms;
      terms.emplace_back(tm.fs_col(inst, i, s), 1.0);
      for (int a = 0; a < M; ++a) {
        if (inst.movements[a].second == i) terms.emplace_back(tm.x_col(inst, a, s), -1.0);
        else if (inst.movements[a].first == i) terms.emplace_back(tm.x_col(inst, a, s), 1.0);
      }
      m.add_row("FLOW_" + std::to_string(i) + "_" + std::to_string(s), RowSense::EQ,
                static_cast<double>(inst.stock(i, s)), std::move(terms));
    }
  // fixed demand must be covered at outlets
  for (int o = 0; o < inst.num_outlets(); ++o) {
    int i = inst.outlet_ids[o];
    for (int s = 0; s < S; ++s)
      m.add_row("DEM_" + std::to_string(i) + "_" + std::to_string(s), RowSense::GE,
                static_cast<double>(inst.fd(i, s)), {{tm.fs_col(inst, i, s), 1.0}});
  }
  // outlet send limits
  for (int o = 0; o < inst.num_outlets(); ++o) {
    int i = inst.outlet_ids[o];
    for (int s = 0; s < S; ++s) {
      std::vector<std::pair<int, double>> terms;
      for (int a = 0; a < M; ++a)
        if (inst.movements[a].first == i) terms.emplace_back(tm.x_col(inst, a, s), 1.0);
      if (terms.empty()) continue;
      long long lim = cfg.send_rule == SendRule::ExcessOnly
                          ? std::max(0LL, inst.stock(i, s) - inst.fd(i, s))
                          : inst.stock(i, s);
      m.add_row("SEND_" + std::to_string(i) + "_" + std::to_string(s), RowSense::LE,
                static_cast<double>(lim), std::move(terms));
    }
  }
  // package capacity per movement
  for (int a = 0; a < M; ++a) {
    auto [i, j] = inst.movements[a];
    std::vector<std::pair<int, double>> terms;
    for (int s = 0; s < S; ++s)
      if (inst.weight[s] != 0) terms.emplace_back(tm.x_col(inst, a, s), inst.weight[s]);
    for (int p = 0; p < P; ++p)
      terms.emplace_back(tm.y_col(inst, a, p), -tm.delta * inst.capacity[p]);
    m.add_row("CAP_" + std::to_string(i) + "_" + std::to_string(j), RowSense::LE, 0,
              std::move(terms));
  }
  // shortfall linearization
  for (const auto& sv : tm.shortfalls)
    m.add_row("SHORT_" + std::to_string(sv.outlet) + "_" + std::to_string(sv.sku), RowSense::GE,
              static_cast<double>(inst.fd(sv.outlet, sv.sku) + inst.vd(sv.outlet, sv.sku)),
              {{sv.col, 1.0}, {tm.fs_col(inst, sv.outlet, sv.sku), 1.0}});
  return tm;
}

}  // namespace restock
