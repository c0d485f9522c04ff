#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "restock/instance.hpp"

namespace restock {

// A (possibly fractional) transfer plan. x is movement-major over SKUs,
// y movement-major over package types.
struct Solution {
  std::vector<double> x;
  std::vector<double> y;
  bool integral = false;

  double get_x(const Instance& inst, int a, int s) const {
    return x[static_cast<std::size_t>(a) * inst.num_skus + s];
  }
  double get_y(const Instance& inst, int a, int p) const {
    return y[static_cast<std::size_t>(a) * inst.num_package_types + p];
  }
  static Solution zeros(const Instance& inst) {
    Solution sol;
    sol.x.assign(static_cast<std::size_t>(inst.num_movements()) * inst.num_skus, 0.0);
    sol.y.assign(static_cast<std::size_t>(inst.num_movements()) * inst.num_package_types, 0.0);
    sol.integral = true;
    return sol;
  }
};

struct ObjectiveTerms {
  double transport = 0;
  double shortfall = 0;
  double tiebreak = 0;
  double total = 0;
};

// Final stock implied by a plan: initial stock plus inflow minus outflow.
inline std::vector<double> final_stock(const Instance& inst, const std::vector<double>& x) {
  std::vector<double> fs(static_cast<std::size_t>(inst.num_facilities) * inst.num_skus);
  for (int i = 0; i < inst.num_facilities; ++i)
    for (int s = 0; s < inst.num_skus; ++s)
      fs[static_cast<std::size_t>(i) * inst.num_skus + s] = static_cast<double>(inst.stock(i, s));
  for (int a = 0; a < inst.num_movements(); ++a) {
    auto [i, j] = inst.movements[a];
    for (int s = 0; s < inst.num_skus; ++s) {
      double v = x[static_cast<std::size_t>(a) * inst.num_skus + s];
      fs[static_cast<std::size_t>(i) * inst.num_skus + s] -= v;
      fs[static_cast<std::size_t>(j) * inst.num_skus + s] += v;
    }
  }
  return fs;
}

inline ObjectiveTerms evaluate_objective(const Instance& inst, const SolverConfig& cfg,
                                         const Solution& sol) {
  ObjectiveTerms t;
  for (int a = 0; a < inst.num_movements(); ++a)
    for (int p = 0; p < inst.num_package_types; ++p)
      t.transport += inst.arc_cost(a, p) * sol.get_y(inst, a, p);
  std::vector<double> fs = final_stock(inst, sol.x);
  for (int o = 0; o < inst.num_outlets(); ++o) {
    int i = inst.outlet_ids[o];
    for (int s = 0; s < inst.num_skus; ++s) {
      double want = static_cast<double>(inst.fd(i, s) + inst.vd(i, s));
      double miss = want - fs[static_cast<std::size_t>(i) * inst.num_skus + s];
      if (miss > 0) t.shortfall += inst.pri(i, s) * miss;
    }
  }
  t.shortfall *= cfg.alpha;
  for (double v : sol.x) t.tiebreak += v;
  t.tiebreak *= cfg.epsilon;
  t.total = t.transport + t.shortfall + t.tiebreak;
  return t;
}

struct Violation {
  std::string kind;
  int i = -1, j = -1, s = -1;
  double amount = 0;
};

// Constraint check against the transfer formulation. Passing a delta checks
// the relaxed capacity (delta * Cap) instead of the full one and skips
// integrality of x. Tolerance is absolute, scaled by the row magnitude.
inline std::vector<Violation> check_feasibility(const Instance& inst, const SolverConfig& cfg,
                                                const Solution& sol,
                                                std::optional<double> delta = std::nullopt,
                                                double tol = 1e-6) {
  std::vector<Violation> out;
  auto scale = [](double a, double b) { return std::max({1.0, std::fabs(a), std::fabs(b)}); };
  for (std::size_t k = 0; k < sol.x.size(); ++k)
    if (sol.x[k] < -tol) out.push_back({"negative_x", -1, -1, static_cast<int>(k), -sol.x[k]});
  for (std::size_t k = 0; k < sol.y.size(); ++k)
    if (sol.y[k] < -tol) out.push_back({"negative_y", -1, -1, static_cast<int>(k), -sol.y[k]});
  if (!delta) {
    for (std::size_t k = 0; k < sol.x.size(); ++k) {
      double r = std::fabs(sol.x[k] - std::round(sol.x[k]));
      if (r > tol) out.push_back({"fractional_x", -1, -1, static_cast<int>(k), r});
    }
  }
  for (std::size_t k = 0; k < sol.y.size(); ++k) {
    double r = std::fabs(sol.y[k] - std::round(sol.y[k]));
    if (r > tol) out.push_back({"fractional_y", -1, -1, static_cast<int>(k), r});
  }

  std::vector<double> fs = final_stock(inst, sol.x);
  for (int o = 0; o < inst.num_outlets(); ++o) {
    int i = inst.outlet_ids[o];
    for (int s = 0; s < inst.num_skus; ++s) {
      double have = fs[static_cast<std::size_t>(i) * inst.num_skus + s];
      double need = static_cast<double>(inst.fd(i, s));
      if (have < need - tol * scale(have, need))
        out.push_back({"fixed_demand", i, -1, s, need - have});
    }
  }
  for (int i = 0; i < inst.num_facilities; ++i)
    for (int s = 0; s < inst.num_skus; ++s) {
      double have = fs[static_cast<std::size_t>(i) * inst.num_skus + s];
      if (have < -tol * scale(have, 0))
        out.push_back({"negative_final_stock", i, -1, s, -have});
    }
  // outlet send limits
  for (int o = 0; o < inst.num_outlets(); ++o) {
    int i = inst.outlet_ids[o];
    for (int s = 0; s < inst.num_skus; ++s) {
      double sent = 0;
      for (int a = 0; a < inst.num_movements(); ++a)
        if (inst.movements[a].first == i) sent += sol.get_x(inst, a, s);
      double lim = cfg.send_rule == SendRule::ExcessOnly
                       ? static_cast<double>(std::max(0LL, inst.stock(i, s) - inst.fd(i, s)))
                       : static_cast<double>(inst.stock(i, s));
      if (sent > lim + tol * scale(sent, lim))
        out.push_back({"send_limit", i, -1, s, sent - lim});
    }
  }
  double cap_frac = delta.value_or(1.0);
  for (int a = 0; a < inst.num_movements(); ++a) {
    double load = 0, cap = 0;
    for (int s = 0; s < inst.num_skus; ++s) load += inst.weight[s] * sol.get_x(inst, a, s);
    for (int p = 0; p < inst.num_package_types; ++p)
      cap += cap_frac * inst.capacity[p] * sol.get_y(inst, a, p);
    if (load > cap + tol * scale(load, cap)) {
      auto [i, j] = inst.movements[a];
      out.push_back({"capacity", i, j, -1, load - cap});
    }
  }
  return out;
}

}  // namespace restock
