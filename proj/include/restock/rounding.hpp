#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "restock/instance.hpp"
#include "restock/min_cost_flow.hpp"
#include "restock/rng.hpp"
#include "restock/solution.hpp"

namespace restock {

struct RoundingRunConfig {
  int max_runs = 50;
  int stall_limit = 5;
  double cost_match_tolerance = 1e-6;  // relative
  double perturb_lo = 0.8;
  double perturb_hi = 1.2;
  std::uint64_t rng_seed = 0;
};

struct RoundingOutcome {
  Solution solution;
  ObjectiveTerms terms;
  int runs_used = 0;
  int best_run = -1;  // zero-based
  std::vector<int> packages_added;  // per run
};

// Per-arc rounding prices: the negated capacity slack of the packages already
// committed on (i,j), measured in average-package-cost units. Arcs with spare
// room price negative (cheap to route into), tight arcs price toward zero.
inline std::vector<double> rounding_costs(const Instance& inst, const std::vector<double>& x_partial,
                                          const std::vector<double>& y) {
  const int M = inst.num_movements(), S = inst.num_skus, P = inst.num_package_types;
  std::vector<double> c_hat(M);
  for (int a = 0; a < M; ++a) {
    double cap = 0;
    for (int p = 0; p < P; ++p) cap += inst.capacity[p] * y[a * P + p];
    double used = 0;
    for (int s = 0; s < S; ++s) used += inst.weight[s] * x_partial[a * S + s];
    double avg = 0;
    for (int p = 0; p < P; ++p) avg += inst.arc_cost(a, p);
    avg /= P;
    c_hat[a] = -(cap - used) / std::max(avg, 1e-9);
  }
  return c_hat;
}

// Iterated rounding of a relaxed solution into an integral one. Each run
// solves one min-cost-flow rounding problem per SKU (weight order first,
// shuffled afterwards), re-pricing arcs after every SKU and buying the
// cheapest package whenever an arc overflows its committed capacity. Stops
// early on a package-free run whose cost matches the relaxed cost, or once
// the best cost has repeated for stall_limit consecutive runs.
inline RoundingOutcome round_all(const Instance& inst, const SolverConfig& cfg,
                                 const Solution& relaxed, const RoundingRunConfig& rcfg = {}) {
  const int M = inst.num_movements(), S = inst.num_skus, P = inst.num_package_types;
  const double relaxed_total = evaluate_objective(inst, cfg, relaxed).total;

  std::vector<double> avg_cost(M);
  for (int a = 0; a < M; ++a) {
    double avg = 0;
    for (int p = 0; p < P; ++p) avg += inst.arc_cost(a, p);
    avg_cost[a] = std::max(avg / P, 1e-9);
  }

  RoundingOutcome out;
  double best_total = kInf;
  int stall = 0;
  Rng rng(rcfg.rng_seed);
  std::vector<int> order(S);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> factor(M, 1.0);

  for (int run = 0; run < rcfg.max_runs; ++run) {
    if (run == 0) {
      std::stable_sort(order.begin(), order.end(),
                       [&](int a, int b) { return inst.weight[a] > inst.weight[b]; });
    } else {
      std::iota(order.begin(), order.end(), 0);
      rng.shuffle(order);
      for (int a = 0; a < M; ++a) factor[a] = rng.uniform(rcfg.perturb_lo, rcfg.perturb_hi);
    }

    Solution sol;
    sol.x.assign(static_cast<std::size_t>(M) * S, 0.0);
    sol.y.resize(static_cast<std::size_t>(M) * P);
    for (std::size_t k = 0; k < sol.y.size(); ++k)
      sol.y[k] = static_cast<double>(std::llround(relaxed.y[k]));
    sol.integral = true;

    std::vector<double> cap(M, 0), used(M, 0);
    for (int a = 0; a < M; ++a)
      for (int p = 0; p < P; ++p) cap[a] += inst.capacity[p] * sol.y[a * P + p];

    int added = 0;
    std::vector<double> x_sku(M), c_hat(M);
    for (int s : order) {
      for (int a = 0; a < M; ++a) {
        c_hat[a] = factor[a] * (-(cap[a] - used[a]) / avg_cost[a]);
        x_sku[a] = relaxed.x[static_cast<std::size_t>(a) * S + s];
      }
      RoundingNetwork rn = build_rounding_network(inst, s, x_sku, c_hat);
      FlowResult fr = solve_min_cost_flow(rn.net);
      if (fr.status != FlowStatus::Optimal)
        throw std::logic_error("rounding network came back infeasible");
      for (int a = 0; a < M; ++a) {
        long long units = fr.flow[rn.transfer_arc[a]];
        sol.x[static_cast<std::size_t>(a) * S + s] = static_cast<double>(units);
        used[a] += inst.weight[s] * static_cast<double>(units);
      }
      for (int a = 0; a < M; ++a) {
        while (used[a] > cap[a] + 1e-9) {
          int cheapest = 0;
          for (int p = 1; p < P; ++p)
            if (inst.arc_cost(a, p) < inst.arc_cost(a, cheapest)) cheapest = p;
          sol.y[a * P + cheapest] += 1;
          cap[a] += inst.capacity[cheapest];
          ++added;
        }
      }
    }

    ObjectiveTerms terms = evaluate_objective(inst, cfg, sol);
    out.packages_added.push_back(added);
    out.runs_used = run + 1;
    if (out.best_run < 0 ||
        terms.total < best_total - 1e-9 * std::max(1.0, std::abs(best_total))) {
      best_total = terms.total;
      out.solution = sol;
      out.terms = terms;
      out.best_run = run;
      stall = 1;
    } else if (std::abs(terms.total - best_total) <= 1e-9 * std::max(1.0, std::abs(best_total))) {
      ++stall;
    } else {
      stall = 0;
    }
    bool cost_matches =
        std::abs(terms.total - relaxed_total) <=
        rcfg.cost_match_tolerance * std::max(1.0, std::abs(relaxed_total));
    if (added == 0 && cost_matches) break;
    if (stall >= rcfg.stall_limit) break;
  }
  return out;
}

}  // namespace restock
