#pragma once

#include <chrono>
#include <cmath>
#include <limits>
#include <memory>
#include <queue>
#include <vector>

#include "restock/milp_model.hpp"
#include "restock/simplex.hpp"

namespace restock {

enum class MilpStatus { Optimal, Feasible, Infeasible, Unbounded, NoSolution };

struct MilpOptions {
  double time_limit = kInf;        // seconds
  long long node_limit = 1000000;
  double gap_tol = 1e-6;
  double int_tol = 1e-6;
  bool stop_at_first_incumbent = false;  // heuristic mode: stop once any feasible point exists
  LpOptions lp;
};

struct MilpResult {
  MilpStatus status = MilpStatus::NoSolution;
  double objective = kInf;     // incumbent value, +inf when none
  double bound = -kInf;        // proven lower bound
  double gap = kInf;
  std::vector<double> x;       // incumbent, empty when none
  long long nodes = 0;
  long long lp_iterations = 0;
  double solve_seconds = 0;
  double first_incumbent_seconds = -1;
  long long first_incumbent_node = -1;
  bool hit_time_limit = false;
  bool hit_node_limit = false;

  bool has_incumbent() const { return !x.empty(); }
};

// Best-bound branch and bound over the LP relaxation. Branching picks the
// fractional integer column with the largest objective-weighted fractional
// distance (lowest index on ties); after a node branches, the search dives
// depth-first on the child nearest the LP value until the first incumbent is
// found, then switches to best-bound order.
class BranchAndBound {
 public:
  BranchAndBound(const MilpModel& model, const MilpOptions& opt)
      : model_(model), opt_(opt), engine_(model) {
    for (int j = 0; j < model.num_vars(); ++j)
      if (model.vars[j].integer) int_cols_.push_back(j);
    probe_start_ = std::max<long long>(256, static_cast<long long>(int_cols_.size()) / 12);
  }

  MilpResult solve() {
    auto t0 = std::chrono::steady_clock::now();
    std::optional<std::chrono::steady_clock::time_point> deadline;
    if (std::isfinite(opt_.time_limit))
      deadline = t0 + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                          std::chrono::duration<double>(opt_.time_limit));
    opt_.lp.deadline = deadline;
    MilpResult res;
    auto elapsed = [&t0] {
      return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    };

    struct Node {
      std::vector<std::pair<int, std::pair<double, double>>> changes;  // col -> (lb, ub)
      double bound;
      long long id;
    };
    struct NodeOrder {
      bool operator()(const std::shared_ptr<Node>& a, const std::shared_ptr<Node>& b) const {
        if (a->bound != b->bound) return a->bound > b->bound;
        return a->id > b->id;
      }
    };
    std::priority_queue<std::shared_ptr<Node>, std::vector<std::shared_ptr<Node>>, NodeOrder> pool;
    long long next_id = 0;
    auto root = std::make_shared<Node>();
    root->bound = -kInf;
    root->id = next_id++;
    pool.push(root);

    double incumbent = kInf;
    std::vector<double> inc_x;
    Basis last_basis;
    bool have_basis = false;
    std::shared_ptr<Node> dive;  // depth-first continuation, used pre-incumbent
    std::vector<double> root_x;  // root relaxation point, kept for probes
    Basis root_basis;
    bool root_probe_tried[2] = {false, false};
    bool root_infeasible = false, root_unbounded = false;
    bool stopped = false;

    auto better = [&](double v) { return v < incumbent - 1e-9 * std::max(1.0, std::fabs(v)); };
    auto record = [&](double obj, std::vector<double>& xx) {
      if (!better(obj)) return;
      incumbent = obj;
      inc_x = std::move(xx);
      if (res.first_incumbent_node < 0) {
        res.first_incumbent_node = res.nodes;
        res.first_incumbent_seconds = elapsed();
      }
    };

    while (true) {
      if (opt_.stop_at_first_incumbent && !inc_x.empty()) {
        stopped = true;
        break;
      }
      std::shared_ptr<Node> node;
      if (dive) {
        node = dive;
        dive = nullptr;
      } else if (!pool.empty()) {
        node = pool.top();
        pool.pop();
      } else {
        break;
      }
      if (node->bound >= incumbent - opt_.gap_tol * std::max(1.0, std::fabs(incumbent))) continue;
      if (deadline && std::chrono::steady_clock::now() > *deadline) {
        res.hit_time_limit = true;
        // the popped node still counts toward the remaining bound
        pool.push(node);
        stopped = true;
        break;
      }
      if (res.nodes >= opt_.node_limit) {
        res.hit_node_limit = true;
        pool.push(node);
        stopped = true;
        break;
      }
      res.nodes++;

      apply_bounds(node->changes);
      LpResult lp = engine_.solve(opt_.lp, have_basis ? &last_basis : nullptr);
      res.lp_iterations += lp.iterations;
      restore_bounds();
      if (lp.status == LpStatus::IterLimit) {
        if (deadline && std::chrono::steady_clock::now() > *deadline) {
          res.hit_time_limit = true;
          pool.push(node);
          stopped = true;
          break;
        }
        // LP gave up below the deadline; treat the node as unresolved
        pool.push(node);
        stopped = true;
        break;
      }
      if (lp.status == LpStatus::Unbounded) {
        if (res.nodes == 1) root_unbounded = true;
        // an unbounded relaxation cannot prune; for these models it only
        // occurs at the root
        stopped = stopped || root_unbounded;
        if (root_unbounded) break;
        continue;
      }
      if (lp.status == LpStatus::Infeasible) {
        if (res.nodes == 1) root_infeasible = true;
        continue;
      }
      last_basis = lp.basis;
      have_basis = true;
      if (res.nodes == 1) {
        root_x = lp.x;
        root_basis = lp.basis;
      }
      node->bound = lp.objective;
      if (lp.objective >= incumbent - opt_.gap_tol * std::max(1.0, std::fabs(incumbent))) continue;

      int frac_col = -1;
      double frac_score = 0;
      for (int j : int_cols_) {
        double f = lp.x[j] - std::floor(lp.x[j]);
        double d = std::min(f, 1.0 - f);
        if (d <= opt_.int_tol) continue;
        // weight fractionality by objective impact so cost-driving columns
        // are decided before cheap tie-break columns
        double score = d * (1.0 + std::fabs(model_.vars[j].obj));
        if (score > frac_score + 1e-12) {
          frac_score = score;
          frac_col = j;
        }
      }

      if (frac_col < 0) {
        double obj;
        std::vector<double> fixed;
        RoundCheck rc = integral_point(lp.x, &last_basis, obj, fixed, RoundRule::Nearest, opt_.lp);
        if (rc == RoundCheck::GaveUp) {
          pool.push(node);
          stopped = true;
          res.hit_time_limit = res.hit_time_limit || deadline.has_value();
          break;
        }
        if (rc == RoundCheck::Ok) {
          record(obj, fixed);
          continue;
        }
        // rounding the near-integral point failed; split on the column
        // farthest from its rounded value
        double worst = 1e-12;
        for (int j : int_cols_) {
          double d = std::fabs(lp.x[j] - std::round(lp.x[j]));
          if (d > worst) {
            worst = d;
            frac_col = j;
          }
        }
        if (frac_col < 0) continue;  // pure numerical noise, drop the node
      }

      // rounding probes: fix every integer column to a rounded value and
      // re-solve the continuous rest. Fixing all integer columns at once is
      // crude, so diving gets a node budget proportional to the branching
      // depth it actually needs before the first probe fires; afterwards a
      // sparse improvement probe keeps running on node points
      if (frac_col >= 0) {
        LpOptions capped = opt_.lp;
        capped.iter_limit = 4000 + model_.num_rows();
        if (inc_x.empty() && res.nodes >= probe_start_ && (res.nodes & 63) == 0 &&
            !root_x.empty()) {
          // the root point is the stable probe target: deterministic, so each
          // rule is worth at most one attempt
          const RoundRule rules[2] = {RoundRule::Ceil, RoundRule::Nearest};
          for (int k = 0; k < 2 && inc_x.empty(); ++k) {
            if (root_probe_tried[k]) continue;
            root_probe_tried[k] = true;
            double obj;
            std::vector<double> fixed;
            if (integral_point(root_x, &root_basis, obj, fixed, rules[k], capped) ==
                RoundCheck::Ok)
              record(obj, fixed);
          }
        } else if (!inc_x.empty() && (res.nodes & 255) == 0) {
          double obj;
          std::vector<double> fixed;
          if (integral_point(lp.x, &last_basis, obj, fixed, RoundRule::Nearest, capped) ==
              RoundCheck::Ok)
            record(obj, fixed);
        }
        if (lp.objective >= incumbent - opt_.gap_tol * std::max(1.0, std::fabs(incumbent)))
          continue;  // a probe incumbent closed this node
      }

      double v = lp.x[frac_col];
      auto down = std::make_shared<Node>();
      down->changes = node->changes;
      down->changes.emplace_back(frac_col,
                                 std::make_pair(model_.vars[frac_col].lb, std::floor(v)));
      down->bound = lp.objective;
      down->id = next_id++;
      auto up = std::make_shared<Node>();
      up->changes = node->changes;
      up->changes.emplace_back(frac_col, std::make_pair(std::ceil(v), model_.vars[frac_col].ub));
      up->bound = lp.objective;
      up->id = next_id++;

      bool down_first = (v - std::floor(v)) <= 0.5;
      if (inc_x.empty()) {
        dive = down_first ? down : up;
        pool.push(down_first ? up : down);
      } else {
        pool.push(down);
        pool.push(up);
      }
    }

    res.solve_seconds = elapsed();
    res.objective = incumbent;
    res.x = inc_x;
    // remaining open nodes cap the provable bound
    double open_bound = kInf;
    if (dive) open_bound = std::min(open_bound, dive->bound);
    if (!pool.empty()) open_bound = std::min(open_bound, pool.top()->bound);
    if (stopped) {
      res.bound = std::min(open_bound == kInf ? incumbent : open_bound, incumbent);
      if (root_unbounded) {
        res.status = MilpStatus::Unbounded;
        res.bound = -kInf;
      } else if (!inc_x.empty()) {
        res.status = MilpStatus::Feasible;
      } else {
        res.status = MilpStatus::NoSolution;
        res.bound = open_bound == kInf ? -kInf : open_bound;
      }
    } else if (inc_x.empty()) {
      res.status = root_unbounded ? MilpStatus::Unbounded : MilpStatus::Infeasible;
      res.bound = kInf;
      res.gap = kInf;
      return res;
    } else {
      res.status = MilpStatus::Optimal;
      res.bound = std::min(open_bound, incumbent);
    }
    if (!inc_x.empty()) {
      res.gap = (res.objective - res.bound) / std::max(1.0, std::fabs(res.objective));
      if (res.gap <= opt_.gap_tol && res.status == MilpStatus::Feasible)
        res.status = MilpStatus::Optimal;
    }
    return res;
  }

 private:
  const MilpModel& model_;
  MilpOptions opt_;
  LpEngine engine_;
  std::vector<int> int_cols_;
  long long probe_start_ = 256;
  std::vector<std::pair<int, std::pair<double, double>>> saved_;

  void apply_bounds(const std::vector<std::pair<int, std::pair<double, double>>>& changes) {
    saved_.clear();
    for (const auto& [j, b] : changes) {
      saved_.emplace_back(j, std::make_pair(engine_.var_lb(j), engine_.var_ub(j)));
      double lo = std::max(engine_.var_lb(j), b.first);
      double hi = std::min(engine_.var_ub(j), b.second);
      engine_.set_var_bounds(j, lo, hi);
    }
  }
  void restore_bounds() {
    for (auto it = saved_.rbegin(); it != saved_.rend(); ++it)
      engine_.set_var_bounds(it->first, it->second.first, it->second.second);
    saved_.clear();
  }

  enum class RoundCheck { Ok, Off, GaveUp };
  enum class RoundRule { Nearest, Ceil, Floor };

  // Round the integer columns of an LP point and test the result against the
  // rows directly. One matrix pass, no LP re-solve; the candidate is only
  // accepted when every row holds at the LP feasibility tolerance.
  bool round_direct(const std::vector<double>& x, RoundRule rule, double& obj,
                    std::vector<double>& out) const {
    std::vector<double> cand = x;
    for (int j : int_cols_) {
      double r = rule == RoundRule::Nearest ? std::round(cand[j])
                 : rule == RoundRule::Ceil  ? std::ceil(cand[j] - opt_.int_tol)
                                            : std::floor(cand[j] + opt_.int_tol);
      r = std::min(std::max(r, model_.vars[j].lb), model_.vars[j].ub);
      if (std::fabs(r - std::round(r)) > 1e-9) return false;  // fractional bound hit
      cand[j] = r;
    }
    double tol = opt_.lp.feas_tol;
    for (const MilpRow& row : model_.rows) {
      double a = model_.activity(row, cand);
      double slack = tol * std::max(1.0, std::fabs(row.rhs));
      if (row.sense == RowSense::LE && a > row.rhs + slack) return false;
      if (row.sense == RowSense::GE && a < row.rhs - slack) return false;
      if (row.sense == RowSense::EQ && std::fabs(a - row.rhs) > slack) return false;
    }
    obj = model_.objective_value(cand);
    out = std::move(cand);
    return true;
  }

  // Round the LP point per the rule, fix the integer columns and re-solve
  // the continuous rest so the incumbent is exactly integral and feasible.
  RoundCheck integral_point(const std::vector<double>& x, const Basis* warm, double& obj,
                            std::vector<double>& out, RoundRule rule, const LpOptions& lpopt) {
    std::vector<std::pair<int, std::pair<double, double>>> fix;
    fix.reserve(int_cols_.size());
    for (int j : int_cols_) {
      double r = rule == RoundRule::Nearest ? std::round(x[j])
                 : rule == RoundRule::Ceil  ? std::ceil(x[j] - opt_.int_tol)
                                            : std::floor(x[j] + opt_.int_tol);
      r = std::min(std::max(r, model_.vars[j].lb), model_.vars[j].ub);
      fix.emplace_back(j, std::make_pair(r, r));
    }
    apply_bounds(fix);
    LpResult lp = engine_.solve(lpopt, warm);
    restore_bounds();
    if (lp.status == LpStatus::IterLimit) return RoundCheck::GaveUp;
    if (lp.status != LpStatus::Optimal) return RoundCheck::Off;
    out = lp.x;
    for (int j : int_cols_) out[j] = std::round(out[j]);
    obj = 0;
    for (int j = 0; j < model_.num_vars(); ++j) obj += model_.vars[j].obj * out[j];
    return RoundCheck::Ok;
  }
};

inline MilpResult solve_milp(const MilpModel& model, const MilpOptions& opt = {}) {
  return BranchAndBound(model, opt).solve();
}

}  // namespace restock
