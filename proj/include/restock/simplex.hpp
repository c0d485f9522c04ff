#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <optional>
#include <vector>

#include <Eigen/SparseCore>
#include <Eigen/SparseLU>

#include "restock/milp_model.hpp"

namespace restock {

enum class LpStatus { Optimal, Infeasible, Unbounded, IterLimit };

enum class VarState : char { AtLower = 0, AtUpper = 1, Basic = 2 };

struct Basis {
  std::vector<int> basic;        // column per row slot, structural or logical
  std::vector<VarState> state;   // per column, logicals included
  bool empty() const { return basic.empty() && state.empty(); }
};

struct LpOptions {
  double feas_tol = 1e-7;
  double opt_tol = 1e-7;
  long long iter_limit = -1;  // -1: scale with model size
  std::optional<std::chrono::steady_clock::time_point> deadline;
};

struct LpResult {
  LpStatus status = LpStatus::IterLimit;
  double objective = 0;
  std::vector<double> x;  // structural values
  long long iterations = 0;
  Basis basis;
  int basic_structural = 0;  // summary: structural columns in the basis
};

// Bounded-variable primal simplex over the revised formulation
// A x + s = b. The basis is kept as a sparse LU factorization plus
// product-form eta updates, refreshed on a fixed cadence.
class LpEngine {
 public:
  explicit LpEngine(const MilpModel& model) : m_(model.num_rows()), n_(model.num_vars()) {
    nt_ = n_ + m_;
    lb_.resize(nt_);
    ub_.resize(nt_);
    cost_.assign(nt_, 0.0);
    rhs_.resize(m_);
    col_ptr_.assign(n_ + 1, 0);
    for (const auto& row : model.rows)
      for (auto [j, c] : row.terms) {
        (void)c;
        col_ptr_[j + 1]++;
      }
    for (int j = 0; j < n_; ++j) col_ptr_[j + 1] += col_ptr_[j];
    col_row_.resize(col_ptr_[n_]);
    col_val_.resize(col_ptr_[n_]);
    std::vector<int> fill(n_, 0);
    for (int i = 0; i < m_; ++i) {
      const auto& row = model.rows[i];
      rhs_[i] = row.rhs;
      for (auto [j, c] : row.terms) {
        int k = col_ptr_[j] + fill[j]++;
        col_row_[k] = i;
        col_val_[k] = c;
      }
    }
    for (int j = 0; j < n_; ++j) {
      lb_[j] = model.vars[j].lb;
      ub_[j] = model.vars[j].ub;
      cost_[j] = model.vars[j].obj;
    }
    for (int i = 0; i < m_; ++i) {
      switch (model.rows[i].sense) {
        case RowSense::LE: lb_[n_ + i] = 0, ub_[n_ + i] = kInf; break;
        case RowSense::GE: lb_[n_ + i] = -kInf, ub_[n_ + i] = 0; break;
        case RowSense::EQ: lb_[n_ + i] = 0, ub_[n_ + i] = 0; break;
      }
    }
  }

  void set_var_bounds(int j, double lb, double ub) {
    lb_[j] = lb;
    ub_[j] = ub;
  }
  double var_lb(int j) const { return lb_[j]; }
  double var_ub(int j) const { return ub_[j]; }
  int num_rows() const { return m_; }
  int num_vars() const { return n_; }

  LpResult solve(const LpOptions& opt = {}, const Basis* warm = nullptr) {
    opt_ = opt;
    iter_limit_ = opt.iter_limit > 0 ? opt.iter_limit
                                     : std::max<long long>(200000, 200LL * (m_ + n_));
    init_point(warm);
    LpResult res;
    res.status = run();
    res.iterations = iters_;
    res.x.assign(x_.begin(), x_.begin() + n_);
    res.objective = 0;
    for (int j = 0; j < n_; ++j) res.objective += cost_[j] * x_[j];
    res.basis.basic = basic_;
    res.basis.state = state_;
    for (int i = 0; i < m_; ++i) res.basic_structural += basic_[i] < n_ ? 1 : 0;
    return res;
  }

 private:
  using SpMat = Eigen::SparseMatrix<double>;

  int m_, n_, nt_;
  std::vector<double> lb_, ub_, cost_, rhs_;
  std::vector<int> col_ptr_, col_row_;
  std::vector<double> col_val_;

  LpOptions opt_;
  long long iter_limit_ = 0, iters_ = 0;
  std::vector<int> basic_;        // size m
  std::vector<int> basic_slot_;   // column -> row slot or -1
  std::vector<VarState> state_;   // size nt
  std::vector<double> x_;         // size nt

  mutable Eigen::SparseLU<SpMat> lu_;
  bool factor_ok_ = false;
  struct Eta {
    int slot;
    std::vector<double> w;
  };
  std::vector<Eta> etas_;
  bool bland_ = false;

  static bool finite(double v) { return std::isfinite(v); }

  // column j of [A | I] applied to callback(row, value)
  template <class F>
  void for_col(int j, F&& f) const {
    if (j < n_) {
      for (int k = col_ptr_[j]; k < col_ptr_[j + 1]; ++k) f(col_row_[k], col_val_[k]);
    } else {
      f(j - n_, 1.0);
    }
  }

  void init_point(const Basis* warm) {
    bland_ = false;
    iters_ = 0;
    bool use_warm = warm && !warm->empty() &&
                    static_cast<int>(warm->basic.size()) == m_ &&
                    static_cast<int>(warm->state.size()) == nt_;
    if (use_warm && factor_ok_ && warm->basic == basic_) {
      // same basis as the live factorization; bound edits do not touch B,
      // so the LU and eta chain stay valid
      state_ = warm->state;
      for (int i = 0; i < m_; ++i) state_[basic_[i]] = VarState::Basic;
      x_.assign(nt_, 0.0);
    } else {
      etas_.clear();
      basic_.assign(m_, -1);
      state_.assign(nt_, VarState::AtLower);
      x_.assign(nt_, 0.0);
      if (use_warm) {
        std::vector<char> used(nt_, 0);
        for (int i = 0; i < m_ && use_warm; ++i) {
          int j = warm->basic[i];
          if (j < 0 || j >= nt_ || used[j]) use_warm = false;
          else used[j] = 1;
        }
        if (use_warm) {
          basic_ = warm->basic;
          state_ = warm->state;
          for (int i = 0; i < m_; ++i) state_[basic_[i]] = VarState::Basic;
          if (!refactor()) use_warm = false;
        }
      }
      if (!use_warm) {
        for (int i = 0; i < m_; ++i) basic_[i] = n_ + i;
        state_.assign(nt_, VarState::AtLower);
        for (int i = 0; i < m_; ++i) state_[n_ + i] = VarState::Basic;
        refactor();
      }
    }
    basic_slot_.assign(nt_, -1);
    for (int i = 0; i < m_; ++i) basic_slot_[basic_[i]] = i;
    // nonbasic columns sit on a finite bound nearest their current tag
    for (int j = 0; j < nt_; ++j) {
      if (state_[j] == VarState::Basic) continue;
      if (state_[j] == VarState::AtUpper && finite(ub_[j])) x_[j] = ub_[j];
      else if (finite(lb_[j])) state_[j] = VarState::AtLower, x_[j] = lb_[j];
      else if (finite(ub_[j])) state_[j] = VarState::AtUpper, x_[j] = ub_[j];
      else state_[j] = VarState::AtLower, x_[j] = 0;
    }
    compute_basics();
  }

  bool refactor() {
    if (m_ == 0) return true;
    SpMat B(m_, m_);
    std::vector<Eigen::Triplet<double>> trip;
    for (int i = 0; i < m_; ++i)
      for_col(basic_[i], [&](int r, double v) { trip.emplace_back(r, i, v); });
    B.setFromTriplets(trip.begin(), trip.end());
    lu_.compute(B);
    factor_ok_ = lu_.info() == Eigen::Success;
    if (!factor_ok_) return false;
    etas_.clear();
    return true;
  }

  void ftran(std::vector<double>& v) const {
    if (m_ == 0) return;
    Eigen::Map<Eigen::VectorXd> mv(const_cast<double*>(v.data()), m_);
    Eigen::VectorXd sol = lu_.solve(mv);
    std::copy(sol.data(), sol.data() + m_, v.begin());
    for (const auto& e : etas_) {
      double t = v[e.slot] / e.w[e.slot];
      if (t != 0.0) {
        for (int i = 0; i < m_; ++i) v[i] -= t * e.w[i];
      }
      v[e.slot] = t;
    }
  }

  void btran(std::vector<double>& v) const {
    if (m_ == 0) return;
    for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
      const auto& e = *it;
      double s = 0;
      for (int i = 0; i < m_; ++i) s += e.w[i] * v[i];
      s -= e.w[e.slot] * v[e.slot];
      v[e.slot] = (v[e.slot] - s) / e.w[e.slot];
    }
    Eigen::Map<Eigen::VectorXd> mv(v.data(), m_);
    Eigen::VectorXd sol = lu_.transpose().solve(mv);
    std::copy(sol.data(), sol.data() + m_, v.begin());
  }

  void compute_basics() {
    if (m_ == 0) return;
    std::vector<double> r = rhs_;
    for (int j = 0; j < nt_; ++j) {
      if (state_[j] == VarState::Basic || x_[j] == 0.0) continue;
      for_col(j, [&](int row, double v) { r[row] -= v * x_[j]; });
    }
    ftran(r);
    for (int i = 0; i < m_; ++i) x_[basic_[i]] = r[i];
  }

  double infeasibility() const {
    double sum = 0;
    for (int i = 0; i < m_; ++i) {
      double v = x_[basic_[i]];
      if (v < lb_[basic_[i]]) sum += lb_[basic_[i]] - v;
      else if (v > ub_[basic_[i]]) sum += v - ub_[basic_[i]];
    }
    return sum;
  }

  LpStatus run() {
    if (m_ == 0) {
      // pure bound selection
      for (int j = 0; j < n_; ++j) {
        if (cost_[j] >= 0) {
          if (!finite(lb_[j])) {
            if (cost_[j] > 0) return LpStatus::Unbounded;
            x_[j] = finite(ub_[j]) ? ub_[j] : 0;
          } else {
            x_[j] = lb_[j];
          }
        } else {
          if (!finite(ub_[j])) return LpStatus::Unbounded;
          x_[j] = ub_[j];
        }
      }
      return LpStatus::Optimal;
    }

    const double ftol = opt_.feas_tol;
    long long stall = 0;
    long long stall_limit = 10LL * (m_ + n_);
    double last_inf = kInf, last_obj = kInf;
    std::vector<double> y(m_), w(m_);

    while (true) {
      if (++iters_ > iter_limit_) return LpStatus::IterLimit;
      if ((iters_ & 127) == 0 && opt_.deadline &&
          std::chrono::steady_clock::now() > *opt_.deadline)
        return LpStatus::IterLimit;

      bool phase1 = false;
      for (int i = 0; i < m_; ++i) {
        double v = x_[basic_[i]];
        if (v < lb_[basic_[i]] - ftol || v > ub_[basic_[i]] + ftol) {
          phase1 = true;
          break;
        }
      }

      // duals for the active phase cost
      std::fill(y.begin(), y.end(), 0.0);
      if (phase1) {
        for (int i = 0; i < m_; ++i) {
          double v = x_[basic_[i]];
          if (v < lb_[basic_[i]] - ftol) y[i] = -1.0;
          else if (v > ub_[basic_[i]] + ftol) y[i] = 1.0;
        }
      } else {
        for (int i = 0; i < m_; ++i) y[i] = cost_[basic_[i]];
      }
      btran(y);

      // pricing: Dantzig full scan; the per-iteration cost is dominated by
      // the basis solves, so restricted scans only trade away step quality
      auto violation = [&](int j) {
        if (state_[j] == VarState::Basic || lb_[j] == ub_[j]) return 0.0;
        double d = phase1 ? 0.0 : cost_[j];
        for_col(j, [&](int row, double v) { d -= y[row] * v; });
        if (state_[j] == VarState::AtLower && d < -opt_.opt_tol) return -d;
        if (state_[j] == VarState::AtUpper && d > opt_.opt_tol) return d;
        return 0.0;
      };
      int q = -1;
      double best = 0;
      for (int j = 0; j < nt_; ++j) {
        double viol = violation(j);
        if (viol <= 0) continue;
        if (bland_) {
          q = j;
          break;
        }
        if (viol > best) {
          best = viol;
          q = j;
        }
      }
      if (q < 0) {
        if (phase1) return LpStatus::Infeasible;
        return LpStatus::Optimal;
      }

      double sigma = state_[q] == VarState::AtLower ? 1.0 : -1.0;
      std::fill(w.begin(), w.end(), 0.0);
      for_col(q, [&](int row, double v) { w[row] = v; });
      ftran(w);

      // ratio test; x_B moves by -sigma * t * w
      const double pivtol = 1e-9;
      double t_flip = finite(ub_[q]) && finite(lb_[q]) ? ub_[q] - lb_[q] : kInf;
      auto ratio_of = [&](int i, bool& hits_upper) -> double {
        double delta = sigma * w[i];
        if (std::fabs(delta) < pivtol) return kInf;
        int bi = basic_[i];
        double v = x_[bi];
        hits_upper = false;
        if (phase1 && v < lb_[bi] - ftol) {
          if (delta >= 0) return kInf;  // sinks further, never blocks
          return (v - lb_[bi]) / delta;
        }
        if (phase1 && v > ub_[bi] + ftol) {
          if (delta <= 0) return kInf;
          hits_upper = true;
          return (v - ub_[bi]) / delta;
        }
        if (delta > 0) {
          if (!finite(lb_[bi])) return kInf;
          return std::max(0.0, (v - lb_[bi]) / delta);
        }
        if (!finite(ub_[bi])) return kInf;
        hits_upper = true;
        return std::max(0.0, (v - ub_[bi]) / delta);
      };
      double t_min = kInf;
      for (int i = 0; i < m_; ++i) {
        bool hu;
        t_min = std::min(t_min, ratio_of(i, hu));
      }
      int block = -1;
      bool block_upper = false;
      if (finite(t_min)) {
        double best_piv = 0;
        for (int i = 0; i < m_; ++i) {
          bool hu;
          double t = ratio_of(i, hu);
          if (t > t_min + 1e-10) continue;
          if (bland_) {
            if (block < 0 || basic_[i] < basic_[block]) block = i, block_upper = hu;
          } else {
            double piv = std::fabs(sigma * w[i]);
            if (piv > best_piv) best_piv = piv, block = i, block_upper = hu;
          }
        }
      }

      double step = std::min(t_min, t_flip);
      if (!finite(step)) {
        if (phase1) return LpStatus::Infeasible;  // cannot happen with bounded infeasibility
        return LpStatus::Unbounded;
      }

      if (step > 0) {
        x_[q] += sigma * step;
        for (int i = 0; i < m_; ++i)
          if (w[i] != 0.0) x_[basic_[i]] -= sigma * step * w[i];
      }

      if (t_flip <= t_min) {
        state_[q] = state_[q] == VarState::AtLower ? VarState::AtUpper : VarState::AtLower;
        x_[q] = state_[q] == VarState::AtLower ? lb_[q] : ub_[q];
      } else {
        int leave = basic_[block];
        x_[leave] = block_upper ? ub_[leave] : lb_[leave];
        state_[leave] = block_upper ? VarState::AtUpper : VarState::AtLower;
        basic_[block] = q;
        basic_slot_[leave] = -1;
        basic_slot_[q] = block;
        state_[q] = VarState::Basic;
        etas_.push_back({block, w});
        if (static_cast<int>(etas_.size()) >= 64) {
          if (!refactor()) reset_logical_basis();
          compute_basics();
        }
      }

      // progress tracking drives the Bland fallback
      double inf_now = infeasibility();
      bool progressed;
      if (inf_now > ftol) {
        progressed = inf_now < last_inf - 1e-10;
        if (progressed) last_inf = inf_now;
      } else {
        double obj = 0;
        for (int j = 0; j < n_; ++j) obj += cost_[j] * x_[j];
        progressed = last_obj == kInf || obj < last_obj - 1e-10;
        last_obj = obj;
        last_inf = 0;
      }
      if (progressed) {
        stall = 0;
        bland_ = false;
      } else if (++stall > stall_limit) {
        bland_ = true;
      }
    }
  }

  void reset_logical_basis() {
    for (int i = 0; i < m_; ++i) {
      int j = basic_[i];
      if (j != n_ + i) {
        state_[j] = finite(lb_[j]) ? VarState::AtLower : VarState::AtUpper;
        x_[j] = finite(lb_[j]) ? lb_[j] : (finite(ub_[j]) ? ub_[j] : 0.0);
      }
      basic_[i] = n_ + i;
      state_[n_ + i] = VarState::Basic;
    }
    basic_slot_.assign(nt_, -1);
    for (int i = 0; i < m_; ++i) basic_slot_[basic_[i]] = i;
    refactor();
  }
};

inline LpResult solve_lp(const MilpModel& model, const LpOptions& opt = {},
                         const Basis* warm = nullptr) {
  LpEngine engine(model);
  return engine.solve(opt, warm);
}

}  // namespace restock
