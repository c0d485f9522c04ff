#pragma once

#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace restock {

constexpr double kInf = std::numeric_limits<double>::infinity();

enum class RowSense { LE, EQ, GE };

struct MilpVar {
  std::string name;
  double lb = 0;
  double ub = kInf;
  double obj = 0;
  bool integer = false;
};

struct MilpRow {
  std::string name;
  RowSense sense = RowSense::LE;
  double rhs = 0;
  std::vector<std::pair<int, double>> terms;  // (column, coefficient)
};

// Minimization model over bounded variables.
struct MilpModel {
  std::string name = "model";
  std::vector<MilpVar> vars;
  std::vector<MilpRow> rows;

  int add_var(std::string nm, double lb, double ub, double obj, bool integer) {
    vars.push_back({std::move(nm), lb, ub, obj, integer});
    return static_cast<int>(vars.size()) - 1;
  }
  int add_row(std::string nm, RowSense sense, double rhs,
              std::vector<std::pair<int, double>> terms) {
    rows.push_back({std::move(nm), sense, rhs, std::move(terms)});
    return static_cast<int>(rows.size()) - 1;
  }
  int num_vars() const { return static_cast<int>(vars.size()); }
  int num_rows() const { return static_cast<int>(rows.size()); }
  int num_integer_vars() const {
    int n = 0;
    for (const auto& v : vars) n += v.integer ? 1 : 0;
    return n;
  }
  double activity(const MilpRow& row, const std::vector<double>& x) const {
    double a = 0;
    for (auto [j, c] : row.terms) a += c * x[j];
    return a;
  }
  double objective_value(const std::vector<double>& x) const {
    double v = 0;
    for (int j = 0; j < num_vars(); ++j) v += vars[j].obj * x[j];
    return v;
  }
};

}  // namespace restock
