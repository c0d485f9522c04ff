#pragma once

#include <cstdio>
#include <ostream>
#include <string>

#include "restock/milp_model.hpp"

namespace restock {

namespace mps_detail {
inline std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}
inline std::string pad(const std::string& s, std::size_t width) {
  return s.size() >= width ? s + " " : s + std::string(width - s.size(), ' ');
}
}  // namespace mps_detail

// Classic column-oriented MPS. Names longer than eight characters are kept
// verbatim (fields stay whitespace separated, as modern readers expect).
// Integer columns are wrapped in INTORG/INTEND markers and every finite
// bound is written out explicitly.
inline void export_model(const MilpModel& model, std::ostream& os) {
  using mps_detail::num;
  using mps_detail::pad;
  os << "NAME          " << (model.name.empty() ? "MODEL" : model.name) << "\n";
  os << "ROWS\n";
  os << " N  COST\n";
  for (const auto& row : model.rows) {
    char s = row.sense == RowSense::LE ? 'L' : row.sense == RowSense::GE ? 'G' : 'E';
    os << " " << s << "  " << row.name << "\n";
  }

  // transpose the row-major terms into per-column order
  std::vector<std::vector<std::pair<int, double>>> cols(model.num_vars());
  for (int i = 0; i < model.num_rows(); ++i)
    for (auto [j, c] : model.rows[i].terms) cols[j].emplace_back(i, c);

  os << "COLUMNS\n";
  bool in_int = false;
  int marker = 0;
  for (int j = 0; j < model.num_vars(); ++j) {
    const auto& v = model.vars[j];
    if (v.integer != in_int) {
      os << "    MARKER" << marker++ << "                 'MARKER'                 '"
         << (v.integer ? "INTORG" : "INTEND") << "'\n";
      in_int = v.integer;
    }
    bool wrote = false;
    if (v.obj != 0) {
      os << "    " << pad(v.name, 10) << pad("COST", 10) << num(v.obj) << "\n";
      wrote = true;
    }
    for (auto [i, c] : cols[j]) {
      os << "    " << pad(v.name, 10) << pad(model.rows[i].name, 10) << num(c) << "\n";
      wrote = true;
    }
    if (!wrote)  // keep the column declared even when empty
      os << "    " << pad(v.name, 10) << pad("COST", 10) << "0\n";
  }
  if (in_int)
    os << "    MARKER" << marker++ << "                 'MARKER'                 'INTEND'\n";

  os << "RHS\n";
  for (const auto& row : model.rows)
    if (row.rhs != 0) os << "    RHS       " << pad(row.name, 10) << num(row.rhs) << "\n";

  os << "BOUNDS\n";
  for (const auto& v : model.vars) {
    if (v.lb == v.ub) {
      os << " FX BND       " << pad(v.name, 10) << num(v.lb) << "\n";
      continue;
    }
    if (v.lb == -kInf) os << " MI BND       " << pad(v.name, 10) << "\n";
    else if (v.lb != 0) os << " LO BND       " << pad(v.name, 10) << num(v.lb) << "\n";
    if (v.ub != kInf) os << " UP BND       " << pad(v.name, 10) << num(v.ub) << "\n";
  }
  os << "ENDATA\n";
}

}  // namespace restock
