#pragma once

#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "restock/instance.hpp"
#include "restock/packing.hpp"
#include "restock/solution.hpp"

namespace restock {

using json = nlohmann::json;

inline json instance_to_json(const Instance& inst) {
  json j;
  j["name"] = inst.name;
  j["facilities"] = json::array();
  for (int i = 0; i < inst.num_facilities; ++i) j["facilities"].push_back(i);
  j["warehouses"] = inst.warehouses;
  j["skus"] = json::array();
  for (int s = 0; s < inst.num_skus; ++s) j["skus"].push_back(s);
  j["package_types"] = json::array();
  for (int p = 0; p < inst.num_package_types; ++p) j["package_types"].push_back(p);
  j["movements"] = json::array();
  for (auto [a, b] : inst.movements) j["movements"].push_back({a, b});
  j["weight"] = inst.weight;
  j["capacity"] = inst.capacity;

  json cost = json::object();
  char key[64];
  for (int a = 0; a < inst.num_movements(); ++a)
    for (int p = 0; p < inst.num_package_types; ++p) {
      std::snprintf(key, sizeof key, "(%d,%d,%d)", inst.movements[a].first,
                    inst.movements[a].second, p);
      cost[key] = inst.arc_cost(a, p);
    }
  j["cost"] = cost;

  auto dense = [&](auto&& value) {
    json rows = json::array();
    for (int i = 0; i < inst.num_facilities; ++i) {
      json row = json::array();
      for (int s = 0; s < inst.num_skus; ++s) row.push_back(value(i, s));
      rows.push_back(std::move(row));
    }
    return rows;
  };
  j["initial_stock"] = dense([&](int i, int s) { return inst.stock(i, s); });
  j["fixed_demand"] = dense([&](int i, int s) { return inst.fd(i, s); });
  j["variable_demand"] = dense([&](int i, int s) { return inst.vd(i, s); });
  j["priority"] = dense([&](int i, int s) { return inst.pri(i, s); });
  return j;
}

inline Instance instance_from_json(const json& j) {
  Instance inst;
  inst.name = j.value("name", "");
  inst.num_facilities = static_cast<int>(j.at("facilities").size());
  inst.num_skus = static_cast<int>(j.at("skus").size());
  inst.num_package_types = static_cast<int>(j.at("package_types").size());
  inst.warehouses = j.at("warehouses").get<std::vector<int>>();
  for (const auto& mv : j.at("movements"))
    inst.movements.emplace_back(mv.at(0).get<int>(), mv.at(1).get<int>());
  inst.weight = j.at("weight").get<std::vector<double>>();
  inst.capacity = j.at("capacity").get<std::vector<double>>();
  inst.finalize();

  inst.cost.assign(static_cast<std::size_t>(inst.num_movements()) * inst.num_package_types, 0.0);
  for (const auto& [key, value] : j.at("cost").items()) {
    int a = 0, b = 0, p = 0;
    if (std::sscanf(key.c_str(), "(%d,%d,%d)", &a, &b, &p) != 3)
      throw std::runtime_error("bad cost key: " + key);
    if (a < 0 || a >= inst.num_facilities || b < 0 || b >= inst.num_facilities ||
        inst.arc(a, b) < 0 || p < 0 || p >= inst.num_package_types)
      throw std::runtime_error("cost key off the movement set: " + key);
    inst.cost[static_cast<std::size_t>(inst.arc(a, b)) * inst.num_package_types + p] =
        value.get<double>();
  }

  const auto& is = j.at("initial_stock");
  inst.initial_stock.resize(static_cast<std::size_t>(inst.num_facilities) * inst.num_skus);
  for (int i = 0; i < inst.num_facilities; ++i)
    for (int s = 0; s < inst.num_skus; ++s)
      inst.initial_stock[static_cast<std::size_t>(i) * inst.num_skus + s] =
          is.at(i).at(s).get<long long>();

  const int O = inst.num_outlets();
  inst.fixed_demand.assign(static_cast<std::size_t>(O) * inst.num_skus, 0);
  inst.variable_demand.assign(static_cast<std::size_t>(O) * inst.num_skus, 0);
  inst.priority.assign(static_cast<std::size_t>(O) * inst.num_skus, 0.0);
  for (int i = 0; i < inst.num_facilities; ++i) {
    int o = inst.outlet_index[i];
    for (int s = 0; s < inst.num_skus; ++s) {
      long long fd = j.at("fixed_demand").at(i).at(s).get<long long>();
      long long vd = j.at("variable_demand").at(i).at(s).get<long long>();
      double pri = j.at("priority").at(i).at(s).get<double>();
      if (o < 0) {
        if (fd != 0 || vd != 0)
          throw std::runtime_error("warehouse row carries demand in instance file");
        continue;
      }
      inst.fixed_demand[static_cast<std::size_t>(o) * inst.num_skus + s] = fd;
      inst.variable_demand[static_cast<std::size_t>(o) * inst.num_skus + s] = vd;
      inst.priority[static_cast<std::size_t>(o) * inst.num_skus + s] = pri;
    }
  }
  return inst;
}

inline json solution_to_json(const Instance& inst, const Solution& sol,
                             const ObjectiveTerms& terms) {
  json j;
  j["instance"] = inst.name;
  j["X"] = json::array();
  j["Y"] = json::array();
  for (int a = 0; a < inst.num_movements(); ++a) {
    auto [i, jj] = inst.movements[a];
    for (int s = 0; s < inst.num_skus; ++s) {
      double v = sol.get_x(inst, a, s);
      if (v != 0) j["X"].push_back({i, jj, s, v});
    }
    for (int p = 0; p < inst.num_package_types; ++p) {
      double v = sol.get_y(inst, a, p);
      if (v != 0) j["Y"].push_back({i, jj, p, v});
    }
  }
  j["objective_terms"] = {{"transport", terms.transport},
                          {"shortfall", terms.shortfall},
                          {"tiebreak", terms.tiebreak},
                          {"total", terms.total}};
  return j;
}

inline Solution solution_from_json(const Instance& inst, const json& j) {
  Solution sol = Solution::zeros(inst);
  auto arc_of = [&](const json& t) {
    int i = t.at(0).get<int>(), jj = t.at(1).get<int>();
    if (i < 0 || i >= inst.num_facilities || jj < 0 || jj >= inst.num_facilities ||
        inst.arc(i, jj) < 0)
      throw std::runtime_error("solution entry off the movement set");
    return inst.arc(i, jj);
  };
  for (const auto& t : j.at("X"))
    sol.x[static_cast<std::size_t>(arc_of(t)) * inst.num_skus + t.at(2).get<int>()] =
        t.at(3).get<double>();
  for (const auto& t : j.at("Y"))
    sol.y[static_cast<std::size_t>(arc_of(t)) * inst.num_package_types + t.at(2).get<int>()] =
        t.at(3).get<double>();
  return sol;
}

inline json manifest_to_json(const PackedSolution& packed) {
  json arr = json::array();
  for (const auto& mv : packed.movements) {
    json m;
    m["from"] = mv.from;
    m["to"] = mv.to;
    m["exact"] = mv.packing.is_exact;
    m["cost"] = mv.packing.cost;
    m["packages"] = json::array();
    for (const auto& pkg : mv.packing.packages) {
      json pj;
      pj["type"] = pkg.type;
      pj["contents"] = json::array();
      for (auto [s, u] : pkg.contents) pj["contents"].push_back({s, u});
      m["packages"].push_back(std::move(pj));
    }
    if (!mv.packing.loose.empty()) {
      m["loose"] = json::array();
      for (auto [s, u] : mv.packing.loose) m["loose"].push_back({s, u});
    }
    arr.push_back(std::move(m));
  }
  return arr;
}

inline json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  json j;
  in >> j;
  return j;
}

inline void save_json(const json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << '\n';
}

}  // namespace restock
