#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <queue>
#include <stdexcept>
#include <vector>

#include "restock/instance.hpp"

namespace restock {

struct FlowArc {
  int tail = 0;
  int head = 0;
  long long lower = 0;
  long long upper = 0;
  double cost = 0;
};

struct FlowNetwork {
  int num_nodes = 0;
  std::vector<FlowArc> arcs;
  std::vector<long long> balance;  // positive = supply, negative = demand

  int add_node() {
    balance.push_back(0);
    return num_nodes++;
  }
  int add_arc(int tail, int head, long long lower, long long upper, double cost) {
    arcs.push_back({tail, head, lower, upper, cost});
    return static_cast<int>(arcs.size()) - 1;
  }
};

enum class FlowStatus { Optimal, Infeasible };

struct FlowResult {
  FlowStatus status = FlowStatus::Infeasible;
  std::vector<long long> flow;  // per arc, in input order
  double cost = 0;
};

namespace flow_detail {
constexpr long long kCostScale = 1'000'000;
constexpr long long kInfDist = std::numeric_limits<long long>::max() / 4;
}  // namespace flow_detail

// Successive shortest paths with node potentials. Lower bounds are removed by
// the usual imbalance transformation; negative-cost arcs are saturated up
// front so every residual cost is nonnegative from the start (the rounding
// networks routinely contain negative-cost cycles, which pure potential
// initialization cannot absorb). Costs are compared as integers after
// scaling, so flows and optimality are exact.
inline FlowResult solve_min_cost_flow(const FlowNetwork& net) {
  using flow_detail::kCostScale;
  using flow_detail::kInfDist;
  const int n = net.num_nodes;
  const int m = static_cast<int>(net.arcs.size());
  long long total_balance = 0;
  for (long long b : net.balance) total_balance += b;
  if (total_balance != 0) throw std::invalid_argument("flow network is not balanced");

  FlowResult res;
  for (const FlowArc& a : net.arcs)
    if (a.lower > a.upper) return res;

  // residual graph: paired forward/backward edges
  std::vector<int> head(2 * m), next_out;
  std::vector<long long> cap(2 * m), cost(2 * m);
  std::vector<std::vector<int>> out(n);
  std::vector<long long> excess(net.balance.begin(), net.balance.end());
  for (int e = 0; e < m; ++e) {
    const FlowArc& a = net.arcs[e];
    long long c = llround(a.cost * kCostScale);
    long long room = a.upper - a.lower;
    excess[a.tail] -= a.lower;
    excess[a.head] += a.lower;
    long long f0 = 0;
    if (c < 0) {  // saturate
      f0 = room;
      excess[a.tail] -= room;
      excess[a.head] += room;
    }
    head[2 * e] = a.head;
    cap[2 * e] = room - f0;
    cost[2 * e] = c;
    head[2 * e + 1] = a.tail;
    cap[2 * e + 1] = f0;
    cost[2 * e + 1] = -c;
    out[a.tail].push_back(2 * e);
    out[a.head].push_back(2 * e + 1);
  }

  std::vector<long long> pot(n, 0), dist(n);
  std::vector<int> parent_edge(n);
  using QItem = std::pair<long long, int>;
  while (true) {
    int src = -1;
    for (int v = 0; v < n; ++v)
      if (excess[v] > 0) {
        src = v;
        break;
      }
    if (src < 0) break;

    std::priority_queue<QItem, std::vector<QItem>, std::greater<QItem>> pq;
    dist.assign(n, kInfDist);
    parent_edge.assign(n, -1);
    dist[src] = 0;
    pq.push({0, src});
    while (!pq.empty()) {
      auto [d, v] = pq.top();
      pq.pop();
      if (d > dist[v]) continue;
      for (int e : out[v]) {
        if (cap[e] <= 0) continue;
        int w = head[e];
        long long nd = d + cost[e] + pot[v] - pot[w];
        if (nd < dist[w]) {
          dist[w] = nd;
          parent_edge[w] = e;
          pq.push({nd, w});
        }
      }
    }
    int sink = -1;
    for (int v = 0; v < n; ++v)
      if (excess[v] < 0 && dist[v] < kInfDist && (sink < 0 || dist[v] < dist[sink])) sink = v;
    if (sink < 0) return res;  // leftover excess unreachable

    for (int v = 0; v < n; ++v)
      pot[v] += std::min(dist[v], dist[sink]);
    long long push = std::min(excess[src], -excess[sink]);
    for (int v = sink; v != src; v = head[parent_edge[v] ^ 1])
      push = std::min(push, cap[parent_edge[v]]);
    for (int v = sink; v != src; v = head[parent_edge[v] ^ 1]) {
      cap[parent_edge[v]] -= push;
      cap[parent_edge[v] ^ 1] += push;
    }
    excess[src] -= push;
    excess[sink] += push;
  }

  res.status = FlowStatus::Optimal;
  res.flow.resize(m);
  res.cost = 0;
  for (int e = 0; e < m; ++e) {
    const FlowArc& a = net.arcs[e];
    res.flow[e] = a.lower + cap[2 * e + 1];
    res.cost += a.cost * static_cast<double>(res.flow[e]);
  }
  return res;
}

namespace flow_detail {
// Collapse solver noise onto nearby integers before interval construction so
// degenerate [v,v] intervals survive and derived sums stay consistent.
inline double snap(double v, double tol = 1e-6) {
  double r = std::round(v);
  return std::abs(v - r) <= tol ? r : v;
}
}  // namespace flow_detail

// Per-SKU rounding network. Node layout: facility rows [0,F), facility
// columns [F,2F), per-facility balance nodes [2F,3F), one hub node 3F. The
// fractional transfers themselves form a feasible circulation within every
// interval, so the integral solve cannot come back infeasible.
struct RoundingNetwork {
  FlowNetwork net;
  int sku = 0;
  int num_facilities = 0;
  std::vector<int> transfer_arc;  // per movement, index into net.arcs

  int row_node(int i) const { return i; }
  int col_node(int i) const { return num_facilities + i; }
  int bal_node(int i) const { return 2 * num_facilities + i; }
  int hub_node() const { return 3 * num_facilities; }
};

inline RoundingNetwork build_rounding_network(const Instance& inst, int sku,
                                              const std::vector<double>& x_sku,
                                              const std::vector<double>& c_hat) {
  using flow_detail::snap;
  const int F = inst.num_facilities;
  const int M = inst.num_movements();
  RoundingNetwork rn;
  rn.sku = sku;
  rn.num_facilities = F;
  rn.transfer_arc.assign(M, -1);
  for (int v = 0; v < 3 * F + 1; ++v) rn.net.add_node();

  std::vector<double> sent(F, 0), received(F, 0);
  for (int a = 0; a < M; ++a) {
    auto [i, j] = inst.movements[a];
    double x = snap(x_sku[a]);
    sent[i] += x;
    received[j] += x;
    rn.transfer_arc[a] = rn.net.add_arc(rn.row_node(i), rn.col_node(j),
                                        static_cast<long long>(std::floor(x)),
                                        static_cast<long long>(std::ceil(x)), c_hat[a]);
  }
  for (int i = 0; i < F; ++i) {
    double zs = snap(sent[i]);
    double zr = snap(received[i]);
    double b = snap(zr - zs);
    rn.net.add_arc(rn.bal_node(i), rn.row_node(i), static_cast<long long>(std::floor(zs)),
                   static_cast<long long>(std::ceil(zs)), 0);
    rn.net.add_arc(rn.col_node(i), rn.bal_node(i), static_cast<long long>(std::floor(zr)),
                   static_cast<long long>(std::ceil(zr)), 0);
    if (b >= 0)
      rn.net.add_arc(rn.bal_node(i), rn.hub_node(), static_cast<long long>(std::floor(b)),
                     static_cast<long long>(std::ceil(b)), 0);
    else
      rn.net.add_arc(rn.hub_node(), rn.bal_node(i), static_cast<long long>(std::floor(-b)),
                     static_cast<long long>(std::ceil(-b)), 0);
  }
  return rn;
}

}  // namespace restock
