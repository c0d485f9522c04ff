// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Every tolerance is pinned next to the check it guards. Run with
// criterion numbers as arguments to restrict the set, e.g. "acceptance 1 4 9".

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <set>
#include <string>
#include <vector>

#include "restock/bench.hpp"
#include "restock/branch_and_bound.hpp"
#include "restock/generator.hpp"
#include "restock/instance.hpp"
#include "restock/min_cost_flow.hpp"
#include "restock/packing.hpp"
#include "restock/pipeline.hpp"
#include "restock/rounding.hpp"
#include "restock/transfer_model.hpp"
#include "test_helpers.hpp"

using namespace restock;

namespace {

int g_failures = 0;

std::string strf(const char* fmt, ...) {
  char buf[768];
  va_list ap;
  va_start(ap, fmt);
  std::vsnprintf(buf, sizeof buf, fmt, ap);
  va_end(ap);
  return buf;
}

void line(int id, bool ok, const std::string& msg) {
  std::printf("criterion %2d: %s  %s\n", id, ok ? "PASS" : "FAIL", msg.c_str());
  std::fflush(stdout);
  if (!ok) ++g_failures;
}

bool leq(double a, double b, double rel) { return a <= b + rel * std::max(1.0, std::fabs(b)); }

// ---------------------------------------------------------------------------
// 1. Dimension table, zero tolerance.

void criterion1() {
  struct Row {
    const char* preset;
    long long cons, vars, int_full, int_relaxed;  // -1 = not pinned
  };
  const Row rows[] = {
      {"small", 430, 1430, 1320, -1},
      {"medium", 3690, 32550, 31620, 3720},
      {"large", 40300, 1060500, 1050400, 40400},
      {"g1", 25840, 537840, 531360, 12960},
      {"g2", 40300, 1040300, 1030200, 20200},
      {"g3", 57960, 1785960, 1771440, 29040},
      {"g4", 78820, 2822820, 2803080, 39480},
      {"g5", 102880, 4198880, 4173120, 51520},
      {"g6", 130140, 5962140, 5929560, 65160},
      {"g7", 160600, 8160600, 8120400, 80400},
      {"g8", 194260, 10842260, 10793640, 97240},
      {"g9", 231120, 14055120, 13997280, 115680},
      {"g10", 271180, 17847180, 17779320, 135720},
  };
  bool ok = true;
  std::string bad;
  for (const Row& r : rows) {
    GeneratorParams par = preset_params(r.preset);
    Instance inst;  // counts only; dimensions need no stock or demand data
    inst.num_facilities = par.num_warehouses + par.num_outlets;
    inst.num_skus = par.num_skus;
    inst.num_package_types = par.num_package_types;
    inst.warehouses.resize(par.num_warehouses);
    for (int w = 0; w < par.num_warehouses; ++w) inst.warehouses[w] = w;
    inst.movements = movements_for_policy(inst.num_facilities, inst.warehouses, par.policy);
    inst.finalize();
    DimensionReport d = model_dimensions(inst);
    bool row_ok = d.num_constraints == r.cons && d.num_vars == r.vars &&
                  d.num_integer_vars_transfer == r.int_full &&
                  (r.int_relaxed < 0 || d.num_integer_vars_relaxed == r.int_relaxed);
    if (!row_ok && bad.empty())
      bad = strf(" first mismatch %s: got (%lld, %lld, %lld, %lld)", r.preset, d.num_constraints,
                 d.num_vars, d.num_integer_vars_transfer, d.num_integer_vars_relaxed);
    ok = ok && row_ok;
  }
  line(1, ok, "dimension table: 13 preset rows, zero tolerance" + bad);
}

// ---------------------------------------------------------------------------
// 2. Reference three-facility instance: 3 packages when only excess stock may
//    be sent, 2 when outlets may forward anything up to their stock.

void criterion2() {
  Instance inst = th::fig3_instance();
  SolverConfig cfg;  // alpha 10, excess rule
  PipelineReport excess = run_tp(inst, cfg);
  cfg.send_rule = SendRule::UpToStock;
  PipelineReport stock = run_tp(inst, cfg);
  bool ok = excess.status == MilpStatus::Optimal && stock.status == MilpStatus::Optimal &&
            std::llround(excess.milp_packages) == 3 && std::llround(excess.packed_packages) == 3 &&
            std::llround(stock.milp_packages) == 2 && std::llround(stock.packed_packages) == 2;
  line(2, ok,
       strf("reference instance packages: excess rule %.0f (want 3), stock rule %.0f (want 2)",
            excess.milp_packages, stock.milp_packages));
}

// ---------------------------------------------------------------------------
// 3. Packing fragmentation: the aggregate capacity bound admits 2 packages,
//    item-level packing needs 3.

void criterion3() {
  PackingTask task;
  task.units = {3};
  task.weight = {3.0};
  task.cap = {5.0};
  task.cost = {1.0};
  task.avail = {100};
  long long aggregate = static_cast<long long>(std::ceil(3 * 3.0 / 5.0 - 1e-9));
  PackingResult res = solve_packing(task);
  bool ok = aggregate == 2 && res.is_exact && res.packages.size() == 3 &&
            th::close(res.cost, 3.0, 1e-12);
  line(3, ok,
       strf("fragmentation: aggregate bound %lld packages, exact packing %zu", aggregate,
            res.packages.size()));
}

// ---------------------------------------------------------------------------
// 4. Solver-vs-oracle equality on exhaustively enumerable instances.

void criterion4() {
  const double tol = 1e-6;  // relative
  bool ok = true;
  int solved = 0;
  std::string bad;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Instance inst = generate_instance(th::tiny_params(seed));
    SolverConfig cfg;
    TransferModel tm = build_transfer_model(inst, cfg, false);
    MilpResult res = solve_milp(tm.model, milp_options_for(cfg));
    double oracle = th::brute_force_transfer(inst, cfg);
    bool good = res.status == MilpStatus::Optimal && th::close(res.objective, oracle, tol);
    if (!good && bad.empty())
      bad = strf(" seed %llu: solver %.9g vs oracle %.9g", (unsigned long long)seed, res.objective,
                 oracle);
    ok = ok && good;
    solved += good;
  }
  int packed = 0;
  Rng rng(918273645);
  for (int t = 0; t < 50; ++t) {
    PackingTask task;
    int S = 1 + static_cast<int>(rng.below(3));
    int P = 1 + static_cast<int>(rng.below(3));
    long long left = 12;
    for (int s = 0; s < S; ++s) {
      long long u = static_cast<long long>(rng.below(static_cast<std::uint64_t>(left / S + 2)));
      u = std::min(u, left);
      left -= u;
      task.units.push_back(u);
      task.weight.push_back(rng.uniform(0.5, 4.5));
    }
    double wmax = *std::max_element(task.weight.begin(), task.weight.end());
    for (int p = 0; p < P; ++p) {
      task.cap.push_back(wmax + rng.uniform(0.0, 6.0));
      task.cost.push_back(rng.uniform(1.0, 8.0));
      task.avail.push_back(1000);
    }
    PackingResult res = solve_packing(task);
    double oracle = th::brute_force_packing(task);
    bool good = res.is_exact && th::close(res.cost, oracle, tol);
    if (!good && bad.empty()) bad = strf(" packing task %d: %.9g vs %.9g", t, res.cost, oracle);
    ok = ok && good;
    packed += good;
  }
  line(4, ok,
       strf("oracle equality: %d/50 transfer instances, %d/50 packing tasks (rel tol 1e-6)%s",
            solved, packed, bad.c_str()));
}

// ---------------------------------------------------------------------------
// 5. Policy dominance and the cost-scaling crossover.

void criterion5() {
  MilpOptions limits;
  limits.time_limit = 120;
  PolicySweepResult res =
      compare_policies(preset_params("desk"), 30, {10.0}, {0.01, 100.0}, limits, 1234, 1);
  bool ok = true;
  int proven = 0, dominated = 0, tuples = 0;
  for (const PolicyRun& r : res.runs) proven += r.proven_optimal ? 1 : 0;
  ok = ok && proven == static_cast<int>(res.runs.size());
  // tasks run policy-major inside each (instance, alpha, factor) tuple
  for (std::size_t i = 0; i + 2 < res.runs.size(); i += 3) {
    const PolicyRun *gr = nullptr, *cr = nullptr, *dr = nullptr;
    for (std::size_t k = i; k < i + 3; ++k) {
      if (res.runs[k].policy == MovementPolicy::GR) gr = &res.runs[k];
      if (res.runs[k].policy == MovementPolicy::CR) cr = &res.runs[k];
      if (res.runs[k].policy == MovementPolicy::DR) dr = &res.runs[k];
    }
    ++tuples;
    bool dom = gr && cr && dr && gr->total <= cr->total + 1e-6 && gr->total <= dr->total + 1e-6;
    dominated += dom;
    ok = ok && dom;
  }
  auto agg = [&res](double factor, MovementPolicy p) {
    for (const PolicyAggregate& a : res.aggregates)
      if (a.factor == factor && a.policy == p) return a;
    return PolicyAggregate{};
  };
  PolicyAggregate cr_cheap = agg(0.01, MovementPolicy::CR);
  PolicyAggregate dr_cheap = agg(0.01, MovementPolicy::DR);
  PolicyAggregate cr_dear = agg(100.0, MovementPolicy::CR);
  PolicyAggregate dr_dear = agg(100.0, MovementPolicy::DR);
  for (const PolicyAggregate& a : res.aggregates) ok = ok && a.counted == 30 && a.excluded == 0;
  ok = ok && cr_cheap.avg_worsening <= dr_cheap.avg_worsening + 1e-9;
  ok = ok && dr_dear.avg_worsening <= cr_dear.avg_worsening + 1e-9;
  line(5, ok,
       strf("policy sweep: %d/%d optimal, best-policy dominance %d/%d, "
            "cheap-warehouse worsening cr %.4f <= dr %.4f, dear cr %.4f >= dr %.4f",
            proven, static_cast<int>(res.runs.size()), dominated, tuples, cr_cheap.avg_worsening,
            dr_cheap.avg_worsening, cr_dear.avg_worsening, dr_dear.avg_worsening));
}

// ---------------------------------------------------------------------------
// 6. Relaxation bound and capacity-scaling monotonicity.

void criterion6() {
  const double tol = 1e-6;  // relative, matches the solver gap tolerance
  const double deltas[4] = {0.85, 0.9, 0.95, 1.0};
  bool ok = true;
  double avg_packages[4] = {0, 0, 0, 0};
  std::string bad;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    GeneratorParams par = preset_params("desk");
    par.seed = seed;
    Instance inst = generate_instance(par);
    SolverConfig cfg;
    TransferModel full = build_transfer_model(inst, cfg, false);
    MilpResult t_res = solve_milp(full.model, milp_options_for(cfg));
    ok = ok && t_res.status == MilpStatus::Optimal;
    double prev = kInf;
    for (int d = 0; d < 4; ++d) {
      SolverConfig rcfg = cfg;
      rcfg.delta = deltas[d];
      TransferModel rt = build_transfer_model(inst, rcfg, true);
      MilpResult r = solve_milp(rt.model, milp_options_for(rcfg));
      if (r.status != MilpStatus::Optimal) {
        ok = false;
        continue;
      }
      if (!leq(r.objective, prev, tol)) {
        ok = false;
        if (bad.empty())
          bad = strf(" seed %llu: delta %.2f optimum %.6f above %.6f", (unsigned long long)seed,
                     deltas[d], r.objective, prev);
      }
      prev = r.objective;
      Solution sol = rt.extract(inst, r.x);
      double packages = 0;
      for (double y : sol.y) packages += y;
      avg_packages[d] += packages / 20.0;
      if (d == 3 && !leq(r.objective, t_res.objective, tol)) {
        ok = false;
        if (bad.empty())
          bad = strf(" seed %llu: relaxed optimum %.6f above full %.6f", (unsigned long long)seed,
                     r.objective, t_res.objective);
      }
    }
  }
  for (int d = 1; d < 4; ++d) ok = ok && avg_packages[d] <= avg_packages[d - 1] + 1e-9;
  line(6, ok,
       strf("relaxation: full-capacity relaxed optimum below the integral optimum on 20 "
            "instances; avg packages by delta %.2f/%.2f/%.2f/%.2f%s",
            avg_packages[0], avg_packages[1], avg_packages[2], avg_packages[3], bad.c_str()));
}

// ---------------------------------------------------------------------------
// 7. Rounding soundness plus the min-cost-flow LP cross-check.

void criterion7() {
  bool ok = true;
  int sound = 0;
  std::string bad;
  for (int k = 0; k < 200; ++k) {
    GeneratorParams par;
    par.num_outlets = 3 + k % 3;
    par.num_skus = 2 + (k / 3) % 3;
    par.num_package_types = 1 + k % 2;
    par.total_stock = 12 + k % 9;
    par.seed = 900 + static_cast<std::uint64_t>(k);
    Instance inst = generate_instance(par);
    SolverConfig cfg;  // delta 1: the relaxed model is a true relaxation here
    TransferModel rt = build_transfer_model(inst, cfg, true);
    MilpResult res = solve_milp(rt.model, milp_options_for(cfg));
    if (res.status != MilpStatus::Optimal) {
      ok = false;
      continue;
    }
    Solution relaxed = rt.extract(inst, res.x);
    RoundingRunConfig rcfg;
    rcfg.rng_seed = static_cast<std::uint64_t>(k);
    RoundingOutcome out = round_all(inst, cfg, relaxed, rcfg);
    bool feasible = check_feasibility(inst, cfg, out.solution).empty();
    bool intervals = th::check_rounding_intervals(inst, relaxed.x, out.solution.x);
    bool cost_ok = out.terms.total >= res.objective - 1e-7 * std::max(1.0, res.objective);
    bool good = feasible && intervals && cost_ok;
    if (!good && bad.empty())
      bad = strf(" sample %d: feasible=%d intervals=%d cost=%d", k, feasible ? 1 : 0,
                 intervals ? 1 : 0, cost_ok ? 1 : 0);
    ok = ok && good;
    sound += good;
  }
  int flows_ok = 0, optimal_seen = 0;
  for (std::uint64_t seed = 5000; seed < 5100; ++seed) {
    Rng rng(seed);
    FlowNetwork net = th::random_flow_network(rng);
    FlowResult res = solve_min_cost_flow(net);
    std::optional<double> lp = th::lp_flow_cost(net);
    if (res.status == FlowStatus::Optimal) {
      ++optimal_seen;
      bool valid = true;
      std::vector<long long> bal(net.balance);
      for (std::size_t a = 0; a < net.arcs.size(); ++a) {
        valid = valid && res.flow[a] >= net.arcs[a].lower && res.flow[a] <= net.arcs[a].upper;
        bal[net.arcs[a].tail] -= res.flow[a];
        bal[net.arcs[a].head] += res.flow[a];
      }
      for (long long b : bal) valid = valid && b == 0;
      bool match = lp.has_value() && th::close(res.cost, *lp, 1e-9);
      flows_ok += valid && match;
      ok = ok && valid && match;
    } else {
      bool agree = !lp.has_value();
      flows_ok += agree;
      ok = ok && agree;
    }
  }
  line(7, ok,
       strf("rounding: %d/200 fuzzed relaxations sound; flows: %d/100 match the LP within "
            "1e-9 (%d optimal)%s",
            sound, flows_ok, optimal_seen, bad.c_str()));
}

// ---------------------------------------------------------------------------
// 8. Pipeline bracketing: bound below packed cost, and the relaxed pipeline
//    lands within 25% of the integral one.

void criterion8() {
  bool ok = true;
  int bracketed = 0, close_enough = 0;
  double worst_ratio = 0;
  for (std::uint64_t seed = 200; seed < 220; ++seed) {
    GeneratorParams par = preset_params("desk");
    par.seed = seed;
    Instance inst = generate_instance(par);
    SolverConfig cfg;
    PipelineReport tp = run_tp(inst, cfg);
    SolverConfig rcfg = cfg;
    rcfg.delta = 0.95;
    PipelineReport rtrp = run_rtrp(inst, rcfg);
    bool have = tp.has_solution && rtrp.has_solution;
    bool bracket = have && tp.lower_bound <= tp.packed_terms.total +
                                                 1e-9 * std::max(1.0, tp.packed_terms.total);
    double ratio = have ? std::fabs(rtrp.packed_terms.total - tp.packed_terms.total) /
                              std::max(1e-12, tp.packed_terms.total)
                        : kInf;
    worst_ratio = std::max(worst_ratio, ratio);
    bracketed += bracket;
    close_enough += ratio <= 0.25;
    ok = ok && bracket && ratio <= 0.25;
  }
  line(8, ok,
       strf("bracketing: bound<=packed on %d/20, relaxed pipeline within 25%% on %d/20 "
            "(worst %.1f%%)",
            bracketed, close_enough, worst_ratio * 100.0));
}

// ---------------------------------------------------------------------------
// 9. Generator contract: validation, apportionment, stock split.

void criterion9() {
  bool ok = true;
  int valid = 0;
  for (int k = 0; k < 1000; ++k) {
    GeneratorParams par;
    par.num_outlets = 2 + k % 5;
    par.num_skus = 1 + (k / 5) % 5;
    par.num_package_types = 1 + k % 3;
    par.num_warehouses = 1 + k % 2;
    par.total_stock = (k * 7) % 61;
    par.policy = k % 3 == 0   ? MovementPolicy::GR
                 : k % 3 == 1 ? MovementPolicy::CR
                              : MovementPolicy::DR;
    par.seed = 3000 + static_cast<std::uint64_t>(k);
    Instance inst = generate_instance(par);
    bool good = validate_instance(inst).ok();
    // stock split: warehouses jointly hold the ceiling of the 40% share
    long long want_ware =
        std::min<long long>(par.total_stock,
                            static_cast<long long>(std::ceil(0.4 * (double)par.total_stock)));
    long long got_ware = 0;
    for (int w = 0; w < par.num_warehouses; ++w)
      for (int s = 0; s < inst.num_skus; ++s) got_ware += inst.stock(w, s);
    long long total = 0;
    for (long long v : inst.initial_stock) total += v;
    good = good && got_ware == want_ware && total == par.total_stock;
    ok = ok && good;
    valid += good;
  }
  int partitions = 0;
  Rng rng(777);
  for (int k = 0; k < 10000; ++k) {
    long long total = static_cast<long long>(rng.below(100000));
    std::vector<double> w(1 + rng.below(8));
    for (auto& v : w) v = rng.u01();
    if (w.size() > 1 && rng.below(4) == 0) w[0] = 0;  // zero weights are legal
    double sum = 0;
    for (double v : w) sum += v;
    if (sum <= 0) {
      w[0] = 0.5;
      sum += 0.5;
    }
    std::vector<long long> parts = partition(total, w);
    long long check = 0;
    bool good = true;
    for (std::size_t i = 0; i < w.size(); ++i) {
      double quota = static_cast<double>(total) * (w[i] / sum);
      good = good && parts[i] >= static_cast<long long>(std::floor(quota)) &&
             parts[i] <= static_cast<long long>(std::ceil(quota)) && parts[i] >= 0;
      check += parts[i];
    }
    good = good && check == total;
    ok = ok && good;
    partitions += good;
  }
  line(9, ok,
       strf("generator: %d/1000 instances valid with exact stock split, %d/10000 partitions "
            "within floor/ceil quotas",
            valid, partitions));
}

// ---------------------------------------------------------------------------
// 10. First incumbent: the relaxed model reaches one no later than the full
//     model on at least 8 of 10 medium instances under a 60 s cap.

void criterion10() {
  int wins = 0;
  std::string detail;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    GeneratorParams par = preset_params("medium");
    par.seed = seed;
    Instance inst = generate_instance(par);
    SolverConfig cfg;
    cfg.time_limit = 60;
    MilpOptions opt = milp_options_for(cfg);
    opt.stop_at_first_incumbent = true;
    TransferModel full = build_transfer_model(inst, cfg, false);
    MilpResult t_res = solve_milp(full.model, opt);
    SolverConfig rcfg = cfg;
    rcfg.delta = 0.95;
    TransferModel rt = build_transfer_model(inst, rcfg, true);
    MilpResult r_res = solve_milp(rt.model, opt);
    bool win = r_res.has_incumbent() &&
               (!t_res.has_incumbent() ||
                r_res.first_incumbent_seconds <= t_res.first_incumbent_seconds);
    wins += win;
    detail += strf(" %llu:%s(%.1fs vs %s)", (unsigned long long)seed, win ? "rt" : "T",
                   r_res.first_incumbent_seconds,
                   t_res.has_incumbent() ? strf("%.1fs", t_res.first_incumbent_seconds).c_str()
                                         : "none");
  }
  line(10, wins >= 8, strf("first incumbent under 60 s: relaxed wins %d/10 (need 8):%s", wins,
                           detail.c_str()));
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> want;
  for (int i = 1; i < argc; ++i) want.insert(std::atoi(argv[i]));
  auto run = [&want](int id, void (*fn)()) {
    if (want.empty() || want.count(id)) fn();
  };
  run(1, criterion1);
  run(2, criterion2);
  run(3, criterion3);
  run(4, criterion4);
  run(5, criterion5);
  run(6, criterion6);
  run(7, criterion7);
  run(8, criterion8);
  run(9, criterion9);
  run(10, criterion10);
  if (g_failures == 0)
    std::printf("all criteria passed\n");
  else
    std::printf("%d criteria failed\n", g_failures);
  return g_failures == 0 ? 0 : 1;
}
