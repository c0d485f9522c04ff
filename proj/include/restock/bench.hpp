#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <iomanip>
#include <mutex>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "restock/generator.hpp"
#include "restock/pipeline.hpp"

namespace restock {

namespace bench_detail {

// Run fn(k) for k in [0, n) on up to `jobs` threads. Work items write to
// disjoint slots, so merging is deterministic regardless of scheduling.
template <typename Fn>
void parallel_for(int n, int jobs, Fn&& fn) {
  jobs = std::max(1, std::min(jobs, n));
  if (jobs == 1) {
    for (int k = 0; k < n; ++k) fn(k);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (int t = 0; t < jobs; ++t)
    pool.emplace_back([&] {
      for (int k = next.fetch_add(1); k < n; k = next.fetch_add(1)) {
        try {
          fn(k);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
        }
      }
    });
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

inline std::string num(double v, int digits = 6) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

}  // namespace bench_detail

// ---------------------------------------------------------------------------
// Policy comparison

// The sweep solves every variation of every base instance; policies other
// than GR are obtained by restricting the GR movement set, so their optima
// can never beat GR's.

struct PolicyRun {
  int instance_id = 0;
  double alpha = 0;
  double factor = 1;
  MovementPolicy policy = MovementPolicy::GR;
  MilpStatus status = MilpStatus::NoSolution;
  bool proven_optimal = false;
  double total = kInf;
  double transport = kInf;
};

struct PolicyAggregate {
  double factor = 1;
  MovementPolicy policy = MovementPolicy::GR;
  double avg_worsening = 0;
  double avg_transport_worsening = 0;
  int counted = 0;
  int excluded = 0;
};

struct PolicySweepResult {
  std::vector<PolicyRun> runs;
  std::vector<PolicyAggregate> aggregates;
};

inline Instance restrict_to_policy(const Instance& base, MovementPolicy policy) {
  Instance inst = base;
  inst.movements = movements_for_policy(base.num_facilities, base.warehouses, policy);
  inst.cost.resize(inst.movements.size() * static_cast<std::size_t>(base.num_package_types));
  for (std::size_t a = 0; a < inst.movements.size(); ++a) {
    auto [i, j] = inst.movements[a];
    int src = base.arc(i, j);
    if (src < 0) throw std::invalid_argument("base instance does not cover the requested policy");
    for (int p = 0; p < base.num_package_types; ++p)
      inst.cost[a * static_cast<std::size_t>(base.num_package_types) + p] = base.arc_cost(src, p);
  }
  inst.name = base.name + "_" + to_string(policy);
  inst.finalize();
  return inst;
}

inline Instance scale_warehouse_costs(const Instance& base, double factor) {
  Instance inst = base;
  for (int a = 0; a < inst.num_movements(); ++a) {
    auto [i, j] = inst.movements[a];
    if (!inst.is_warehouse(i) && !inst.is_warehouse(j)) continue;
    for (int p = 0; p < inst.num_package_types; ++p)
      inst.cost[static_cast<std::size_t>(a) * inst.num_package_types + p] *= factor;
  }
  return inst;
}

inline PolicySweepResult compare_policies(const GeneratorParams& base_params, int n_instances,
                                          const std::vector<double>& alphas,
                                          const std::vector<double>& factors,
                                          const MilpOptions& limits, std::uint64_t seed,
                                          int jobs = 1) {
  const MovementPolicy policies[3] = {MovementPolicy::CR, MovementPolicy::DR, MovementPolicy::GR};
  std::vector<Instance> bases;
  for (int k = 0; k < n_instances; ++k) {
    GeneratorParams par = base_params;
    par.policy = MovementPolicy::GR;
    par.seed = seed + static_cast<std::uint64_t>(k);
    bases.push_back(generate_instance(par));
  }

  struct Task {
    int instance_id;
    double alpha, factor;
    MovementPolicy policy;
  };
  std::vector<Task> tasks;
  for (int k = 0; k < n_instances; ++k)
    for (double alpha : alphas)
      for (double factor : factors)
        for (MovementPolicy policy : policies) tasks.push_back({k, alpha, factor, policy});

  PolicySweepResult result;
  result.runs.resize(tasks.size());
  bench_detail::parallel_for(static_cast<int>(tasks.size()), jobs, [&](int t) {
    const Task& task = tasks[t];
    Instance inst = scale_warehouse_costs(bases[task.instance_id], task.factor);
    inst = restrict_to_policy(inst, task.policy);
    SolverConfig cfg;
    cfg.alpha = task.alpha;
    PolicyRun run;
    run.instance_id = task.instance_id;
    run.alpha = task.alpha;
    run.factor = task.factor;
    run.policy = task.policy;
    TransferModel tm = build_transfer_model(inst, cfg, false);
    MilpResult mr = solve_milp(tm.model, limits);
    run.status = mr.status;
    run.proven_optimal = mr.status == MilpStatus::Optimal;
    if (mr.has_incumbent()) {
      Solution sol = tm.extract(inst, mr.x);
      ObjectiveTerms terms = evaluate_objective(inst, cfg, sol);
      run.total = terms.total;
      run.transport = terms.transport;
    }
    result.runs[t] = run;
  });

  // aggregate: a tuple enters only when all three policies produced incumbents
  const std::size_t NA = alphas.size(), NF = factors.size();
  auto run_at = [&](int k, std::size_t ai, std::size_t fi, int pi) -> const PolicyRun& {
    return result.runs[((static_cast<std::size_t>(k) * NA + ai) * NF + fi) * 3 + pi];
  };
  for (std::size_t fi = 0; fi < NF; ++fi)
    for (int pi = 0; pi < 3; ++pi) {
      PolicyAggregate agg;
      agg.factor = factors[fi];
      agg.policy = policies[pi];
      double sum = 0, sum_tr = 0;
      int n_tr = 0;
      for (int k = 0; k < n_instances; ++k)
        for (std::size_t ai = 0; ai < NA; ++ai) {
          double best = kInf, best_tr = kInf;
          bool all = true;
          for (int z = 0; z < 3; ++z) {
            const PolicyRun& run = run_at(k, ai, fi, z);
            if (run.total == kInf) all = false;
            best = std::min(best, run.total);
            best_tr = std::min(best_tr, run.transport);
          }
          const PolicyRun& mine = run_at(k, ai, fi, pi);
          if (!all) {
            ++agg.excluded;
            continue;
          }
          if (best > 1e-12) {
            sum += (mine.total - best) / best;
            ++agg.counted;
          } else {
            ++agg.excluded;
          }
          if (best_tr > 1e-12) {
            sum_tr += (mine.transport - best_tr) / best_tr;
            ++n_tr;
          }
        }
      agg.avg_worsening = agg.counted ? sum / agg.counted : 0;
      agg.avg_transport_worsening = n_tr ? sum_tr / n_tr : 0;
      result.aggregates.push_back(agg);
    }
  return result;
}

// ---------------------------------------------------------------------------
// Performance profiles

struct ProfileCurve {
  std::string label;
  std::vector<std::pair<double, double>> points;  // (tau, fraction at or below)
};

inline std::vector<ProfileCurve> performance_profile(const std::vector<std::string>& labels,
                                                     const std::vector<std::vector<double>>& values) {
  const int C = static_cast<int>(values.size());
  if (C == 0) return {};
  const std::size_t N = values[0].size();
  for (const auto& row : values) {
    if (row.size() != N) throw std::invalid_argument("performance_profile: ragged matrix");
    for (double v : row)
      if (!(v > 0)) throw std::invalid_argument("performance_profile: nonpositive value");
  }

  std::vector<std::vector<double>> ratio(C, std::vector<double>(N));
  std::set<double> grid{1.0};
  for (std::size_t i = 0; i < N; ++i) {
    double best = kInf;
    for (int c = 0; c < C; ++c) best = std::min(best, values[c][i]);
    for (int c = 0; c < C; ++c) {
      ratio[c][i] = values[c][i] / best;
      grid.insert(ratio[c][i]);
    }
  }

  std::vector<ProfileCurve> curves(C);
  for (int c = 0; c < C; ++c) {
    curves[c].label = c < static_cast<int>(labels.size()) ? labels[c] : "config " + std::to_string(c);
    for (double tau : grid) {
      std::size_t hit = 0;
      for (double r : ratio[c])
        if (r <= tau) ++hit;
      curves[c].points.emplace_back(tau, static_cast<double>(hit) / static_cast<double>(N));
    }
  }
  return curves;
}

// ---------------------------------------------------------------------------
// Scheme benchmark

struct SchemeSpec {
  bool relaxed = false;
  double delta = 1.0;
  std::string label = "tp";
};

inline SchemeSpec parse_scheme(const std::string& text) {
  SchemeSpec spec;
  spec.label = text;
  if (text == "tp") return spec;
  if (text == "rtrp" || text.rfind("rtrp:", 0) == 0) {
    spec.relaxed = true;
    if (text.size() > 5) spec.delta = std::stod(text.substr(5));
    if (spec.delta <= 0 || spec.delta > 1)
      throw std::invalid_argument("scheme delta out of (0,1]: " + text);
    return spec;
  }
  throw std::invalid_argument("unknown scheme: " + text);
}

struct BenchmarkRun {
  int instance_id = 0;
  std::string instance;
  SchemeSpec scheme;
  PipelineReport report;
};

struct BenchmarkResult {
  std::vector<SchemeSpec> schemes;
  int n_instances = 0;
  std::vector<BenchmarkRun> runs;  // instance-major, scheme order preserved
};

inline BenchmarkResult run_benchmark(const GeneratorParams& params, int n_instances,
                                     const std::vector<SchemeSpec>& schemes,
                                     const SolverConfig& base_cfg, const MilpOptions& limits,
                                     std::uint64_t seed, int jobs = 1) {
  BenchmarkResult result;
  result.schemes = schemes;
  result.n_instances = n_instances;
  result.runs.resize(static_cast<std::size_t>(n_instances) * schemes.size());
  bench_detail::parallel_for(n_instances, jobs, [&](int k) {
    GeneratorParams par = params;
    par.seed = seed + static_cast<std::uint64_t>(k);
    Instance inst = generate_instance(par);
    for (std::size_t q = 0; q < schemes.size(); ++q) {
      const SchemeSpec& scheme = schemes[q];
      SolverConfig cfg = base_cfg;
      cfg.delta = scheme.delta;
      cfg.rng_seed = par.seed;
      BenchmarkRun& slot = result.runs[static_cast<std::size_t>(k) * schemes.size() + q];
      slot.instance_id = k;
      slot.instance = inst.name;
      slot.scheme = scheme;
      if (scheme.relaxed) {
        RoundingRunConfig rcfg;
        rcfg.rng_seed = cfg.rng_seed;
        slot.report = run_rtrp(inst, cfg, limits, rcfg);
      } else {
        slot.report = run_tp(inst, cfg, limits);
      }
    }
  });
  return result;
}

// ---------------------------------------------------------------------------
// CSV emitters: per-run rows are the source of truth for every table below.

inline void write_benchmark_csv(const BenchmarkResult& result, std::ostream& os) {
  os << "instance,scheme,delta,status,objective,bound,gap,nodes,"
        "milp_seconds,rounding_seconds,packing_seconds,first_incumbent_seconds,"
        "packages_milp,packages_rounded,packages_packed,"
        "transport_milp,transport_rounded,transport_packed,total_packed,"
        "lower_bound,upper_bound\n";
  using bench_detail::num;
  for (const BenchmarkRun& run : result.runs) {
    const PipelineReport& r = run.report;
    bool tp = !run.scheme.relaxed;
    os << run.instance << ',' << run.scheme.label << ',' << num(run.scheme.delta) << ','
       << to_string(r.status) << ',' << num(r.milp_objective, 12) << ',' << num(r.milp_bound, 12)
       << ',' << num(r.milp_gap) << ',' << r.nodes << ',' << num(r.milp_seconds) << ','
       << num(r.rounding_seconds) << ',' << num(r.packing_seconds) << ','
       << num(r.first_incumbent_seconds) << ',' << num(r.milp_packages) << ','
       << num(tp ? r.milp_packages : r.rounded_packages) << ',' << num(r.packed_packages) << ','
       << num(r.milp_terms.transport, 12) << ','
       << num(tp ? r.milp_terms.transport : r.rounded_terms.transport, 12) << ','
       << num(r.packed_terms.transport, 12) << ',' << num(r.packed_terms.total, 12) << ','
       << num(r.lower_bound, 12) << ',' << num(r.upper_bound, 12) << '\n';
  }
}

inline void write_policy_csv(const PolicySweepResult& result, std::ostream& os) {
  using bench_detail::num;
  os << "instance_id,alpha,factor,policy,status,proven_optimal,total,transport\n";
  for (const PolicyRun& run : result.runs)
    os << run.instance_id << ',' << num(run.alpha) << ',' << num(run.factor) << ','
       << to_string(run.policy) << ',' << to_string(run.status) << ',' << run.proven_optimal << ','
       << num(run.total, 12) << ',' << num(run.transport, 12) << '\n';
  os << "\nfactor,policy,avg_worsening,avg_transport_worsening,counted,excluded\n";
  for (const PolicyAggregate& agg : result.aggregates)
    os << num(agg.factor) << ',' << to_string(agg.policy) << ',' << num(agg.avg_worsening, 12)
       << ',' << num(agg.avg_transport_worsening, 12) << ',' << agg.counted << ',' << agg.excluded
       << '\n';
}

// ---------------------------------------------------------------------------
// Phase accounting table: average package counts and normalized transport
// costs per phase, schemes across the columns. Instances enter only when
// every scheme produced a solution on them.

inline void write_phase_table(const BenchmarkResult& result, std::ostream& os) {
  const std::size_t C = result.schemes.size();
  std::vector<char> usable(result.n_instances, 1);
  for (const BenchmarkRun& run : result.runs)
    if (!run.report.has_solution) usable[run.instance_id] = 0;
  int n = 0;
  for (char u : usable) n += u;

  // per scheme, phases T/RT -> R -> P
  std::vector<std::array<double, 3>> packages(C, {0, 0, 0}), transport(C, {0, 0, 0});
  for (const BenchmarkRun& run : result.runs) {
    if (!usable[run.instance_id]) continue;
    std::size_t q = 0;
    while (result.schemes[q].label != run.scheme.label) ++q;
    const PipelineReport& r = run.report;
    bool tp = !run.scheme.relaxed;
    packages[q][0] += r.milp_packages;
    packages[q][1] += tp ? r.milp_packages : r.rounded_packages;
    packages[q][2] += r.packed_packages;
    transport[q][0] += r.milp_terms.transport;
    transport[q][1] += tp ? r.milp_terms.transport : r.rounded_terms.transport;
    transport[q][2] += r.packed_terms.transport;
  }
  if (n > 0)
    for (std::size_t q = 0; q < C; ++q)
      for (int ph = 0; ph < 3; ++ph) {
        packages[q][ph] /= n;
        transport[q][ph] /= n;
      }

  const char* phase_names[3] = {"T/RT", "R", "P"};
  auto cell = [](double shown, bool with_delta, double pct) {
    char buf[64];
    if (!with_delta)
      std::snprintf(buf, sizeof buf, "%.2f", shown);
    else
      std::snprintf(buf, sizeof buf, "%.2f (%.2f%%)", shown, pct);
    return std::string(buf);
  };
  auto block = [&](const char* title, const std::vector<std::array<double, 3>>& raw,
                   bool normalize) {
    os << title << " (averages over " << n << " instances)\n";
    os << std::left << std::setw(8) << "phase";
    for (const SchemeSpec& s : result.schemes) os << std::setw(20) << s.label;
    os << '\n';
    for (int ph = 0; ph < 3; ++ph) {
      double row_min = kInf;
      for (std::size_t q = 0; q < C; ++q) row_min = std::min(row_min, raw[q][ph]);
      os << std::setw(8) << phase_names[ph];
      for (std::size_t q = 0; q < C; ++q) {
        double shown = normalize && row_min > 0 ? raw[q][ph] / row_min : raw[q][ph];
        double prev = ph > 0 ? raw[q][ph - 1] : 0;
        double pct = prev != 0 ? (raw[q][ph] - prev) / prev * 100.0 : 0.0;
        os << std::setw(20) << cell(shown, ph > 0, pct);
      }
      os << '\n';
    }
    os << '\n';
  };
  block("Packages", packages, false);
  block("Transport cost (row-normalized)", transport, true);
}

// Solved-percentage table: rows are (time limit, method) pairs, columns are
// instance groups.
inline void write_solved_table(const std::vector<std::string>& row_labels,
                               const std::vector<std::string>& col_labels,
                               const std::vector<std::vector<double>>& pct, std::ostream& os) {
  os << std::left << std::setw(18) << "limit/method";
  for (const auto& c : col_labels) os << std::setw(8) << c;
  os << '\n';
  for (std::size_t r = 0; r < row_labels.size(); ++r) {
    os << std::setw(18) << row_labels[r];
    for (double v : pct[r]) {
      char buf[16];
      std::snprintf(buf, sizeof buf, "%.0f", v);
      os << std::setw(8) << buf;
    }
    os << '\n';
  }
}

// ---------------------------------------------------------------------------
// Minimal SVG line/step charts; no plotting dependency.

struct ChartSeries {
  std::string label;
  std::vector<std::pair<double, double>> points;
};

inline void write_svg_chart(const std::string& title, const std::string& x_label,
                            const std::string& y_label, const std::vector<ChartSeries>& series,
                            bool log_x, bool step, std::ostream& os) {
  const double W = 720, H = 480, L = 70, R = 24, T = 44, B = 56;
  double x_min = kInf, x_max = -kInf, y_min = kInf, y_max = -kInf;
  for (const auto& s : series)
    for (auto [x, y] : s.points) {
      double xv = log_x ? std::log10(x) : x;
      x_min = std::min(x_min, xv);
      x_max = std::max(x_max, xv);
      y_min = std::min(y_min, y);
      y_max = std::max(y_max, y);
    }
  if (!(x_min < x_max)) x_max = x_min + 1;
  if (!(y_min < y_max)) y_max = y_min + 1;
  double pad = (y_max - y_min) * 0.05;
  y_min -= pad;
  y_max += pad;
  auto sx = [&](double x) {
    double xv = log_x ? std::log10(x) : x;
    return L + (xv - x_min) / (x_max - x_min) * (W - L - R);
  };
  auto sy = [&](double y) { return H - B - (y - y_min) / (y_max - y_min) * (H - T - B); };
  auto esc = [](const std::string& s) {
    std::string out;
    for (char c : s) {
      if (c == '&') out += "&amp;";
      else if (c == '<') out += "&lt;";
      else if (c == '>') out += "&gt;";
      else out += c;
    }
    return out;
  };
  const char* colors[] = {"#21618c", "#b03a2e", "#1e8449", "#7d3c98", "#b9770e", "#5d6d7e"};

  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << W << ' ' << H << "\">\n";
  os << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
  os << "<text x=\"" << W / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\" "
        "font-family=\"sans-serif\">"
     << esc(title) << "</text>\n";
  // axes with 5 ticks each
  for (int k = 0; k <= 4; ++k) {
    double fx = x_min + (x_max - x_min) * k / 4.0;
    double px = L + (W - L - R) * k / 4.0;
    double vy = y_min + (y_max - y_min) * k / 4.0;
    double py = sy(vy);
    os << "<line x1=\"" << px << "\" y1=\"" << T << "\" x2=\"" << px << "\" y2=\"" << H - B
       << "\" stroke=\"#dddddd\"/>\n";
    os << "<line x1=\"" << L << "\" y1=\"" << py << "\" x2=\"" << W - R << "\" y2=\"" << py
       << "\" stroke=\"#dddddd\"/>\n";
    os << "<text x=\"" << px << "\" y=\"" << H - B + 18
       << "\" text-anchor=\"middle\" font-size=\"11\" font-family=\"sans-serif\">"
       << bench_detail::num(log_x ? std::pow(10.0, fx) : fx, 3) << "</text>\n";
    os << "<text x=\"" << L - 8 << "\" y=\"" << py + 4
       << "\" text-anchor=\"end\" font-size=\"11\" font-family=\"sans-serif\">"
       << bench_detail::num(vy, 3) << "</text>\n";
  }
  os << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R << "\" y2=\"" << H - B
     << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << H - B
     << "\" stroke=\"black\"/>\n";
  os << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 12
     << "\" text-anchor=\"middle\" font-size=\"13\" font-family=\"sans-serif\">" << esc(x_label)
     << "</text>\n";
  os << "<text x=\"18\" y=\"" << (T + H - B) / 2
     << "\" text-anchor=\"middle\" font-size=\"13\" font-family=\"sans-serif\" "
        "transform=\"rotate(-90 18 "
     << (T + H - B) / 2 << ")\">" << esc(y_label) << "</text>\n";

  for (std::size_t c = 0; c < series.size(); ++c) {
    const auto& pts = series[c].points;
    if (pts.empty()) continue;
    os << "<polyline fill=\"none\" stroke=\"" << colors[c % 6] << "\" stroke-width=\"2\" points=\"";
    for (std::size_t k = 0; k < pts.size(); ++k) {
      if (step && k > 0) os << sx(pts[k].first) << ',' << sy(pts[k - 1].second) << ' ';
      os << sx(pts[k].first) << ',' << sy(pts[k].second) << ' ';
    }
    os << "\"/>\n";
    double ly = T + 16 + 16 * static_cast<double>(c);
    os << "<line x1=\"" << W - R - 150 << "\" y1=\"" << ly << "\" x2=\"" << W - R - 126
       << "\" y2=\"" << ly << "\" stroke=\"" << colors[c % 6] << "\" stroke-width=\"2\"/>\n";
    os << "<text x=\"" << W - R - 120 << "\" y=\"" << ly + 4
       << "\" font-size=\"12\" font-family=\"sans-serif\">" << esc(series[c].label) << "</text>\n";
  }
  os << "</svg>\n";
}

inline void write_profile_svg(const std::vector<ProfileCurve>& curves, std::ostream& os) {
  std::vector<ChartSeries> series;
  for (const auto& c : curves) series.push_back({c.label, c.points});
  write_svg_chart("Performance profile", "ratio to best", "fraction of instances", series, false,
                  true, os);
}

inline void write_policy_svg(const PolicySweepResult& result, bool transport, std::ostream& os) {
  std::vector<ChartSeries> series(3);
  const MovementPolicy policies[3] = {MovementPolicy::CR, MovementPolicy::DR, MovementPolicy::GR};
  for (int c = 0; c < 3; ++c) {
    series[c].label = to_string(policies[c]);
    for (const PolicyAggregate& agg : result.aggregates)
      if (agg.policy == policies[c])
        series[c].points.emplace_back(agg.factor, transport ? agg.avg_transport_worsening
                                                            : agg.avg_worsening);
    std::sort(series[c].points.begin(), series[c].points.end());
  }
  write_svg_chart(transport ? "Average transport-cost worsening vs best policy"
                            : "Average worsening vs best policy",
                  "warehouse cost scaling factor", "average relative worsening", series, true,
                  false, os);
}

}  // namespace restock
