#pragma once

#include <chrono>
#include <cmath>
#include <string>

#include "restock/branch_and_bound.hpp"
#include "restock/instance.hpp"
#include "restock/json_io.hpp"
#include "restock/packing.hpp"
#include "restock/rounding.hpp"
#include "restock/solution.hpp"
#include "restock/transfer_model.hpp"

namespace restock {

struct PipelineReport {
  std::string scheme;  // "tp" or "rtrp"
  double delta = 1.0;
  MilpStatus status = MilpStatus::NoSolution;
  bool has_solution = false;

  double milp_objective = kInf;
  double milp_bound = -kInf;
  double milp_gap = kInf;
  long long nodes = 0;
  double first_incumbent_seconds = -1;

  double milp_seconds = 0;
  double rounding_seconds = 0;
  double packing_seconds = 0;

  ObjectiveTerms milp_terms, rounded_terms, packed_terms;
  double milp_packages = 0, rounded_packages = 0, packed_packages = 0;
  int rounding_runs = 0;
  int rounding_best_run = -1;
  std::vector<int> rounding_packages_added;

  // Bracketing of the true (packing-aware) optimum. The relaxed scheme only
  // certifies a lower bound at delta = 1, where RT is a genuine relaxation;
  // tighter capacities can push the RT optimum above the T optimum.
  double lower_bound = -kInf;
  double upper_bound = kInf;

  Solution milp_solution;
  PackedSolution packed;
};

namespace pipeline_detail {

inline double package_count(const Solution& sol) {
  double n = 0;
  for (double v : sol.y) n += v;
  return n;
}

inline double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace pipeline_detail

inline MilpOptions milp_options_for(const SolverConfig& cfg) {
  MilpOptions opt;
  opt.time_limit = cfg.time_limit;
  return opt;
}

inline PipelineReport run_tp(const Instance& inst, const SolverConfig& cfg,
                             const MilpOptions& opt) {
  using pipeline_detail::package_count;
  using pipeline_detail::seconds_since;
  PipelineReport rep;
  rep.scheme = "tp";

  auto t0 = std::chrono::steady_clock::now();
  TransferModel tm = build_transfer_model(inst, cfg, false);
  MilpResult mr = solve_milp(tm.model, opt);
  rep.milp_seconds = seconds_since(t0);
  rep.status = mr.status;
  rep.milp_objective = mr.objective;
  rep.milp_bound = mr.bound;
  rep.milp_gap = mr.gap;
  rep.nodes = mr.nodes;
  rep.first_incumbent_seconds = mr.first_incumbent_seconds;
  rep.lower_bound = mr.bound;
  if (!mr.has_incumbent()) return rep;

  rep.milp_solution = tm.extract(inst, mr.x);
  rep.milp_terms = evaluate_objective(inst, cfg, rep.milp_solution);
  rep.milp_packages = package_count(rep.milp_solution);

  t0 = std::chrono::steady_clock::now();
  rep.packed = pack_all(inst, rep.milp_solution);
  rep.packing_seconds = seconds_since(t0);
  rep.packed_terms = evaluate_objective(inst, cfg, rep.packed.solution);
  rep.packed_packages = package_count(rep.packed.solution);
  rep.upper_bound = rep.packed_terms.total;
  rep.has_solution = true;
  return rep;
}

inline PipelineReport run_rtrp(const Instance& inst, const SolverConfig& cfg,
                               const MilpOptions& opt, const RoundingRunConfig& rcfg) {
  using pipeline_detail::package_count;
  using pipeline_detail::seconds_since;
  PipelineReport rep;
  rep.scheme = "rtrp";
  rep.delta = cfg.delta;

  auto t0 = std::chrono::steady_clock::now();
  TransferModel tm = build_transfer_model(inst, cfg, true);
  MilpResult mr = solve_milp(tm.model, opt);
  rep.milp_seconds = seconds_since(t0);
  rep.status = mr.status;
  rep.milp_objective = mr.objective;
  rep.milp_bound = mr.bound;
  rep.milp_gap = mr.gap;
  rep.nodes = mr.nodes;
  rep.first_incumbent_seconds = mr.first_incumbent_seconds;
  if (cfg.delta == 1.0) rep.lower_bound = mr.bound;
  if (!mr.has_incumbent()) return rep;

  rep.milp_solution = tm.extract(inst, mr.x);
  rep.milp_terms = evaluate_objective(inst, cfg, rep.milp_solution);
  rep.milp_packages = package_count(rep.milp_solution);

  t0 = std::chrono::steady_clock::now();
  RoundingOutcome ro = round_all(inst, cfg, rep.milp_solution, rcfg);
  rep.rounding_seconds = seconds_since(t0);
  rep.rounded_terms = ro.terms;
  rep.rounded_packages = package_count(ro.solution);
  rep.rounding_runs = ro.runs_used;
  rep.rounding_best_run = ro.best_run;
  rep.rounding_packages_added = ro.packages_added;

  t0 = std::chrono::steady_clock::now();
  rep.packed = pack_all(inst, ro.solution);
  rep.packing_seconds = seconds_since(t0);
  rep.packed_terms = evaluate_objective(inst, cfg, rep.packed.solution);
  rep.packed_packages = package_count(rep.packed.solution);
  rep.upper_bound = rep.packed_terms.total;
  rep.has_solution = true;
  return rep;
}

inline PipelineReport run_tp(const Instance& inst, const SolverConfig& cfg) {
  return run_tp(inst, cfg, milp_options_for(cfg));
}

inline PipelineReport run_rtrp(const Instance& inst, const SolverConfig& cfg) {
  RoundingRunConfig rcfg;
  rcfg.rng_seed = cfg.rng_seed;
  return run_rtrp(inst, cfg, milp_options_for(cfg), rcfg);
}

inline const char* to_string(MilpStatus st) {
  switch (st) {
    case MilpStatus::Optimal: return "optimal";
    case MilpStatus::Feasible: return "feasible";
    case MilpStatus::Infeasible: return "infeasible";
    case MilpStatus::Unbounded: return "unbounded";
    default: return "no_solution";
  }
}

inline json terms_to_json(const ObjectiveTerms& t) {
  return {{"transport", t.transport},
          {"shortfall", t.shortfall},
          {"tiebreak", t.tiebreak},
          {"total", t.total}};
}

inline json report_to_json(const Instance& inst, const PipelineReport& rep) {
  json j;
  j["instance"] = inst.name;
  j["scheme"] = rep.scheme;
  if (rep.scheme == "rtrp") j["delta"] = rep.delta;
  j["status"] = to_string(rep.status);
  j["milp"] = {{"objective", rep.milp_objective},
               {"bound", rep.milp_bound},
               {"gap", rep.milp_gap},
               {"nodes", rep.nodes},
               {"seconds", rep.milp_seconds},
               {"first_incumbent_seconds", rep.first_incumbent_seconds}};
  j["seconds"] = {{"milp", rep.milp_seconds},
                  {"rounding", rep.rounding_seconds},
                  {"packing", rep.packing_seconds}};
  if (!rep.has_solution) return j;
  j["phases"] = {{"milp", terms_to_json(rep.milp_terms)},
                 {"packed", terms_to_json(rep.packed_terms)}};
  j["packages"] = {{"milp", rep.milp_packages}, {"packed", rep.packed_packages}};
  if (rep.scheme == "rtrp") {
    j["phases"]["rounded"] = terms_to_json(rep.rounded_terms);
    j["packages"]["rounded"] = rep.rounded_packages;
    j["rounding"] = {{"runs", rep.rounding_runs},
                     {"best_run", rep.rounding_best_run},
                     {"packages_added", rep.rounding_packages_added}};
  }
  j["lower_bound"] = rep.lower_bound;
  j["upper_bound"] = rep.upper_bound;
  return j;
}

}  // namespace restock
