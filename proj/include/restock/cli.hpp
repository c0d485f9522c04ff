#pragma once

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "restock/bench.hpp"
#include "restock/json_io.hpp"
#include "restock/mps.hpp"
#include "restock/pipeline.hpp"

namespace restock {

namespace cli_detail {

inline MovementPolicy parse_policy(const std::string& s) {
  if (s == "cr") return MovementPolicy::CR;
  if (s == "dr") return MovementPolicy::DR;
  if (s == "gr") return MovementPolicy::GR;
  throw std::invalid_argument("unknown policy (expected cr|dr|gr): " + s);
}

inline SendRule parse_send_rule(const std::string& s) {
  if (s == "excess") return SendRule::ExcessOnly;
  if (s == "stock") return SendRule::UpToStock;
  throw std::invalid_argument("unknown send rule (expected excess|stock): " + s);
}

inline void write_text(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  f << text;
}

inline std::string summary_line(const PipelineReport& rep) {
  std::ostringstream os;
  os << "status=" << to_string(rep.status);
  if (rep.has_solution) {
    os << " objective=" << rep.packed_terms.total << " transport=" << rep.packed_terms.transport
       << " packages=" << rep.packed_packages;
  }
  os << " bound=" << rep.milp_bound << " nodes=" << rep.nodes
     << " milp_seconds=" << rep.milp_seconds << '\n';
  return os.str();
}

}  // namespace cli_detail

// Exit codes: 0 success, 1 usage or input error, 2 no incumbent / infeasible.
inline int run_cli(int argc, const char* const* argv) {
  using cli_detail::write_text;

  CLI::App app{"stock redistribution toolkit"};
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "create a synthetic instance as JSON");
  std::string gen_preset = "small", gen_policy, gen_out;
  std::uint64_t gen_seed = 0;
  int gen_outlets = -1, gen_skus = -1, gen_packs = -1, gen_wares = -1;
  long long gen_stock = -1;
  gen->add_option("--preset", gen_preset, "parameter preset (small|medium|large|desk|g1..g10)");
  gen->add_option("--seed", gen_seed, "generator seed");
  gen->add_option("--outlets", gen_outlets, "override outlet count");
  gen->add_option("--skus", gen_skus, "override SKU count");
  gen->add_option("--package-types", gen_packs, "override package type count");
  gen->add_option("--warehouses", gen_wares, "override warehouse count");
  gen->add_option("--stock", gen_stock, "override total stock");
  gen->add_option("--policy", gen_policy, "movement policy (cr|dr|gr)");
  gen->add_option("--out", gen_out, "output file (stdout if omitted)");

  // solve
  auto* solve = app.add_subcommand("solve", "run a solution scheme on an instance");
  std::string solve_input, solve_scheme = "tp", solve_send = "excess", solve_out, solve_report;
  double solve_delta = 1.0, solve_limit = 300, solve_alpha = 10, solve_eps = 1e-4;
  std::uint64_t solve_seed = 0;
  solve->add_option("input", solve_input, "instance JSON file")->required();
  solve->add_option("--scheme", solve_scheme, "tp or rtrp");
  solve->add_option("--delta", solve_delta, "capacity scaling for rtrp, in (0,1]");
  solve->add_option("--time-limit", solve_limit, "MILP time limit in seconds");
  solve->add_option("--alpha", solve_alpha, "aggressiveness factor");
  solve->add_option("--epsilon", solve_eps, "transfer tie-break weight");
  solve->add_option("--send-rule", solve_send, "excess or stock");
  solve->add_option("--seed", solve_seed, "rounding seed");
  solve->add_option("--out", solve_out, "write final solution JSON here");
  solve->add_option("--report", solve_report, "write full run report JSON here");

  // compare-policies
  auto* pol = app.add_subcommand("compare-policies", "policy sweep over cost scaling factors");
  std::string pol_preset = "small", pol_out;
  int pol_instances = 5;
  double pol_limit = 300;
  std::uint64_t pol_seed = 0;
  std::vector<double> pol_alphas{0, 0.1, 10, 100};
  std::vector<double> pol_factors{0.01, 0.1, 0.25, 0.5, 0.75, 1};
  pol->add_option("--preset", pol_preset, "base instance preset");
  pol->add_option("--instances", pol_instances, "number of base instances");
  pol->add_option("--alphas", pol_alphas, "aggressiveness values")->delimiter(',');
  pol->add_option("--factors", pol_factors, "warehouse cost scaling factors")->delimiter(',');
  pol->add_option("--time-limit", pol_limit, "MILP time limit per solve");
  pol->add_option("--seed", pol_seed, "base seed");
  pol->add_option("--out", pol_out, "output prefix for CSV and SVG files");

  // benchmark
  auto* ben = app.add_subcommand("benchmark", "compare solution schemes on a test set");
  std::string ben_set = "small", ben_send = "excess", ben_out;
  std::vector<std::string> ben_schemes{"tp", "rtrp:0.85", "rtrp:0.9", "rtrp:0.95", "rtrp:1"};
  int ben_instances = 5, ben_jobs = 1;
  double ben_limit = 300, ben_alpha = 10, ben_eps = 1e-4;
  std::uint64_t ben_seed = 0;
  ben->add_option("--set", ben_set, "instance preset");
  ben->add_option("--schemes", ben_schemes, "schemes, e.g. tp,rtrp:0.95")->delimiter(',');
  ben->add_option("--instances", ben_instances, "instances per scheme");
  ben->add_option("--time-limit", ben_limit, "MILP time limit per solve");
  ben->add_option("--alpha", ben_alpha, "aggressiveness factor");
  ben->add_option("--epsilon", ben_eps, "transfer tie-break weight");
  ben->add_option("--send-rule", ben_send, "excess or stock");
  ben->add_option("--seed", ben_seed, "base seed");
  ben->add_option("--jobs", ben_jobs, "parallel workers");
  ben->add_option("--out", ben_out, "output prefix for CSV and SVG files");

  // export
  auto* exp = app.add_subcommand("export", "write a model file for an instance");
  std::string exp_input, exp_format = "mps", exp_scheme = "tp", exp_send = "excess", exp_out;
  double exp_delta = 1.0, exp_alpha = 10, exp_eps = 1e-4;
  exp->add_option("input", exp_input, "instance JSON file")->required();
  exp->add_option("--format", exp_format, "output format (mps)");
  exp->add_option("--scheme", exp_scheme, "tp or rtrp");
  exp->add_option("--delta", exp_delta, "capacity scaling for rtrp");
  exp->add_option("--alpha", exp_alpha, "aggressiveness factor");
  exp->add_option("--epsilon", exp_eps, "transfer tie-break weight");
  exp->add_option("--send-rule", exp_send, "excess or stock");
  exp->add_option("--out", exp_out, "output file (stdout if omitted)");

  // pack
  auto* pack = app.add_subcommand("pack", "pack a solution's transfers into packages");
  std::string pack_input, pack_instance, pack_out;
  int pack_threshold = 30;
  pack->add_option("input", pack_input, "solution JSON file")->required();
  pack->add_option("--instance", pack_instance, "instance JSON file")->required();
  pack->add_option("--exact-threshold", pack_threshold, "max units for exact packing");
  pack->add_option("--out", pack_out, "manifest output file (stdout if omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*gen) {
      GeneratorParams par = preset_params(gen_preset);
      if (gen_outlets >= 0) par.num_outlets = gen_outlets;
      if (gen_skus >= 0) par.num_skus = gen_skus;
      if (gen_packs >= 0) par.num_package_types = gen_packs;
      if (gen_wares >= 0) par.num_warehouses = gen_wares;
      if (gen_stock >= 0) par.total_stock = gen_stock;
      if (!gen_policy.empty()) par.policy = cli_detail::parse_policy(gen_policy);
      par.seed = gen_seed;
      Instance inst = generate_instance(par);
      write_text(gen_out, instance_to_json(inst).dump(2) + "\n");
      return 0;
    }

    if (*solve) {
      if (solve_scheme != "tp" && solve_scheme != "rtrp")
        throw std::invalid_argument("unknown scheme (expected tp|rtrp): " + solve_scheme);
      if (solve_delta <= 0 || solve_delta > 1)
        throw std::invalid_argument("--delta must lie in (0,1]");
      Instance inst = instance_from_json(load_json(solve_input));
      SolverConfig cfg;
      cfg.alpha = solve_alpha;
      cfg.epsilon = solve_eps;
      cfg.delta = solve_delta;
      cfg.send_rule = cli_detail::parse_send_rule(solve_send);
      cfg.time_limit = solve_limit;
      cfg.rng_seed = solve_seed;
      PipelineReport rep = solve_scheme == "tp" ? run_tp(inst, cfg) : run_rtrp(inst, cfg);
      std::cout << cli_detail::summary_line(rep);
      if (!solve_report.empty())
        write_text(solve_report, report_to_json(inst, rep).dump(2) + "\n");
      if (rep.has_solution && !solve_out.empty()) {
        const Solution& sol = rep.packed.solution;
        ObjectiveTerms terms = evaluate_objective(inst, cfg, sol);
        write_text(solve_out, solution_to_json(inst, sol, terms).dump(2) + "\n");
      }
      return rep.has_solution ? 0 : 2;
    }

    if (*pol) {
      GeneratorParams par = preset_params(pol_preset);
      if (pol_instances < 1) throw std::invalid_argument("--instances must be positive");
      MilpOptions limits;
      limits.time_limit = pol_limit;
      PolicySweepResult res =
          compare_policies(par, pol_instances, pol_alphas, pol_factors, limits, pol_seed);
      std::ostringstream table;
      table << "factor,policy,avg_worsening,avg_transport_worsening,counted,excluded\n";
      for (const PolicyAggregate& a : res.aggregates)
        table << a.factor << ',' << to_string(a.policy) << ',' << a.avg_worsening << ','
              << a.avg_transport_worsening << ',' << a.counted << ',' << a.excluded << '\n';
      std::cout << table.str();
      if (!pol_out.empty()) {
        std::ostringstream csv, svg_total, svg_tr;
        write_policy_csv(res, csv);
        write_text(pol_out + ".csv", csv.str());
        write_policy_svg(res, false, svg_total);
        write_text(pol_out + "_total.svg", svg_total.str());
        write_policy_svg(res, true, svg_tr);
        write_text(pol_out + "_transport.svg", svg_tr.str());
      }
      return 0;
    }

    if (*ben) {
      GeneratorParams par = preset_params(ben_set);
      if (ben_instances < 1) throw std::invalid_argument("--instances must be positive");
      if (ben_jobs < 1) throw std::invalid_argument("--jobs must be positive");
      std::vector<SchemeSpec> schemes;
      for (const std::string& s : ben_schemes) schemes.push_back(parse_scheme(s));
      if (schemes.empty()) throw std::invalid_argument("no schemes given");
      SolverConfig cfg;
      cfg.alpha = ben_alpha;
      cfg.epsilon = ben_eps;
      cfg.send_rule = cli_detail::parse_send_rule(ben_send);
      cfg.time_limit = ben_limit;
      MilpOptions limits;
      limits.time_limit = ben_limit;
      BenchmarkResult res =
          run_benchmark(par, ben_instances, schemes, cfg, limits, ben_seed, ben_jobs);
      std::ostringstream table;
      write_phase_table(res, table);
      std::cout << table.str();
      if (!ben_out.empty()) {
        std::ostringstream csv;
        write_benchmark_csv(res, csv);
        write_text(ben_out + ".csv", csv.str());
        // profile over packed totals, restricted to instances every scheme solved
        std::vector<char> usable(res.n_instances, 1);
        for (const BenchmarkRun& run : res.runs)
          if (!run.report.has_solution || !(run.report.packed_terms.total > 0))
            usable[run.instance_id] = 0;
        std::vector<std::string> labels;
        std::vector<std::vector<double>> values(schemes.size());
        for (const SchemeSpec& s : schemes) labels.push_back(s.label);
        for (const BenchmarkRun& run : res.runs) {
          if (!usable[run.instance_id]) continue;
          std::size_t q = 0;
          while (schemes[q].label != run.scheme.label) ++q;
          values[q].push_back(run.report.packed_terms.total);
        }
        if (!values[0].empty()) {
          std::ostringstream svg;
          write_profile_svg(performance_profile(labels, values), svg);
          write_text(ben_out + "_profile.svg", svg.str());
        }
      }
      return 0;
    }

    if (*exp) {
      if (exp_format != "mps")
        throw std::invalid_argument("unknown format (expected mps): " + exp_format);
      if (exp_scheme != "tp" && exp_scheme != "rtrp")
        throw std::invalid_argument("unknown scheme (expected tp|rtrp): " + exp_scheme);
      if (exp_delta <= 0 || exp_delta > 1)
        throw std::invalid_argument("--delta must lie in (0,1]");
      Instance inst = instance_from_json(load_json(exp_input));
      SolverConfig cfg;
      cfg.alpha = exp_alpha;
      cfg.epsilon = exp_eps;
      cfg.delta = exp_delta;
      cfg.send_rule = cli_detail::parse_send_rule(exp_send);
      TransferModel tm = build_transfer_model(inst, cfg, exp_scheme == "rtrp");
      std::ostringstream os;
      export_model(tm.model, os);
      write_text(exp_out, os.str());
      return 0;
    }

    if (*pack) {
      if (pack_threshold < 0) throw std::invalid_argument("--exact-threshold must be nonnegative");
      Instance inst = instance_from_json(load_json(pack_instance));
      Solution sol = solution_from_json(inst, load_json(pack_input));
      PackedSolution packed = pack_all(inst, sol, pack_threshold);
      write_text(pack_out, manifest_to_json(packed).dump(2) + "\n");
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

inline int run_cli(const std::vector<std::string>& args) {
  std::vector<const char*> argv;
  argv.push_back("restock");
  for (const std::string& a : args) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

}  // namespace restock
