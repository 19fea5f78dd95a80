#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "ava/error.hpp"
#include "ava/exact.hpp"
#include "ava/gap.hpp"
#include "ava/generators.hpp"
#include "ava/genava.hpp"
#include "ava/harness.hpp"
#include "ava/io.hpp"
#include "ava/lp_models.hpp"
#include "ava/rounding.hpp"

using namespace ava;

namespace {

constexpr const char* kSchema = R"(instance JSON:
  { "buyers": [{"id": str, "rho": num, "budgets": {resource: num}?}],
    "items":  [{"id": str, "values": {buyer: num}, "costs": {buyer: num}?,
                "resource_costs": {resource: {buyer: num}}?}],
    "notes": [str]? }
model JSON: the instance schema plus "horizon": int and "prob": num on every item.
numbers may also be strings "p/q".
)";

std::uint64_t default_seed() {
  if (const char* env = std::getenv("AVA_SEED")) return std::stoull(env);
  return 1;
}

// Integral values keep one decimal so "4" prints as "4.0".
std::string format_value(const Rational& r) {
  auto s = to_string(r);
  if (s.find_first_of("./") == std::string::npos) s += ".0";
  return s;
}

std::string format_value(double d) {
  std::ostringstream os;
  os.precision(12);
  os << d;
  auto s = os.str();
  if (s.find_first_of(".e") == std::string::npos) s += ".0";
  return s;
}

void emit(const std::string& path, const Json& j) {
  if (path.empty() || path == "-") {
    std::cout << j.dump(2) << '\n';
  } else {
    save_json(path, j);
  }
}

std::vector<std::size_t> parse_list(const std::string& text) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  for (std::string tok; std::getline(ss, tok, ',');) {
    if (!tok.empty()) out.push_back(std::stoul(tok));
  }
  return out;
}

// "0-1,1-2"
Graph parse_graph(std::size_t vertices, const std::string& text) {
  Graph g{vertices, {}};
  std::stringstream ss(text);
  for (std::string tok; std::getline(ss, tok, ',');) {
    const auto dash = tok.find('-');
    if (dash == std::string::npos) throw Error(ErrorCode::BadParameter, "edge '" + tok + "' is not u-v");
    g.edges.emplace_back(std::stoul(tok.substr(0, dash)), std::stoul(tok.substr(dash + 1)));
  }
  return g;
}

// "0,1;2,3"
SetSystem parse_sets(std::size_t elements, const std::string& text) {
  SetSystem s{elements, {}};
  std::stringstream ss(text);
  for (std::string tok; std::getline(ss, tok, ';');) s.sets.push_back(parse_list(tok));
  return s;
}

Rational lp_value(const LpSolution& sol) {
  if (sol.status != LpStatus::Optimal) throw Error(ErrorCode::Infeasible, std::string("LP is ") + lp_status_name(sol.status));
  return sol.exact ? sol.exact_objective : rational_from_double(sol.objective);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Average-value allocation toolkit"};
  app.require_subcommand(1);
  unsigned threads = 0;
  app.add_option("--threads", threads, "worker threads (0: all cores)");
  std::uint64_t seed = default_seed();

  // gen
  auto* gen = app.add_subcommand("gen", "generate an instance or model");
  std::string family, out_path;
  std::size_t n = 3, k = 3, horizon = 10, items = 6, buyers = 3, resources = 0, vertices = 3, r_mult = 1;
  std::string eps_text = "0.1", graph_text = "0-1,1-2,0-2", sets_text = "0,1;2,3", big_m_text;
  double edge_prob = 0.6, p_fraction = 0.5;
  bool ambiguous = false;
  gen->add_option("family", family,
                  "integrality-gap | supply | tightness | max-coverage | genava-clique | genava-iid | bicriteria | "
                  "iid-lower-bound | adversarial | random | random-model")
      ->required();
  gen->add_option("-o,--output", out_path, "output file (default stdout)");
  gen->add_option("-n", n, "gap family size");
  gen->add_option("-k", k, "supply k, or coverage k");
  gen->add_option("-T,--horizon", horizon, "horizon");
  gen->add_option("--eps", eps_text, "epsilon (decimal or p/q)");
  gen->add_option("--graph", graph_text, "edges u-v,u-v");
  gen->add_option("--vertices", vertices, "vertex count");
  gen->add_option("--M", big_m_text, "explicit M for genava-clique / genava-iid");
  gen->add_option("-R", r_mult, "degree multiplier R");
  gen->add_option("--sets", sets_text, "sets a,b;c,d");
  gen->add_option("--elements", items, "elements (max-coverage) or items (random)");
  gen->add_option("--items", items, "items (random)");
  gen->add_option("--buyers", buyers, "buyers (random)");
  gen->add_option("--edge-prob", edge_prob, "edge probability (random)");
  gen->add_option("--p-fraction", p_fraction, "P probability (random)");
  gen->add_option("--resources", resources, "resources with unit budgets (random)");
  gen->add_flag("--ambiguous", ambiguous, "classify edges independently (random)");
  gen->add_option("--seed", seed, "seed (default $AVA_SEED or 1)");

  // solve
  auto* solve = app.add_subcommand("solve", "run one algorithm on an instance");
  std::string file, algo = "bundle-round";
  double alpha = -1, beta = 0.5;
  solve->add_option("file", file, "instance JSON")->required();
  solve->add_option("--algo", algo, "bundle-round | bundle-round-budgeted | greedy-p | bicriteria | single-buyer");
  solve->add_option("--alpha", alpha, "alpha (default 0.3, budgeted 1/(3K))");
  solve->add_option("--beta", beta, "beta (reporting only)");
  solve->add_option("--eps", eps_text, "bicriteria eps");
  solve->add_option("--seed", seed, "seed");

  // exact
  auto* exact = app.add_subcommand("exact", "exact optimum by enumeration");
  bool bundling_flag = false, gap_flag = false, json_flag = false;
  std::uint64_t max_states = ExactLimits{}.max_states;
  exact->add_option("file", file, "instance JSON")->required();
  exact->add_flag("--bundling", bundling_flag, "optimum over bundling-based allocations");
  exact->add_flag("--gap", gap_flag, "optimum of the exported GAP instance");
  exact->add_flag("--json", json_flag, "print the allocation as JSON");
  exact->add_option("--max-states", max_states, "enumeration limit");

  // online
  auto* online = app.add_subcommand("online", "Monte-Carlo of the online rounding");
  std::string model_file, trace_path;
  std::size_t trials = 1000;
  online->add_option("--model", model_file, "model JSON")->required();
  online->add_option("--alpha", alpha, "alpha (default 0.64)");
  online->add_option("--beta", beta, "beta (reporting only)");
  online->add_option("--trials", trials, "streams");
  online->add_option("--seed", seed, "seed");
  online->add_option("--trace", trace_path, "write the decision trace of stream 0 (JSON lines)");

  // lp
  auto* lp = app.add_subcommand("lp", "solve one of the LP relaxations");
  std::string which = "bundle", export_path, gamma_text = "1";
  lp->add_option("file", file, "instance or model JSON")->required();
  lp->add_option("--which", which, "naive | bundle | budgeted | opton | optoff");
  lp->add_option("--gamma-floor", gamma_text, "Gamma for optoff");
  lp->add_option("--export", export_path, "also write the LP in LP text format");

  // bench
  auto* bench = app.add_subcommand("bench", "run a benchmark suite");
  std::string suite = "paper-examples", csv_path;
  bench->add_option("--suite", suite, "paper-examples | offline | online | budgeted");
  bench->add_option("--trials", trials, "trials per row");
  bench->add_option("--seed", seed, "seed");
  bench->add_option("-o,--output", out_path, "report JSON (default stdout)");
  bench->add_option("--csv", csv_path, "CSV mirror of the rows");

  // export-gap
  auto* export_gap_cmd = app.add_subcommand("export-gap", "write the GAP image of an instance");
  std::string eps_gap_text = "1";
  export_gap_cmd->add_option("file", file, "instance JSON")->required();
  export_gap_cmd->add_option("--eps-gap", eps_gap_text, "extra size of foreign P-items");
  export_gap_cmd->add_option("-o,--output", out_path, "output (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << '\n' << kSchema;
    return 2;
  }

  try {
    if (*gen) {
      const Rational eps = parse_rational(eps_text);
      if (family == "integrality-gap") {
        emit(out_path, instance_to_json(gen_integrality_gap(n, eps)));
      } else if (family == "supply") {
        emit(out_path, instance_to_json(gen_supply_example(k, eps)));
      } else if (family == "tightness") {
        emit(out_path, instance_to_json(gen_tightness_example(eps)));
      } else if (family == "max-coverage") {
        emit(out_path, instance_to_json(gen_max_coverage(parse_sets(items, sets_text), k, eps)));
      } else if (family == "genava-clique") {
        const auto g = parse_graph(vertices, graph_text);
        // eps only sets M = 2|E| / n^eps here; default 1.
        const Rational clique_eps = gen->count("--eps") ? eps : Rational(1);
        emit(out_path, instance_to_json(big_m_text.empty() ? gen_genava_clique(g, clique_eps)
                                                           : gen_genava_clique_with(g, parse_rational(big_m_text), r_mult)));
      } else if (family == "genava-iid") {
        const auto g = parse_graph(vertices, graph_text);
        const Rational big_m = big_m_text.empty() ? Rational(1) : parse_rational(big_m_text);
        emit(out_path, model_to_json(gen_genava_iid(g, big_m, r_mult, eps)));
      } else if (family == "bicriteria") {
        emit(out_path, instance_to_json(gen_bicriteria(parse_graph(vertices, graph_text)).instance));
      } else if (family == "iid-lower-bound") {
        emit(out_path, model_to_json(gen_iid_lower_bound(horizon)));
      } else if (family == "adversarial") {
        emit(out_path, instance_to_json(gen_adversarial_T(horizon, eps).instance));
      } else if (family == "random" || family == "random-model") {
        RandomParams p;
        p.num_items = items;
        p.num_buyers = buyers;
        p.edge_prob = edge_prob;
        p.p_fraction = p_fraction;
        p.unambiguous = !ambiguous;
        p.resources = resources;
        p.seed = seed;
        emit(out_path, family == "random" ? instance_to_json(gen_random(p)) : model_to_json(gen_random_model(p, horizon)));
      } else {
        throw Error(ErrorCode::BadParameter, "unknown family '" + family + "'");
      }
    } else if (*solve) {
      const auto inst = load_instance(file);
      Json out;
      out["algo"] = algo;
      if (algo == "bundle-round" || algo == "bundle-round-budgeted") {
        const bool budgeted = algo == "bundle-round-budgeted";
        if (budgeted && alpha < 0) alpha = default_budgeted_alpha(inst);
        if (alpha < 0) alpha = 0.3;
        const auto x = solve_bundle_lp(budgeted ? build_bundle_lp_budgeted(inst) : build_bundle_lp(inst));
        const RoundingParams params{alpha, beta, seed};
        const auto result = budgeted ? round_offline_budgeted(inst, x, params) : round_offline(inst, x, params);
        out["alpha"] = alpha;
        out["beta"] = beta;
        out["seed"] = seed;
        out["gamma"] = budgeted ? budgeted_guarantee(alpha, inst.num_resources(), to_double(max_bid_ratio(inst)), beta).gamma
                                : gamma_offline(alpha, beta);
        out["lp_value"] = x.objective;
        out["bundling"] = bundling_to_json(inst, result);
      } else if (algo == "greedy-p") {
        out["allocation"] = allocation_to_json(inst, greedy_p_only(inst));
      } else if (algo == "bicriteria") {
        const Rational eps = parse_rational(eps_text);
        const auto alloc = genava_bicriteria_greedy(inst, eps);
        out["allocation"] = allocation_to_json(inst, alloc);
        out["ratio_bound"] = rational_to_json(bicriteria_ratio_bound(eps));
        Json ratios = Json::object();
        const auto measured = cost_value_ratios(inst, alloc);
        for (std::size_t j = 0; j < inst.num_buyers(); ++j) {
          ratios[inst.buyer_id(j)] = measured[j] ? rational_to_json(*measured[j]) : Json(nullptr);
        }
        out["cost_value_ratio"] = ratios;
      } else if (algo == "single-buyer") {
        out["allocation"] = allocation_to_json(inst, genava_single_buyer(inst));
      } else {
        throw Error(ErrorCode::BadParameter, "unknown algorithm '" + algo + "'");
      }
      std::cout << out.dump(2) << '\n';
    } else if (*exact) {
      const auto inst = load_instance(file);
      const ExactLimits limits{max_states};
      if (gap_flag) {
        const auto opt = exact_gap_opt(export_gap(inst));
        std::cout << format_value(opt.value) << '\n';
      } else if (bundling_flag) {
        const auto opt = exact_bundling_opt(inst, limits);
        std::cout << (json_flag ? bundling_to_json(inst, opt.bundling).dump(2) : format_value(opt.value)) << '\n';
      } else {
        const auto opt = exact_opt(inst, limits);
        std::cout << (json_flag ? allocation_to_json(inst, opt.allocation).dump(2) : format_value(opt.value)) << '\n';
      }
    } else if (*online) {
      TrialConfig c;
      c.name = model_file;
      c.kind = TrialKind::Online;
      c.model = load_model(model_file);
      c.alpha = alpha < 0 ? 0.64 : alpha;
      c.beta = beta;
      c.trials = trials;
      c.seed = seed;
      c.threads = threads;
      std::cout << trial_report_to_json(run_trials(c)).dump(2) << '\n';
      if (!trace_path.empty()) {
        const auto x = solve_bundle_lp(build_opton_lp(c.model));
        const auto rng = CounterRng(seed).derive(0);
        const auto result = OnlineRounder(c.model, x).round(sample_stream(c.model, rng.derive(0)), {c.alpha, beta, rng.seed()});
        std::ofstream(trace_path) << trace_to_jsonl(c.model, result);
      }
    } else if (*lp) {
      LinearProgram program;
      if (which == "opton" || which == "optoff") {
        const auto model = load_model(file);
        program = which == "opton" ? build_opton_lp(model).lp : build_optoff_lp(model, parse_rational(gamma_text)).lp;
      } else {
        const auto inst = load_instance(file);
        if (which == "naive") {
          program = build_naive_lp(inst);
        } else if (which == "bundle") {
          program = build_bundle_lp(inst).lp;
        } else if (which == "budgeted") {
          program = build_bundle_lp_budgeted(inst).lp;
        } else {
          throw Error(ErrorCode::BadParameter, "unknown LP '" + which + "'");
        }
      }
      if (!export_path.empty()) std::ofstream(export_path) << to_lp_format(program);
      std::cout << format_value(lp_value(solve_lp(program))) << '\n';
    } else if (*bench) {
      const auto report = run_suite(suite, trials, seed, threads);
      emit(out_path, suite_report_to_json(report));
      if (!csv_path.empty()) std::ofstream(csv_path) << suite_report_to_csv(report);
    } else if (*export_gap_cmd) {
      const auto inst = load_instance(file);
      emit(out_path, gap_to_json(inst, export_gap(inst, parse_rational(eps_gap_text))));
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    if (e.code() == ErrorCode::TooLarge) return 3;
    if (e.code() == ErrorCode::NumericalFailure) return 1;
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
