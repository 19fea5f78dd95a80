#include "ava/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <sstream>
#include <thread>

#include "ava/error.hpp"
#include "ava/exact.hpp"
#include "ava/gap.hpp"
#include "ava/generators.hpp"

namespace ava {

const char* trial_kind_name(TrialKind kind) {
  switch (kind) {
    case TrialKind::Offline: return "bundle-round";
    case TrialKind::OfflineBudgeted: return "bundle-round-budgeted";
    case TrialKind::Online: return "online";
  }
  return "unknown";
}

TrialStats summarize(const std::vector<double>& values) {
  TrialStats s;
  s.trials = values.size();
  if (values.empty()) return s;
  double sum = 0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(values.size());
  double sq = 0;
  for (double v : values) sq += (v - s.mean) * (v - s.mean);
  s.sd = values.size() > 1 ? std::sqrt(sq / static_cast<double>(values.size() - 1)) : 0.0;
  const double half = 1.96 * s.sd / std::sqrt(static_cast<double>(values.size()));
  s.ci_low = s.mean - half;
  s.ci_high = s.mean + half;
  s.min = *std::min_element(values.begin(), values.end());
  return s;
}

bool online_prefix_feasible(const IidModel& model, const OnlineResult& result) {
  std::vector<Rational> slack(model.types.num_buyers());
  for (const auto& rec : result.trace) {
    if (!rec.buyer) continue;
    slack[*rec.buyer] += model.types.excess(rec.type, *rec.buyer);
    if (slack[*rec.buyer] < 0) return false;
  }
  return true;
}

Rational max_bid_ratio(const Instance& inst) {
  Rational worst = 0;
  for (std::size_t r = 0; r < inst.num_resources(); ++r) {
    for (std::size_t j = 0; j < inst.num_buyers(); ++j) {
      const auto& b = inst.budget(j, r);
      if (!b) continue;
      for (std::size_t i = 0; i < inst.num_items(); ++i) {
        if (inst.has_edge(i, j)) worst = std::max(worst, Rational(inst.resource_cost(i, j, r) / *b));
      }
    }
  }
  return worst;
}

namespace {

struct TrialOutcome {
  double value = 0;
  bool feasible = false;
  std::vector<std::size_t> opened;  // bundle indices, one per opened copy
  std::exception_ptr error;
};

template <class Fn>
std::vector<TrialOutcome> parallel_trials(std::size_t trials, unsigned threads, Fn fn) {
  std::vector<TrialOutcome> out(trials);
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(trials, 1)));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k; (k = next.fetch_add(1)) < trials;) {
      try {
        out[k] = fn(k);
      } catch (...) {
        out[k].error = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < threads; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const auto& o : out) {
    if (o.error) std::rethrow_exception(o.error);
  }
  return out;
}

std::size_t bundle_index(const BundleLayout& layout, std::size_t p, std::size_t buyer) {
  for (auto b : layout.bundles_of_head(p)) {
    if (layout.bundles()[b].buyer == buyer) return b;
  }
  throw Error(ErrorCode::InvalidBundling, "opened bundle is not in the LP layout");
}

}  // namespace

TrialReport run_trials(const TrialConfig& config) {
  TrialReport report;
  report.name = config.name;
  report.kind = config.kind;
  report.alpha = config.alpha;
  report.beta = config.beta;
  report.seed = config.seed;
  const CounterRng root(config.seed);
  std::vector<TrialOutcome> outcomes;
  BundleLpSolution x;

  if (config.kind == TrialKind::Online) {
    report.gamma = gamma_online(config.alpha, config.beta);
    x = solve_bundle_lp(build_opton_lp(config.model));
    const OnlineRounder rounder(config.model, x);
    outcomes = parallel_trials(config.trials, config.threads, [&](std::size_t k) {
      const auto rng = root.derive(k);
      const auto stream = sample_stream(config.model, rng.derive(0));
      const auto result = rounder.round(stream, {config.alpha, config.beta, rng.seed()}, false);
      TrialOutcome o;
      o.feasible = online_prefix_feasible(config.model, result);
      if (!o.feasible) throw Error(ErrorCode::Infeasible, config.name + ": trial " + std::to_string(k) + " broke a prefix");
      for (const auto& rec : result.trace) {
        if (rec.buyer) o.value += to_double(config.model.types.value(rec.type, *rec.buyer));
      }
      for (const auto& c : result.opened) o.opened.push_back(c.bundle);
      return o;
    });
  } else {
    const bool budgeted = config.kind == TrialKind::OfflineBudgeted && config.instance.has_budgets();
    if (config.kind == TrialKind::OfflineBudgeted) {
      report.gamma = budgeted_guarantee(config.alpha, config.instance.num_resources(),
                                        to_double(max_bid_ratio(config.instance)), config.beta)
                         .gamma;
    } else {
      report.gamma = gamma_offline(config.alpha, config.beta);
    }
    x = solve_bundle_lp(budgeted ? build_bundle_lp_budgeted(config.instance) : build_bundle_lp(config.instance));
    const OfflineRounder rounder(config.instance, x, budgeted);
    const auto& inst = config.instance;
    outcomes = parallel_trials(config.trials, config.threads, [&](std::size_t k) {
      const auto bundling = rounder.round({config.alpha, config.beta, root.derive(k).seed()});
      TrialOutcome o;
      validate_bundling(inst, bundling);
      o.feasible = is_feasible(inst, flatten(inst, bundling)).feasible;
      if (!o.feasible) throw Error(ErrorCode::Infeasible, config.name + ": trial " + std::to_string(k) + " is infeasible");
      o.value = to_double(bundling_value(inst, bundling));
      for (const auto& b : bundling.bundles) o.opened.push_back(bundle_index(x.layout, b.p_item, b.buyer));
      return o;
    });
  }

  if (x.status != LpStatus::Optimal) throw Error(ErrorCode::NumericalFailure, config.name + ": LP not optimal");
  report.lp_value = x.exact_x.empty() ? x.objective : to_double(x.exact_objective);
  std::vector<double> values;
  const auto& bundles = x.layout.bundles();
  report.open_rate.assign(bundles.size(), 0.0);
  for (const auto& o : outcomes) {
    values.push_back(o.value);
    report.feasible += o.feasible ? 1 : 0;
    for (auto b : o.opened) report.open_rate[b] += 1;
  }
  for (auto& r : report.open_rate) r /= static_cast<double>(std::max<std::size_t>(config.trials, 1));
  for (const auto& b : bundles) report.head_value.push_back(x.x[b.head_var]);
  report.stats = summarize(values);
  if (report.stats.mean > 0) report.ratio = report.lp_value / report.stats.mean;
  return report;
}

std::vector<NamedInstance> offline_suite() {
  std::vector<NamedInstance> out;
  for (std::uint64_t s = 1; s <= 20; ++s) {
    RandomParams params;
    params.num_items = 6 + s % 3;
    params.num_buyers = 3;
    params.seed = s;
    out.push_back({"random-" + std::to_string(s), gen_random(params)});
  }
  out.push_back({"integrality-gap-3", gen_integrality_gap(3, Rational(1, 10))});
  out.push_back({"tightness-0.5", gen_tightness_example(Rational(1, 2))});
  out.push_back({"tightness-0.2", gen_tightness_example(Rational(1, 5))});
  out.push_back({"supply-3", gen_supply_example(3, Rational(1, 100))});
  return out;
}

std::vector<NamedModel> online_suite() {
  std::vector<NamedModel> out;
  out.push_back({"iid-lower-bound-20", gen_iid_lower_bound(20)});
  const std::size_t horizons[] = {20, 24, 30, 36, 40};
  for (std::uint64_t s = 0; s < 5; ++s) {
    RandomParams params;
    params.num_items = 5;
    params.num_buyers = 3;
    params.seed = 101 + s;
    out.push_back({"random-model-" + std::to_string(101 + s), gen_random_model(params, horizons[s])});
  }
  return out;
}

std::vector<NamedInstance> budgeted_suite() {
  std::vector<NamedInstance> out;
  // One buyer and 48 items, so the total bid (about 1.2 B on average) can bind.
  for (std::uint64_t s = 1; s <= 6; ++s) {
    RandomParams params;
    params.num_items = 48;
    params.num_buyers = 1;
    params.edge_prob = 1;
    params.resources = 1;
    params.bid_ratio = Rational(1, 20);
    params.seed = 200 + s;
    out.push_back({"budgeted-" + std::to_string(200 + s), gen_random(params)});
  }
  return out;
}

std::vector<std::string> suite_names() { return {"paper-examples", "offline", "online", "budgeted"}; }

namespace {

Json paper_values() {
  Json v = Json::object();
  for (std::size_t n = 2; n <= 5; ++n) {
    const auto inst = gen_integrality_gap(n, Rational(1, 10));
    const auto lp = solve_lp(build_naive_lp(inst));
    v["naive_lp[n=" + std::to_string(n) + "]"] = rational_to_json(lp.exact ? lp.exact_objective : rational_from_double(lp.objective));
    v["exact_opt[n=" + std::to_string(n) + "]"] = rational_to_json(exact_opt(inst).value);
  }
  const auto gap3 = gen_integrality_gap(3, Rational(1, 10));
  v["bundle_lp[n=3]"] = rational_to_json(solve_bundle_lp(build_bundle_lp(gap3)).exact_objective);
  v["exact_gap_opt[n=3]"] = rational_to_json(exact_gap_opt(export_gap(gap3)).value);
  for (const char* eps : {"1/2", "1/4", "1/5"}) {
    const auto inst = gen_tightness_example(parse_rational(eps));
    v[std::string("tightness_opt[eps=") + eps + "]"] = rational_to_json(exact_opt(inst).value);
    v[std::string("tightness_bundling_opt[eps=") + eps + "]"] = rational_to_json(exact_bundling_opt(inst).value);
  }
  const auto supply = gen_supply_example(3, Rational(1, 100));
  v["supply_opt[k=3]"] = rational_to_json(exact_opt(supply).value);
  v["supply_opt_duplicated[k=3]"] = rational_to_json(exact_opt(duplicate_supply(supply, 3)).value);
  const auto adv = gen_adversarial_T(5, Rational(1, 20));
  v["adversarial_greedy[T=5]"] = rational_to_json(allocation_value(adv.instance, greedy_p_only(adv.instance, adv.arrival_order)));
  v["adversarial_exact_opt[T=5]"] = rational_to_json(exact_opt(adv.instance).value);
  SetSystem yes{4, {{0, 1}, {2, 3}}};
  SetSystem overlap{4, {{0, 1}, {0, 2}, {0, 3}}};
  v["max_coverage_yes"] = rational_to_json(exact_opt(gen_max_coverage(yes, 2, Rational(1, 2))).value);
  v["max_coverage_overlap"] = rational_to_json(exact_opt(gen_max_coverage(overlap, 2, Rational(1, 2))).value);
  Graph triangle{3, {{0, 1}, {1, 2}, {0, 2}}};
  Graph path{3, {{0, 1}, {1, 2}}};
  v["genava_clique_triangle"] = rational_to_json(exact_opt(gen_genava_clique(triangle)).value);
  v["genava_clique_path"] = rational_to_json(exact_opt(gen_genava_clique(path)).value);
  v["kappa[gamma=1,T=1000]"] = compute_kappa(1, 1000);
  v["kappa[gamma=0.5,T=1000]"] = compute_kappa(0.5, 1000);
  for (std::size_t t : {10, 20, 50}) {
    const auto x = solve_bundle_lp(build_opton_lp(gen_iid_lower_bound(t)));
    v["v_on_iid_lower_bound[T=" + std::to_string(t) + "]"] = rational_to_json(x.exact_objective);
  }
  return v;
}

TrialConfig offline_config(const NamedInstance& ni, std::size_t trials, std::uint64_t seed, unsigned threads) {
  TrialConfig c;
  c.name = ni.name;
  c.instance = ni.instance;
  c.trials = trials;
  c.seed = seed;
  c.threads = threads;
  return c;
}

}  // namespace

SuiteReport run_suite(const std::string& suite, std::size_t trials, std::uint64_t seed, unsigned threads) {
  SuiteReport report;
  report.suite = suite;
  report.seed = seed;
  report.trials = trials;
  auto add_online = [&](const NamedModel& nm) {
    TrialConfig c;
    c.name = nm.name;
    c.kind = TrialKind::Online;
    c.model = nm.model;
    c.alpha = 0.64;
    c.trials = trials;
    c.seed = seed;
    c.threads = threads;
    report.rows.push_back(run_trials(c));
  };
  auto add_budgeted = [&](const NamedInstance& ni) {
    auto c = offline_config(ni, trials, seed, threads);
    c.kind = TrialKind::OfflineBudgeted;
    c.alpha = default_budgeted_alpha(ni.instance);
    report.rows.push_back(run_trials(c));
  };

  if (suite == "paper-examples") {
    report.values = paper_values();
    for (const auto& ni : offline_suite()) {
      if (ni.name.rfind("random-", 0) != 0) report.rows.push_back(run_trials(offline_config(ni, trials, seed, threads)));
    }
    add_online(online_suite().front());
    add_budgeted(budgeted_suite().front());
  } else if (suite == "offline") {
    for (const auto& ni : offline_suite()) report.rows.push_back(run_trials(offline_config(ni, trials, seed, threads)));
  } else if (suite == "online") {
    for (const auto& nm : online_suite()) add_online(nm);
  } else if (suite == "budgeted") {
    for (const auto& ni : budgeted_suite()) add_budgeted(ni);
  } else {
    throw Error(ErrorCode::BadParameter, "unknown suite '" + suite + "'");
  }
  return report;
}

Json trial_report_to_json(const TrialReport& r) {
  Json j;
  j["name"] = r.name;
  j["algo"] = trial_kind_name(r.kind);
  j["alpha"] = r.alpha;
  j["beta"] = r.beta;
  j["gamma"] = r.gamma;
  j["seed"] = r.seed;
  j["trials"] = r.stats.trials;
  j["feasible"] = r.feasible;
  j["lp_value"] = r.lp_value;
  j["mean"] = r.stats.mean;
  j["sd"] = r.stats.sd;
  j["ci_low"] = r.stats.ci_low;
  j["ci_high"] = r.stats.ci_high;
  j["min"] = r.stats.min;
  j["ratio"] = r.ratio ? Json(*r.ratio) : Json(nullptr);
  return j;
}

Json suite_report_to_json(const SuiteReport& report) {
  Json j;
  j["suite"] = report.suite;
  j["seed"] = report.seed;
  j["trials"] = report.trials;
  j["rows"] = Json::array();
  for (const auto& r : report.rows) j["rows"].push_back(trial_report_to_json(r));
  j["values"] = report.values;
  return j;
}

std::string suite_report_to_csv(const SuiteReport& report) {
  std::ostringstream os;
  os << "name,algo,alpha,beta,gamma,seed,trials,feasible,lp_value,mean,sd,ci_low,ci_high,min,ratio\n";
  os.precision(17);
  for (const auto& r : report.rows) {
    os << r.name << ',' << trial_kind_name(r.kind) << ',' << r.alpha << ',' << r.beta << ',' << r.gamma << ','
       << r.seed << ',' << r.stats.trials << ',' << r.feasible << ',' << r.lp_value << ',' << r.stats.mean << ','
       << r.stats.sd << ',' << r.stats.ci_low << ',' << r.stats.ci_high << ',' << r.stats.min << ',';
    if (r.ratio) os << *r.ratio;
    os << '\n';
  }
  return os.str();
}

}  // namespace ava
