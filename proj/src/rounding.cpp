#include "ava/rounding.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ava/error.hpp"
#include "json.hpp"

namespace ava {

void RoundingParams::validate() const {
  if (!(alpha > 0 && alpha < 1)) throw Error(ErrorCode::BadParameter, "alpha must lie in (0, 1)");
  if (!(beta > 0 && beta < 1)) throw Error(ErrorCode::BadParameter, "beta must lie in (0, 1)");
}

double gamma_offline(double alpha, double beta) { return alpha * (1 - alpha) * (1 - alpha / (1 - beta)); }

double gamma_online(double alpha, double beta) {
  return alpha / 2 * (1 - alpha / 2) * (1 - alpha / (2 * (1 - beta)));
}

BudgetedGuarantee budgeted_guarantee(double alpha, std::size_t resources, double bid_ratio, double beta) {
  BudgetedGuarantee g{};
  g.success_probability =
      1 - alpha / (1 - beta) - 2.0 * static_cast<double>(resources) * alpha / (1 - bid_ratio);
  g.gamma = alpha * (1 - alpha) * g.success_probability;
  if (g.success_probability > 0) {
    const double fraction = std::min(1 - g.gamma / beta, g.gamma);
    if (fraction > 0) g.constant = 1 / fraction;
  }
  return g;
}

double default_budgeted_alpha(const Instance& inst) {
  if (!inst.has_budgets()) throw Error(ErrorCode::MissingBudgets, "instance declares no resources");
  return 1.0 / (3.0 * static_cast<double>(inst.num_resources()));
}

namespace {

std::vector<double> usable_values(const BundleLpSolution& x) {
  std::vector<double> out;
  if (!x.exact_x.empty()) {
    for (const auto& r : x.exact_x) out.push_back(std::max(0.0, to_double(r)));
  } else {
    for (double v : x.x) out.push_back(std::max(0.0, v));
  }
  return out;
}

void check_against(const BundleLp& model, const BundleLpSolution& x, const std::vector<double>& xv,
                   double tolerance) {
  if (xv.size() != model.layout.num_variables()) {
    throw Error(ErrorCode::InfeasibleFractional, "solution does not match the LP layout");
  }
  for (std::size_t v = 0; v < xv.size(); ++v) {
    if (!(model.layout.key(v) == x.layout.key(v))) {
      throw Error(ErrorCode::InfeasibleFractional, "solution does not match the LP layout");
    }
  }
  const double violation = x.exact_x.empty() ? max_violation(model.lp, xv)
                                             : to_double(max_violation_exact(model.lp, x.exact_x));
  if (violation > tolerance) {
    throw Error(ErrorCode::InfeasibleFractional, "fractional solution violates the LP by " + std::to_string(violation));
  }
}

bool within_budgets(const Instance& inst, std::size_t i, std::size_t j, const std::vector<Rational>& spend) {
  for (std::size_t r = 0; r < inst.num_resources(); ++r) {
    const auto& b = inst.budget(j, r);
    if (b && spend[r * inst.num_buyers() + j] + inst.resource_cost(i, j, r) > *b) return false;
  }
  return true;
}

void charge(const Instance& inst, std::size_t i, std::size_t j, std::vector<Rational>& spend) {
  for (std::size_t r = 0; r < inst.num_resources(); ++r) spend[r * inst.num_buyers() + j] += inst.resource_cost(i, j, r);
}

}  // namespace

OfflineRounder::OfflineRounder(const Instance& inst, const BundleLpSolution& x, bool budgeted, double tolerance)
    : inst_(inst), x_(x), xv_(usable_values(x)), budgeted_(budgeted) {
  const BundleLp model = budgeted ? build_bundle_lp_budgeted(inst) : build_bundle_lp(inst);
  check_against(model, x, xv_, tolerance);
}

BundledAllocation OfflineRounder::round(const RoundingParams& params) const {
  params.validate();
  const CounterRng rng(params.seed);
  const auto& layout = x_.layout;
  const auto& bundles = layout.bundles();
  std::vector<bool> open(bundles.size(), false);
  std::vector<Rational> residual(bundles.size());
  std::vector<std::vector<std::size_t>> members(bundles.size());
  std::vector<Rational> spend(inst_.num_resources() * inst_.num_buyers());

  for (std::size_t p = 0; p < inst_.num_items(); ++p) {
    const auto& heads = layout.bundles_of_head(p);
    if (heads.empty()) continue;
    const double u = rng.uniform({stream::kPhaseOne, p});
    double acc = 0;
    for (auto b : heads) {
      acc += xv_[bundles[b].head_var];
      if (u < acc) {
        const auto j = bundles[b].buyer;
        if (budgeted_ && !within_budgets(inst_, p, j, spend)) break;
        if (budgeted_) charge(inst_, p, j, spend);
        open[b] = true;
        residual[b] = inst_.excess(p, j);
        break;
      }
    }
  }

  for (std::size_t i = 0; i < inst_.num_items(); ++i) {
    std::optional<std::size_t> chosen;
    std::size_t hits = 0;
    for (auto v : layout.vars_of_item(i)) {
      if (layout.key(v).p == i) continue;
      const auto b = layout.bundle_of_var(v);
      if (!open[b]) continue;
      const double prob = params.alpha * xv_[v] / xv_[bundles[b].head_var];
      if (rng.uniform({stream::kPhaseTwo, i, b}) < prob) {
        ++hits;
        chosen = b;
      }
    }
    if (hits != 1) continue;
    const auto b = *chosen;
    const auto j = bundles[b].buyer;
    if (residual[b] + inst_.excess(i, j) < 0) continue;
    if (budgeted_ && !within_budgets(inst_, i, j, spend)) continue;
    if (budgeted_) charge(inst_, i, j, spend);
    residual[b] += inst_.excess(i, j);
    members[b].push_back(i);
  }

  BundledAllocation out;
  for (std::size_t b = 0; b < bundles.size(); ++b) {
    if (open[b]) out.bundles.push_back(Bundle{bundles[b].buyer, bundles[b].p, members[b]});
  }
  return out;
}

BundledAllocation round_offline(const Instance& inst, const BundleLpSolution& x, const RoundingParams& params) {
  return OfflineRounder(inst, x).round(params);
}

BundledAllocation round_offline_budgeted(const Instance& inst, const BundleLpSolution& x,
                                         const RoundingParams& params) {
  if (!inst.has_budgets()) return round_offline(inst, x, params);
  return OfflineRounder(inst, x, true).round(params);
}

OnlineStream sample_stream(const IidModel& model, const CounterRng& rng) {
  std::vector<double> cumulative;
  double acc = 0;
  for (const auto& q : model.probs) cumulative.push_back(acc += to_double(q));
  OnlineStream s;
  for (std::size_t t = 1; t <= model.horizon; ++t) {
    const double u = rng.uniform({stream::kArrival, t}) * acc;
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    auto type = static_cast<std::size_t>(it - cumulative.begin());
    // Never land on a zero-probability type.
    while (type > 0 && (type >= model.probs.size() || model.probs[type] == 0)) --type;
    s.types.push_back(type);
  }
  return s;
}

const char* trace_reason_name(TraceReason reason) {
  switch (reason) {
    case TraceReason::Opened: return "opened";
    case TraceReason::SingletonPermissible: return "singleton+permissible";
    case TraceReason::MultiHit: return "multi-hit";
    case TraceReason::Impermissible: return "impermissible";
    case TraceReason::NoPhase: return "no-phase";
  }
  return "unknown";
}

Instance realize(const IidModel& model, const OnlineStream& stream) {
  InstanceBuilder b = builder_like(model.types);
  for (std::size_t t = 0; t < stream.types.size(); ++t) {
    const auto type = stream.types[t];
    const auto item = b.add_item(model.types.item_id(type) + "@" + std::to_string(t + 1));
    for (std::size_t j = 0; j < model.types.num_buyers(); ++j) copy_edge(b, model.types, type, item, j);
  }
  return b.build();
}

OnlineRounder::OnlineRounder(const IidModel& model, const BundleLpSolution& x, double tolerance)
    : model_(model), x_(x), xv_(usable_values(x)) {
  const BundleLp lp = build_opton_lp(model);
  check_against(lp, x, xv_, tolerance);
}

namespace {

struct OnlineCore {
  std::vector<OpenedCopy> opened;
  std::vector<std::vector<std::size_t>> members;  // per copy, arrival indices (0-based)
  std::vector<TraceRecord> trace;
  Rational value;
};

OnlineCore run_online(const IidModel& model, const BundleLpSolution& x, const std::vector<double>& xv,
                      const OnlineStream& stream, const RoundingParams& params) {
  params.validate();
  const auto horizon = model.horizon;
  if (stream.types.size() != horizon) {
    throw Error(ErrorCode::StreamModelMismatch, "stream length differs from the horizon");
  }
  for (auto type : stream.types) {
    if (type >= model.types.num_items()) throw Error(ErrorCode::StreamModelMismatch, "stream has an unknown type");
  }
  const CounterRng rng(params.seed);
  const auto& layout = x.layout;
  const auto& bundles = layout.bundles();
  const auto& types = model.types;
  const double t_total = static_cast<double>(horizon);
  const std::size_t phase_one_end = horizon / 2;

  OnlineCore core;
  std::vector<Rational> residual;
  std::vector<std::vector<std::size_t>> copies_of_bundle(bundles.size());

  for (std::size_t t = 1; t <= horizon; ++t) {
    const auto i = stream.types[t - 1];
    const double q_t = to_double(model.probs[i]) * t_total;
    TraceRecord rec{t, i, std::nullopt, std::nullopt, TraceReason::NoPhase};
    if (t <= phase_one_end) {
      const double u = rng.uniform({stream::kPhaseOne, t});
      double acc = 0;
      for (auto b : layout.bundles_of_head(i)) {
        acc += xv[bundles[b].head_var] / q_t;
        if (u < acc) {
          const auto j = bundles[b].buyer;
          const auto copy = core.opened.size();
          core.opened.push_back({t, b});
          core.members.emplace_back();
          residual.push_back(types.excess(i, j));
          copies_of_bundle[b].push_back(copy);
          core.value += types.value(i, j);
          rec = {t, i, copy, j, TraceReason::Opened};
          break;
        }
      }
      core.trace.push_back(rec);
      continue;
    }

    std::size_t hits = 0, considered = 0;
    std::optional<std::size_t> chosen;
    for (auto v : layout.vars_of_item(i)) {
      if (layout.key(v).p == i) continue;
      const auto b = layout.bundle_of_var(v);
      const double head = xv[bundles[b].head_var];
      for (auto copy : copies_of_bundle[b]) {
        ++considered;
        const double prob = std::min(1.0, params.alpha * xv[v] / (head * q_t));
        if (rng.uniform({stream::kPhaseTwo, t, copy}) < prob) {
          ++hits;
          chosen = copy;
        }
      }
    }
    if (considered > 0 && hits > 1) rec.reason = TraceReason::MultiHit;
    if (hits == 1) {
      const auto copy = *chosen;
      if (core.opened[copy].t > phase_one_end) {
        throw Error(ErrorCode::PhaseViolation, "bundle copy opened after the first phase");
      }
      const auto j = bundles[core.opened[copy].bundle].buyer;
      rec.copy = copy;
      if (residual[copy] + types.excess(i, j) >= 0) {
        residual[copy] += types.excess(i, j);
        core.members[copy].push_back(t - 1);
        core.value += types.value(i, j);
        rec.buyer = j;
        rec.reason = TraceReason::SingletonPermissible;
      } else {
        rec.reason = TraceReason::Impermissible;
      }
    }
    core.trace.push_back(rec);
  }
  return core;
}

}  // namespace

OnlineResult OnlineRounder::round(const OnlineStream& stream, const RoundingParams& params, bool build_realized) const {
  auto core = run_online(model_, x_, xv_, stream, params);
  OnlineResult out;
  if (build_realized) out.realized = realize(model_, stream);
  for (std::size_t c = 0; c < core.opened.size(); ++c) {
    const auto& info = x_.layout.bundles()[core.opened[c].bundle];
    out.bundling.bundles.push_back(Bundle{info.buyer, core.opened[c].t - 1, core.members[c]});
  }
  out.opened = std::move(core.opened);
  out.trace = std::move(core.trace);
  return out;
}

Rational OnlineRounder::round_value(const OnlineStream& stream, const RoundingParams& params) const {
  return run_online(model_, x_, xv_, stream, params).value;
}

OnlineResult round_online(const IidModel& model, const BundleLpSolution& x, const RoundingParams& params,
                          const OnlineStream& stream) {
  return OnlineRounder(model, x).round(stream, params);
}

std::string trace_to_jsonl(const IidModel& model, const OnlineResult& result) {
  std::ostringstream os;
  for (const auto& rec : result.trace) {
    nlohmann::ordered_json line;
    line["t"] = rec.t;
    line["item"] = model.types.item_id(rec.type);
    line["bundle"] = rec.copy ? nlohmann::ordered_json(*rec.copy) : nlohmann::ordered_json(nullptr);
    line["buyer"] = rec.buyer ? nlohmann::ordered_json(model.types.buyer_id(*rec.buyer)) : nlohmann::ordered_json(nullptr);
    line["reason"] = trace_reason_name(rec.reason);
    os << line.dump() << '\n';
  }
  return os.str();
}

Allocation greedy_p_only(const Instance& inst, const std::vector<std::size_t>& order) {
  std::vector<std::size_t> seq = order;
  if (seq.empty()) {
    for (std::size_t i = 0; i < inst.num_items(); ++i) seq.push_back(i);
  }
  Allocation alloc(inst.num_items());
  for (auto i : seq) {
    std::optional<std::size_t> best;
    for (auto j : inst.buyers_of(i)) {
      if (inst.edge_class(i, j) != EdgeClass::P) continue;
      if (!best || inst.value(i, j) > inst.value(i, *best)) best = j;
    }
    if (best) alloc.assign(i, *best);
  }
  return alloc;
}

}  // namespace ava
