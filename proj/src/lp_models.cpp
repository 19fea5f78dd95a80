#include "ava/lp_models.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ava/error.hpp"

namespace ava {

void IidModel::validate() const {
  if (probs.size() != types.num_items()) {
    throw Error(ErrorCode::BadParameter, "one probability per item type is required");
  }
  Rational total = 0;
  for (const auto& q : probs) {
    if (q < 0) throw Error(ErrorCode::BadParameter, "negative arrival probability");
    total += q;
  }
  if (total != 1) throw Error(ErrorCode::BadParameter, "arrival probabilities must sum to 1");
  if (horizon < 2) throw Error(ErrorCode::BadParameter, "horizon must be at least 2");
}

BundleLayout BundleLayout::from(const Instance& inst) {
  BundleLayout layout;
  const auto n = inst.num_items(), m = inst.num_buyers();
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t j = 0; j < m; ++j) {
      if (!inst.has_edge(p, j) || inst.edge_class(p, j) != EdgeClass::P) continue;
      layout.keys_.push_back({p, j, p});
      for (std::size_t i = 0; i < n; ++i) {
        if (inst.has_edge(i, j) && inst.edge_class(i, j) == EdgeClass::N) layout.keys_.push_back({i, j, p});
      }
    }
  }
  std::sort(layout.keys_.begin(), layout.keys_.end());
  for (std::size_t v = 0; v < layout.keys_.size(); ++v) layout.index_[layout.keys_[v]] = v;

  layout.by_head_.assign(n, {});
  layout.by_item_.assign(n, {});
  layout.bundle_of_var_.assign(layout.keys_.size(), 0);
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t j = 0; j < m; ++j) {
      const auto head = layout.find(p, j, p);
      if (!head) continue;
      BundleInfo info{p, j, *head, {}};
      layout.bundle_of_var_[*head] = layout.bundles_.size();
      for (std::size_t i = 0; i < n; ++i) {
        if (i == p) continue;
        if (const auto v = layout.find(i, j, p)) {
          info.member_vars.push_back(*v);
          layout.bundle_of_var_[*v] = layout.bundles_.size();
        }
      }
      layout.by_head_[p].push_back(layout.bundles_.size());
      layout.bundles_.push_back(std::move(info));
    }
  }
  for (std::size_t v = 0; v < layout.keys_.size(); ++v) layout.by_item_[layout.keys_[v].item].push_back(v);
  return layout;
}

std::optional<std::size_t> BundleLayout::find(std::size_t i, std::size_t j, std::size_t p) const {
  const auto it = index_.find({i, j, p});
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

double BundleLpSolution::value(std::size_t i, std::size_t j, std::size_t p) const {
  const auto v = layout.find(i, j, p);
  return v ? x.at(*v) : 0.0;
}

BundleLpSolution BundleLpSolution::from_values(const BundleLayout& layout,
                                               const std::map<BundleKey, Rational>& values) {
  BundleLpSolution sol;
  sol.layout = layout;
  sol.exact_x.assign(layout.num_variables(), Rational(0));
  for (const auto& [key, val] : values) {
    const auto v = layout.find(key.item, key.buyer, key.p);
    if (!v) throw Error(ErrorCode::BadParameter, "value for a key outside the bundle layout");
    sol.exact_x[*v] = val;
  }
  for (const auto& r : sol.exact_x) sol.x.push_back(to_double(r));
  return sol;
}

namespace {

std::string var_name(const Instance& inst, const BundleKey& k) {
  return "x[" + inst.item_id(k.item) + "," + inst.buyer_id(k.buyer) + "," + inst.item_id(k.p) + "]";
}

// Shared skeleton: objective, average-value rows, item rows with `item_cap`,
// linking rows x_ijp <= link_cap(i) * x_pjp.
template <class ItemCap, class LinkCap>
BundleLp build_skeleton(const Instance& inst, ItemCap item_cap, LinkCap link_cap) {
  BundleLp out;
  out.layout = BundleLayout::from(inst);
  auto& lp = out.lp;
  const auto& layout = out.layout;
  for (std::size_t v = 0; v < layout.num_variables(); ++v) {
    const auto& k = layout.key(v);
    lp.add_variable(var_name(inst, k), inst.value(k.item, k.buyer));
  }
  for (const auto& b : layout.bundles()) {
    std::vector<LpTerm> terms{{b.head_var, -inst.excess(b.p, b.buyer)}};
    for (auto v : b.member_vars) terms.push_back({v, -inst.excess(layout.key(v).item, b.buyer)});
    lp.add_row("ros[" + inst.buyer_id(b.buyer) + "," + inst.item_id(b.p) + "]", std::move(terms),
               Relation::LessEqual, 0);
  }
  for (std::size_t i = 0; i < inst.num_items(); ++i) {
    std::vector<LpTerm> terms;
    for (auto v : layout.vars_of_item(i)) terms.push_back({v, 1});
    lp.add_row("item[" + inst.item_id(i) + "]", std::move(terms), Relation::LessEqual, item_cap(i));
  }
  for (const auto& b : layout.bundles()) {
    for (auto v : b.member_vars) {
      const auto i = layout.key(v).item;
      lp.add_row("link[" + inst.item_id(i) + "," + inst.buyer_id(b.buyer) + "," + inst.item_id(b.p) + "]",
                 {{v, 1}, {b.head_var, -link_cap(i)}}, Relation::LessEqual, 0);
    }
  }
  return out;
}

}  // namespace

LinearProgram build_naive_lp(const Instance& inst) {
  LinearProgram lp;
  std::vector<std::vector<std::size_t>> var(inst.num_items(),
                                            std::vector<std::size_t>(inst.num_buyers(), SIZE_MAX));
  for (std::size_t i = 0; i < inst.num_items(); ++i) {
    for (std::size_t j = 0; j < inst.num_buyers(); ++j) {
      if (!inst.has_edge(i, j)) continue;
      var[i][j] = lp.add_variable("x[" + inst.item_id(i) + "," + inst.buyer_id(j) + "]", inst.value(i, j),
                                  Rational(1));
    }
  }
  for (std::size_t j = 0; j < inst.num_buyers(); ++j) {
    std::vector<LpTerm> terms;
    for (std::size_t i = 0; i < inst.num_items(); ++i) {
      if (var[i][j] != SIZE_MAX) terms.push_back({var[i][j], -inst.excess(i, j)});
    }
    lp.add_row("ros[" + inst.buyer_id(j) + "]", std::move(terms), Relation::LessEqual, 0);
  }
  for (std::size_t i = 0; i < inst.num_items(); ++i) {
    std::vector<LpTerm> terms;
    for (std::size_t j = 0; j < inst.num_buyers(); ++j) {
      if (var[i][j] != SIZE_MAX) terms.push_back({var[i][j], 1});
    }
    lp.add_row("item[" + inst.item_id(i) + "]", std::move(terms), Relation::LessEqual, 1);
  }
  return lp;
}

BundleLp build_bundle_lp(const Instance& inst) {
  if (!inst.is_unambiguous()) {
    throw Error(ErrorCode::AmbiguousInstance, "bundle LP needs every item to be a P-item or an N-item");
  }
  return build_skeleton(
      inst, [](std::size_t) { return Rational(1); }, [](std::size_t) { return Rational(1); });
}

BundleLp build_bundle_lp_budgeted(const Instance& inst) {
  if (!inst.has_budgets()) throw Error(ErrorCode::MissingBudgets, "instance declares no resources");
  BundleLp out = build_bundle_lp(inst);
  const auto& layout = out.layout;
  for (std::size_t r = 0; r < inst.num_resources(); ++r) {
    const auto& res = inst.resource_name(r);
    for (std::size_t j = 0; j < inst.num_buyers(); ++j) {
      const auto& budget = inst.budget(j, r);
      if (!budget) continue;
      std::vector<LpTerm> per_buyer;
      for (const auto& b : layout.bundles()) {
        if (b.buyer != j) continue;
        std::vector<LpTerm> per_bundle;
        auto add = [&](std::size_t v) {
          const auto& l = inst.resource_cost(layout.key(v).item, j, r);
          if (l == 0) return;
          per_buyer.push_back({v, l});
          per_bundle.push_back({v, l});
        };
        add(b.head_var);
        for (auto v : b.member_vars) add(v);
        per_bundle.push_back({b.head_var, -*budget});
        out.lp.add_row("budget[" + res + "," + inst.buyer_id(j) + "," + inst.item_id(b.p) + "]",
                       std::move(per_bundle), Relation::LessEqual, 0);
      }
      out.lp.add_row("budget[" + res + "," + inst.buyer_id(j) + "]", std::move(per_buyer),
                     Relation::LessEqual, *budget);
    }
  }
  return out;
}

BundleLp build_opton_lp(const IidModel& model) {
  model.validate();
  const Rational horizon(static_cast<long>(model.horizon));
  auto cap = [&](std::size_t i) { return model.probs[i] * horizon; };
  return build_skeleton(model.types, cap, cap);
}

double compute_kappa(double gamma, std::size_t horizon) {
  if (horizon < 3) throw Error(ErrorCode::DomainError, "kappa needs T >= 3");
  if (!(gamma > 0)) throw Error(ErrorCode::DomainError, "kappa needs gamma > 0");
  const double t = static_cast<double>(horizon);
  return 6.0 / std::min(1.0, gamma) * std::log(t) / std::log(std::log(t));
}

BundleLp build_optoff_lp(const IidModel& model, const Rational& gamma_floor) {
  model.validate();
  if (gamma_floor <= 0) throw Error(ErrorCode::BadParameter, "gamma floor must be positive");
  const Rational horizon(static_cast<long>(model.horizon));
  std::string offending;
  for (std::size_t i = 0; i < model.probs.size(); ++i) {
    if (model.probs[i] * horizon < gamma_floor) {
      offending += (offending.empty() ? "" : ", ") + model.types.item_id(i);
    }
  }
  if (!offending.empty()) {
    throw Error(ErrorCode::GammaViolated, "q_i T below the floor for types: " + offending);
  }
  const double kappa = compute_kappa(to_double(gamma_floor), model.horizon);
  auto item_cap = [&](std::size_t i) { return 2 * ceil_rational(model.probs[i] * horizon); };
  auto link_cap = [&](std::size_t i) {
    return Rational(static_cast<long>(std::ceil(to_double(model.probs[i] * horizon) * kappa)));
  };
  return build_skeleton(model.types, item_cap, link_cap);
}

BundleLpSolution solve_bundle_lp(const BundleLp& model, const SolveOptions& options) {
  const auto sol = solve_lp(model.lp, options);
  BundleLpSolution out;
  out.layout = model.layout;
  out.status = sol.status;
  out.x = sol.values;
  out.objective = sol.objective;
  if (sol.exact) {
    out.exact_x = sol.exact_values;
    out.exact_objective = sol.exact_objective;
  }
  return out;
}

}  // namespace ava
