#include "ava/bundling.hpp"

#include <algorithm>
#include <optional>

#include "ava/error.hpp"

namespace ava {

Rational bundle_residual(const Instance& inst, const Bundle& bundle) {
  Rational r = inst.excess(bundle.p_item, bundle.buyer);
  for (auto i : bundle.n_items) r += inst.excess(i, bundle.buyer);
  return r;
}

bool is_permissible(const Instance& inst, const Bundle& bundle) {
  const auto j = bundle.buyer;
  if (j >= inst.num_buyers() || bundle.p_item >= inst.num_items()) return false;
  if (!inst.has_edge(bundle.p_item, j) || inst.edge_class(bundle.p_item, j) != EdgeClass::P) {
    return false;
  }
  for (auto i : bundle.n_items) {
    if (i >= inst.num_items() || !inst.has_edge(i, j) || inst.edge_class(i, j) != EdgeClass::N) {
      return false;
    }
  }
  return bundle_residual(inst, bundle) >= 0;
}

void validate_bundling(const Instance& inst, const BundledAllocation& bundling) {
  std::vector<bool> used(inst.num_items(), false);
  auto claim = [&](std::size_t i) {
    if (i >= inst.num_items()) throw Error(ErrorCode::InvalidBundling, "unknown item index");
    if (used[i]) {
      throw Error(ErrorCode::InvalidBundling, "item '" + inst.item_id(i) + "' used twice");
    }
    used[i] = true;
  };
  for (const auto& b : bundling.bundles) {
    claim(b.p_item);
    for (auto i : b.n_items) claim(i);
    if (!is_permissible(inst, b)) {
      throw Error(ErrorCode::InvalidBundling,
                  "bundle headed by '" + inst.item_id(b.p_item) + "' is not permissible");
    }
  }
}

Allocation flatten(const Instance& inst, const BundledAllocation& bundling) {
  Allocation alloc(inst.num_items());
  for (const auto& b : bundling.bundles) {
    alloc.assign(b.p_item, b.buyer);
    for (auto i : b.n_items) alloc.assign(i, b.buyer);
  }
  return alloc;
}

Rational bundling_value(const Instance& inst, const BundledAllocation& bundling) {
  Rational total = 0;
  for (const auto& b : bundling.bundles) {
    total += inst.value(b.p_item, b.buyer);
    for (auto i : b.n_items) total += inst.value(i, b.buyer);
  }
  return total;
}

BundledAllocation extract_bundling(const Instance& inst, const Allocation& alloc,
                                   const std::vector<std::size_t>& arrival_order) {
  check_edges(inst, alloc);
  std::vector<std::size_t> order;
  std::vector<bool> seen(inst.num_items(), false);
  for (auto i : arrival_order) {
    if (i >= inst.num_items()) throw Error(ErrorCode::BadParameter, "arrival order has unknown item");
    if (seen[i]) throw Error(ErrorCode::BadParameter, "arrival order repeats an item");
    seen[i] = true;
    if (alloc.buyer(i)) order.push_back(i);
  }
  for (std::size_t i = 0; i < inst.num_items(); ++i) {
    if (!seen[i] && alloc.buyer(i)) order.push_back(i);
  }

  struct OpenBundle {
    std::size_t index;  // into result.bundles
    Rational residual;
    bool open = true;
  };
  BundledAllocation result;
  std::vector<std::vector<OpenBundle>> per_buyer(inst.num_buyers());
  std::vector<Rational> slack(inst.num_buyers());

  for (auto i : order) {
    const auto j = *alloc.buyer(i);
    const Rational& e = inst.excess(i, j);
    slack[j] += e;
    if (slack[j] < 0) {
      throw Error(ErrorCode::InfeasiblePrefix,
                  "buyer '" + inst.buyer_id(j) + "' violated after item '" + inst.item_id(i) + "'");
    }
    auto& bundles = per_buyer[j];
    if (e >= 0) {
      result.bundles.push_back(Bundle{j, i, {}});
      bundles.push_back(OpenBundle{result.bundles.size() - 1, e});
      continue;
    }
    const Rational deficit = -e;
    OpenBundle* admit = nullptr;
    for (auto& b : bundles) {
      if (b.open && b.residual >= deficit && (!admit || b.residual > admit->residual)) admit = &b;
    }
    if (admit) {
      admit->residual -= deficit;
      result.bundles[admit->index].n_items.push_back(i);
      continue;
    }
    OpenBundle* victim = nullptr;
    for (auto& b : bundles) {
      if (b.open && (!victim || b.residual < victim->residual)) victim = &b;
    }
    if (victim) victim->open = false;
  }
  return result;
}

Instance make_unambiguous_random(const Instance& inst, const CounterRng& rng) {
  EdgeMask keep = inst.edges();
  for (std::size_t i = 0; i < inst.num_items(); ++i) {
    if (!(inst.has_p_edge(i) && inst.has_n_edge(i))) continue;
    const bool drop_p = rng.bernoulli(0.5, {stream::kUnambiguous, i});
    for (std::size_t j = 0; j < inst.num_buyers(); ++j) {
      if (!inst.has_edge(i, j)) continue;
      const bool is_p = inst.edge_class(i, j) == EdgeClass::P;
      if (is_p == drop_p) keep(i, j) = false;
    }
  }
  return inst.with_edges(keep);
}

SplitInstance split_ambiguous(const Instance& inst) {
  SplitInstance out;
  out.original = inst;
  InstanceBuilder b = builder_like(inst);
  auto add_copy = [&](std::size_t i, const std::string& id, bool positive, bool split) {
    const auto k = b.add_item(id);
    for (std::size_t j = 0; j < inst.num_buyers(); ++j) {
      if (!inst.has_edge(i, j)) continue;
      const bool is_p = inst.edge_class(i, j) == EdgeClass::P;
      if (!split || is_p == positive) copy_edge(b, inst, i, k, j);
    }
    out.origin.push_back(i);
    out.positive.push_back(positive);
    out.was_split.push_back(split);
  };
  for (std::size_t i = 0; i < inst.num_items(); ++i) {
    if (inst.has_p_edge(i) && inst.has_n_edge(i)) {
      add_copy(i, inst.item_id(i) + "+", true, true);
      add_copy(i, inst.item_id(i) + "-", false, true);
    } else {
      add_copy(i, inst.item_id(i), !inst.has_n_edge(i), false);
    }
  }
  out.split = b.build();
  return out;
}

std::pair<Instance, BundledAllocation> make_unambiguous_deterministic(
    const SplitInstance& split, const BundledAllocation& bundling) {
  const Instance& inst = split.original;
  validate_bundling(split.split, bundling);
  const auto nb = bundling.bundles.size();

  // Where each split item sits: bundle index, or nothing.
  std::vector<std::optional<std::size_t>> home(split.split.num_items());
  for (std::size_t b = 0; b < nb; ++b) {
    home[bundling.bundles[b].p_item] = b;
    for (auto i : bundling.bundles[b].n_items) home[i] = b;
  }
  // Negative copy of each split original, indexed by original item.
  std::vector<std::optional<std::size_t>> negative_copy(inst.num_items());
  for (std::size_t s = 0; s < split.split.num_items(); ++s) {
    if (split.was_split[s] && !split.positive[s]) negative_copy[split.origin[s]] = s;
  }

  // Arc a -> b when a's head is the positive copy of an item whose negative copy is in b.
  std::vector<std::optional<std::size_t>> out(nb);
  std::vector<std::optional<std::size_t>> arc_item(nb);  // the negative copy on the arc
  for (std::size_t a = 0; a < nb; ++a) {
    const auto head = bundling.bundles[a].p_item;
    if (!split.was_split[head]) continue;
    const auto neg = negative_copy[split.origin[head]];
    if (!neg || !home[*neg]) continue;
    if (*home[*neg] == a) {
      throw Error(ErrorCode::InvalidBundling, "both copies of an item in the same bundle");
    }
    out[a] = *home[*neg];
    arc_item[a] = *neg;
  }

  std::vector<std::vector<std::size_t>> members(nb);
  for (std::size_t b = 0; b < nb; ++b) members[b] = bundling.bundles[b].n_items;
  auto drop_member = [&](std::size_t b, std::size_t item) {
    auto& v = members[b];
    v.erase(std::remove(v.begin(), v.end(), item), v.end());
  };

  // Break cycles by removing the negative copies on their arcs.
  std::vector<int> color(nb, 0);  // 0 new, 1 on stack, 2 done
  for (std::size_t start = 0; start < nb; ++start) {
    if (color[start] != 0) continue;
    std::vector<std::size_t> path;
    std::size_t v = start;
    while (true) {
      color[v] = 1;
      path.push_back(v);
      if (!out[v]) break;
      const auto w = *out[v];
      if (color[w] == 2) break;
      if (color[w] == 1) {
        std::vector<std::size_t> cycle(std::find(path.begin(), path.end(), w), path.end());
        for (auto a : cycle) {
          drop_member(*out[a], *arc_item[a]);
          out[a].reset();
        }
        break;
      }
      v = w;
    }
    for (auto u : path) color[u] = 2;
  }

  // Remaining arcs form in-trees; depth 0 at roots.
  std::vector<std::optional<std::size_t>> depth(nb);
  std::vector<std::size_t> root(nb);
  for (std::size_t b = 0; b < nb; ++b) {
    std::vector<std::size_t> chain;
    std::size_t v = b;
    while (!depth[v] && out[v]) {
      chain.push_back(v);
      v = *out[v];
    }
    if (!depth[v]) {
      depth[v] = 0;
      root[v] = v;
    }
    std::size_t d = *depth[v];
    const std::size_t r = root[v];
    for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
      depth[*it] = ++d;
      root[*it] = r;
    }
  }

  auto bundle_value = [&](std::size_t b) {
    const auto& bd = bundling.bundles[b];
    Rational v = split.split.value(bd.p_item, bd.buyer);
    for (auto i : members[b]) v += split.split.value(i, bd.buyer);
    return v;
  };
  // Root N-items whose positive copy heads a depth-1 bundle.
  std::vector<std::vector<std::size_t>> root_conflicts(nb);
  for (std::size_t b = 0; b < nb; ++b) {
    if (out[b] && *depth[b] == 1) root_conflicts[*out[b]].push_back(*arc_item[b]);
  }

  std::vector<Rational> even_value(nb), odd_value(nb);
  for (std::size_t b = 0; b < nb; ++b) {
    const auto r = root[b];
    if (*depth[b] % 2 == 0) {
      even_value[r] += bundle_value(b);
    } else {
      odd_value[r] += bundle_value(b);
    }
  }
  std::vector<bool> keep_odd(nb, false);
  for (std::size_t r = 0; r < nb; ++r) {
    if (root[r] != r) continue;
    // The root's P-item survives either way; only its conflicting N-items are at stake.
    Rational odd_total = odd_value[r] + bundle_value(r);
    for (auto i : root_conflicts[r]) odd_total -= split.split.value(i, bundling.bundles[r].buyer);
    keep_odd[r] = odd_total > even_value[r];
  }

  BundledAllocation result;
  std::vector<int> role(inst.num_items(), 0);  // 1 used as P-item, -1 used as N-item
  for (std::size_t b = 0; b < nb; ++b) {
    const bool odd_depth = *depth[b] % 2 == 1;
    const bool is_root = *depth[b] == 0;
    const bool odd_tree = keep_odd[root[b]];
    if (odd_tree && !odd_depth && !is_root) continue;
    if (!odd_tree && odd_depth) continue;
    if (odd_tree && is_root) {
      for (auto i : root_conflicts[b]) drop_member(b, i);
    }
    const auto& bd = bundling.bundles[b];
    Bundle nb_out{bd.buyer, split.origin[bd.p_item], {}};
    role[nb_out.p_item] = 1;
    for (auto i : members[b]) {
      nb_out.n_items.push_back(split.origin[i]);
      role[split.origin[i]] = -1;
    }
    result.bundles.push_back(std::move(nb_out));
  }

  EdgeMask keep = inst.edges();
  for (std::size_t i = 0; i < inst.num_items(); ++i) {
    if (!(inst.has_p_edge(i) && inst.has_n_edge(i))) continue;
    const bool keep_p = role[i] >= 0;
    for (std::size_t j = 0; j < inst.num_buyers(); ++j) {
      if (inst.has_edge(i, j) && (inst.edge_class(i, j) == EdgeClass::P) != keep_p) keep(i, j) = false;
    }
  }
  Instance sub = inst.with_edges(keep);
  validate_bundling(sub, result);
  return {std::move(sub), std::move(result)};
}

Instance duplicate_supply(const Instance& inst, std::size_t k) {
  if (k == 0) throw Error(ErrorCode::BadParameter, "supply multiplier must be at least 1");
  InstanceBuilder b = builder_like(inst);
  for (std::size_t i = 0; i < inst.num_items(); ++i) {
    for (std::size_t c = 0; c < k; ++c) {
      const auto id = k == 1 ? inst.item_id(i) : inst.item_id(i) + "#" + std::to_string(c);
      const auto copy = b.add_item(id);
      for (std::size_t j = 0; j < inst.num_buyers(); ++j) copy_edge(b, inst, i, copy, j);
    }
  }
  return b.build();
}

}  // namespace ava
