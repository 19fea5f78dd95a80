#include "ava/genava.hpp"

#include <algorithm>

#include "ava/error.hpp"

namespace ava {

namespace {

void require_no_budgets(const Instance& inst) {
  if (inst.has_budgets()) throw Error(ErrorCode::BadParameter, "budgets are not supported here");
}

}  // namespace

Allocation genava_bicriteria_greedy(const Instance& inst, const Rational& eps) {
  if (eps <= 0 || eps >= 1) throw Error(ErrorCode::BadParameter, "eps must lie in (0, 1)");
  require_no_budgets(inst);
  Allocation alloc(inst.num_items());
  for (std::size_t i = 0; i < inst.num_items(); ++i) {
    std::optional<std::size_t> best;
    for (auto j : inst.buyers_of(i)) {
      if (inst.value(i, j) < (1 - eps) * inst.rho(j) * inst.cost(i, j)) continue;
      if (!best || inst.value(i, j) > inst.value(i, *best)) best = j;
    }
    if (best) alloc.assign(i, *best);
  }
  return alloc;
}

std::vector<std::optional<Rational>> cost_value_ratios(const Instance& inst, const Allocation& alloc) {
  check_edges(inst, alloc);
  std::vector<Rational> value(inst.num_buyers()), cost(inst.num_buyers());
  for (std::size_t i = 0; i < alloc.num_items(); ++i) {
    if (const auto& j = alloc.buyer(i)) {
      value[*j] += inst.value(i, *j);
      cost[*j] += inst.cost(i, *j);
    }
  }
  std::vector<std::optional<Rational>> out(inst.num_buyers());
  for (std::size_t j = 0; j < inst.num_buyers(); ++j) {
    if (value[j] > 0) out[j] = inst.rho(j) * cost[j] / value[j];
  }
  return out;
}

Rational bicriteria_ratio_bound(const Rational& eps) { return 1 / (1 - eps); }

Allocation genava_single_buyer(const Instance& inst) {
  require_no_budgets(inst);
  Allocation best(inst.num_items());
  Rational best_value = 0;
  for (std::size_t j = 0; j < inst.num_buyers(); ++j) {
    Allocation alloc(inst.num_items());
    Rational value = 0, capacity = 0;
    std::vector<std::size_t> negatives;
    for (std::size_t i = 0; i < inst.num_items(); ++i) {
      if (!inst.has_edge(i, j)) continue;
      if (inst.excess(i, j) >= 0) {
        alloc.assign(i, j);
        value += inst.value(i, j);
        capacity += inst.excess(i, j);
      } else {
        negatives.push_back(i);
      }
    }
    const auto deficit = [&](std::size_t i) { return Rational(-inst.excess(i, j)); };
    std::stable_sort(negatives.begin(), negatives.end(), [&](auto a, auto b) {
      return inst.value(a, j) * deficit(b) > inst.value(b, j) * deficit(a);
    });
    std::vector<std::size_t> greedy;
    Rational greedy_value = 0, room = capacity;
    for (auto i : negatives) {
      if (deficit(i) <= room) {
        room -= deficit(i);
        greedy_value += inst.value(i, j);
        greedy.push_back(i);
      }
    }
    std::optional<std::size_t> single;
    for (auto i : negatives) {
      if (deficit(i) <= capacity && (!single || inst.value(i, j) > inst.value(*single, j))) single = i;
    }
    if (single && inst.value(*single, j) > greedy_value) greedy = {*single};
    for (auto i : greedy) {
      alloc.assign(i, j);
      value += inst.value(i, j);
    }
    if (value > best_value) {
      best_value = value;
      best = alloc;
    }
  }
  return best;
}

}  // namespace ava
