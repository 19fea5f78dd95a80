#ifndef AVA_TESTS_ORACLES_HPP
#define AVA_TESTS_ORACLES_HPP

// Plain enumeration over every assignment, independent of the library search.

#include <algorithm>
#include <functional>
#include <optional>
#include <vector>

#include "ava/instance.hpp"

namespace oracle {

using ava::Instance;
using ava::Rational;

inline bool feasible(const Instance& inst, const std::vector<int>& a) {
  for (std::size_t j = 0; j < inst.num_buyers(); ++j) {
    Rational value = 0, cost = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i] != static_cast<int>(j)) continue;
      value += inst.value(i, j);
      cost += inst.cost(i, j);
    }
    if (value < inst.rho(j) * cost) return false;
    for (std::size_t r = 0; r < inst.num_resources(); ++r) {
      const auto& b = inst.budget(j, r);
      if (!b) continue;
      Rational spend = 0;
      for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == static_cast<int>(j)) spend += inst.resource_cost(i, j, r);
      }
      if (spend > *b) return false;
    }
  }
  return true;
}

// Can buyer j's items be split into bundles, each one P-item plus N-items with
// non-negative total excess?  Tries every map from N-items to P-items.
inline bool bundleable(const Instance& inst, const std::vector<int>& a) {
  for (std::size_t j = 0; j < inst.num_buyers(); ++j) {
    std::vector<std::size_t> heads, members;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i] != static_cast<int>(j)) continue;
      (inst.excess(i, j) >= 0 ? heads : members).push_back(i);
    }
    if (members.empty()) continue;
    if (heads.empty()) return false;
    std::vector<std::size_t> choice(members.size(), 0);
    bool found = false;
    while (!found) {
      std::vector<Rational> residual;
      for (auto p : heads) residual.push_back(inst.excess(p, j));
      for (std::size_t m = 0; m < members.size(); ++m) residual[choice[m]] += inst.excess(members[m], j);
      found = std::all_of(residual.begin(), residual.end(), [](const Rational& r) { return r >= 0; });
      std::size_t pos = 0;
      while (pos < choice.size() && ++choice[pos] == heads.size()) choice[pos++] = 0;
      if (pos == choice.size()) break;
    }
    if (!found) return false;
  }
  return true;
}

inline Rational value(const Instance& inst, const std::vector<int>& a) {
  Rational total = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] >= 0) total += inst.value(i, static_cast<std::size_t>(a[i]));
  }
  return total;
}

inline void enumerate(const Instance& inst, const std::function<void(const std::vector<int>&)>& visit) {
  std::vector<int> a(inst.num_items(), -1);
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == a.size()) {
      visit(a);
      return;
    }
    a[i] = -1;
    rec(i + 1);
    for (std::size_t j = 0; j < inst.num_buyers(); ++j) {
      if (!inst.has_edge(i, j)) continue;
      a[i] = static_cast<int>(j);
      rec(i + 1);
    }
    a[i] = -1;
  };
  rec(0);
}

inline Rational best(const Instance& inst, bool bundling) {
  Rational top = 0;
  enumerate(inst, [&](const std::vector<int>& a) {
    if (!feasible(inst, a)) return;
    if (bundling && !bundleable(inst, a)) return;
    top = std::max(top, value(inst, a));
  });
  return top;
}

}  // namespace oracle

#endif  // AVA_TESTS_ORACLES_HPP
