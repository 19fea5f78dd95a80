#include "ava/exact.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <optional>

#include <boost/multiprecision/gmp.hpp>

#include "ava/error.hpp"

namespace ava {

namespace {

using Integer = boost::multiprecision::number<boost::multiprecision::gmp_int, boost::multiprecision::et_off>;

// Common-denominator integer images of a set of rationals, if they fit with
// `headroom` room to spare for sums.
std::optional<std::vector<std::int64_t>> scale_to_int(const std::vector<Rational>& xs, std::size_t headroom) {
  Integer scale = 1;
  for (const auto& x : xs) scale = boost::multiprecision::lcm(scale, denominator(x));
  const Integer bound = Integer(std::numeric_limits<std::int64_t>::max() / 4) / (headroom + 1);
  std::vector<std::int64_t> out;
  out.reserve(xs.size());
  for (const auto& x : xs) {
    const Integer v = numerator(x) * (scale / denominator(x));
    if (abs(v) > bound) return std::nullopt;
    out.push_back(v.convert_to<std::int64_t>());
  }
  return out;
}

// Flattened problem data over a numeric type (int64 after scaling, or Rational).
template <class Num>
struct Data {
  std::size_t n = 0, m = 0, k = 0;
  std::vector<std::vector<std::size_t>> adj;
  std::vector<Num> value;   // [i*m + j]
  std::vector<Num> excess;  // [i*m + j]
  std::vector<Num> lcost;   // [(r*n + i)*m + j]
  std::vector<std::optional<Num>> budget;  // [r*m + j]
  std::vector<Num> suffix_value;           // best value still obtainable from items >= i
  std::vector<Num> suffix_pos;             // [i*m + j]: positive excess still available to j

  Num v(std::size_t i, std::size_t j) const { return value[i * m + j]; }
  Num e(std::size_t i, std::size_t j) const { return excess[i * m + j]; }
  Num l(std::size_t r, std::size_t i, std::size_t j) const { return lcost[(r * n + i) * m + j]; }
};

struct RawData {
  std::vector<Rational> value, excess, lcost, budget;
  std::vector<bool> has_budget;
};

RawData collect(const Instance& inst) {
  RawData raw;
  const auto n = inst.num_items(), m = inst.num_buyers(), k = inst.num_resources();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      raw.value.push_back(inst.has_edge(i, j) ? inst.value(i, j) : Rational(0));
      raw.excess.push_back(inst.has_edge(i, j) ? inst.excess(i, j) : Rational(0));
    }
  }
  for (std::size_t r = 0; r < k; ++r) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < m; ++j) raw.lcost.push_back(inst.resource_cost(i, j, r));
    }
  }
  for (std::size_t r = 0; r < k; ++r) {
    for (std::size_t j = 0; j < m; ++j) {
      const auto& b = inst.budget(j, r);
      raw.has_budget.push_back(b.has_value());
      raw.budget.push_back(b ? *b : Rational(0));
    }
  }
  return raw;
}

template <class Num>
Data<Num> make_data(const Instance& inst, const std::vector<Num>& value, const std::vector<Num>& excess,
                    const std::vector<Num>& lcost, const std::vector<Num>& budget,
                    const std::vector<bool>& has_budget) {
  Data<Num> d;
  d.n = inst.num_items();
  d.m = inst.num_buyers();
  d.k = inst.num_resources();
  d.value = value;
  d.excess = excess;
  d.lcost = lcost;
  for (std::size_t x = 0; x < budget.size(); ++x) {
    d.budget.push_back(has_budget[x] ? std::optional<Num>(budget[x]) : std::nullopt);
  }
  for (std::size_t i = 0; i < d.n; ++i) d.adj.push_back(inst.buyers_of(i));
  d.suffix_value.assign(d.n + 1, Num(0));
  d.suffix_pos.assign((d.n + 1) * d.m, Num(0));
  for (std::size_t i = d.n; i-- > 0;) {
    Num best(0);
    for (auto j : d.adj[i]) best = std::max(best, d.v(i, j));
    d.suffix_value[i] = d.suffix_value[i + 1] + best;
    for (std::size_t j = 0; j < d.m; ++j) {
      Num add(0);
      if (inst.has_edge(i, j) && d.e(i, j) > Num(0)) add = d.e(i, j);
      d.suffix_pos[i * d.m + j] = d.suffix_pos[(i + 1) * d.m + j] + add;
    }
  }
  return d;
}

// Bin packing of N-deficits into P-excess capacities; returns bin per demand.
template <class Num>
bool pack(const std::vector<Num>& demand, std::vector<Num>& cap, std::vector<std::size_t>& order,
          std::size_t pos, std::vector<std::size_t>& where) {
  if (pos == order.size()) return true;
  const auto d = order[pos];
  for (std::size_t b = 0; b < cap.size(); ++b) {
    if (cap[b] < demand[d]) continue;
    bool seen = false;  // bins with equal remaining capacity are interchangeable
    for (std::size_t c = 0; c < b; ++c) {
      if (cap[c] == cap[b]) {
        seen = true;
        break;
      }
    }
    if (seen) continue;
    cap[b] -= demand[d];
    where[d] = b;
    if (pack(demand, cap, order, pos + 1, where)) return true;
    cap[b] += demand[d];
  }
  return false;
}

template <class Num>
class Search {
 public:
  Search(const Data<Num>& d, bool bundling) : d_(d), bundling_(bundling) {
    slack_.assign(d.m, Num(0));
    spend_.assign(d.k * d.m, Num(0));
    current_.assign(d.n, -1);
  }

  std::vector<int> run() {
    best_ = current_;
    best_value_ = Num(0);
    dfs(0, Num(0));
    return best_;
  }

 private:
  bool buyer_bundleable(std::size_t j) const {
    std::vector<Num> cap, demand;
    for (std::size_t i = 0; i < d_.n; ++i) {
      if (current_[i] != static_cast<int>(j)) continue;
      if (d_.e(i, j) >= Num(0)) {
        cap.push_back(d_.e(i, j));
      } else {
        demand.push_back(Num(-d_.e(i, j)));
      }
    }
    if (demand.empty()) return true;
    std::vector<std::size_t> order(demand.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return demand[a] > demand[b]; });
    std::vector<std::size_t> where(demand.size());
    return pack(demand, cap, order, 0, where);
  }

  void dfs(std::size_t i, Num value) {
    if (value + d_.suffix_value[i] <= best_value_) return;
    for (std::size_t j = 0; j < d_.m; ++j) {
      if (slack_[j] + d_.suffix_pos[i * d_.m + j] < Num(0)) return;
    }
    if (i == d_.n) {
      if (bundling_) {
        for (std::size_t j = 0; j < d_.m; ++j) {
          if (!buyer_bundleable(j)) return;
        }
      }
      best_ = current_;
      best_value_ = value;
      return;
    }
    for (auto j : d_.adj[i]) {
      bool within = true;
      for (std::size_t r = 0; r < d_.k; ++r) {
        const auto& b = d_.budget[r * d_.m + j];
        if (b && spend_[r * d_.m + j] + d_.l(r, i, j) > *b) within = false;
      }
      if (!within) continue;
      slack_[j] += d_.e(i, j);
      for (std::size_t r = 0; r < d_.k; ++r) spend_[r * d_.m + j] += d_.l(r, i, j);
      current_[i] = static_cast<int>(j);
      dfs(i + 1, value + d_.v(i, j));
      current_[i] = -1;
      for (std::size_t r = 0; r < d_.k; ++r) spend_[r * d_.m + j] -= d_.l(r, i, j);
      slack_[j] -= d_.e(i, j);
    }
    dfs(i + 1, value);
  }

  const Data<Num>& d_;
  bool bundling_;
  std::vector<Num> slack_;
  std::vector<Num> spend_;
  std::vector<int> current_;
  std::vector<int> best_;
  Num best_value_{0};
};

std::vector<int> solve(const Instance& inst, bool bundling, const ExactLimits& limits) {
  const auto states = assignment_states(inst);
  if (states > limits.max_states) {
    throw Error(ErrorCode::TooLarge, "assignment space has " + std::to_string(states) + " states (limit " +
                                         std::to_string(limits.max_states) + ")");
  }
  const auto raw = collect(inst);
  const auto headroom = inst.num_items() + 1;
  const auto v = scale_to_int(raw.value, headroom);
  const auto e = scale_to_int(raw.excess, headroom);
  std::vector<Rational> resource = raw.lcost;
  resource.insert(resource.end(), raw.budget.begin(), raw.budget.end());
  const auto r = scale_to_int(resource, headroom);
  if (v && e && r) {
    std::vector<std::int64_t> lcost(r->begin(), r->begin() + static_cast<std::ptrdiff_t>(raw.lcost.size()));
    std::vector<std::int64_t> budget(r->begin() + static_cast<std::ptrdiff_t>(raw.lcost.size()), r->end());
    const auto d = make_data<std::int64_t>(inst, *v, *e, lcost, budget, raw.has_budget);
    return Search<std::int64_t>(d, bundling).run();
  }
  const auto d = make_data<Rational>(inst, raw.value, raw.excess, raw.lcost, raw.budget, raw.has_budget);
  return Search<Rational>(d, bundling).run();
}

Allocation to_allocation(const Instance& inst, const std::vector<int>& assignment) {
  Allocation alloc(inst.num_items());
  for (std::size_t i = 0; i < assignment.size(); ++i) {
    if (assignment[i] >= 0) alloc.assign(i, static_cast<std::size_t>(assignment[i]));
  }
  return alloc;
}

}  // namespace

std::uint64_t assignment_states(const Instance& inst) {
  std::uint64_t states = 1;
  for (std::size_t i = 0; i < inst.num_items(); ++i) {
    const std::uint64_t options = inst.buyers_of(i).size() + 1;
    if (states > std::numeric_limits<std::uint64_t>::max() / options) return std::numeric_limits<std::uint64_t>::max();
    states *= options;
  }
  return states;
}

ExactResult exact_opt(const Instance& inst, const ExactLimits& limits) {
  ExactResult out;
  out.allocation = to_allocation(inst, solve(inst, false, limits));
  out.value = allocation_value(inst, out.allocation);
  return out;
}

ExactBundlingResult exact_bundling_opt(const Instance& inst, const ExactLimits& limits) {
  const auto alloc = to_allocation(inst, solve(inst, true, limits));
  ExactBundlingResult out;
  for (std::size_t j = 0; j < inst.num_buyers(); ++j) {
    std::vector<std::size_t> heads, members;
    for (auto i : alloc.items_of(j)) (inst.edge_class(i, j) == EdgeClass::P ? heads : members).push_back(i);
    std::vector<Rational> cap, demand;
    for (auto p : heads) cap.push_back(inst.excess(p, j));
    for (auto i : members) demand.push_back(-inst.excess(i, j));
    std::vector<std::size_t> order(demand.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return demand[a] > demand[b]; });
    std::vector<std::size_t> where(demand.size());
    if (!pack(demand, cap, order, 0, where)) {
      throw Error(ErrorCode::InvalidBundling, "internal: optimum is not bundleable");
    }
    std::vector<Bundle> bundles;
    for (auto p : heads) bundles.push_back(Bundle{j, p, {}});
    for (std::size_t d = 0; d < members.size(); ++d) bundles[where[d]].n_items.push_back(members[d]);
    for (auto& b : bundles) {
      std::sort(b.n_items.begin(), b.n_items.end());
      out.bundling.bundles.push_back(std::move(b));
    }
  }
  out.value = bundling_value(inst, out.bundling);
  validate_bundling(inst, out.bundling);
  return out;
}

}  // namespace ava
