#include "ava/gap.hpp"

#include <algorithm>

#include "ava/error.hpp"

namespace ava {

std::optional<std::size_t> GapInstance::find_bin(std::size_t p, std::size_t buyer) const {
  for (std::size_t b = 0; b < bins.size(); ++b) {
    if (bins[b].p == p && bins[b].buyer == buyer) return b;
  }
  return std::nullopt;
}

GapInstance export_gap(const Instance& inst, const Rational& eps_gap) {
  if (!inst.is_unambiguous()) throw Error(ErrorCode::AmbiguousInstance, "GAP export needs an unambiguous instance");
  if (eps_gap <= 0) throw Error(ErrorCode::BadParameter, "eps_gap must be positive");
  GapInstance gap;
  gap.num_elements = inst.num_items();
  gap.eps_gap = eps_gap;
  for (std::size_t p = 0; p < inst.num_items(); ++p) {
    if (!inst.is_p_item(p)) continue;
    for (auto j : inst.buyers_of(p)) gap.bins.push_back({p, j});
  }
  const Rational overflow = 1 + eps_gap;
  gap.entries.assign(inst.num_items(), std::vector<GapInstance::Entry>(gap.bins.size()));
  for (std::size_t e = 0; e < inst.num_items(); ++e) {
    for (std::size_t b = 0; b < gap.bins.size(); ++b) {
      const auto [p, j] = gap.bins[b];
      auto& entry = gap.entries[e][b];
      if (e == p) {
        entry = {true, inst.value(p, j), Rational(0)};
      } else if (inst.is_p_item(e)) {
        entry = {true, Rational(0), overflow};
      } else if (inst.has_edge(e, j)) {
        const Rational head = inst.excess(p, j);
        entry = {true, inst.value(e, j), head > 0 ? Rational(-inst.excess(e, j) / head) : overflow};
      }
    }
  }
  return gap;
}

Rational gap_value(const GapInstance& gap, const GapSolution& sol) {
  Rational total = 0;
  for (std::size_t e = 0; e < sol.bin.size(); ++e) {
    if (sol.bin[e]) total += gap.entry(e, *sol.bin[e]).value;
  }
  return total;
}

bool gap_feasible(const GapInstance& gap, const GapSolution& sol) {
  if (sol.bin.size() != gap.num_elements) return false;
  std::vector<Rational> load(gap.bins.size());
  std::vector<bool> used(gap.bins.size(), false);
  for (std::size_t e = 0; e < sol.bin.size(); ++e) {
    if (!sol.bin[e]) continue;
    const auto b = *sol.bin[e];
    if (b >= gap.bins.size() || !gap.entry(e, b).allowed) return false;
    load[b] += gap.entry(e, b).size;
    used[b] = true;
  }
  for (std::size_t b = 0; b < gap.bins.size(); ++b) {
    if (load[b] > 1) return false;
    for (std::size_t c = 0; c < b; ++c) {
      if (used[b] && used[c] && gap.bins[b].p == gap.bins[c].p) return false;
    }
  }
  return true;
}

namespace {

class GapSearch {
 public:
  explicit GapSearch(const GapInstance& gap) : gap_(gap) {
    load_.assign(gap.bins.size(), Rational(0));
    uses_.assign(gap.bins.size(), 0);
    current_.bin.assign(gap.num_elements, std::nullopt);
    best_.bin = current_.bin;
    suffix_.assign(gap.num_elements + 1, Rational(0));
    for (std::size_t e = gap.num_elements; e-- > 0;) {
      Rational top = 0;
      for (const auto& entry : gap.entries[e]) {
        if (entry.allowed && entry.size <= 1) top = std::max(top, entry.value);
      }
      suffix_[e] = suffix_[e + 1] + top;
    }
  }

  GapOptimum run() {
    dfs(0, Rational(0));
    return {best_value_, best_};
  }

 private:
  bool group_free(std::size_t b) const {
    for (std::size_t c = 0; c < gap_.bins.size(); ++c) {
      if (c != b && uses_[c] > 0 && gap_.bins[c].p == gap_.bins[b].p) return false;
    }
    return true;
  }

  void dfs(std::size_t e, const Rational& value) {
    if (value + suffix_[e] <= best_value_ && e > 0) return;
    if (e == gap_.num_elements) {
      if (value > best_value_) {
        best_value_ = value;
        best_ = current_;
      }
      return;
    }
    for (std::size_t b = 0; b < gap_.bins.size(); ++b) {
      const auto& entry = gap_.entry(e, b);
      if (!entry.allowed || load_[b] + entry.size > 1 || !group_free(b)) continue;
      load_[b] += entry.size;
      ++uses_[b];
      current_.bin[e] = b;
      dfs(e + 1, value + entry.value);
      current_.bin[e].reset();
      --uses_[b];
      load_[b] -= entry.size;
    }
    dfs(e + 1, value);
  }

  const GapInstance& gap_;
  std::vector<Rational> load_;
  std::vector<int> uses_;
  std::vector<Rational> suffix_;
  GapSolution current_, best_;
  Rational best_value_{0};
};

}  // namespace

GapOptimum exact_gap_opt(const GapInstance& gap) {
  if (gap.num_elements > 10 || gap.bins.size() > 12) {
    throw Error(ErrorCode::TooLarge, std::to_string(gap.num_elements) + " elements, " +
                                         std::to_string(gap.bins.size()) + " bins (limit 10 and 12)");
  }
  return GapSearch(gap).run();
}

BundledAllocation gap_solution_to_bundles(const GapInstance& gap, const GapSolution& sol) {
  if (!gap_feasible(gap, sol)) throw Error(ErrorCode::Infeasible, "GAP solution violates a bin or group");
  for (const auto& bin : gap.bins) {
    if (!sol.bin[bin.p]) throw Error(ErrorCode::NotMaximal, "element " + std::to_string(bin.p) + " is unplaced");
  }
  BundledAllocation out;
  for (std::size_t b = 0; b < gap.bins.size(); ++b) {
    if (sol.bin[gap.bins[b].p] != b) continue;
    Bundle bundle{gap.bins[b].buyer, gap.bins[b].p, {}};
    for (std::size_t e = 0; e < sol.bin.size(); ++e) {
      if (e != bundle.p_item && sol.bin[e] == b) bundle.n_items.push_back(e);
    }
    out.bundles.push_back(std::move(bundle));
  }
  return out;
}

GapSolution bundles_to_gap(const GapInstance& gap, const BundledAllocation& bundling) {
  GapSolution sol;
  sol.bin.assign(gap.num_elements, std::nullopt);
  for (const auto& bundle : bundling.bundles) {
    const auto b = gap.find_bin(bundle.p_item, bundle.buyer);
    if (!b) throw Error(ErrorCode::InvalidBundling, "bundle head is not a P-edge");
    sol.bin.at(bundle.p_item) = b;
    for (auto i : bundle.n_items) sol.bin.at(i) = b;
  }
  return sol;
}

}  // namespace ava
