#ifndef AVA_BUNDLING_HPP
#define AVA_BUNDLING_HPP

#include <cstddef>
#include <utility>
#include <vector>

#include "ava/instance.hpp"
#include "ava/rng.hpp"

namespace ava {

/// One P-edge (p_item, buyer) plus N-edges to the same buyer.
struct Bundle {
  std::size_t buyer = 0;
  std::size_t p_item = 0;
  std::vector<std::size_t> n_items;

  bool operator==(const Bundle&) const = default;
};

/// Item-disjoint collection of permissible bundles.
struct BundledAllocation {
  std::vector<Bundle> bundles;

  bool operator==(const BundledAllocation&) const = default;
};

/// Sum of excesses of the bundle's edges (>= 0 iff the bundle satisfies its own
/// average-value constraint).
Rational bundle_residual(const Instance& inst, const Bundle& bundle);

/// Head is a P-edge, members are N-edges of the same buyer, residual >= 0.
bool is_permissible(const Instance& inst, const Bundle& bundle);

/// Throws Error(InvalidBundling) on a non-permissible bundle, a non-edge, or an item
/// used twice.
void validate_bundling(const Instance& inst, const BundledAllocation& bundling);

Allocation flatten(const Instance& inst, const BundledAllocation& bundling);
Rational bundling_value(const Instance& inst, const BundledAllocation& bundling);

/// Committed online bundling of a feasible allocation revealed in `arrival_order`.
///
/// Every P-edge opens a bundle.  An N-edge joins the open bundle of its buyer with
/// the largest residual that can absorb it; if none can, the open bundle with the
/// smallest residual is closed and the N-edge is dropped.  Items of `alloc` missing
/// from `arrival_order` are appended in index order.  The result keeps at least half
/// of the allocation's value.
///
/// Throws Error(InfeasiblePrefix) if some prefix violates a buyer's constraint.
BundledAllocation extract_bundling(const Instance& inst, const Allocation& alloc,
                                   const std::vector<std::size_t>& arrival_order);

/// For each ambiguous item, with probability 1/2 drop its P-edges, else its N-edges.
/// Items that are already P- or N-items keep all edges.
Instance make_unambiguous_random(const Instance& inst, const CounterRng& rng);

/// Instance in which every ambiguous item i is split into a positive copy (only its
/// P-edges) and a negative copy (only its N-edges).
struct SplitInstance {
  Instance original;
  Instance split;
  std::vector<std::size_t> origin;  // split item -> original item
  std::vector<bool> positive;       // split item is the positive copy (or unsplit P/N item)
  std::vector<bool> was_split;      // split item came from an ambiguous original
};

SplitInstance split_ambiguous(const Instance& inst);

/// Converts a bundling of the split instance into a bundling of the original items
/// that uses every original item at most once, keeping at least half the value.
/// Returns the unambiguous sub-instance (each original item keeps the edge side it
/// is used with; unused ambiguous items keep their P-edges) and the bundling on it.
///
/// Throws Error(InvalidBundling) if the bundling is not valid for the split instance.
std::pair<Instance, BundledAllocation> make_unambiguous_deterministic(
    const SplitInstance& split, const BundledAllocation& bundling);

/// Every item replaced by k identical copies (ids "<id>#<copy>"); buyers unchanged.
Instance duplicate_supply(const Instance& inst, std::size_t k);

}  // namespace ava

#endif  // AVA_BUNDLING_HPP
