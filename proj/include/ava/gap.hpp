#ifndef AVA_GAP_HPP
#define AVA_GAP_HPP

#include <cstddef>
#include <optional>
#include <vector>

#include "ava/bundling.hpp"
#include "ava/instance.hpp"

namespace ava {

/// Matroid-constrained GAP image of an unambiguous instance.  Elements are the
/// items; one unit-capacity bin per P-edge (p, j), grouped by p, and at most one
/// bin per group may be used.
struct GapInstance {
  struct Bin {
    std::size_t p;
    std::size_t buyer;
  };
  struct Entry {
    bool allowed = false;
    Rational value;
    Rational size;
  };

  std::size_t num_elements = 0;
  std::vector<Bin> bins;  // ordered by p, then buyer
  std::vector<std::vector<Entry>> entries;  // [element][bin]
  Rational eps_gap;

  const Entry& entry(std::size_t e, std::size_t b) const { return entries.at(e).at(b); }
  std::optional<std::size_t> find_bin(std::size_t p, std::size_t buyer) const;
};

/// Own P-item: value v_pj, size 0.  Other P-items: value 0, size 1 + eps_gap.
/// N-item i with an edge to j: value v_ij, size (rho_j - v_ij) / (v_pj - rho_j) when
/// the bin has positive excess, else 1 + eps_gap.  Error AmbiguousInstance.
GapInstance export_gap(const Instance& inst, const Rational& eps_gap = Rational(1));

/// Bin per element, nullopt when unplaced.
struct GapSolution {
  std::vector<std::optional<std::size_t>> bin;
};

Rational gap_value(const GapInstance& gap, const GapSolution& sol);
/// Allowed entries, unit capacities, at most one used bin per group.
bool gap_feasible(const GapInstance& gap, const GapSolution& sol);

struct GapOptimum {
  Rational value;
  GapSolution solution;
};

/// Exhaustive optimum for at most 10 elements and 12 bins (else Error TooLarge).
GapOptimum exact_gap_opt(const GapInstance& gap);

/// Error Infeasible for an infeasible solution, NotMaximal when some P-item with a
/// bin is unplaced.
BundledAllocation gap_solution_to_bundles(const GapInstance& gap, const GapSolution& sol);

/// Inverse of gap_solution_to_bundles.  Error InvalidBundling for a bundle whose
/// P-edge has no bin.
GapSolution bundles_to_gap(const GapInstance& gap, const BundledAllocation& bundling);

}  // namespace ava

#endif  // AVA_GAP_HPP
