#ifndef AVA_GENAVA_HPP
#define AVA_GENAVA_HPP

#include <optional>
#include <vector>

#include "ava/instance.hpp"

namespace ava {

/// Every item goes to argmax { v_ij : v_ij >= (1 - eps) rho_j c_ij }, ties to the
/// earlier buyer.  Requires 0 < eps < 1 and no budgets (Error BadParameter).
Allocation genava_bicriteria_greedy(const Instance& inst, const Rational& eps);

/// rho_j * sum c_ij / sum v_ij per buyer; nullopt for a buyer with no value.
std::vector<std::optional<Rational>> cost_value_ratios(const Instance& inst, const Allocation& alloc);

/// Ratio bound of the bicriteria greedy: 1 / (1 - eps) = 1 + eps / (1 - eps).
Rational bicriteria_ratio_bound(const Rational& eps);

/// Best single buyer: all its P-edges plus a knapsack over its N-edges (weight =
/// deficit, capacity = total P excess) solved by the better of density-greedy and
/// the best single fitting N-edge.  Ties to the earlier buyer.  Always feasible.
/// Error BadParameter if the instance has budgets.
Allocation genava_single_buyer(const Instance& inst);

}  // namespace ava

#endif  // AVA_GENAVA_HPP
