#ifndef AVA_EXACT_HPP
#define AVA_EXACT_HPP

#include <cstdint>

#include "ava/bundling.hpp"
#include "ava/instance.hpp"

namespace ava {

struct ExactLimits {
  std::uint64_t max_states = 10'000'000;
};

/// Size of the assignment space: product over items of (degree + 1), saturating.
std::uint64_t assignment_states(const Instance& inst);

struct ExactResult {
  Rational value;
  Allocation allocation;
};

struct ExactBundlingResult {
  Rational value;
  BundledAllocation bundling;
};

/// Optimal feasible allocation (average-value, GenAVA costs and budgets) by
/// branch-and-bound over items, buyers in declaration order before "unassigned".
/// The first optimum found in that order is returned.  Error TooLarge.
ExactResult exact_opt(const Instance& inst, const ExactLimits& limits = {});

/// Optimal allocation that can be partitioned into permissible bundles.
ExactBundlingResult exact_bundling_opt(const Instance& inst, const ExactLimits& limits = {});

}  // namespace ava

#endif  // AVA_EXACT_HPP
