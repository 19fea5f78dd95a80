#ifndef AVA_GENERATORS_HPP
#define AVA_GENERATORS_HPP

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "ava/instance.hpp"
#include "ava/lp_models.hpp"

namespace ava {

/// n unit-rho buyers; item "p" worth 1 + n eps to every buyer; item "n<i>" worth
/// 1 - eps to buyer i only.  Requires n >= 1, 0 < eps < 1/n.
Instance gen_integrality_gap(std::size_t n, const Rational& eps);

/// Same shape as the integrality-gap family with k buyers.
Instance gen_supply_example(std::size_t k, const Rational& eps);

/// One unit-rho buyer, floor(1/eps) N-items worth 1 - eps and
/// floor(1/(eps (1 - eps))) P-items worth 1 + eps (1 - eps).  A note is added when
/// either count had to be rounded down.
Instance gen_tightness_example(const Rational& eps);

struct SetSystem {
  std::size_t num_elements = 0;
  std::vector<std::vector<std::size_t>> sets;
};

/// One buyer per set, k choice items worth 1 + (eps/2) n/k to every buyer, one
/// element item per element worth 1 - eps/2 to the buyers whose set contains it.
/// Requires every set to have n/k elements.
Instance gen_max_coverage(const SetSystem& system, std::size_t k, const Rational& eps);

struct Graph {
  std::size_t num_vertices = 0;
  std::vector<std::pair<std::size_t, std::size_t>> edges;
};

/// GenAVA instance with M = 2|E| / n^eps.  Vertex item v: value M and cost
/// M + deg(v) for buyer v.  Edge item uv: value 1, cost 0 for buyers u and v.
Instance gen_genava_clique(const Graph& graph, const Rational& eps = Rational(1));

/// Same construction with an explicit M and degree multiplier R (cost M + R deg(v)).
Instance gen_genava_clique_with(const Graph& graph, const Rational& big_m, std::size_t r);

/// i.i.d. variant: vertex types with probability 1/(2|V|), edge types with
/// 1/(2|E|), horizon ceil(2 (1 + eps/2) R |E|).
IidModel gen_genava_iid(const Graph& graph, const Rational& big_m, std::size_t r, const Rational& eps);

struct BicriteriaInstance {
  Instance instance;
  Rational eps;  // 1 / (M + d + 1)
};

/// d-regular graph, M = d^2.
BicriteriaInstance gen_bicriteria(const Graph& regular_graph);

/// T unit-rho buyers and T equiprobable types: N-type i < T-1 worth 1 - 1/T to
/// buyer i, and one P-type worth 2 to every buyer.
IidModel gen_iid_lower_bound(std::size_t horizon);

struct AdversarialInstance {
  Instance instance;
  std::vector<std::size_t> arrival_order;
};

/// T unit-rho buyers; T - 1 items worth 1 - eps to every buyer, then one item worth
/// 1 + eps T to the last buyer only.
AdversarialInstance gen_adversarial_T(std::size_t horizon, const Rational& eps);

struct RandomParams {
  std::size_t num_items = 6;
  std::size_t num_buyers = 3;
  double edge_prob = 0.6;
  /// Probability that an item (unambiguous mode) or an edge (otherwise) is P.
  double p_fraction = 0.5;
  /// N-edge values are drawn from [n_low, 1) and P-edge values from [1, p_high],
  /// on a grid of step 1/grid, then scaled by rho_j.
  Rational n_low = Rational(1, 2);
  Rational p_high = Rational(2);
  std::size_t grid = 20;
  bool unambiguous = true;
  bool vary_rho = true;
  /// Budgets: `resources` resources, B_j = 1, resource costs on the grid in (0, bid_ratio].
  std::size_t resources = 0;
  Rational bid_ratio = Rational(1, 20);
  std::uint64_t seed = 1;
};

Instance gen_random(const RandomParams& params);

/// Random types from gen_random, probabilities proportional to weights in 1..4.
IidModel gen_random_model(const RandomParams& params, std::size_t horizon);

}  // namespace ava

#endif  // AVA_GENERATORS_HPP
