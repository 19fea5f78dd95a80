#include "ava/generators.hpp"

#include <cmath>
#include <string>

#include "ava/error.hpp"
#include "ava/rng.hpp"

namespace ava {

namespace {

std::string idx(const char* prefix, std::size_t i) { return prefix + std::to_string(i); }

Rational floor_rational(const Rational& r) { return -ceil_rational(-r); }

long to_long(const Rational& integral) { return numerator(integral).convert_to<long>(); }

}  // namespace

Instance gen_integrality_gap(std::size_t n, const Rational& eps) {
  if (n == 0) throw Error(ErrorCode::BadParameter, "n must be at least 1");
  if (eps <= 0 || eps * n >= 1) throw Error(ErrorCode::BadParameter, "eps must lie in (0, 1/n)");
  InstanceBuilder b;
  for (std::size_t j = 0; j < n; ++j) b.add_buyer(idx("b", j + 1), 1);
  const auto p = b.add_item("p");
  for (std::size_t j = 0; j < n; ++j) b.set_value(p, j, 1 + eps * n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto item = b.add_item(idx("n", i + 1));
    b.set_value(item, i, 1 - eps);
  }
  return b.build();
}

Instance gen_supply_example(std::size_t k, const Rational& eps) { return gen_integrality_gap(k, eps); }

Instance gen_tightness_example(const Rational& eps) {
  if (eps <= 0 || eps >= 1) throw Error(ErrorCode::BadParameter, "eps must lie in (0, 1)");
  const Rational n_exact = 1 / eps;
  const Rational p_exact = 1 / (eps * (1 - eps));
  const long n_count = to_long(floor_rational(n_exact));
  const long p_count = to_long(floor_rational(p_exact));
  InstanceBuilder b;
  b.add_buyer("b1", 1);
  if (Rational(n_count) != n_exact) {
    b.add_note("N-item count 1/eps = " + to_string(n_exact) + " rounded down to " + std::to_string(n_count));
  }
  if (Rational(p_count) != p_exact) {
    b.add_note("P-item count 1/(eps(1-eps)) = " + to_string(p_exact) + " rounded down to " +
               std::to_string(p_count));
  }
  for (long i = 0; i < n_count; ++i) b.set_value(b.add_item(idx("n", static_cast<std::size_t>(i) + 1)), 0, 1 - eps);
  for (long i = 0; i < p_count; ++i) {
    b.set_value(b.add_item(idx("p", static_cast<std::size_t>(i) + 1)), 0, 1 + eps * (1 - eps));
  }
  return b.build();
}

Instance gen_max_coverage(const SetSystem& system, std::size_t k, const Rational& eps) {
  const auto n = system.num_elements;
  if (k == 0 || n == 0 || n % k != 0) throw Error(ErrorCode::BadParameter, "need k dividing n");
  if (eps <= 0 || eps >= 2) throw Error(ErrorCode::BadParameter, "eps must lie in (0, 2)");
  for (const auto& s : system.sets) {
    if (s.size() != n / k) throw Error(ErrorCode::BadParameter, "every set must have n/k elements");
    for (auto e : s) {
      if (e >= n) throw Error(ErrorCode::BadParameter, "set references an unknown element");
    }
  }
  InstanceBuilder b;
  for (std::size_t s = 0; s < system.sets.size(); ++s) b.add_buyer(idx("S", s + 1), 1);
  const Rational choice = 1 + eps / 2 * Rational(static_cast<long>(n), static_cast<long>(k));
  for (std::size_t c = 0; c < k; ++c) {
    const auto item = b.add_item(idx("choice", c + 1));
    for (std::size_t s = 0; s < system.sets.size(); ++s) b.set_value(item, s, choice);
  }
  for (std::size_t e = 0; e < n; ++e) {
    const auto item = b.add_item(idx("e", e + 1));
    for (std::size_t s = 0; s < system.sets.size(); ++s) {
      for (auto x : system.sets[s]) {
        if (x == e) b.set_value(item, s, 1 - eps / 2);
      }
    }
  }
  return b.build();
}

Instance gen_genava_clique_with(const Graph& graph, const Rational& big_m, std::size_t r) {
  std::vector<std::size_t> degree(graph.num_vertices, 0);
  for (const auto& [u, v] : graph.edges) {
    if (u >= graph.num_vertices || v >= graph.num_vertices || u == v) {
      throw Error(ErrorCode::BadParameter, "graph must be simple with valid endpoints");
    }
    ++degree[u];
    ++degree[v];
  }
  InstanceBuilder b;
  b.enable_costs();
  for (std::size_t v = 0; v < graph.num_vertices; ++v) b.add_buyer(idx("j", v + 1), 1);
  for (std::size_t v = 0; v < graph.num_vertices; ++v) {
    const auto item = b.add_item(idx("v", v + 1));
    b.set_value(item, v, big_m);
    b.set_cost(item, v, big_m + Rational(static_cast<long>(r * degree[v])));
  }
  for (const auto& [u, v] : graph.edges) {
    const auto item = b.add_item("e" + std::to_string(u + 1) + "_" + std::to_string(v + 1));
    for (auto w : {u, v}) {
      b.set_value(item, w, 1);
      b.set_cost(item, w, 0);
    }
  }
  return b.build();
}

Instance gen_genava_clique(const Graph& graph, const Rational& eps) {
  if (graph.edges.empty()) throw Error(ErrorCode::BadParameter, "graph needs at least one edge (M would be 0)");
  const Rational n(static_cast<long>(graph.num_vertices));
  Rational n_pow;
  if (denominator(eps) == 1 && eps >= 0) {
    n_pow = 1;
    for (long k = 0; k < to_long(eps); ++k) n_pow *= n;
  } else {
    n_pow = rational_from_double(std::pow(to_double(n), to_double(eps)));
  }
  const Rational big_m = 2 * Rational(static_cast<long>(graph.edges.size())) / n_pow;
  return gen_genava_clique_with(graph, big_m, 1);
}

IidModel gen_genava_iid(const Graph& graph, const Rational& big_m, std::size_t r, const Rational& eps) {
  if (graph.edges.empty() || r == 0) throw Error(ErrorCode::BadParameter, "need edges and R >= 1");
  IidModel model;
  model.types = gen_genava_clique_with(graph, big_m, r);
  const Rational nv(static_cast<long>(graph.num_vertices));
  const Rational ne(static_cast<long>(graph.edges.size()));
  for (std::size_t v = 0; v < graph.num_vertices; ++v) model.probs.push_back(1 / (2 * nv));
  for (std::size_t e = 0; e < graph.edges.size(); ++e) model.probs.push_back(1 / (2 * ne));
  model.horizon = static_cast<std::size_t>(to_long(ceil_rational(2 * (1 + eps / 2) * Rational(static_cast<long>(r)) * ne)));
  model.validate();
  return model;
}

BicriteriaInstance gen_bicriteria(const Graph& regular_graph) {
  std::vector<std::size_t> degree(regular_graph.num_vertices, 0);
  for (const auto& [u, v] : regular_graph.edges) {
    if (u < degree.size()) ++degree[u];
    if (v < degree.size()) ++degree[v];
  }
  if (degree.empty() || degree[0] == 0) throw Error(ErrorCode::BadParameter, "need a d-regular graph with d >= 1");
  for (auto d : degree) {
    if (d != degree[0]) throw Error(ErrorCode::BadParameter, "graph is not regular");
  }
  const long d = static_cast<long>(degree[0]);
  const Rational big_m(d * d);
  return {gen_genava_clique_with(regular_graph, big_m, 1), Rational(1) / (big_m + d + 1)};
}

IidModel gen_iid_lower_bound(std::size_t horizon) {
  if (horizon < 2) throw Error(ErrorCode::BadParameter, "T must be at least 2");
  const Rational t(static_cast<long>(horizon));
  InstanceBuilder b;
  for (std::size_t j = 0; j < horizon; ++j) b.add_buyer(idx("j", j + 1), 1);
  for (std::size_t i = 0; i + 1 < horizon; ++i) b.set_value(b.add_item(idx("n", i + 1)), i, 1 - 1 / t);
  const auto p = b.add_item("p");
  for (std::size_t j = 0; j < horizon; ++j) b.set_value(p, j, 2);
  IidModel model{b.build(), std::vector<Rational>(horizon, 1 / t), horizon};
  model.validate();
  return model;
}

AdversarialInstance gen_adversarial_T(std::size_t horizon, const Rational& eps) {
  if (horizon < 2) throw Error(ErrorCode::BadParameter, "T must be at least 2");
  if (eps <= 0 || eps >= 1) throw Error(ErrorCode::BadParameter, "eps must lie in (0, 1)");
  InstanceBuilder b;
  for (std::size_t j = 0; j < horizon; ++j) b.add_buyer(idx("j", j + 1), 1);
  AdversarialInstance out;
  for (std::size_t i = 0; i + 1 < horizon; ++i) {
    const auto item = b.add_item(idx("a", i + 1));
    for (std::size_t j = 0; j < horizon; ++j) b.set_value(item, j, 1 - eps);
    out.arrival_order.push_back(item);
  }
  const auto last = b.add_item("last");
  b.set_value(last, horizon - 1, 1 + eps * Rational(static_cast<long>(horizon)));
  out.arrival_order.push_back(last);
  out.instance = b.build();
  return out;
}

Instance gen_random(const RandomParams& params) {
  if (params.grid == 0 || params.n_low < 0 || params.n_low >= 1 || params.p_high < 1) {
    throw Error(ErrorCode::BadParameter, "need grid >= 1, 0 <= n_low < 1, p_high >= 1");
  }
  const CounterRng rng(params.seed);
  const auto g = static_cast<long>(params.grid);
  const auto n_steps = static_cast<std::uint64_t>(to_long(ceil_rational((1 - params.n_low) * g)));
  const auto p_steps = static_cast<std::uint64_t>(to_long(floor_rational((params.p_high - 1) * g))) + 1;
  static const Rational kRhoChoices[] = {Rational(1, 2), Rational(1), Rational(3, 2), Rational(2)};

  InstanceBuilder b;
  std::vector<Rational> rho;
  for (std::size_t j = 0; j < params.num_buyers; ++j) {
    rho.push_back(params.vary_rho ? kRhoChoices[rng.below(4, {stream::kGenerator, 0, j})] : Rational(1));
    b.add_buyer(idx("b", j + 1), rho.back());
  }
  for (std::size_t r = 0; r < params.resources; ++r) {
    b.add_resource(idx("r", r + 1));
    for (std::size_t j = 0; j < params.num_buyers; ++j) b.set_budget(j, r, 1);
  }
  for (std::size_t i = 0; i < params.num_items; ++i) {
    const auto item = b.add_item(idx("i", i + 1));
    const bool item_is_p = rng.bernoulli(params.p_fraction, {stream::kGenerator, 1, i});
    for (std::size_t j = 0; j < params.num_buyers; ++j) {
      if (!rng.bernoulli(params.edge_prob, {stream::kGenerator, 2, i, j})) continue;
      const bool is_p = params.unambiguous ? item_is_p : rng.bernoulli(params.p_fraction, {stream::kGenerator, 3, i, j});
      Rational unit;
      if (is_p) {
        unit = 1 + Rational(static_cast<long>(rng.below(p_steps, {stream::kGenerator, 4, i, j})), g);
      } else {
        unit = params.n_low + Rational(static_cast<long>(rng.below(n_steps, {stream::kGenerator, 4, i, j})), g);
        if (unit >= 1) unit = 1 - Rational(1, g);
      }
      b.set_value(item, j, unit * rho[j]);
      for (std::size_t r = 0; r < params.resources; ++r) {
        const auto step = rng.below(params.grid, {stream::kGenerator, 5, i, j, r}) + 1;
        b.set_resource_cost(item, j, r, params.bid_ratio * Rational(static_cast<long>(step), g));
      }
    }
  }
  return b.build();
}

IidModel gen_random_model(const RandomParams& params, std::size_t horizon) {
  IidModel model;
  model.types = gen_random(params);
  model.horizon = horizon;
  const CounterRng rng(params.seed);
  Rational total = 0;
  std::vector<long> weights;
  for (std::size_t i = 0; i < params.num_items; ++i) {
    weights.push_back(static_cast<long>(rng.below(4, {stream::kGenerator, 6, i})) + 1);
    total += weights.back();
  }
  for (auto w : weights) model.probs.push_back(Rational(w) / total);
  model.validate();
  return model;
}

}  // namespace ava
