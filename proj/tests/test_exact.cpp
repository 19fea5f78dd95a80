#include "doctest.h"

#include <limits>
#include <random>

#include "ava/error.hpp"
#include "ava/exact.hpp"
#include "ava/generators.hpp"
#include "oracles.hpp"

using namespace ava;

namespace {

Rational q(const char* s) { return parse_rational(s); }

Instance random_genava(std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_int_distribution<int> tick(1, 20);
  std::bernoulli_distribution edge(0.6);
  InstanceBuilder b;
  b.add_buyer("b1", 1);
  b.add_buyer("b2", Rational(3, 2));
  for (int i = 0; i < 5; ++i) {
    const auto item = b.add_item("i" + std::to_string(i));
    for (std::size_t j = 0; j < 2; ++j) {
      if (!edge(gen)) continue;
      b.set_value(item, j, Rational(tick(gen), 10));
      b.set_cost(item, j, Rational(tick(gen) - 1, 10));
    }
  }
  return b.build();
}

void check_allocation(const Instance& inst, const ExactResult& r) {
  CHECK(is_feasible(inst, r.allocation).feasible);
  CHECK(allocation_value(inst, r.allocation) == r.value);
}

}  // namespace

TEST_CASE("examples") {
  CHECK(exact_opt(gen_integrality_gap(3, q("0.1"))).value == q("2.2"));
  CHECK(exact_bundling_opt(gen_integrality_gap(3, q("0.1"))).value == q("2.2"));

  const auto tight = gen_tightness_example(q("0.5"));
  CHECK(exact_opt(tight).value == 6);
  CHECK(exact_bundling_opt(tight).value == 5);

  InstanceBuilder empty;
  empty.add_buyer("b", 1);
  const auto none = empty.build();
  CHECK(exact_opt(none).value == 0);
  CHECK(exact_bundling_opt(none).value == 0);
}

TEST_CASE("exact_opt matches enumeration on AVA instances") {
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    RandomParams p;
    p.num_items = 3 + seed % 5;
    p.num_buyers = 1 + seed % 3;
    p.unambiguous = seed % 2 == 0;
    p.seed = seed;
    const auto inst = gen_random(p);
    const auto r = exact_opt(inst);
    CHECK(r.value == oracle::best(inst, false));
    check_allocation(inst, r);
  }
}

TEST_CASE("exact_opt matches enumeration with budgets") {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    RandomParams p;
    p.num_items = 4 + seed % 4;
    p.num_buyers = 1 + seed % 2;
    p.resources = 1 + seed % 2;
    p.bid_ratio = Rational(1, 2);
    p.unambiguous = false;
    p.seed = seed;
    const auto inst = gen_random(p);
    const auto r = exact_opt(inst);
    CHECK(r.value == oracle::best(inst, false));
    check_allocation(inst, r);
  }
}

TEST_CASE("exact_opt matches enumeration on GenAVA instances") {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const auto inst = random_genava(seed);
    const auto r = exact_opt(inst);
    CHECK(r.value == oracle::best(inst, false));
    check_allocation(inst, r);
  }
  const auto triangle = gen_genava_clique({3, {{0, 1}, {1, 2}, {0, 2}}});
  CHECK(exact_opt(triangle).value == oracle::best(triangle, false));
}

TEST_CASE("exact_bundling_opt matches enumeration") {
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    RandomParams p;
    p.num_items = 3 + seed % 5;
    p.num_buyers = 1 + seed % 3;
    p.unambiguous = seed % 3 != 0;
    p.seed = seed;
    const auto inst = gen_random(p);
    const auto r = exact_bundling_opt(inst);
    CHECK(r.value == oracle::best(inst, true));
    CHECK_NOTHROW(validate_bundling(inst, r.bundling));
    CHECK(bundling_value(inst, r.bundling) == r.value);
    CHECK(r.value <= exact_opt(inst).value);
  }
}

TEST_CASE("assignment_states") {
  const auto gap = gen_integrality_gap(3, q("0.1"));
  // p has 3 buyers, each n-item has one.
  CHECK(assignment_states(gap) == 4 * 2 * 2 * 2);

  RandomParams p;
  p.num_items = 40;
  p.num_buyers = 4;
  p.edge_prob = 1;
  const auto big = gen_random(p);
  CHECK(assignment_states(big) == std::numeric_limits<std::uint64_t>::max());
  try {
    exact_opt(big);
    FAIL("expected TooLarge");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::TooLarge);
  }
  CHECK_THROWS_AS(exact_opt(gap, ExactLimits{10}), Error);
  CHECK_THROWS_AS(exact_bundling_opt(gap, ExactLimits{10}), Error);
}
