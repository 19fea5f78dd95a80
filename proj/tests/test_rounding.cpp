#include "doctest.h"

#include <cmath>
#include <sstream>

#include "json.hpp"

#include "ava/error.hpp"
#include "ava/generators.hpp"
#include "ava/rounding.hpp"

using namespace ava;

namespace {

Rational q(const char* s) { return parse_rational(s); }

BundleLpSolution solve(const BundleLp& lp) {
  auto sol = solve_bundle_lp(lp);
  REQUIRE(sol.status == LpStatus::Optimal);
  return sol;
}

void check_feasible(const Instance& inst, const BundledAllocation& bundling) {
  CHECK_NOTHROW(validate_bundling(inst, bundling));
  CHECK(is_feasible(inst, flatten(inst, bundling)).feasible);
}

Instance p_only(std::uint64_t seed) {
  RandomParams p;
  p.p_fraction = 1;
  p.seed = seed;
  return gen_random(p);
}

// One buyer, one P-item (excess 1) and two N-items costing 1/2 of budget each.
Instance budgeted_pair(const Rational& budget) {
  InstanceBuilder b;
  b.add_buyer("b", 1);
  const auto r = b.add_resource("cash");
  b.set_budget(0, r, budget);
  const auto p = b.add_item("p");
  b.set_value(p, 0, 2);
  b.set_resource_cost(p, 0, r, q("0.25"));
  for (int k = 0; k < 2; ++k) {
    const auto n = b.add_item("n" + std::to_string(k));
    b.set_value(n, 0, q("0.5"));
    b.set_resource_cost(n, 0, r, q("0.5"));
  }
  return b.build();
}

}  // namespace

TEST_CASE("gamma formulas") {
  CHECK(gamma_offline(0.3, 0.5) == doctest::Approx(0.084));
  CHECK(gamma_online(0.64, 0.5) == doctest::Approx(0.32 * 0.68 * 0.36));
  CHECK(gamma_offline(0.8, 0.5) < 0);

  const auto vacuous = budgeted_guarantee(1.0 / 3, 1, 0.05);
  CHECK(vacuous.success_probability < 0);
  CHECK_FALSE(vacuous.constant.has_value());

  const auto g = budgeted_guarantee(0.05, 1, 0.05);
  CHECK(g.success_probability == doctest::Approx(1 - 0.1 - 0.1 / 0.95));
  CHECK(g.gamma == doctest::Approx(0.05 * 0.95 * g.success_probability));
  REQUIRE(g.constant.has_value());
  CHECK(*g.constant == doctest::Approx(1 / g.gamma));

  CHECK_THROWS_AS((RoundingParams{0, 0.5, 1}).validate(), Error);
  CHECK_THROWS_AS((RoundingParams{0.3, 1, 1}).validate(), Error);
}

TEST_CASE("single P-item with x = 1 is always allocated") {
  InstanceBuilder b;
  b.add_buyer("b", 1);
  b.set_value(b.add_item("p"), 0, 3);
  const auto inst = b.build();
  const auto x = solve(build_bundle_lp(inst));
  const OfflineRounder rounder(inst, x);
  for (std::uint64_t s = 1; s <= 50; ++s) CHECK(bundling_value(inst, rounder.round({0.3, 0.5, s})) == 3);
}

TEST_CASE("P-only instances: mean matches the LP") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto inst = p_only(seed);
    const auto x = solve(build_bundle_lp(inst));
    const OfflineRounder rounder(inst, x);
    const int trials = 4000;
    double sum = 0, sum_sq = 0;
    for (int k = 0; k < trials; ++k) {
      const auto v = to_double(bundling_value(inst, rounder.round({0.3, 0.5, 1000 + static_cast<std::uint64_t>(k)})));
      sum += v;
      sum_sq += v * v;
    }
    const double mean = sum / trials;
    const double sd = std::sqrt(std::max(0.0, sum_sq / trials - mean * mean));
    CHECK(std::abs(mean - x.objective) <= 3 * sd / std::sqrt(trials) + 1e-9);
  }
}

TEST_CASE("offline rounding on the integrality-gap family") {
  const auto inst = gen_integrality_gap(3, q("0.1"));
  const auto x = solve(build_bundle_lp(inst));
  const OfflineRounder rounder(inst, x);
  double sum = 0;
  const int trials = 2000;
  for (int k = 0; k < trials; ++k) {
    const auto out = rounder.round({0.3, 0.5, static_cast<std::uint64_t>(k)});
    check_feasible(inst, out);
    sum += to_double(bundling_value(inst, out));
  }
  CHECK(sum / trials >= 2.2 / 32);
}

TEST_CASE("offline rounding is deterministic and always feasible") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    RandomParams p;
    p.num_items = 8;
    p.seed = seed;
    const auto inst = gen_random(p);
    const auto x = solve(build_bundle_lp(inst));
    const OfflineRounder rounder(inst, x);
    for (std::uint64_t s = 0; s < 50; ++s) {
      const auto a = rounder.round({0.3, 0.5, s});
      CHECK(a == rounder.round({0.3, 0.5, s}));
      CHECK(a == round_offline(inst, x, {0.3, 0.5, s}));
      check_feasible(inst, a);
    }
  }
}

TEST_CASE("Phase-I open rates match x") {
  RandomParams p;
  p.num_items = 8;
  p.seed = 11;
  const auto inst = gen_random(p);
  const auto x = solve(build_bundle_lp(inst));
  const OfflineRounder rounder(inst, x);
  const auto& bundles = x.layout.bundles();
  std::vector<int> opened(bundles.size(), 0);
  const int trials = 5000;
  for (int k = 0; k < trials; ++k) {
    for (const auto& b : rounder.round({0.3, 0.5, static_cast<std::uint64_t>(k)}).bundles) {
      for (std::size_t idx = 0; idx < bundles.size(); ++idx) {
        if (bundles[idx].p == b.p_item && bundles[idx].buyer == b.buyer) ++opened[idx];
      }
    }
  }
  for (std::size_t idx = 0; idx < bundles.size(); ++idx) {
    const double xp = x.x[bundles[idx].head_var];
    const double sigma = std::sqrt(xp * (1 - xp) / trials);
    CHECK(std::abs(opened[idx] / static_cast<double>(trials) - xp) <= 3 * sigma + 1e-9);
  }
}

TEST_CASE("infeasible fractional solutions are rejected") {
  const auto inst = gen_integrality_gap(2, q("0.1"));
  const auto layout = BundleLayout::from(inst);
  const auto over = BundleLpSolution::from_values(layout, {{{0, 0, 0}, 1}, {{0, 1, 0}, 1}});
  try {
    OfflineRounder rounder(inst, over);
    FAIL("expected InfeasibleFractional");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InfeasibleFractional);
  }
  const auto ok = BundleLpSolution::from_values(layout, {{{0, 0, 0}, q("0.5")}, {{0, 1, 0}, q("0.5")}});
  CHECK_NOTHROW(OfflineRounder(inst, ok));
}

TEST_CASE("budgeted rounding") {
  // Budgets that never bind give the unbudgeted outcome.
  const auto loose = budgeted_pair(100);
  const auto x = solve(build_bundle_lp_budgeted(loose));
  for (std::uint64_t s = 0; s < 100; ++s) {
    CHECK(round_offline_budgeted(loose, x, {0.3, 0.5, s}) == round_offline(loose, x, {0.3, 0.5, s}));
  }

  // A budget of 1 admits the head and one N-item.
  const auto tight = budgeted_pair(1);
  const auto xt = solve(build_bundle_lp_budgeted(tight));
  const OfflineRounder rounder(tight, xt, true);
  for (std::uint64_t s = 0; s < 300; ++s) {
    const auto out = rounder.round({0.9, 0.5, s});
    check_feasible(tight, out);
    for (const auto& b : out.bundles) CHECK(b.n_items.size() <= 1);
  }

  CHECK(default_budgeted_alpha(tight) == doctest::Approx(1.0 / 3));
}

TEST_CASE("budgeted rounding respects every budget on random instances") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    RandomParams p;
    p.num_items = 12;
    p.num_buyers = 2;
    p.edge_prob = 1;
    p.resources = 1 + seed % 2;
    p.bid_ratio = Rational(1, 4);
    p.seed = seed;
    const auto inst = gen_random(p);
    const auto x = solve(build_bundle_lp_budgeted(inst));
    const OfflineRounder rounder(inst, x, true);
    for (std::uint64_t s = 0; s < 100; ++s) check_feasible(inst, rounder.round({0.5, 0.5, s}));
  }
}

TEST_CASE("online: N-only stream gets nothing") {
  InstanceBuilder b;
  b.add_buyer("b", 1);
  b.set_value(b.add_item("n"), 0, q("0.5"));
  const IidModel model{b.build(), {Rational(1)}, 6};
  const auto x = solve(build_opton_lp(model));
  const OnlineRounder rounder(model, x);
  const OnlineStream stream{std::vector<std::size_t>(6, 0)};
  CHECK(rounder.round_value(stream, {0.64, 0.5, 1}) == 0);
}

TEST_CASE("online: single P-type fills phase one") {
  InstanceBuilder b;
  b.add_buyer("b", 1);
  b.set_value(b.add_item("p"), 0, 2);
  const IidModel model{b.build(), {Rational(1)}, 4};
  const auto x = solve(build_opton_lp(model));
  const OnlineRounder rounder(model, x);
  const OnlineStream stream{{0, 0, 0, 0}};
  const auto out = rounder.round(stream, {0.64, 0.5, 3});
  CHECK(bundling_value(out.realized, out.bundling) == 4);
  REQUIRE(out.trace.size() == 4);
  CHECK(out.trace[0].reason == TraceReason::Opened);
  CHECK(out.trace[1].reason == TraceReason::Opened);
  CHECK(out.trace[2].reason == TraceReason::NoPhase);
  CHECK(out.trace[3].reason == TraceReason::NoPhase);
}

TEST_CASE("online: stream validation") {
  const auto model = gen_iid_lower_bound(6);
  const auto x = solve(build_opton_lp(model));
  const OnlineRounder rounder(model, x);
  try {
    rounder.round(OnlineStream{{0, 1}}, {0.64, 0.5, 1});
    FAIL("expected StreamModelMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::StreamModelMismatch);
  }
  CHECK_THROWS_AS(rounder.round(OnlineStream{{0, 1, 2, 3, 4, 99}}, {0.64, 0.5, 1}), Error);
}

TEST_CASE("online: committed, prefix-feasible and traced") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    RandomParams p;
    p.num_items = 5;
    p.seed = 100 + seed;
    const auto model = gen_random_model(p, 20);
    const auto x = solve(build_opton_lp(model));
    const OnlineRounder rounder(model, x);
    for (std::uint64_t s = 0; s < 30; ++s) {
      const auto stream = sample_stream(model, CounterRng(s));
      const auto out = rounder.round(stream, {0.64, 0.5, s});
      check_feasible(out.realized, out.bundling);
      CHECK(bundling_value(out.realized, out.bundling) == rounder.round_value(stream, {0.64, 0.5, s}));
      REQUIRE(out.trace.size() == model.horizon);

      // Each allocated arrival appears in exactly the bundle its trace names; heads
      // come from phase one only.
      Allocation from_trace(model.horizon);
      for (const auto& rec : out.trace) {
        if (rec.buyer) from_trace.assign(rec.t - 1, *rec.buyer);
        if (rec.reason == TraceReason::Opened) CHECK(rec.t <= model.horizon / 2);
      }
      const auto flat = flatten(out.realized, out.bundling);
      for (std::size_t t = 0; t < model.horizon; ++t) CHECK(flat.buyer(t) == from_trace.buyer(t));

      // Every prefix of the allocation is feasible.
      for (std::size_t t = 1; t <= model.horizon; ++t) {
        Allocation prefix(model.horizon);
        for (std::size_t k = 0; k < t; ++k) {
          if (auto j = flat.buyer(k)) prefix.assign(k, *j);
        }
        CHECK(is_feasible(out.realized, prefix).feasible);
      }

      std::istringstream lines(trace_to_jsonl(model, out));
      std::string line;
      std::size_t count = 0;
      while (std::getline(lines, line)) {
        const auto j = nlohmann::json::parse(line);
        CHECK(j.contains("reason"));
        CHECK(j["t"] == count + 1);
        ++count;
      }
      CHECK(count == model.horizon);
    }
  }
}

TEST_CASE("sample_stream") {
  const auto model = gen_iid_lower_bound(10);
  const auto a = sample_stream(model, CounterRng(4));
  CHECK(a.types == sample_stream(model, CounterRng(4)).types);
  CHECK(a.types.size() == 10);
  std::vector<int> counts(10, 0);
  const int streams = 2000;
  for (int s = 0; s < streams; ++s) {
    for (auto type : sample_stream(model, CounterRng(static_cast<std::uint64_t>(s))).types) ++counts[type];
  }
  // Each type has mean T / 10 = 1 per stream.
  for (auto c : counts) CHECK(std::abs(c / static_cast<double>(streams) - 1) < 0.1);
}

TEST_CASE("greedy_p_only") {
  const auto adv = gen_adversarial_T(5, q("0.05"));
  const auto a = greedy_p_only(adv.instance, adv.arrival_order);
  CHECK(allocation_value(adv.instance, a) == q("1.25"));
  CHECK(is_feasible(adv.instance, a).feasible);

  const auto gap = gen_integrality_gap(3, q("0.1"));
  const auto g = greedy_p_only(gap);
  CHECK(g.buyer(0) == std::optional<std::size_t>(0));
  CHECK_FALSE(g.buyer(1).has_value());
}
