#include "doctest.h"

#include "ava/error.hpp"
#include "ava/exact.hpp"
#include "ava/gap.hpp"
#include "ava/generators.hpp"
#include "ava/io.hpp"

using namespace ava;

namespace {

Rational q(const char* s) { return parse_rational(s); }

template <class F>
void expect_code(ErrorCode code, F&& f) {
  try {
    f();
    FAIL("expected " << error_code_name(code));
  } catch (const Error& e) {
    CHECK(e.code() == code);
  }
}

}  // namespace

TEST_CASE("export of the integrality-gap instance") {
  const auto inst = gen_integrality_gap(3, q("0.1"));
  const auto gap = export_gap(inst, q("0.5"));
  CHECK(gap.num_elements == 4);
  REQUIRE(gap.bins.size() == 3);
  CHECK(gap.bins[1].p == 0);
  CHECK(gap.bins[1].buyer == 1);

  // Own P-item.
  CHECK(gap.entry(0, 0).allowed);
  CHECK(gap.entry(0, 0).value == q("1.3"));
  CHECK(gap.entry(0, 0).size == 0);
  // N-item n1: deficit 0.1 over excess 0.3.
  CHECK(gap.entry(1, 0).allowed);
  CHECK(gap.entry(1, 0).value == q("0.9"));
  CHECK(gap.entry(1, 0).size == Rational(1, 3));
  CHECK_FALSE(gap.entry(1, 1).allowed);

  const auto opt = exact_gap_opt(gap);
  CHECK(opt.value == q("2.2"));
  CHECK(gap_feasible(gap, opt.solution));
  const auto bundling = gap_solution_to_bundles(gap, opt.solution);
  CHECK(bundling_value(inst, bundling) == q("2.2"));
  CHECK(bundles_to_gap(gap, bundling).bin == opt.solution.bin);
}

TEST_CASE("other P-items cannot fit a foreign bin") {
  const auto tight = gen_tightness_example(q("0.5"));
  const auto gap = export_gap(tight);
  for (std::size_t e = 0; e < gap.num_elements; ++e) {
    if (!tight.is_p_item(e)) continue;
    for (std::size_t b = 0; b < gap.bins.size(); ++b) {
      if (gap.bins[b].p == e) continue;
      CHECK(gap.entry(e, b).value == 0);
      CHECK(gap.entry(e, b).size == 2);
    }
  }
  CHECK(exact_gap_opt(gap).value == 5);
}

TEST_CASE("zero-excess heads give oversized N-entries") {
  InstanceBuilder b;
  b.add_buyer("b", 1);
  b.set_value(b.add_item("p"), 0, 1);
  b.set_value(b.add_item("n"), 0, q("0.5"));
  const auto gap = export_gap(b.build(), q("0.25"));
  CHECK(gap.entry(1, 0).size == q("1.25"));
  CHECK(exact_gap_opt(gap).value == 1);
}

TEST_CASE("GAP optimum equals the bundling optimum") {
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    RandomParams p;
    // At most 12 bins: three buyers only with up to four items.
    p.num_buyers = 1 + seed % 3;
    p.num_items = p.num_buyers == 3 ? 3 + seed % 2 : 3 + seed % 4;
    p.seed = seed;
    const auto inst = gen_random(p);
    const auto gap = export_gap(inst);
    const auto opt = exact_gap_opt(gap);
    const auto best = exact_bundling_opt(inst);
    CHECK(opt.value == best.value);

    const auto bundling = gap_solution_to_bundles(gap, opt.solution);
    CHECK_NOTHROW(validate_bundling(inst, bundling));
    CHECK(bundling_value(inst, bundling) == opt.value);

    const auto back = bundles_to_gap(gap, best.bundling);
    CHECK(gap_feasible(gap, back));
    CHECK(gap_value(gap, back) == best.value);
  }
}

TEST_CASE("conversion errors") {
  const auto inst = gen_integrality_gap(2, q("0.1"));
  const auto gap = export_gap(inst);

  GapSolution empty{std::vector<std::optional<std::size_t>>(gap.num_elements)};
  expect_code(ErrorCode::NotMaximal, [&] { gap_solution_to_bundles(gap, empty); });

  GapSolution wrong = empty;
  wrong.bin[0] = 0;
  wrong.bin[2] = 0;  // n2 has no edge to b1
  CHECK_FALSE(gap_feasible(gap, wrong));
  expect_code(ErrorCode::Infeasible, [&] { gap_solution_to_bundles(gap, wrong); });

  BundledAllocation foreign{{Bundle{0, 1, {}}}};
  expect_code(ErrorCode::InvalidBundling, [&] { bundles_to_gap(gap, foreign); });

  InstanceBuilder amb;
  amb.add_buyer("b1", 1);
  amb.add_buyer("b2", 1);
  const auto i = amb.add_item("i");
  amb.set_value(i, 0, 2);
  amb.set_value(i, 1, q("0.5"));
  expect_code(ErrorCode::AmbiguousInstance, [&] { export_gap(amb.build()); });

  RandomParams p;
  p.num_items = 12;
  expect_code(ErrorCode::TooLarge, [&] { exact_gap_opt(export_gap(gen_random(p))); });
}

TEST_CASE("GAP JSON export") {
  const auto gap = export_gap(gen_integrality_gap(2, q("0.1")), q("0.5"));
  const auto j = gap_to_json(gen_integrality_gap(2, q("0.1")), gap);
  CHECK(j["constraint"] == "partition");
  CHECK(j["bins"].size() == 2);
  CHECK(j["elements"].size() == 3);
  CHECK(j["eps_gap"] == 0.5);
}
