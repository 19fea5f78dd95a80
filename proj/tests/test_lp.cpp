#include "doctest.h"

#include "ava/error.hpp"
#include "ava/lp.hpp"

using namespace ava;

namespace {

Rational q(const char* s) { return parse_rational(s); }

}  // namespace

TEST_CASE("single bounded variable") {
  LinearProgram lp;
  const auto x = lp.add_variable("x", 1);
  lp.add_row("cap", {{x, 1}}, Relation::LessEqual, 1);
  const auto sol = solve_lp(lp);
  REQUIRE(sol.status == LpStatus::Optimal);
  CHECK(sol.exact);
  CHECK(sol.exact_objective == 1);
  CHECK(sol.exact_values[x] == 1);
}

TEST_CASE("degenerate optimum face") {
  LinearProgram lp;
  const auto x = lp.add_variable("x", 1);
  const auto y = lp.add_variable("y", 1);
  lp.add_row("sum", {{x, 1}, {y, 1}}, Relation::LessEqual, 1);
  const auto sol = solve_lp(lp);
  REQUIRE(sol.status == LpStatus::Optimal);
  CHECK(sol.exact_objective == 1);
  CHECK(sol.exact_values[x] + sol.exact_values[y] == 1);
}

TEST_CASE("infeasible and unbounded statuses") {
  LinearProgram bad;
  const auto x = bad.add_variable("x", 1);
  bad.add_row("lo", {{x, 1}}, Relation::GreaterEqual, 2);
  bad.add_row("hi", {{x, 1}}, Relation::LessEqual, 1);
  CHECK(solve_lp(bad).status == LpStatus::Infeasible);

  LinearProgram open;
  const auto y = open.add_variable("y", 1);
  const auto z = open.add_variable("z", 0);
  open.add_row("d", {{y, 1}, {z, -1}}, Relation::LessEqual, 1);
  CHECK(solve_lp(open).status == LpStatus::Unbounded);
}

TEST_CASE("equality and greater-equal rows with negative rhs") {
  // max 3a + 2b  s.t. a + b = 4, a - b >= -2, a <= 3
  LinearProgram lp;
  const auto a = lp.add_variable("a", 3, Rational(3));
  const auto b = lp.add_variable("b", 2);
  lp.add_row("eq", {{a, 1}, {b, 1}}, Relation::Equal, 4);
  lp.add_row("ge", {{a, 1}, {b, -1}}, Relation::GreaterEqual, -2);
  const auto sol = solve_lp(lp);
  REQUIRE(sol.status == LpStatus::Optimal);
  CHECK(sol.exact_objective == 11);
  CHECK(max_violation_exact(lp, sol.exact_values) == 0);
}

TEST_CASE("redundant equality rows") {
  LinearProgram lp;
  const auto a = lp.add_variable("a", 1);
  const auto b = lp.add_variable("b", 2);
  lp.add_row("e1", {{a, 1}, {b, 1}}, Relation::Equal, 2);
  lp.add_row("e2", {{a, 2}, {b, 2}}, Relation::Equal, 4);
  lp.add_row("c", {{b, 1}}, Relation::LessEqual, q("1/3"));
  const auto sol = solve_lp(lp);
  REQUIRE(sol.status == LpStatus::Optimal);
  CHECK(sol.exact_objective == q("7/3"));
}

TEST_CASE("weak duality against a hand certificate") {
  // max 5x + 4y s.t. 6x + 4y <= 24, x + 2y <= 6.  Dual y = (3/4, 1/2) gives 21.
  LinearProgram lp;
  const auto x = lp.add_variable("x", 5);
  const auto y = lp.add_variable("y", 4);
  lp.add_row("r1", {{x, 6}, {y, 4}}, Relation::LessEqual, 24);
  lp.add_row("r2", {{x, 1}, {y, 2}}, Relation::LessEqual, 6);
  const auto sol = solve_lp(lp);
  REQUIRE(sol.status == LpStatus::Optimal);
  const Rational dual_bound = q("3/4") * 24 + q("1/2") * 6;
  CHECK(sol.exact_objective <= dual_bound);
  CHECK(sol.exact_objective == 21);
}

TEST_CASE("warm start from the optimal basis") {
  LinearProgram lp;
  const auto x = lp.add_variable("x", 5);
  const auto y = lp.add_variable("y", 4);
  lp.add_row("r1", {{x, 6}, {y, 4}}, Relation::LessEqual, 24);
  lp.add_row("r2", {{x, 1}, {y, 2}}, Relation::LessEqual, 6);
  const auto cold = solve_lp(lp);
  SolveOptions options;
  options.warm_basis = cold.basis;
  const auto warm = solve_lp(lp, options);
  CHECK(warm.iterations == 0);
  CHECK(std::abs(warm.objective - cold.objective) <= 1e-9);
}

TEST_CASE("objective scaling keeps the vertex optimal") {
  LinearProgram lp;
  const auto x = lp.add_variable("x", 5);
  const auto y = lp.add_variable("y", 4);
  lp.add_row("r1", {{x, 6}, {y, 4}}, Relation::LessEqual, 24);
  lp.add_row("r2", {{x, 1}, {y, 2}}, Relation::LessEqual, 6);
  const auto base = solve_lp(lp);

  LinearProgram scaled;
  const Rational lambda = q("7/3");
  const auto sx = scaled.add_variable("x", 5 * lambda);
  const auto sy = scaled.add_variable("y", 4 * lambda);
  scaled.add_row("r1", {{sx, 6}, {sy, 4}}, Relation::LessEqual, 24);
  scaled.add_row("r2", {{sx, 1}, {sy, 2}}, Relation::LessEqual, 6);
  const auto s = solve_lp(scaled);
  CHECK(s.exact_objective == lambda * base.exact_objective);
  SolveOptions options;
  options.warm_basis = base.basis;
  CHECK(solve_lp(scaled, options).iterations == 0);
}

TEST_CASE("no rows") {
  LinearProgram lp;
  lp.add_variable("x", -1);
  const auto sol = solve_lp(lp);
  CHECK(sol.status == LpStatus::Optimal);
  CHECK(sol.exact_objective == 0);
}

TEST_CASE("lp text export") {
  LinearProgram lp;
  const auto x = lp.add_variable("x", q("1.5"), Rational(1));
  const auto y = lp.add_variable("y", -1);
  lp.add_row("r", {{x, 1}, {y, q("-0.5")}}, Relation::GreaterEqual, 0);
  const auto text = to_lp_format(lp, "t");
  CHECK(text == "\\ t\nMaximize\n obj: 1.5 x - y\nSubject To\n r: x - 0.5 y >= 0\nBounds\n 0 <= x <= 1\n y >= 0\nEnd\n");
}

TEST_CASE("bad rows are rejected") {
  LinearProgram lp;
  lp.add_variable("x", 1);
  lp.add_row("r", {{3, 1}}, Relation::LessEqual, 1);
  CHECK_THROWS_AS(solve_lp(lp), Error);
}
