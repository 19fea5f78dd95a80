#include "doctest.h"

#include <algorithm>
#include <cmath>

#include "ava/error.hpp"
#include "ava/generators.hpp"
#include "ava/harness.hpp"

using namespace ava;

namespace {

TrialConfig offline_config(std::size_t trials, unsigned threads) {
  RandomParams p;
  p.num_items = 7;
  p.seed = 3;
  TrialConfig c;
  c.name = "r3";
  c.instance = gen_random(p);
  c.trials = trials;
  c.seed = 42;
  c.threads = threads;
  return c;
}

}  // namespace

TEST_CASE("summarize") {
  const auto one = summarize({2.5});
  CHECK(one.trials == 1);
  CHECK(one.mean == 2.5);
  CHECK(one.sd == 0);
  CHECK(one.ci_low == 2.5);
  CHECK(one.ci_high == 2.5);

  const auto s = summarize({1, 2, 3, 4});
  CHECK(s.mean == doctest::Approx(2.5));
  CHECK(s.sd == doctest::Approx(std::sqrt(5.0 / 3)));
  CHECK(s.ci_low == doctest::Approx(2.5 - 1.96 * s.sd / 2));
  CHECK(s.ci_high == doctest::Approx(2.5 + 1.96 * s.sd / 2));
  CHECK(s.min == 1);
}

TEST_CASE("a single trial runs") {
  const auto r = run_trials(offline_config(1, 1));
  CHECK(r.stats.trials == 1);
  CHECK(r.feasible == 1);
  CHECK(r.stats.ci_low == r.stats.mean);
}

TEST_CASE("reports do not depend on the thread count") {
  const auto a = run_trials(offline_config(400, 1));
  const auto b = run_trials(offline_config(400, 4));
  CHECK(a.stats.mean == b.stats.mean);
  CHECK(a.stats.sd == b.stats.sd);
  CHECK(a.open_rate == b.open_rate);
  CHECK(trial_report_to_json(a) == trial_report_to_json(b));

  TrialConfig online;
  online.name = "iid";
  online.kind = TrialKind::Online;
  online.model = gen_iid_lower_bound(10);
  online.alpha = 0.64;
  online.trials = 300;
  online.seed = 9;
  online.threads = 1;
  const auto c = run_trials(online);
  online.threads = 3;
  const auto d = run_trials(online);
  CHECK(c.stats.mean == d.stats.mean);
  CHECK(c.feasible == 300);
  CHECK(c.lp_value == doctest::Approx(2.9));
}

TEST_CASE("trial reports") {
  const auto r = run_trials(offline_config(500, 0));
  CHECK(r.feasible == 500);
  CHECK(r.gamma == doctest::Approx(gamma_offline(0.3, 0.5)));
  REQUIRE(r.ratio.has_value());
  CHECK(*r.ratio == doctest::Approx(r.lp_value / r.stats.mean));
  CHECK(r.open_rate.size() == r.head_value.size());
  for (std::size_t b = 0; b < r.open_rate.size(); ++b) {
    const double x = r.head_value[b];
    CHECK(std::abs(r.open_rate[b] - x) <= 3 * std::sqrt(x * (1 - x) / 500) + 1e-9);
  }
}

TEST_CASE("suites") {
  CHECK(offline_suite().size() == 24);
  CHECK(online_suite().size() == 6);
  const auto budgeted = budgeted_suite();
  CHECK_FALSE(budgeted.empty());
  for (const auto& b : budgeted) CHECK(max_bid_ratio(b.instance) <= Rational(1, 20));
  for (const auto& m : online_suite()) CHECK(m.model.horizon <= 40);

  const auto report = run_suite("paper-examples", 50, 7, 2);
  CHECK(report.values.contains("bundle_lp[n=3]"));
  CHECK_FALSE(report.rows.empty());
  const auto csv = suite_report_to_csv(report);
  CHECK(csv.rfind("name,algo,alpha,beta,gamma,seed,trials,feasible,lp_value,mean,sd,ci_low,ci_high,min,ratio\n", 0) == 0);
  CHECK(static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')) == report.rows.size() + 1);
  CHECK(suite_report_to_json(report)["rows"].size() == report.rows.size());

  try {
    run_suite("nope", 1, 1);
    FAIL("expected BadParameter");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::BadParameter);
  }
}
