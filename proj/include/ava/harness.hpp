#ifndef AVA_HARNESS_HPP
#define AVA_HARNESS_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ava/io.hpp"
#include "ava/rounding.hpp"

namespace ava {

enum class TrialKind { Offline, OfflineBudgeted, Online };
const char* trial_kind_name(TrialKind kind);

struct TrialConfig {
  std::string name;
  TrialKind kind = TrialKind::Offline;
  Instance instance;  // offline kinds
  IidModel model;     // online
  double alpha = 0.3;
  double beta = 0.5;
  std::size_t trials = 1000;
  std::uint64_t seed = 1;
  unsigned threads = 0;  // 0: hardware concurrency
};

struct TrialStats {
  std::size_t trials = 0;
  double mean = 0;
  double sd = 0;  // sample standard deviation
  double ci_low = 0, ci_high = 0;  // mean -+ 1.96 sd / sqrt(N)
  double min = 0;
};

TrialStats summarize(const std::vector<double>& values);

struct TrialReport {
  std::string name;
  TrialKind kind = TrialKind::Offline;
  double alpha = 0, beta = 0, gamma = 0;
  std::uint64_t seed = 0;
  TrialStats stats;
  std::size_t feasible = 0;
  double lp_value = 0;
  std::optional<double> ratio;  // lp_value / mean
  /// Per bundle of the LP layout: mean number of opened copies per trial, and the
  /// LP head value x_pjp.
  std::vector<double> open_rate;
  std::vector<double> head_value;
};

/// Trial k rounds with seed derive(k) of the config seed (online: the stream is
/// sampled from derive(k).derive(0)).  Trials run on `threads` workers; the report
/// is assembled in trial order, so it does not depend on scheduling.  Any
/// infeasible outcome throws Error(Infeasible).
TrialReport run_trials(const TrialConfig& config);

/// Average-value constraint of every buyer after each allocated arrival.
bool online_prefix_feasible(const IidModel& model, const OnlineResult& result);

/// max l_ij / B_j over budgeted (buyer, resource) pairs; 0 without budgets.
Rational max_bid_ratio(const Instance& inst);

struct NamedInstance {
  std::string name;
  Instance instance;
};
struct NamedModel {
  std::string name;
  IidModel model;
};

/// 20 seeded random unambiguous instances with 6 to 8 items, then the named
/// examples (integrality gap n=3, tightness eps 1/2 and 1/5, supply k=3).
std::vector<NamedInstance> offline_suite();
/// The i.i.d. lower-bound model with T=20, then 5 seeded random models (T <= 40).
std::vector<NamedModel> online_suite();
/// Single-buyer random instances (48 items) with one resource and bids at most B/20.
std::vector<NamedInstance> budgeted_suite();

struct SuiteReport {
  std::string suite;
  std::uint64_t seed = 0;
  std::size_t trials = 0;
  std::vector<TrialReport> rows;
  Json values = Json::object();  // named exact and derived quantities
};

/// Suites: paper-examples, offline, online, budgeted.  Error BadParameter for an
/// unknown suite.
SuiteReport run_suite(const std::string& suite, std::size_t trials, std::uint64_t seed, unsigned threads = 0);
std::vector<std::string> suite_names();

Json trial_report_to_json(const TrialReport& report);
Json suite_report_to_json(const SuiteReport& report);
/// One row per trial report, header first.
std::string suite_report_to_csv(const SuiteReport& report);

}  // namespace ava

#endif  // AVA_HARNESS_HPP
