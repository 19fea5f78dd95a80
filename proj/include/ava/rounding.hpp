#ifndef AVA_ROUNDING_HPP
#define AVA_ROUNDING_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ava/bundling.hpp"
#include "ava/lp_models.hpp"
#include "ava/rng.hpp"

namespace ava {

struct RoundingParams {
  double alpha = 0.3;
  double beta = 0.5;  // analysis only
  std::uint64_t seed = 1;

  /// Throws Error(BadParameter) unless alpha and beta lie in (0, 1).
  void validate() const;
};

/// alpha (1 - alpha) (1 - alpha / (1 - beta)).
double gamma_offline(double alpha, double beta);
/// (alpha/2) (1 - alpha/2) (1 - alpha / (2 (1 - beta))).
double gamma_online(double alpha, double beta);

/// Constant C such that the budgeted rounding keeps LP / C in expectation, following
/// beta = 1/2 and the union bound over K budget events with bid ratio eps.
/// nullopt when the bound is vacuous (success probability <= 0).
struct BudgetedGuarantee {
  double success_probability;  // 1 - alpha/(1-beta) - 2 K alpha / (1 - eps)
  double gamma;                // alpha (1 - alpha) success_probability
  std::optional<double> constant;
};
BudgetedGuarantee budgeted_guarantee(double alpha, std::size_t resources, double bid_ratio, double beta = 0.5);

/// Offline rounding prepared once per (instance, LP solution) and run per seed.
class OfflineRounder {
 public:
  /// Checks x against the Bundle LP of `inst` (budgeted LP when `budgeted`).
  /// Throws Error(InfeasibleFractional) on a violation above `tolerance`.
  OfflineRounder(const Instance& inst, const BundleLpSolution& x, bool budgeted = false,
                 double tolerance = 1e-9);

  BundledAllocation round(const RoundingParams& params) const;

  const Instance& instance() const { return inst_; }
  const BundleLpSolution& solution() const { return x_; }

 private:
  Instance inst_;
  BundleLpSolution x_;
  std::vector<double> xv_;
  bool budgeted_;
};

/// Phase I: every P-item p opens bundle (p, j) with probability x_pjp (residual: none).
/// Phase II: each N-item, in index order, selects each open bundle with probability
/// alpha x_ijp / x_pjp and joins iff exactly one was selected and the bundle stays
/// permissible.
BundledAllocation round_offline(const Instance& inst, const BundleLpSolution& x, const RoundingParams& params);

/// As round_offline, and additionally refuses any placement (Phase I or II) that
/// would exceed a budget.
BundledAllocation round_offline_budgeted(const Instance& inst, const BundleLpSolution& x,
                                         const RoundingParams& params);

/// 1 / (3K) for an instance with K resources.
double default_budgeted_alpha(const Instance& inst);

struct OnlineStream {
  std::vector<std::size_t> types;  // types[t-1] arrives at time t
};

OnlineStream sample_stream(const IidModel& model, const CounterRng& rng);

enum class TraceReason { Opened, SingletonPermissible, MultiHit, Impermissible, NoPhase };
const char* trace_reason_name(TraceReason reason);

struct TraceRecord {
  std::size_t t;
  std::size_t type;
  std::optional<std::size_t> copy;   // opened-bundle copy index
  std::optional<std::size_t> buyer;  // set when the arrival was allocated
  TraceReason reason;
};

struct OpenedCopy {
  std::size_t t;
  std::size_t bundle;  // index into the layout's bundles
};

struct OnlineResult {
  /// One item per arrival ("<type>@<t>") with the type's edges.
  Instance realized;
  BundledAllocation bundling;
  std::vector<OpenedCopy> opened;
  std::vector<TraceRecord> trace;
};

/// Realized instance of a stream: arrival t becomes item "<type id>@t".
Instance realize(const IidModel& model, const OnlineStream& stream);

/// Online rounding prepared once per (model, OPTon solution).
class OnlineRounder {
 public:
  /// Throws Error(InfeasibleFractional) if x violates the OPTon LP beyond `tolerance`.
  OnlineRounder(const IidModel& model, const BundleLpSolution& x, double tolerance = 1e-9);

  /// Phase I (t <= floor(T/2)): an arrival of type p opens bundle (p, j) with
  /// probability x_pjp / (q_p T) and is allocated into it.  Phase II: each open copy
  /// containing the arrival's type is selected with probability
  /// min(1, alpha x_ijp / (x_pjp q_i T)); allocate iff exactly one was selected and it
  /// stays permissible.  Throws StreamModelMismatch for a bad stream.
  OnlineResult round(const OnlineStream& stream, const RoundingParams& params, bool build_realized = true) const;

  /// Value of the allocation only, skipping the realized instance.
  Rational round_value(const OnlineStream& stream, const RoundingParams& params) const;

  const IidModel& model() const { return model_; }
  const BundleLpSolution& solution() const { return x_; }

 private:
  IidModel model_;
  BundleLpSolution x_;
  std::vector<double> xv_;
};

OnlineResult round_online(const IidModel& model, const BundleLpSolution& x, const RoundingParams& params,
                          const OnlineStream& stream);

/// One JSON object per line: {"t", "item", "bundle", "buyer", "reason"}.
std::string trace_to_jsonl(const IidModel& model, const OnlineResult& result);

/// Each item (in `order`, default index order) goes to its highest-value P-edge,
/// ties to the earlier buyer; items without P-edges stay unallocated.
Allocation greedy_p_only(const Instance& inst, const std::vector<std::size_t>& order = {});

}  // namespace ava

#endif  // AVA_ROUNDING_HPP
