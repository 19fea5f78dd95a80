#ifndef AVA_LP_MODELS_HPP
#define AVA_LP_MODELS_HPP

#include <cstddef>
#include <map>
#include <optional>
#include <tuple>
#include <vector>

#include "ava/instance.hpp"
#include "ava/lp.hpp"

namespace ava {

/// i.i.d. arrival model: `types` holds one item per type; type i arrives with
/// probability probs[i] at each of `horizon` steps.
struct IidModel {
  Instance types;
  std::vector<Rational> probs;
  std::size_t horizon = 2;

  /// Throws Error(BadParameter) unless probs are non-negative, sum to exactly 1,
  /// match the type count, and horizon >= 2.
  void validate() const;
};

/// (item, buyer, p): item i placed in the bundle of buyer j headed by p.
struct BundleKey {
  std::size_t item;
  std::size_t buyer;
  std::size_t p;

  auto operator<=>(const BundleKey&) const = default;
};

/// Variable layout shared by every bundle LP.  One bundle per P-edge (p, j); its
/// variables are x_pjp and x_ijp for every i with an N-edge (i, j).  Variables are
/// ordered lexicographically by (i, j, p).
class BundleLayout {
 public:
  struct BundleInfo {
    std::size_t p;
    std::size_t buyer;
    std::size_t head_var;
    std::vector<std::size_t> member_vars;  // N-members, ascending item
  };

  static BundleLayout from(const Instance& inst);

  std::size_t num_variables() const { return keys_.size(); }
  const BundleKey& key(std::size_t var) const { return keys_.at(var); }
  std::optional<std::size_t> find(std::size_t i, std::size_t j, std::size_t p) const;

  const std::vector<BundleInfo>& bundles() const { return bundles_; }
  /// Bundle indices headed by p.
  const std::vector<std::size_t>& bundles_of_head(std::size_t p) const { return by_head_.at(p); }
  /// Variables in which item i appears (as head or member).
  const std::vector<std::size_t>& vars_of_item(std::size_t i) const { return by_item_.at(i); }
  std::size_t bundle_of_var(std::size_t var) const { return bundle_of_var_.at(var); }

 private:
  std::vector<BundleKey> keys_;
  std::map<BundleKey, std::size_t> index_;
  std::vector<BundleInfo> bundles_;
  std::vector<std::vector<std::size_t>> by_head_;
  std::vector<std::vector<std::size_t>> by_item_;
  std::vector<std::size_t> bundle_of_var_;
};

struct BundleLp {
  LinearProgram lp;
  BundleLayout layout;
};

struct BundleLpSolution {
  BundleLayout layout;
  LpStatus status = LpStatus::Optimal;
  std::vector<double> x;
  /// Empty unless the vertex was confirmed exactly.
  std::vector<Rational> exact_x;
  double objective = 0;
  Rational exact_objective;

  double value(std::size_t i, std::size_t j, std::size_t p) const;
  /// Hand-built solution (tests, external solvers).  Unlisted keys are 0.
  static BundleLpSolution from_values(const BundleLayout& layout,
                                      const std::map<BundleKey, Rational>& values);
};

/// x_ij in [0,1], one average-value row per buyer, one row per item.
LinearProgram build_naive_lp(const Instance& inst);

/// Requires an unambiguous instance (Error AmbiguousInstance).  Rows: one
/// average-value row per bundle, one row per item, one linking row per member.
BundleLp build_bundle_lp(const Instance& inst);

/// Bundle LP plus, for every (buyer, resource) with a budget, a per-buyer row and
/// one per-bundle row.  Error MissingBudgets if the instance has no resources.
BundleLp build_bundle_lp_budgeted(const Instance& inst);

/// Over the types of `model`; item rows have rhs q_i T, linking rows
/// x_ijp <= q_i T x_pjp.
BundleLp build_opton_lp(const IidModel& model);

/// Item rows 2 ceil(q_i T), linking rows x_ijp <= ceil(q_i T kappa) x_pjp.
/// Error GammaViolated if some q_i T < gamma_floor.
BundleLp build_optoff_lp(const IidModel& model, const Rational& gamma_floor);

/// 6 / min(1, gamma) * ln T / ln ln T.  Error DomainError for T < 3 or gamma <= 0.
double compute_kappa(double gamma, std::size_t horizon);

BundleLpSolution solve_bundle_lp(const BundleLp& model, const SolveOptions& options = {});

}  // namespace ava

#endif  // AVA_LP_MODELS_HPP
