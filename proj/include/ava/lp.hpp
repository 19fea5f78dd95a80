#ifndef AVA_LP_HPP
#define AVA_LP_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ava/rational.hpp"

namespace ava {

enum class Relation { LessEqual, Equal, GreaterEqual };

struct LpTerm {
  std::size_t var;
  Rational coef;
};

struct LpRow {
  std::string name;
  std::vector<LpTerm> terms;
  Relation rel = Relation::LessEqual;
  Rational rhs;
};

/// max c^T x  s.t.  rows, 0 <= x <= upper.  Coefficients are exact rationals so
/// the final vertex can be re-verified without rounding error.
class LinearProgram {
 public:
  std::size_t add_variable(std::string name, Rational objective,
                           std::optional<Rational> upper = std::nullopt);
  std::size_t add_row(std::string name, std::vector<LpTerm> terms, Relation rel, Rational rhs);

  std::size_t num_variables() const { return names_.size(); }
  std::size_t num_rows() const { return rows_.size(); }
  const std::string& variable_name(std::size_t k) const { return names_.at(k); }
  const Rational& objective(std::size_t k) const { return objective_.at(k); }
  const std::optional<Rational>& upper(std::size_t k) const { return upper_.at(k); }
  const std::vector<LpRow>& rows() const { return rows_; }

  /// Throws Error(BadParameter) on an out-of-range term or a negative upper bound.
  void validate() const;

 private:
  std::vector<std::string> names_;
  std::vector<Rational> objective_;
  std::vector<std::optional<Rational>> upper_;
  std::vector<LpRow> rows_;
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

const char* lp_status_name(LpStatus status);

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  std::vector<double> values;
  double objective = 0;
  /// Set when the optimal basis was confirmed in rational arithmetic.
  bool exact = false;
  std::vector<Rational> exact_values;
  Rational exact_objective;
  /// Optimal basis in standard-form column indices; feed back as a warm start.
  std::vector<std::size_t> basis;
  std::size_t iterations = 0;
};

struct SolveOptions {
  double tolerance = 1e-9;
  std::optional<std::vector<std::size_t>> warm_basis;
  /// Fall back to an all-rational simplex when the floating vertex fails the exact
  /// check twice; otherwise throw NumericalFailure.
  bool exact_fallback = true;
};

/// Solver seam; an external solver can be substituted behind this interface.
class LpSolver {
 public:
  virtual ~LpSolver() = default;
  virtual LpSolution solve(const LinearProgram& lp, const SolveOptions& options) = 0;
};

/// Two-phase dense-tableau simplex.  Largest-coefficient pricing, switching to
/// Bland's rule after 10 * (rows + cols) pivots.
class DenseSimplexSolver final : public LpSolver {
 public:
  LpSolution solve(const LinearProgram& lp, const SolveOptions& options) override;
};

LpSolution solve_lp(const LinearProgram& lp, double tolerance = 1e-9);
LpSolution solve_lp(const LinearProgram& lp, const SolveOptions& options);

/// Largest violation of any row or bound by `x` (0 when feasible).
double max_violation(const LinearProgram& lp, const std::vector<double>& x);
Rational max_violation_exact(const LinearProgram& lp, const std::vector<Rational>& x);

/// CPLEX LP text form; see README for the accepted grammar.
std::string to_lp_format(const LinearProgram& lp, const std::string& name = "ava");

}  // namespace ava

#endif  // AVA_LP_HPP
