#include "ava/lp.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "ava/error.hpp"
#include "ava/instance.hpp"
#include "ava/simplex.hpp"

namespace ava {

std::size_t LinearProgram::add_variable(std::string name, Rational objective,
                                        std::optional<Rational> upper) {
  names_.push_back(std::move(name));
  objective_.push_back(std::move(objective));
  upper_.push_back(std::move(upper));
  return names_.size() - 1;
}

std::size_t LinearProgram::add_row(std::string name, std::vector<LpTerm> terms, Relation rel,
                                   Rational rhs) {
  rows_.push_back(LpRow{std::move(name), std::move(terms), rel, std::move(rhs)});
  return rows_.size() - 1;
}

void LinearProgram::validate() const {
  for (const auto& row : rows_) {
    for (const auto& term : row.terms) {
      if (term.var >= names_.size()) {
        throw Error(ErrorCode::BadParameter, "row '" + row.name + "' references an unknown variable");
      }
    }
  }
  for (std::size_t k = 0; k < upper_.size(); ++k) {
    if (upper_[k] && *upper_[k] < 0) {
      throw Error(ErrorCode::BadParameter, "negative upper bound on '" + names_[k] + "'");
    }
  }
}

const char* lp_status_name(LpStatus status) {
  switch (status) {
    case LpStatus::Optimal: return "Optimal";
    case LpStatus::Infeasible: return "Infeasible";
    case LpStatus::Unbounded: return "Unbounded";
  }
  return "Unknown";
}

namespace {

using Eigen::Index;

// Equality form A x = b, b >= 0, columns: structural | slack/surplus | artificial.
struct StandardForm {
  RationalMatrix a;
  std::vector<Rational> b;
  std::vector<Rational> c;
  Index num_structural = 0;
  Index first_artificial = 0;
  std::vector<Index> initial_basis;
};

StandardForm standardize(const LinearProgram& lp) {
  struct Row {
    std::vector<LpTerm> terms;
    Relation rel;
    Rational rhs;
  };
  std::vector<Row> rows;
  for (const auto& r : lp.rows()) rows.push_back({r.terms, r.rel, r.rhs});
  for (std::size_t k = 0; k < lp.num_variables(); ++k) {
    if (lp.upper(k)) rows.push_back({{LpTerm{k, Rational(1)}}, Relation::LessEqual, *lp.upper(k)});
  }
  for (auto& r : rows) {
    if (r.rhs < 0) {
      r.rhs = -r.rhs;
      for (auto& t : r.terms) t.coef = -t.coef;
      if (r.rel == Relation::LessEqual) {
        r.rel = Relation::GreaterEqual;
      } else if (r.rel == Relation::GreaterEqual) {
        r.rel = Relation::LessEqual;
      }
    }
  }

  const auto n = static_cast<Index>(lp.num_variables());
  const auto m = static_cast<Index>(rows.size());
  Index slacks = 0, artificials = 0;
  for (const auto& r : rows) {
    if (r.rel != Relation::Equal) ++slacks;
    if (r.rel != Relation::LessEqual) ++artificials;
  }
  StandardForm sf;
  sf.num_structural = n;
  sf.first_artificial = n + slacks;
  sf.a = RationalMatrix::Zero(m, n + slacks + artificials);
  sf.b.resize(static_cast<std::size_t>(m));
  sf.c.assign(static_cast<std::size_t>(n + slacks + artificials), Rational(0));
  for (Index k = 0; k < n; ++k) sf.c[static_cast<std::size_t>(k)] = lp.objective(static_cast<std::size_t>(k));

  Index next_slack = n, next_art = sf.first_artificial;
  for (Index i = 0; i < m; ++i) {
    const auto& r = rows[static_cast<std::size_t>(i)];
    for (const auto& t : r.terms) sf.a(i, static_cast<Index>(t.var)) += t.coef;
    sf.b[static_cast<std::size_t>(i)] = r.rhs;
    if (r.rel == Relation::LessEqual) {
      sf.a(i, next_slack) = 1;
      sf.initial_basis.push_back(next_slack++);
    } else {
      if (r.rel == Relation::GreaterEqual) sf.a(i, next_slack++) = -1;
      sf.a(i, next_art) = 1;
      sf.initial_basis.push_back(next_art++);
    }
  }
  return sf;
}

template <class Scalar>
Scalar convert(const Rational& r);
template <>
double convert<double>(const Rational& r) { return to_double(r); }
template <>
Rational convert<Rational>(const Rational& r) { return r; }

template <class Scalar>
Scalar magnitude(const Scalar& x) { return x < Scalar(0) ? Scalar(-x) : x; }

struct Attempt {
  LpStatus status = LpStatus::Infeasible;
  std::vector<Index> basis;
  std::vector<bool> redundant;
  std::size_t iterations = 0;
};

template <class Scalar>
simplex::Tableau<Scalar> load(const StandardForm& sf) {
  const Index m = sf.a.rows(), cols = sf.a.cols();
  simplex::Tableau<Scalar> tab;
  tab.t = simplex::Matrix<Scalar>::Zero(m + 1, cols + 1);
  for (Index i = 0; i < m; ++i) {
    for (Index k = 0; k < cols; ++k) {
      if (sf.a(i, k) != 0) tab.t(i, k) = convert<Scalar>(sf.a(i, k));
    }
    tab.t(i, cols) = convert<Scalar>(sf.b[static_cast<std::size_t>(i)]);
  }
  tab.basis = sf.initial_basis;
  return tab;
}

template <class Scalar>
bool warm_start(simplex::Tableau<Scalar>& tab, const StandardForm& sf,
                const std::vector<std::size_t>& basis, const simplex::Controls& ctl) {
  const Index m = tab.rows();
  if (static_cast<Index>(basis.size()) != m) return false;
  std::vector<bool> assigned(static_cast<std::size_t>(m), false);
  for (auto col : basis) {
    const auto c = static_cast<Index>(col);
    if (c >= sf.first_artificial) return false;
    Index best = -1;
    for (Index i = 0; i < m; ++i) {
      if (assigned[static_cast<std::size_t>(i)]) continue;
      if (best < 0 || magnitude(tab.t(i, c)) > magnitude(tab.t(best, c))) best = i;
    }
    if (best < 0 || !(magnitude(tab.t(best, c)) > Scalar(ctl.pivot_tolerance))) return false;
    tab.pivot(best, c);
    assigned[static_cast<std::size_t>(best)] = true;
  }
  for (Index i = 0; i < m; ++i) {
    if (tab.t(i, tab.cols()) < Scalar(-ctl.tolerance)) return false;
  }
  return true;
}

template <class Scalar>
Attempt run(const StandardForm& sf, const simplex::Controls& ctl,
            const std::optional<std::vector<std::size_t>>& warm) {
  const Index m = sf.a.rows(), cols = sf.a.cols();
  Attempt out;
  out.redundant.assign(static_cast<std::size_t>(m), false);
  auto tab = load<Scalar>(sf);
  bool started = false;
  if (warm) {
    started = warm_start(tab, sf, *warm, ctl);
    if (!started) tab = load<Scalar>(sf);
  }

  if (!started && sf.first_artificial < cols) {
    std::vector<Scalar> phase1(static_cast<std::size_t>(cols), Scalar(0));
    for (Index k = sf.first_artificial; k < cols; ++k) phase1[static_cast<std::size_t>(k)] = Scalar(-1);
    tab.set_objective(phase1);
    std::vector<bool> all(static_cast<std::size_t>(cols), true);
    const auto result = simplex::iterate(tab, all, ctl, out.iterations);
    if (result == simplex::Outcome::IterationLimit) {
      throw Error(ErrorCode::NumericalFailure, "simplex iteration limit in phase 1");
    }
    const Scalar infeasibility = tab.t(m, cols);  // = sum of artificials
    if (infeasibility > Scalar(ctl.tolerance * 1000)) {
      out.status = LpStatus::Infeasible;
      return out;
    }
    for (Index i = 0; i < m; ++i) {
      if (tab.basis[static_cast<std::size_t>(i)] < sf.first_artificial) continue;
      Index best = -1;
      for (Index k = 0; k < sf.first_artificial; ++k) {
        if (magnitude(tab.t(i, k)) > Scalar(ctl.pivot_tolerance) &&
            (best < 0 || magnitude(tab.t(i, k)) > magnitude(tab.t(i, best)))) {
          best = k;
        }
      }
      if (best >= 0) {
        tab.pivot(i, best);
      } else {
        out.redundant[static_cast<std::size_t>(i)] = true;
      }
    }
  }

  std::vector<Scalar> phase2(static_cast<std::size_t>(cols), Scalar(0));
  for (Index k = 0; k < cols; ++k) phase2[static_cast<std::size_t>(k)] = convert<Scalar>(sf.c[static_cast<std::size_t>(k)]);
  tab.set_objective(phase2);
  std::vector<bool> may_enter(static_cast<std::size_t>(cols), false);
  for (Index k = 0; k < sf.first_artificial; ++k) may_enter[static_cast<std::size_t>(k)] = true;
  const auto result = simplex::iterate(tab, may_enter, ctl, out.iterations);
  if (result == simplex::Outcome::IterationLimit) {
    throw Error(ErrorCode::NumericalFailure, "simplex iteration limit in phase 2");
  }
  out.status = result == simplex::Outcome::Unbounded ? LpStatus::Unbounded : LpStatus::Optimal;
  out.basis = tab.basis;
  return out;
}

// Gaussian elimination over the rationals; nullopt if singular.
std::optional<std::vector<Rational>> solve_exact(RationalMatrix a, std::vector<Rational> b) {
  const Index n = a.rows();
  for (Index col = 0; col < n; ++col) {
    Index piv = -1;
    for (Index i = col; i < n; ++i) {
      if (a(i, col) != 0) {
        piv = i;
        break;
      }
    }
    if (piv < 0) return std::nullopt;
    if (piv != col) {
      a.row(piv).swap(a.row(col));
      std::swap(b[static_cast<std::size_t>(piv)], b[static_cast<std::size_t>(col)]);
    }
    const Rational p = a(col, col);
    std::vector<Index> nz;
    for (Index k = col; k < n; ++k) {
      if (a(col, k) != 0) nz.push_back(k);
    }
    for (Index i = col + 1; i < n; ++i) {
      if (a(i, col) == 0) continue;
      const Rational f = a(i, col) / p;
      for (auto k : nz) a(i, k) -= f * a(col, k);
      b[static_cast<std::size_t>(i)] -= f * b[static_cast<std::size_t>(col)];
    }
  }
  std::vector<Rational> x(static_cast<std::size_t>(n));
  for (Index i = n - 1; i >= 0; --i) {
    Rational s = b[static_cast<std::size_t>(i)];
    for (Index k = i + 1; k < n; ++k) {
      if (a(i, k) != 0) s -= a(i, k) * x[static_cast<std::size_t>(k)];
    }
    x[static_cast<std::size_t>(i)] = s / a(i, i);
  }
  return x;
}

// Confirms that `basis` is an optimal basis of the standard form, exactly.
bool verify(const StandardForm& sf, const Attempt& at, LpSolution& out) {
  std::vector<Index> rows, cols;
  for (Index i = 0; i < sf.a.rows(); ++i) {
    if (at.redundant[static_cast<std::size_t>(i)]) continue;
    const Index c = at.basis[static_cast<std::size_t>(i)];
    if (c >= sf.first_artificial) return false;
    rows.push_back(i);
    cols.push_back(c);
  }
  const auto r = static_cast<Index>(rows.size());
  RationalMatrix ab(r, r);
  std::vector<Rational> rhs(static_cast<std::size_t>(r)), cb(static_cast<std::size_t>(r));
  for (Index i = 0; i < r; ++i) {
    for (Index k = 0; k < r; ++k) ab(i, k) = sf.a(rows[static_cast<std::size_t>(i)], cols[static_cast<std::size_t>(k)]);
    rhs[static_cast<std::size_t>(i)] = sf.b[static_cast<std::size_t>(rows[static_cast<std::size_t>(i)])];
    cb[static_cast<std::size_t>(i)] = sf.c[static_cast<std::size_t>(cols[static_cast<std::size_t>(i)])];
  }
  const auto xb = solve_exact(ab, rhs);
  if (!xb) return false;
  std::vector<Rational> x(static_cast<std::size_t>(sf.a.cols()));
  for (Index k = 0; k < r; ++k) {
    if ((*xb)[static_cast<std::size_t>(k)] < 0) return false;
    x[static_cast<std::size_t>(cols[static_cast<std::size_t>(k)])] = (*xb)[static_cast<std::size_t>(k)];
  }
  for (Index i = 0; i < sf.a.rows(); ++i) {
    Rational lhs = 0;
    for (Index k = 0; k < sf.first_artificial; ++k) {
      if (sf.a(i, k) != 0 && x[static_cast<std::size_t>(k)] != 0) lhs += sf.a(i, k) * x[static_cast<std::size_t>(k)];
    }
    if (lhs != sf.b[static_cast<std::size_t>(i)]) return false;
  }
  const auto y = solve_exact(ab.transpose(), cb);
  if (!y) return false;
  std::vector<bool> basic(static_cast<std::size_t>(sf.a.cols()), false);
  for (auto c : cols) basic[static_cast<std::size_t>(c)] = true;
  for (Index k = 0; k < sf.first_artificial; ++k) {
    if (basic[static_cast<std::size_t>(k)]) continue;
    Rational reduced = sf.c[static_cast<std::size_t>(k)];
    for (Index i = 0; i < r; ++i) {
      const auto& a = sf.a(rows[static_cast<std::size_t>(i)], k);
      if (a != 0) reduced -= (*y)[static_cast<std::size_t>(i)] * a;
    }
    if (reduced > 0) return false;
  }

  out.exact = true;
  out.exact_values.assign(x.begin(), x.begin() + sf.num_structural);
  out.exact_objective = 0;
  out.values.clear();
  for (Index k = 0; k < sf.num_structural; ++k) {
    out.exact_objective += sf.c[static_cast<std::size_t>(k)] * x[static_cast<std::size_t>(k)];
    out.values.push_back(to_double(x[static_cast<std::size_t>(k)]));
  }
  out.objective = to_double(out.exact_objective);
  return true;
}

simplex::Controls controls_for(const StandardForm& sf, double tolerance, double pivot_tolerance) {
  simplex::Controls ctl;
  ctl.tolerance = tolerance;
  ctl.pivot_tolerance = pivot_tolerance;
  const auto size = static_cast<std::size_t>(sf.a.rows() + sf.a.cols());
  ctl.bland_after = 10 * size;
  ctl.max_iterations = 1000 * size + 10000;
  return ctl;
}

}  // namespace

LpSolution DenseSimplexSolver::solve(const LinearProgram& lp, const SolveOptions& options) {
  lp.validate();
  const StandardForm sf = standardize(lp);
  LpSolution out;
  if (sf.a.rows() == 0) {
    // No constraints: optimal at 0 unless some objective coefficient is positive.
    out.status = LpStatus::Optimal;
    for (std::size_t k = 0; k < lp.num_variables(); ++k) {
      if (lp.objective(k) > 0) out.status = LpStatus::Unbounded;
    }
    out.exact = out.status == LpStatus::Optimal;
    out.values.assign(lp.num_variables(), 0.0);
    out.exact_values.assign(lp.num_variables(), Rational(0));
    return out;
  }

  auto finish = [&](const Attempt& at) {
    out.status = at.status;
    out.iterations += at.iterations;
    out.basis.assign(at.basis.begin(), at.basis.end());
  };

  for (double pivot_tol : {options.tolerance, std::sqrt(options.tolerance)}) {
    const auto at = run<double>(sf, controls_for(sf, options.tolerance, pivot_tol), options.warm_basis);
    finish(at);
    if (at.status != LpStatus::Optimal) return out;
    if (verify(sf, at, out)) return out;
  }
  if (!options.exact_fallback) {
    throw Error(ErrorCode::NumericalFailure, "floating-point vertex failed exact re-verification");
  }
  const auto at = run<Rational>(sf, controls_for(sf, 0.0, 0.0), std::nullopt);
  finish(at);
  if (at.status == LpStatus::Optimal && !verify(sf, at, out)) {
    throw Error(ErrorCode::NumericalFailure, "rational simplex vertex failed verification");
  }
  return out;
}

LpSolution solve_lp(const LinearProgram& lp, double tolerance) {
  SolveOptions options;
  options.tolerance = tolerance;
  return solve_lp(lp, options);
}

LpSolution solve_lp(const LinearProgram& lp, const SolveOptions& options) {
  DenseSimplexSolver solver;
  return solver.solve(lp, options);
}

double max_violation(const LinearProgram& lp, const std::vector<double>& x) {
  double worst = 0;
  for (std::size_t k = 0; k < lp.num_variables(); ++k) {
    worst = std::max(worst, -x.at(k));
    if (lp.upper(k)) worst = std::max(worst, x[k] - to_double(*lp.upper(k)));
  }
  for (const auto& row : lp.rows()) {
    double lhs = 0;
    for (const auto& t : row.terms) lhs += to_double(t.coef) * x.at(t.var);
    const double rhs = to_double(row.rhs);
    if (row.rel != Relation::GreaterEqual) worst = std::max(worst, lhs - rhs);
    if (row.rel != Relation::LessEqual) worst = std::max(worst, rhs - lhs);
  }
  return worst;
}

Rational max_violation_exact(const LinearProgram& lp, const std::vector<Rational>& x) {
  Rational worst = 0;
  for (std::size_t k = 0; k < lp.num_variables(); ++k) {
    worst = std::max(worst, Rational(-x.at(k)));
    if (lp.upper(k)) worst = std::max(worst, Rational(x[k] - *lp.upper(k)));
  }
  for (const auto& row : lp.rows()) {
    Rational lhs = 0;
    for (const auto& t : row.terms) lhs += t.coef * x.at(t.var);
    if (row.rel != Relation::GreaterEqual) worst = std::max(worst, Rational(lhs - row.rhs));
    if (row.rel != Relation::LessEqual) worst = std::max(worst, Rational(row.rhs - lhs));
  }
  return worst;
}

namespace {

std::string lp_name(const std::string& raw) {
  std::string out;
  for (char ch : raw) {
    const bool ok = std::isalnum(static_cast<unsigned char>(ch)) || std::string_view("_.()[],").find(ch) != std::string_view::npos;
    out.push_back(ok ? ch : '_');
  }
  if (out.empty() || std::isdigit(static_cast<unsigned char>(out[0])) || out[0] == '.') out.insert(0, "v");
  return out;
}

std::string lp_number(const Rational& r) {
  if (has_terminating_decimal(r)) return to_string(r);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", to_double(r));
  return buf;
}

void write_terms(std::ostringstream& os, const LinearProgram& lp, const std::vector<LpTerm>& terms) {
  bool first = true;
  std::size_t on_line = 0;
  for (const auto& t : terms) {
    if (t.coef == 0) continue;
    const bool negative = t.coef < 0;
    if (!first || negative) os << (negative ? " - " : " + ");
    if (first && !negative) os << ' ';
    const Rational mag = negative ? Rational(-t.coef) : t.coef;
    if (mag != 1) os << lp_number(mag) << ' ';
    os << lp_name(lp.variable_name(t.var));
    first = false;
    if (++on_line == 8) {
      os << "\n   ";
      on_line = 0;
    }
  }
  if (first) os << " 0 " << (lp.num_variables() ? lp_name(lp.variable_name(0)) : "v0");
}

}  // namespace

std::string to_lp_format(const LinearProgram& lp, const std::string& name) {
  std::ostringstream os;
  os << "\\ " << name << "\n";
  os << "Maximize\n obj:";
  std::vector<LpTerm> obj;
  for (std::size_t k = 0; k < lp.num_variables(); ++k) obj.push_back({k, lp.objective(k)});
  write_terms(os, lp, obj);
  os << "\nSubject To\n";
  for (std::size_t r = 0; r < lp.rows().size(); ++r) {
    const auto& row = lp.rows()[r];
    os << ' ' << lp_name(row.name.empty() ? "r" + std::to_string(r) : row.name) << ':';
    write_terms(os, lp, row.terms);
    os << (row.rel == Relation::LessEqual ? " <= " : row.rel == Relation::Equal ? " = " : " >= ")
       << lp_number(row.rhs) << '\n';
  }
  os << "Bounds\n";
  for (std::size_t k = 0; k < lp.num_variables(); ++k) {
    if (lp.upper(k)) {
      os << " 0 <= " << lp_name(lp.variable_name(k)) << " <= " << lp_number(*lp.upper(k)) << '\n';
    } else {
      os << ' ' << lp_name(lp.variable_name(k)) << " >= 0\n";
    }
  }
  os << "End\n";
  return os.str();
}

}  // namespace ava
