#ifndef AVA_SIMPLEX_HPP
#define AVA_SIMPLEX_HPP

#include <cstddef>
#include <vector>

#include <Eigen/Core>

namespace ava::simplex {

template <class Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

/// Constraint rows 0..m-1 over columns 0..n-1 with the right-hand side in column n;
/// row m holds reduced costs (maximization: a column may enter while its entry is
/// positive) and minus the objective value in column n.
template <class Scalar>
struct Tableau {
  Matrix<Scalar> t;
  std::vector<Eigen::Index> basis;

  Eigen::Index rows() const { return t.rows() - 1; }
  Eigen::Index cols() const { return t.cols() - 1; }

  void pivot(Eigen::Index r, Eigen::Index c) {
    const Scalar p = t(r, c);
    for (Eigen::Index k = 0; k < t.cols(); ++k) t(r, k) /= p;
    t(r, c) = Scalar(1);
    for (Eigen::Index i = 0; i < t.rows(); ++i) {
      if (i == r) continue;
      const Scalar f = t(i, c);
      if (f == Scalar(0)) continue;
      for (Eigen::Index k = 0; k < t.cols(); ++k) {
        if (t(r, k) != Scalar(0)) t(i, k) -= f * t(r, k);
      }
      t(i, c) = Scalar(0);
    }
    basis[static_cast<std::size_t>(r)] = c;
  }

  /// Loads objective `c` into the cost row and prices out the current basis.
  void set_objective(const std::vector<Scalar>& c) {
    const Eigen::Index m = rows();
    for (Eigen::Index k = 0; k < cols(); ++k) t(m, k) = c[static_cast<std::size_t>(k)];
    t(m, cols()) = Scalar(0);
    for (std::size_t i = 0; i < basis.size(); ++i) {
      const Scalar f = t(m, basis[i]);
      if (f == Scalar(0)) continue;
      const auto row = static_cast<Eigen::Index>(i);
      for (Eigen::Index k = 0; k <= cols(); ++k) t(m, k) -= f * t(row, k);
    }
  }
};

enum class Outcome { Optimal, Unbounded, IterationLimit };

struct Controls {
  double tolerance = 1e-9;  // ignored for exact scalars (compared against zero)
  double pivot_tolerance = 1e-9;
  std::size_t bland_after = 0;
  std::size_t max_iterations = 0;
};

template <class Scalar>
Outcome iterate(Tableau<Scalar>& tab, const std::vector<bool>& may_enter, const Controls& ctl,
                std::size_t& iterations) {
  const Eigen::Index m = tab.rows();
  const Eigen::Index n = tab.cols();
  const Scalar tol(ctl.tolerance);
  const Scalar ptol(ctl.pivot_tolerance);
  std::size_t local = 0;
  while (true) {
    if (local >= ctl.max_iterations) return Outcome::IterationLimit;
    const bool bland = local >= ctl.bland_after;
    Eigen::Index enter = -1;
    for (Eigen::Index k = 0; k < n; ++k) {
      if (!may_enter[static_cast<std::size_t>(k)] || !(tab.t(m, k) > tol)) continue;
      if (enter < 0 || (!bland && tab.t(m, k) > tab.t(m, enter))) enter = k;
      if (bland) break;
    }
    if (enter < 0) return Outcome::Optimal;

    Eigen::Index leave = -1;
    Scalar best_ratio(0);
    for (Eigen::Index i = 0; i < m; ++i) {
      const Scalar a = tab.t(i, enter);
      if (!(a > ptol)) continue;
      const Scalar ratio = tab.t(i, n) / a;
      if (leave < 0 || ratio < best_ratio ||
          (ratio == best_ratio && tab.basis[static_cast<std::size_t>(i)] <
                                      tab.basis[static_cast<std::size_t>(leave)])) {
        leave = i;
        best_ratio = ratio;
      }
    }
    if (leave < 0) return Outcome::Unbounded;
    tab.pivot(leave, enter);
    ++local;
    ++iterations;
  }
}

}  // namespace ava::simplex

#endif  // AVA_SIMPLEX_HPP
