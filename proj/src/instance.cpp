#include "ava/instance.hpp"

#include <unordered_set>

#include "ava/error.hpp"

namespace ava {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidInstance: return "InvalidInstance";
    case ErrorCode::UnknownEdge: return "UnknownEdge";
    case ErrorCode::InfeasiblePrefix: return "InfeasiblePrefix";
    case ErrorCode::InvalidBundling: return "InvalidBundling";
    case ErrorCode::AmbiguousInstance: return "AmbiguousInstance";
    case ErrorCode::MissingBudgets: return "MissingBudgets";
    case ErrorCode::GammaViolated: return "GammaViolated";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::NumericalFailure: return "NumericalFailure";
    case ErrorCode::InfeasibleFractional: return "InfeasibleFractional";
    case ErrorCode::StreamModelMismatch: return "StreamModelMismatch";
    case ErrorCode::PhaseViolation: return "PhaseViolation";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::NotMaximal: return "NotMaximal";
    case ErrorCode::Infeasible: return "Infeasible";
    case ErrorCode::BadParameter: return "BadParameter";
  }
  return "Unknown";
}

EdgeClass classify_edge(const Rational& value, const Rational& rho, const Rational& cost) {
  return value - rho * cost >= 0 ? EdgeClass::P : EdgeClass::N;
}

std::optional<std::size_t> Instance::find_item(const std::string& id) const {
  for (std::size_t i = 0; i < item_ids_.size(); ++i) {
    if (item_ids_[i] == id) return i;
  }
  return std::nullopt;
}

std::optional<std::size_t> Instance::find_buyer(const std::string& id) const {
  for (std::size_t j = 0; j < buyer_ids_.size(); ++j) {
    if (buyer_ids_[j] == id) return j;
  }
  return std::nullopt;
}

EdgeClass Instance::edge_class(std::size_t i, std::size_t j) const {
  return excess_(i, j) >= 0 ? EdgeClass::P : EdgeClass::N;
}

std::vector<std::size_t> Instance::buyers_of(std::size_t i) const {
  std::vector<std::size_t> out;
  for (std::size_t j = 0; j < num_buyers(); ++j) {
    if (edges_(i, j)) out.push_back(j);
  }
  return out;
}

bool Instance::has_p_edge(std::size_t i) const {
  for (std::size_t j = 0; j < num_buyers(); ++j) {
    if (edges_(i, j) && excess_(i, j) >= 0) return true;
  }
  return false;
}

bool Instance::has_n_edge(std::size_t i) const {
  for (std::size_t j = 0; j < num_buyers(); ++j) {
    if (edges_(i, j) && excess_(i, j) < 0) return true;
  }
  return false;
}

bool Instance::is_unambiguous() const {
  for (std::size_t i = 0; i < num_items(); ++i) {
    if (has_p_edge(i) && has_n_edge(i)) return false;
  }
  return true;
}

Instance Instance::with_edges(const EdgeMask& keep) const {
  Instance out = *this;
  for (std::size_t i = 0; i < num_items(); ++i) {
    for (std::size_t j = 0; j < num_buyers(); ++j) {
      if (edges_(i, j) && !keep(i, j)) {
        out.edges_(i, j) = false;
        out.values_(i, j) = 0;
        out.excess_(i, j) = -rho_[j] * costs_(i, j);
      }
    }
  }
  return out;
}

std::size_t InstanceBuilder::add_buyer(std::string id, Rational rho) {
  buyer_ids_.push_back(std::move(id));
  rho_.push_back(std::move(rho));
  return buyer_ids_.size() - 1;
}

std::size_t InstanceBuilder::add_item(std::string id) {
  item_ids_.push_back(std::move(id));
  return item_ids_.size() - 1;
}

void InstanceBuilder::set_value(std::size_t i, std::size_t j, Rational v) {
  values_.push_back({i, j, std::move(v)});
}

void InstanceBuilder::set_cost(std::size_t i, std::size_t j, Rational c) {
  generalized_ = true;
  costs_.push_back({i, j, std::move(c)});
}

std::size_t InstanceBuilder::add_resource(std::string name) {
  resource_names_.push_back(std::move(name));
  return resource_names_.size() - 1;
}

void InstanceBuilder::set_budget(std::size_t j, std::size_t r, Rational b) {
  budgets_.push_back({0, j, r, std::move(b)});
}

void InstanceBuilder::set_resource_cost(std::size_t i, std::size_t j, std::size_t r, Rational l) {
  resource_costs_.push_back({i, j, r, std::move(l)});
}

Instance InstanceBuilder::build() const {
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::InvalidInstance, msg); };
  const auto n = item_ids_.size();
  const auto m = buyer_ids_.size();

  std::unordered_set<std::string> seen;
  for (const auto& id : item_ids_) {
    if (!seen.insert(id).second) fail("duplicate item id '" + id + "'");
  }
  seen.clear();
  for (const auto& id : buyer_ids_) {
    if (!seen.insert(id).second) fail("duplicate buyer id '" + id + "'");
  }
  for (std::size_t j = 0; j < m; ++j) {
    if (rho_[j] <= 0) fail("rho of buyer '" + buyer_ids_[j] + "' must be positive");
  }

  Instance inst;
  inst.item_ids_ = item_ids_;
  inst.buyer_ids_ = buyer_ids_;
  inst.rho_ = rho_;
  inst.edges_ = EdgeMask::Constant(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m), false);
  inst.values_ = RationalMatrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m));
  inst.costs_ = RationalMatrix::Constant(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m),
                                         Rational(1));
  inst.generalized_ = generalized_;

  for (const auto& e : values_) {
    if (e.i >= n || e.j >= m) fail("value references an undeclared item or buyer");
    if (e.x < 0) fail("negative value for (" + item_ids_[e.i] + ", " + buyer_ids_[e.j] + ")");
    inst.edges_(e.i, e.j) = true;
    inst.values_(e.i, e.j) = e.x;
  }
  if (generalized_) {
    EdgeMask has_cost = EdgeMask::Constant(inst.edges_.rows(), inst.edges_.cols(), false);
    for (const auto& e : costs_) {
      if (e.i >= n || e.j >= m) fail("cost references an undeclared item or buyer");
      if (e.x < 0) fail("negative cost for (" + item_ids_[e.i] + ", " + buyer_ids_[e.j] + ")");
      inst.costs_(e.i, e.j) = e.x;
      has_cost(e.i, e.j) = true;
    }
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        if (inst.edges_(i, j) && !has_cost(i, j)) {
          fail("edge (" + item_ids_[i] + ", " + buyer_ids_[j] + ") has no cost entry");
        }
      }
    }
  }
  inst.excess_ = RationalMatrix(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      inst.excess_(i, j) = inst.values_(i, j) - rho_[j] * inst.costs_(i, j);
    }
  }

  const auto k = resource_names_.size();
  inst.resource_names_ = resource_names_;
  inst.budgets_.assign(k, std::vector<std::optional<Rational>>(m));
  inst.resource_costs_.assign(
      k, RationalMatrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m)));
  for (const auto& b : budgets_) {
    if (b.r >= k || b.j >= m) fail("budget references an undeclared buyer or resource");
    if (b.x <= 0) fail("budgets must be positive");
    inst.budgets_[b.r][b.j] = b.x;
  }
  for (const auto& l : resource_costs_) {
    if (l.r >= k || l.i >= n || l.j >= m) fail("resource cost references undeclared entities");
    if (l.x < 0) fail("resource costs must be non-negative");
    inst.resource_costs_[l.r](l.i, l.j) = l.x;
  }
  inst.notes_ = notes_;
  return inst;
}

InstanceBuilder builder_like(const Instance& inst) {
  InstanceBuilder b;
  for (std::size_t j = 0; j < inst.num_buyers(); ++j) b.add_buyer(inst.buyer_id(j), inst.rho(j));
  if (inst.generalized()) b.enable_costs();
  for (std::size_t r = 0; r < inst.num_resources(); ++r) {
    b.add_resource(inst.resource_name(r));
    for (std::size_t j = 0; j < inst.num_buyers(); ++j) {
      if (const auto& budget = inst.budget(j, r)) b.set_budget(j, r, *budget);
    }
  }
  for (const auto& note : inst.notes()) b.add_note(note);
  return b;
}

void copy_edge(InstanceBuilder& builder, const Instance& inst, std::size_t from_item,
               std::size_t to_item, std::size_t j) {
  if (!inst.has_edge(from_item, j)) return;
  builder.set_value(to_item, j, inst.value(from_item, j));
  if (inst.generalized()) builder.set_cost(to_item, j, inst.cost(from_item, j));
  for (std::size_t r = 0; r < inst.num_resources(); ++r) {
    const auto& l = inst.resource_cost(from_item, j, r);
    if (l != 0) builder.set_resource_cost(to_item, j, r, l);
  }
}

std::size_t Allocation::num_assigned() const {
  std::size_t count = 0;
  for (const auto& b : buyer_) count += b.has_value() ? 1 : 0;
  return count;
}

std::vector<std::size_t> Allocation::items_of(std::size_t j) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < buyer_.size(); ++i) {
    if (buyer_[i] == j) out.push_back(i);
  }
  return out;
}

void check_edges(const Instance& inst, const Allocation& alloc) {
  if (alloc.num_items() != inst.num_items()) {
    throw Error(ErrorCode::UnknownEdge, "allocation size does not match the instance");
  }
  for (std::size_t i = 0; i < alloc.num_items(); ++i) {
    const auto& j = alloc.buyer(i);
    if (!j) continue;
    if (*j >= inst.num_buyers() || !inst.has_edge(i, *j)) {
      throw Error(ErrorCode::UnknownEdge, "item '" + inst.item_id(i) + "' assigned along a non-edge");
    }
  }
}

FeasibilityReport is_feasible(const Instance& inst, const Allocation& alloc) {
  check_edges(inst, alloc);
  const auto m = inst.num_buyers();
  const auto k = inst.num_resources();
  std::vector<Rational> slack(m);
  std::vector<std::vector<Rational>> spend(k, std::vector<Rational>(m));
  for (std::size_t i = 0; i < alloc.num_items(); ++i) {
    const auto& j = alloc.buyer(i);
    if (!j) continue;
    slack[*j] += inst.excess(i, *j);
    for (std::size_t r = 0; r < k; ++r) spend[r][*j] += inst.resource_cost(i, *j, r);
  }
  FeasibilityReport report;
  for (std::size_t j = 0; j < m; ++j) {
    if (slack[j] < 0) report.violations.push_back({j, ConstraintKind::AverageValue, std::nullopt, slack[j]});
    for (std::size_t r = 0; r < k; ++r) {
      const auto& b = inst.budget(j, r);
      if (b && spend[r][j] > *b) {
        report.violations.push_back({j, ConstraintKind::Budget, r, *b - spend[r][j]});
      }
    }
  }
  report.feasible = report.violations.empty();
  return report;
}

Rational allocation_value(const Instance& inst, const Allocation& alloc) {
  check_edges(inst, alloc);
  Rational total = 0;
  for (std::size_t i = 0; i < alloc.num_items(); ++i) {
    if (const auto& j = alloc.buyer(i)) total += inst.value(i, *j);
  }
  return total;
}

}  // namespace ava
