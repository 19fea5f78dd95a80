#ifndef AVA_INSTANCE_HPP
#define AVA_INSTANCE_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <boost/multiprecision/eigen.hpp>

#include "ava/rational.hpp"

namespace ava {

using RationalMatrix = Eigen::Matrix<Rational, Eigen::Dynamic, Eigen::Dynamic>;
using EdgeMask = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

enum class EdgeClass { P, N };

/// P iff v - rho * c >= 0.  Zero excess is P.
EdgeClass classify_edge(const Rational& value, const Rational& rho,
                        const Rational& cost = Rational(1));

/// Bipartite valuation data for AVA and GenAVA.
///
/// Items and buyers are addressed by dense indices in declaration order; ids are
/// kept for I/O.  Values live in an items x buyers matrix; a pair without an edge
/// has value 0 and is never allocatable.  Without explicit costs every edge has
/// cost 1 (plain AVA).  Budgets are optional per (buyer, resource); an absent
/// budget is unlimited.
///
/// Immutable once built.
class Instance {
 public:
  Instance() = default;

  std::size_t num_items() const { return item_ids_.size(); }
  std::size_t num_buyers() const { return buyer_ids_.size(); }
  const std::string& item_id(std::size_t i) const { return item_ids_.at(i); }
  const std::string& buyer_id(std::size_t j) const { return buyer_ids_.at(j); }
  std::optional<std::size_t> find_item(const std::string& id) const;
  std::optional<std::size_t> find_buyer(const std::string& id) const;

  const Rational& rho(std::size_t j) const { return rho_.at(j); }
  bool has_edge(std::size_t i, std::size_t j) const { return edges_(i, j); }
  const Rational& value(std::size_t i, std::size_t j) const { return values_(i, j); }
  const Rational& cost(std::size_t i, std::size_t j) const { return costs_(i, j); }
  /// v_ij - rho_j * c_ij; the excess of a P-edge, minus the deficit of an N-edge.
  const Rational& excess(std::size_t i, std::size_t j) const { return excess_(i, j); }
  EdgeClass edge_class(std::size_t i, std::size_t j) const;

  const RationalMatrix& values() const { return values_; }
  const EdgeMask& edges() const { return edges_; }
  std::size_t num_edges() const { return static_cast<std::size_t>(edges_.count()); }

  /// Buyers adjacent to item i, in declaration order.
  std::vector<std::size_t> buyers_of(std::size_t i) const;

  bool has_p_edge(std::size_t i) const;
  bool has_n_edge(std::size_t i) const;
  /// All edges of i are P-edges.  Vacuously true for an isolated item.
  bool is_p_item(std::size_t i) const { return !has_n_edge(i); }
  bool is_n_item(std::size_t i) const { return !has_p_edge(i); }
  bool is_unambiguous() const;

  bool generalized() const { return generalized_; }

  std::size_t num_resources() const { return resource_names_.size(); }
  bool has_budgets() const { return !resource_names_.empty(); }
  const std::string& resource_name(std::size_t r) const { return resource_names_.at(r); }
  /// nullopt means unlimited.
  const std::optional<Rational>& budget(std::size_t j, std::size_t r) const {
    return budgets_.at(r).at(j);
  }
  const Rational& resource_cost(std::size_t i, std::size_t j, std::size_t r) const {
    return resource_costs_.at(r)(i, j);
  }

  /// Free-form provenance remarks carried into JSON (e.g. rounding of generator counts).
  const std::vector<std::string>& notes() const { return notes_; }

  /// Same items and buyers, keeping only the edges where `keep` is true.
  Instance with_edges(const EdgeMask& keep) const;

 private:
  friend class InstanceBuilder;

  std::vector<std::string> item_ids_;
  std::vector<std::string> buyer_ids_;
  std::vector<Rational> rho_;
  EdgeMask edges_;
  RationalMatrix values_;
  RationalMatrix costs_;
  RationalMatrix excess_;
  bool generalized_ = false;
  std::vector<std::string> resource_names_;
  std::vector<std::vector<std::optional<Rational>>> budgets_;  // [resource][buyer]
  std::vector<RationalMatrix> resource_costs_;                 // [resource](item, buyer)
  std::vector<std::string> notes_;
};

class InstanceBuilder {
 public:
  std::size_t add_buyer(std::string id, Rational rho);
  std::size_t add_item(std::string id);
  /// Declares the edge (i, j) with value v.
  void set_value(std::size_t i, std::size_t j, Rational v);
  /// Switches the instance to GenAVA mode for every edge.
  void set_cost(std::size_t i, std::size_t j, Rational c);
  void enable_costs() { generalized_ = true; }
  std::size_t add_resource(std::string name);
  void set_budget(std::size_t j, std::size_t r, Rational b);
  void set_resource_cost(std::size_t i, std::size_t j, std::size_t r, Rational l);
  void add_note(std::string note) { notes_.push_back(std::move(note)); }

  std::size_t num_items() const { return item_ids_.size(); }
  std::size_t num_buyers() const { return buyer_ids_.size(); }

  /// Validates the invariants and freezes the instance.  Throws Error(InvalidInstance).
  Instance build() const;

 private:
  struct Entry {
    std::size_t i, j;
    Rational x;
  };
  struct ResourceEntry {
    std::size_t i, j, r;
    Rational x;
  };
  std::vector<std::string> item_ids_;
  std::vector<std::string> buyer_ids_;
  std::vector<Rational> rho_;
  std::vector<Entry> values_;
  std::vector<Entry> costs_;
  bool generalized_ = false;
  std::vector<std::string> resource_names_;
  std::vector<ResourceEntry> budgets_;  // i unused
  std::vector<ResourceEntry> resource_costs_;
  std::vector<std::string> notes_;
};

/// Builder pre-populated with the buyers, resources, budgets and cost mode of `inst`.
InstanceBuilder builder_like(const Instance& inst);

/// Copies edge (from_item, j) of `inst`, including its cost and resource costs, onto
/// (to_item, j) of `builder`.  No-op for a non-edge.
void copy_edge(InstanceBuilder& builder, const Instance& inst, std::size_t from_item,
               std::size_t to_item, std::size_t j);

/// Integral assignment item -> buyer; unassigned items map to nullopt.
class Allocation {
 public:
  Allocation() = default;
  explicit Allocation(std::size_t num_items) : buyer_(num_items) {}

  std::size_t num_items() const { return buyer_.size(); }
  const std::optional<std::size_t>& buyer(std::size_t i) const { return buyer_.at(i); }
  void assign(std::size_t i, std::size_t j) { buyer_.at(i) = j; }
  void unassign(std::size_t i) { buyer_.at(i).reset(); }
  std::size_t num_assigned() const;
  std::vector<std::size_t> items_of(std::size_t j) const;

  bool operator==(const Allocation&) const = default;

 private:
  std::vector<std::optional<std::size_t>> buyer_;
};

enum class ConstraintKind { AverageValue, Budget };

struct Violation {
  std::size_t buyer;
  ConstraintKind kind;
  std::optional<std::size_t> resource;  // set for Budget
  Rational slack;                       // negative when violated
};

struct FeasibilityReport {
  bool feasible = true;
  std::vector<Violation> violations;
};

/// Checks every buyer's average-value (ROS) constraint and every configured budget.
/// Throws Error(UnknownEdge) if the allocation uses a non-edge.
FeasibilityReport is_feasible(const Instance& inst, const Allocation& alloc);

/// Sum of v_ij over assigned pairs.  Throws Error(UnknownEdge).
Rational allocation_value(const Instance& inst, const Allocation& alloc);

/// Throws Error(UnknownEdge) unless every assigned pair is an edge.
void check_edges(const Instance& inst, const Allocation& alloc);

}  // namespace ava

#endif  // AVA_INSTANCE_HPP
