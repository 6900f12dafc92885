#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wcetw/model.h"

namespace wcetw::logic {

using model::PartialModel;
using model::Truth;

enum class NodeKind { kTrue, kFalse, kClass, kRelation, kEquals, kNot, kAnd, kOr, kExists, kForall };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Node {
  NodeKind kind;
  std::string symbol;              // class or relation name
  std::vector<std::string> vars;   // atom arguments, or the quantified variable
  std::vector<NodePtr> children;   // operands, or the quantifier body
};

NodePtr lit(bool value);
NodePtr cls(const std::string& name, const std::string& v);
NodePtr rel(const std::string& name, const std::string& u, const std::string& v);
NodePtr eq(const std::string& u, const std::string& v);
NodePtr neg(NodePtr p);
NodePtr conj(std::vector<NodePtr> parts);
NodePtr disj(std::vector<NodePtr> parts);
NodePtr exists(const std::string& v, NodePtr body);
NodePtr forall(const std::string& v, NodePtr body);

struct Predicate {
  std::string name;
  std::vector<std::string> params;
  NodePtr body;
};

// Free variables of a node in first-occurrence order.
std::vector<std::string> free_variables(const NodePtr& n);

// Validates free variables against params (kUnboundVariable) and renames
// quantified variables so none shadows a parameter or another binder.
Predicate normalize(Predicate p);

Predicate to_nnf(const Predicate& p);

std::string to_text(const Predicate& p);
std::string to_text(const NodePtr& n);

// Text syntax: a header "name(p1, p2) :=" followed by the body.
Predicate parse_predicate(std::string_view text);
NodePtr parse_formula(std::string_view text);

using Binding = std::map<std::string, std::string>;

struct MatchSet {
  std::vector<std::string> params;
  std::vector<std::vector<std::string>> tuples;  // object ids, in param order
  std::int64_t count() const { return static_cast<std::int64_t>(tuples.size()); }
};

// Per-object upper bound on the number of concrete objects a multi-object
// stands for; nullopt means unbounded. Ignored for single objects.
using Multiplicity = std::vector<std::optional<std::int64_t>>;

struct CountBounds {
  std::int64_t lower = 0;
  std::optional<std::int64_t> upper;
};

// Predicate resolved against a signature for repeated evaluation.
class Compiled {
 public:
  Compiled(const Predicate& p, const model::Signature& sig);

  const Predicate& source() const { return source_; }
  int num_params() const { return num_params_; }

  // env holds object indices for every parameter slot.
  Truth eval(const PartialModel& m, std::vector<int>& env, const Multiplicity* mult = nullptr) const;

  MatchSet matches(const PartialModel& m) const;
  std::int64_t count(const PartialModel& m) const;
  CountBounds count_bounds(const PartialModel& m, const Multiplicity* mult) const;

 private:
  struct CNode {
    NodeKind kind;
    int symbol = -1;
    int a = -1;
    int b = -1;
    std::vector<int> children;
  };

  int build(const NodePtr& n, std::map<std::string, int>& scope);
  Truth eval_node(int id, const PartialModel& m, std::vector<int>& env, const Multiplicity* mult) const;
  template <class F>
  void enumerate(const PartialModel& m, const Multiplicity* mult, F&& visit) const;

  Predicate source_;
  const model::Signature* sig_ = nullptr;  // only during construction
  int num_params_ = 0;
  int num_slots_ = 0;
  std::vector<CNode> nodes_;
  int root_ = -1;
  // Top-level conjuncts grouped by the last parameter position they need.
  std::vector<std::vector<int>> stage_;
};

Truth eval3(const PartialModel& m, const Predicate& p, const Binding& z);
MatchSet matches(const PartialModel& m, const Predicate& p);
CountBounds count_bounds(const PartialModel& m, const Predicate& p, const Multiplicity* mult = nullptr);

}  // namespace wcetw::logic
