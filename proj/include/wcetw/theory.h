#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wcetw/linear.h"
#include "wcetw/logic.h"
#include "wcetw/model.h"

namespace wcetw::model {

struct TheoryEntry {
  logic::Predicate predicate;
  std::string variable;
};

// Predicates paired injectively with linear variables.
class Theory {
 public:
  void add(logic::Predicate p, std::string variable);
  void append(const Theory& other);
  const std::vector<TheoryEntry>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }
  std::optional<std::string> variable_of(const std::string& predicate_name) const;
  bool uses_variable(const std::string& v) const;

 private:
  std::vector<TheoryEntry> entries_;
};

// Every predicate's match count is pinned by the scope.
bool compatible(const PartialModel& m, const Theory& t);

struct RelationDecl {
  std::string name;
  std::string source_class;
  std::string target_class;
  std::optional<int> upper_bound;
};

struct Metamodel {
  SignaturePtr signature;
  std::vector<RelationDecl> relations;
  std::vector<std::pair<std::string, std::string>> inverse_pairs;

  const RelationDecl* relation(const std::string& name) const;
};

// Typing, multiplicity and inverse rules as error predicates whose count
// variable the returned scope pins to zero.
struct WellFormedness {
  Theory theory;
  linear::LinearSystem scope;
};

WellFormedness expand_metamodel(const Metamodel& mm);

}  // namespace wcetw::model
