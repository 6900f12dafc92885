#include "wcetw/theory.h"

#include "wcetw/error.h"

namespace wcetw::model {

void Theory::add(logic::Predicate p, std::string variable) {
  if (!linear::is_valid_variable_name(variable)) {
    throw Error(ErrorKind::kValidation, "invalid theory variable \"" + variable + "\"");
  }
  for (const auto& e : entries_) {
    if (e.variable == variable) {
      throw Error(ErrorKind::kValidation, "theory variable \"" + variable + "\" mapped twice");
    }
    if (e.predicate.name == p.name) {
      throw Error(ErrorKind::kValidation, "theory predicate \"" + p.name + "\" listed twice");
    }
  }
  entries_.push_back({logic::normalize(std::move(p)), std::move(variable)});
}

void Theory::append(const Theory& other) {
  for (const auto& e : other.entries_) add(e.predicate, e.variable);
}

std::optional<std::string> Theory::variable_of(const std::string& predicate_name) const {
  for (const auto& e : entries_) {
    if (e.predicate.name == predicate_name) return e.variable;
  }
  return std::nullopt;
}

bool Theory::uses_variable(const std::string& v) const {
  for (const auto& e : entries_) {
    if (e.variable == v) return true;
  }
  return false;
}

bool compatible(const PartialModel& m, const Theory& t) {
  linear::LinearSystem pins;
  for (const auto& e : t.entries()) {
    std::int64_t count = logic::Compiled(e.predicate, m.signature()).count(m);
    pins.add_eq(linear::LinExpr::var(e.variable), static_cast<long>(count));
  }
  return linear::entails(m.scope(), pins);
}

const RelationDecl* Metamodel::relation(const std::string& name) const {
  for (const auto& r : relations) {
    if (r.name == name) return &r;
  }
  return nullptr;
}

WellFormedness expand_metamodel(const Metamodel& mm) {
  using namespace logic;
  WellFormedness wf;
  auto rule = [&](const std::string& name, std::vector<std::string> params, NodePtr body) {
    wf.theory.add(Predicate{name, std::move(params), std::move(body)}, "wf_" + name);
    wf.scope.add_eq(linear::LinExpr::var("wf_" + name), 0);
  };
  for (const auto& r : mm.relations) {
    mm.signature->require(r.name, 2);
    mm.signature->require(r.source_class, 1);
    mm.signature->require(r.target_class, 1);
    rule(r.name + "_source", {"u", "v"}, conj({rel(r.name, "u", "v"), neg(cls(r.source_class, "u"))}));
    rule(r.name + "_target", {"u", "v"}, conj({rel(r.name, "u", "v"), neg(cls(r.target_class, "v"))}));
    if (r.upper_bound) {
      const int k = *r.upper_bound + 1;
      std::vector<std::string> params{"u"};
      std::vector<NodePtr> parts;
      for (int i = 0; i < k; ++i) {
        std::string v = "v" + std::to_string(i);
        params.push_back(v);
        for (int j = 0; j < i; ++j) parts.push_back(neg(eq("v" + std::to_string(j), v)));
        parts.push_back(rel(r.name, "u", v));
      }
      rule(r.name + "_upper", params, conj(std::move(parts)));
    }
  }
  for (const auto& [a, b] : mm.inverse_pairs) {
    mm.signature->require(a, 2);
    mm.signature->require(b, 2);
    rule(a + "_inverse", {"u", "v"}, conj({rel(a, "u", "v"), neg(rel(b, "v", "u"))}));
    rule(b + "_inverse", {"u", "v"}, conj({rel(b, "u", "v"), neg(rel(a, "v", "u"))}));
  }
  return wf;
}

}  // namespace wcetw::model
