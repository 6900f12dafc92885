#include <algorithm>
#include <fstream>
#include <sstream>

#include "wcetw/error.h"
#include "wcetw/io.h"

namespace wcetw::io {

using model::Signature;
using model::Truth;

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kParse, "cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kParse, path.string() + ": " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const Json& j) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::kParse, "cannot write " + path.string());
  out << j.dump(2) << '\n';
}

const Json& field(const Json& j, const char* name) {
  if (!j.is_object() || !j.contains(name)) throw Error(ErrorKind::kParse, std::string("missing field \"") + name + "\"");
  return j.at(name);
}

std::string string_field(const Json& j, const char* name) {
  const Json& v = field(j, name);
  if (!v.is_string()) throw Error(ErrorKind::kParse, std::string("field \"") + name + "\" must be a string");
  return v.get<std::string>();
}

namespace {

std::vector<std::string> string_list(const Json& j, const char* what) {
  if (!j.is_array()) throw Error(ErrorKind::kParse, std::string(what) + " must be an array");
  std::vector<std::string> out;
  for (const auto& x : j) {
    if (!x.is_string()) throw Error(ErrorKind::kParse, std::string(what) + " entries must be strings");
    out.push_back(x.get<std::string>());
  }
  return out;
}

}  // namespace

linear::LinearSystem scope_from_json(const Json& j) {
  linear::LinearSystem s;
  for (const auto& line : string_list(j, "scope")) s.append(linear::parse_constraint(line));
  return s;
}

Json to_json(const linear::LinearSystem& s) {
  Json out = Json::array();
  for (const auto& line : s.to_lines()) out.push_back(line);
  return out;
}

Json to_json(const linear::Valuation& k) {
  Json out = Json::object();
  for (const auto& [v, x] : k) out[v] = x;
  return out;
}

model::Metamodel metamodel_from_json(const Json& j) {
  std::vector<std::string> classes = string_list(field(j, "classes"), "classes");
  std::vector<model::RelationDecl> rels;
  std::vector<std::string> rel_names;
  for (const auto& r : field(j, "relations")) {
    model::RelationDecl d{string_field(r, "name"), string_field(r, "source_class"), string_field(r, "target_class"),
                          std::nullopt};
    if (r.contains("upper_bound") && !r.at("upper_bound").is_null()) {
      if (!r.at("upper_bound").is_number_integer() || r.at("upper_bound").get<int>() < 0) {
        throw Error(ErrorKind::kParse, "upper_bound of " + d.name + " must be a nonnegative integer");
      }
      d.upper_bound = r.at("upper_bound").get<int>();
    }
    rel_names.push_back(d.name);
    rels.push_back(std::move(d));
  }
  model::Metamodel mm;
  mm.signature = std::make_shared<const Signature>(classes, rel_names);
  mm.relations = std::move(rels);
  if (j.contains("inverse_pairs")) {
    for (const auto& p : j.at("inverse_pairs")) {
      auto names = string_list(p, "inverse pair");
      if (names.size() != 2) throw Error(ErrorKind::kParse, "inverse pairs have two names");
      mm.inverse_pairs.emplace_back(names[0], names[1]);
    }
  }
  for (const auto& r : mm.relations) {
    mm.signature->require(r.source_class, 1);
    mm.signature->require(r.target_class, 1);
  }
  for (const auto& [a, b] : mm.inverse_pairs) {
    mm.signature->require(a, 2);
    mm.signature->require(b, 2);
  }
  return mm;
}

Json to_json(const model::Metamodel& mm) {
  Json out;
  out["classes"] = mm.signature->classes();
  out["relations"] = Json::array();
  for (const auto& r : mm.relations) {
    Json d{{"name", r.name}, {"source_class", r.source_class}, {"target_class", r.target_class}};
    if (r.upper_bound) d["upper_bound"] = *r.upper_bound;
    out["relations"].push_back(d);
  }
  out["inverse_pairs"] = Json::array();
  for (const auto& [a, b] : mm.inverse_pairs) out["inverse_pairs"].push_back({a, b});
  return out;
}

namespace {

model::SymbolId symbol_id(const Signature& sig, const std::string& name, size_t arity) {
  if (name == "exists") {
    if (arity != 1) throw Error(ErrorKind::kSymbolMismatch, "exists is unary");
    return Signature::kExists;
  }
  if (name == "equals") {
    if (arity != 2) throw Error(ErrorKind::kSymbolMismatch, "equals is binary");
    return Signature::kEquals;
  }
  return sig.require(name, static_cast<int>(arity));
}

std::string symbol_label(const Signature& sig, model::SymbolId s) {
  if (s == Signature::kExists) return "exists";
  if (s == Signature::kEquals) return "equals";
  return sig.name(s);
}

}  // namespace

model::PartialModel model_from_json(const Json& j, model::SignaturePtr sig) {
  std::vector<std::string> ids;
  for (const auto& o : field(j, "objects")) ids.push_back(o.is_string() ? o.get<std::string>() : string_field(o, "id"));
  std::vector<std::string> sorted = ids;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw Error(ErrorKind::kValidation, "duplicate object id");
  }
  linear::LinearSystem scope;
  if (j.contains("scope")) scope = scope_from_json(j.at("scope"));
  model::PartialModel m(sig, sorted, std::move(scope));
  if (j.contains("facts")) {
    for (const auto& f : j.at("facts")) {
      auto tuple_ids = string_list(field(f, "tuple"), "tuple");
      const model::SymbolId s = symbol_id(*sig, string_field(f, "symbol"), tuple_ids.size());
      std::vector<int> tuple;
      for (const auto& id : tuple_ids) tuple.push_back(m.require_index(id));
      Truth v = f.contains("value") ? model::parse_truth(string_field(f, "value")) : Truth::kTrue;
      m.set(s, tuple, v);
    }
  }
  return m;
}

Json to_json(const model::PartialModel& m) {
  const Signature& sig = m.signature();
  Json out;
  out["objects"] = Json::array();
  for (const auto& o : m.objects()) out["objects"].push_back({{"id", o}});
  Json facts = Json::array();
  const int n = m.size();
  auto emit = [&](model::SymbolId s, std::vector<int> tuple, Truth v) {
    Json t = Json::array();
    for (int o : tuple) t.push_back(m.objects()[o]);
    facts.push_back({{"symbol", symbol_label(sig, s)}, {"tuple", t}, {"value", model::truth_name(v)}});
  };
  for (int o = 0; o < n; ++o) {
    if (m.exists(o) != Truth::kTrue) emit(Signature::kExists, {o}, m.exists(o));
  }
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      Truth v = m.get(Signature::kEquals, a, b);
      if (v != model::from_bool(a == b)) emit(Signature::kEquals, {a, b}, v);
    }
  }
  for (model::SymbolId s = sig.first_user_symbol(); s < sig.size(); ++s) {
    if (sig.arity(s) == 1) {
      for (int o = 0; o < n; ++o) {
        if (m.get(s, o) != Truth::kFalse) emit(s, {o}, m.get(s, o));
      }
    } else {
      for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
          if (m.get(s, a, b) != Truth::kFalse) emit(s, {a, b}, m.get(s, a, b));
        }
      }
    }
  }
  out["facts"] = facts;
  out["scope"] = to_json(m.scope());
  return out;
}

logic::NodePtr formula_from_json(const Json& j) {
  using namespace logic;
  if (j.is_string()) return parse_formula(j.get<std::string>());
  const std::string op = string_field(j, "op");
  auto vars = [&]() { return string_list(field(j, "vars"), "vars"); };
  auto args = [&]() {
    std::vector<NodePtr> out;
    for (const auto& a : field(j, "args")) out.push_back(formula_from_json(a));
    return out;
  };
  if (op == "true") return lit(true);
  if (op == "false") return lit(false);
  if (op == "class") {
    auto v = vars();
    if (v.size() != 1) throw Error(ErrorKind::kParse, "class atom takes one variable");
    return cls(string_field(j, "symbol"), v[0]);
  }
  if (op == "relation" || op == "eq") {
    auto v = vars();
    if (v.size() != 2) throw Error(ErrorKind::kParse, op + " atom takes two variables");
    return op == "eq" ? eq(v[0], v[1]) : rel(string_field(j, "symbol"), v[0], v[1]);
  }
  if (op == "not") return neg(formula_from_json(field(j, "body")));
  if (op == "and") return conj(args());
  if (op == "or") return disj(args());
  if (op == "exists") return exists(string_field(j, "var"), formula_from_json(field(j, "body")));
  if (op == "forall") return forall(string_field(j, "var"), formula_from_json(field(j, "body")));
  throw Error(ErrorKind::kParse, "unknown formula op \"" + op + "\"");
}

Json to_json(const logic::NodePtr& n) {
  using logic::NodeKind;
  switch (n->kind) {
    case NodeKind::kTrue: return {{"op", "true"}};
    case NodeKind::kFalse: return {{"op", "false"}};
    case NodeKind::kClass: return {{"op", "class"}, {"symbol", n->symbol}, {"vars", n->vars}};
    case NodeKind::kRelation: return {{"op", "relation"}, {"symbol", n->symbol}, {"vars", n->vars}};
    case NodeKind::kEquals: return {{"op", "eq"}, {"vars", n->vars}};
    case NodeKind::kNot: return {{"op", "not"}, {"body", to_json(n->children[0])}};
    case NodeKind::kAnd:
    case NodeKind::kOr: {
      Json a = Json::array();
      for (const auto& c : n->children) a.push_back(to_json(c));
      return {{"op", n->kind == NodeKind::kAnd ? "and" : "or"}, {"args", a}};
    }
    case NodeKind::kExists:
    case NodeKind::kForall:
      return {{"op", n->kind == NodeKind::kExists ? "exists" : "forall"}, {"var", n->vars[0]},
              {"body", to_json(n->children[0])}};
  }
  return nullptr;
}

logic::Predicate predicate_from_json(const Json& j) {
  if (j.is_string()) return logic::parse_predicate(j.get<std::string>());
  logic::Predicate p;
  p.name = string_field(j, "name");
  p.params = j.contains("params") ? string_list(j.at("params"), "params") : std::vector<std::string>{};
  p.body = formula_from_json(field(j, "body"));
  return logic::normalize(std::move(p));
}

Json to_json(const logic::Predicate& p) {
  return {{"name", p.name}, {"params", p.params}, {"body", logic::to_text(p.body)}};
}

model::Theory theory_from_json(const Json& j) {
  model::Theory t;
  for (const auto& e : field(j, "entries")) t.add(predicate_from_json(field(e, "predicate")), string_field(e, "variable"));
  return t;
}

Json to_json(const model::Theory& t) {
  Json entries = Json::array();
  for (const auto& e : t.entries()) entries.push_back({{"predicate", to_json(e.predicate)}, {"variable", e.variable}});
  return {{"entries", entries}};
}

}  // namespace wcetw::io
