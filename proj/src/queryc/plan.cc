#include <algorithm>
#include <cctype>
#include <set>

#include "wcetw/error.h"
#include "wcetw/queryc.h"

namespace wcetw::queryc {

using logic::NodeKind;

logic::NodePtr Atom::to_logic() const {
  logic::NodePtr n;
  switch (kind) {
    case NodeKind::kClass:
      n = logic::cls(symbol, vars.at(0));
      break;
    case NodeKind::kRelation:
      n = logic::rel(symbol, vars.at(0), vars.at(1));
      break;
    case NodeKind::kEquals:
      n = logic::eq(vars.at(0), vars.at(1));
      break;
    default:
      throw Error(ErrorKind::kUnknownConstraintKind, "unsupported constraint kind");
  }
  return negated ? logic::neg(n) : n;
}

std::string Atom::text() const {
  std::string core;
  if (kind == NodeKind::kEquals) {
    core = vars.at(0) + " = " + vars.at(1);
    return negated ? "!(" + core + ")" : core;
  }
  core = symbol + "(";
  for (size_t i = 0; i < vars.size(); ++i) core += (i ? ", " : "") + vars[i];
  core += ")";
  return negated ? "!" + core : core;
}

Atom parse_atom(std::string_view text) {
  logic::NodePtr n = logic::parse_formula(text);
  Atom a;
  if (n->kind == NodeKind::kNot) {
    a.negated = true;
    n = n->children[0];
  }
  if (n->kind != NodeKind::kClass && n->kind != NodeKind::kRelation && n->kind != NodeKind::kEquals) {
    throw Error(ErrorKind::kUnknownConstraintKind, "plan constraint must be an atom: " + std::string(text));
  }
  a.kind = n->kind;
  a.symbol = n->symbol;
  a.vars = n->vars;
  return a;
}

const char* op_name(OpType op) { return op == OpType::kExtend ? "extend" : "check"; }

SearchPlan infer_op_types(const std::string& name, std::vector<std::string> params, const std::vector<Atom>& atoms) {
  SearchPlan sp;
  sp.name = name;
  std::set<std::string> bound;
  std::vector<std::string> order;
  for (size_t i = 0; i < atoms.size(); ++i) {
    Step st;
    st.atom = atoms[i];
    st.index = static_cast<int>(i) + 1;
    for (const auto& v : st.atom.vars) {
      if (!bound.count(v) && std::find(st.fresh.begin(), st.fresh.end(), v) == st.fresh.end()) st.fresh.push_back(v);
    }
    if (st.fresh.empty()) {
      st.op = OpType::kCheck;
    } else {
      if (st.atom.negated) {
        throw Error(ErrorKind::kIllFormedPlan,
                    "step " + std::to_string(st.index) + ": negated constraint " + st.atom.text() + " has free variables");
      }
      if (st.atom.kind == NodeKind::kEquals && st.fresh.size() != 1) {
        throw Error(ErrorKind::kIllFormedPlan, "step " + std::to_string(st.index) + ": equality binds nothing");
      }
      st.op = OpType::kExtend;
      for (const auto& v : st.fresh) {
        bound.insert(v);
        order.push_back(v);
      }
    }
    sp.steps.push_back(std::move(st));
  }
  if (params.empty()) params = order;
  for (const auto& p : params) {
    if (!bound.count(p)) throw Error(ErrorKind::kIllFormedPlan, "parameter " + p + " is never bound");
  }
  sp.params = std::move(params);
  return sp;
}

logic::Predicate plan_predicate(const SearchPlan& sp) {
  std::vector<logic::NodePtr> parts;
  std::vector<std::string> hidden;
  for (const auto& st : sp.steps) {
    parts.push_back(st.atom.to_logic());
    for (const auto& v : st.fresh) {
      if (std::find(sp.params.begin(), sp.params.end(), v) == sp.params.end()) hidden.push_back(v);
    }
  }
  logic::NodePtr body = logic::conj(std::move(parts));
  for (auto it = hidden.rbegin(); it != hidden.rend(); ++it) body = logic::exists(*it, body);
  return logic::normalize(logic::Predicate{sp.name, sp.params, body});
}

namespace {

Atom atom_from_json(const Json& j) {
  if (j.is_string()) return parse_atom(j.get<std::string>());
  if (!j.is_object() || !j.contains("vars")) throw Error(ErrorKind::kParse, "atom needs vars");
  Atom a;
  a.vars = j.at("vars").get<std::vector<std::string>>();
  if (j.contains("symbol")) {
    a.symbol = j.at("symbol").get<std::string>();
    if (a.vars.size() == 1) {
      a.kind = NodeKind::kClass;
    } else if (a.vars.size() == 2) {
      a.kind = NodeKind::kRelation;
    } else {
      throw Error(ErrorKind::kParse, "atoms take one or two variables");
    }
  } else {
    if (a.vars.size() != 2) throw Error(ErrorKind::kParse, "equality takes two variables");
    a.kind = NodeKind::kEquals;
  }
  return a;
}

}  // namespace

SearchPlan plan_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("steps")) throw Error(ErrorKind::kParse, "search plan needs steps");
  struct Raw {
    int index;
    Atom atom;
    std::optional<std::string> kind;
  };
  std::vector<Raw> raw;
  try {
    int pos = 0;
    for (const auto& s : j.at("steps")) {
      Raw r{++pos, atom_from_json(s.at("atom")), std::nullopt};
      if (s.contains("index")) r.index = s.at("index").get<int>();
      if (s.value("negated", false)) r.atom.negated = !r.atom.negated;
      if (s.contains("kind")) r.kind = s.at("kind").get<std::string>();
      raw.push_back(std::move(r));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kParse, std::string("search plan: ") + e.what());
  }
  std::stable_sort(raw.begin(), raw.end(), [](const Raw& a, const Raw& b) { return a.index < b.index; });
  std::vector<Atom> atoms;
  for (size_t i = 0; i < raw.size(); ++i) {
    if (raw[i].index != static_cast<int>(i) + 1) {
      throw Error(ErrorKind::kIllFormedPlan, "step indices must be 1..n without gaps");
    }
    atoms.push_back(raw[i].atom);
  }
  std::vector<std::string> params;
  if (j.contains("params")) params = j.at("params").get<std::vector<std::string>>();
  SearchPlan sp = infer_op_types(j.value("name", std::string("query")), params, atoms);
  for (size_t i = 0; i < raw.size(); ++i) {
    if (raw[i].kind && *raw[i].kind != op_name(sp.steps[i].op)) {
      throw Error(ErrorKind::kIllFormedPlan, "step " + std::to_string(i + 1) + " declared " + *raw[i].kind +
                                                 " but is " + op_name(sp.steps[i].op));
    }
  }
  return sp;
}

Json to_json(const SearchPlan& sp) {
  Json steps = Json::array();
  for (const auto& st : sp.steps) {
    Json s{{"index", st.index}, {"atom", st.atom.text()}, {"kind", op_name(st.op)}};
    if (st.op == OpType::kExtend) s["fresh"] = st.fresh;
    steps.push_back(s);
  }
  return {{"name", sp.name}, {"params", sp.params}, {"steps", steps}};
}

}  // namespace wcetw::queryc
