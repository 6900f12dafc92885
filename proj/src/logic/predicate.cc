#include <algorithm>
#include <functional>
#include <set>

#include "wcetw/error.h"
#include "wcetw/logic.h"

namespace wcetw::logic {

namespace {

NodePtr make(NodeKind kind, std::string symbol, std::vector<std::string> vars, std::vector<NodePtr> children) {
  return std::make_shared<const Node>(Node{kind, std::move(symbol), std::move(vars), std::move(children)});
}

}  // namespace

NodePtr lit(bool value) { return make(value ? NodeKind::kTrue : NodeKind::kFalse, "", {}, {}); }
NodePtr cls(const std::string& name, const std::string& v) { return make(NodeKind::kClass, name, {v}, {}); }
NodePtr rel(const std::string& name, const std::string& u, const std::string& v) {
  return make(NodeKind::kRelation, name, {u, v}, {});
}
NodePtr eq(const std::string& u, const std::string& v) { return make(NodeKind::kEquals, "", {u, v}, {}); }
NodePtr neg(NodePtr p) { return make(NodeKind::kNot, "", {}, {std::move(p)}); }

NodePtr conj(std::vector<NodePtr> parts) {
  if (parts.empty()) return lit(true);
  if (parts.size() == 1) return parts[0];
  return make(NodeKind::kAnd, "", {}, std::move(parts));
}

NodePtr disj(std::vector<NodePtr> parts) {
  if (parts.empty()) return lit(false);
  if (parts.size() == 1) return parts[0];
  return make(NodeKind::kOr, "", {}, std::move(parts));
}

NodePtr exists(const std::string& v, NodePtr body) { return make(NodeKind::kExists, "", {v}, {std::move(body)}); }
NodePtr forall(const std::string& v, NodePtr body) { return make(NodeKind::kForall, "", {v}, {std::move(body)}); }

std::vector<std::string> free_variables(const NodePtr& n) {
  std::vector<std::string> out;
  std::function<void(const NodePtr&, std::set<std::string>&)> walk = [&](const NodePtr& x,
                                                                        std::set<std::string>& bound) {
    switch (x->kind) {
      case NodeKind::kClass:
      case NodeKind::kRelation:
      case NodeKind::kEquals:
        for (const auto& v : x->vars) {
          if (!bound.count(v) && std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
        }
        break;
      case NodeKind::kExists:
      case NodeKind::kForall: {
        bool fresh = bound.insert(x->vars[0]).second;
        walk(x->children[0], bound);
        if (fresh) bound.erase(x->vars[0]);
        break;
      }
      default:
        for (const auto& c : x->children) walk(c, bound);
    }
  };
  std::set<std::string> bound;
  walk(n, bound);
  return out;
}

namespace {

NodePtr rename(const NodePtr& n, const std::map<std::string, std::string>& sub, std::set<std::string>& used) {
  switch (n->kind) {
    case NodeKind::kTrue:
    case NodeKind::kFalse:
      return n;
    case NodeKind::kClass:
    case NodeKind::kRelation:
    case NodeKind::kEquals: {
      std::vector<std::string> vars = n->vars;
      for (auto& v : vars) {
        auto it = sub.find(v);
        if (it != sub.end()) v = it->second;
      }
      return make(n->kind, n->symbol, std::move(vars), {});
    }
    case NodeKind::kExists:
    case NodeKind::kForall: {
      const std::string& v = n->vars[0];
      std::string target = v;
      int k = 1;
      while (used.count(target)) target = v + "_" + std::to_string(k++);
      used.insert(target);
      std::map<std::string, std::string> inner = sub;
      inner[v] = target;
      return make(n->kind, "", {target}, {rename(n->children[0], inner, used)});
    }
    default: {
      std::vector<NodePtr> cs;
      for (const auto& c : n->children) cs.push_back(rename(c, sub, used));
      return make(n->kind, "", {}, std::move(cs));
    }
  }
}

}  // namespace

Predicate normalize(Predicate p) {
  std::set<std::string> params(p.params.begin(), p.params.end());
  if (params.size() != p.params.size()) {
    throw Error(ErrorKind::kValidation, "duplicate parameter in predicate " + p.name);
  }
  for (const auto& v : free_variables(p.body)) {
    if (!params.count(v)) {
      throw Error(ErrorKind::kUnboundVariable, "variable " + v + " is free in " + p.name + " but not a parameter");
    }
  }
  // Parameters stay reserved so renamed binders never capture them.
  std::set<std::string> used = params;
  std::map<std::string, std::string> sub;
  p.body = rename(p.body, sub, used);
  return p;
}

namespace {

NodePtr nnf(const NodePtr& n, bool negate) {
  switch (n->kind) {
    case NodeKind::kTrue:
      return lit(!negate);
    case NodeKind::kFalse:
      return lit(negate);
    case NodeKind::kClass:
    case NodeKind::kRelation:
    case NodeKind::kEquals:
      return negate ? neg(n) : n;
    case NodeKind::kNot:
      return nnf(n->children[0], !negate);
    case NodeKind::kAnd:
    case NodeKind::kOr: {
      std::vector<NodePtr> cs;
      for (const auto& c : n->children) cs.push_back(nnf(c, negate));
      bool is_and = (n->kind == NodeKind::kAnd) != negate;
      return make(is_and ? NodeKind::kAnd : NodeKind::kOr, "", {}, std::move(cs));
    }
    case NodeKind::kExists:
    case NodeKind::kForall: {
      bool is_exists = (n->kind == NodeKind::kExists) != negate;
      return make(is_exists ? NodeKind::kExists : NodeKind::kForall, "", n->vars, {nnf(n->children[0], negate)});
    }
  }
  return n;
}

int precedence(NodeKind k) {
  switch (k) {
    case NodeKind::kOr: return 1;
    case NodeKind::kAnd: return 2;
    case NodeKind::kExists:
    case NodeKind::kForall: return 0;
    default: return 3;
  }
}

std::string text(const NodePtr& n) {
  auto child = [&](const NodePtr& c, int ctx) {
    std::string s = text(c);
    return precedence(c->kind) <= ctx ? "(" + s + ")" : s;
  };
  switch (n->kind) {
    case NodeKind::kTrue: return "true";
    case NodeKind::kFalse: return "false";
    case NodeKind::kClass: return n->symbol + "(" + n->vars[0] + ")";
    case NodeKind::kRelation: return n->symbol + "(" + n->vars[0] + ", " + n->vars[1] + ")";
    case NodeKind::kEquals: return n->vars[0] + " = " + n->vars[1];
    case NodeKind::kNot: return "!" + child(n->children[0], 2);
    case NodeKind::kAnd:
    case NodeKind::kOr: {
      const int ctx = precedence(n->kind);
      std::string out;
      for (size_t i = 0; i < n->children.size(); ++i) {
        if (i > 0) out += n->kind == NodeKind::kAnd ? " & " : " | ";
        out += child(n->children[i], ctx);
      }
      return out;
    }
    case NodeKind::kExists:
    case NodeKind::kForall:
      return std::string(n->kind == NodeKind::kExists ? "exists " : "forall ") + n->vars[0] + ": " +
             text(n->children[0]);
  }
  return "";
}

}  // namespace

Predicate to_nnf(const Predicate& p) { return Predicate{p.name, p.params, nnf(p.body, false)}; }

std::string to_text(const NodePtr& n) { return text(n); }

std::string to_text(const Predicate& p) {
  std::string head = p.name + "(";
  for (size_t i = 0; i < p.params.size(); ++i) head += (i ? ", " : "") + p.params[i];
  return head + ") := " + text(p.body);
}

}  // namespace wcetw::logic
