#include <algorithm>

#include "wcetw/error.h"
#include "wcetw/logic.h"

namespace wcetw::logic {

using model::Signature;

Compiled::Compiled(const Predicate& p, const Signature& sig) : source_(to_nnf(normalize(p))) {
  num_params_ = static_cast<int>(source_.params.size());
  std::map<std::string, int> scope;
  for (int i = 0; i < num_params_; ++i) scope[source_.params[i]] = i;
  num_slots_ = num_params_;
  sig_ = &sig;
  root_ = build(source_.body, scope);
  sig_ = nullptr;

  // Split the top-level conjunction so enumeration can cut early.
  stage_.assign(num_params_ + 1, {});
  std::vector<NodePtr> parts;
  std::vector<int> ids;
  if (nodes_[root_].kind == NodeKind::kAnd) {
    ids = nodes_[root_].children;
    parts = source_.body->children;
  } else {
    ids = {root_};
    parts = {source_.body};
  }
  for (size_t i = 0; i < ids.size(); ++i) {
    int last = -1;
    for (const auto& v : free_variables(parts[i])) last = std::max(last, scope.at(v));
    stage_[last + 1].push_back(ids[i]);
  }
}

int Compiled::build(const NodePtr& n, std::map<std::string, int>& scope) {
  CNode c;
  c.kind = n->kind;
  auto slot = [&](const std::string& v) {
    auto it = scope.find(v);
    if (it == scope.end()) throw Error(ErrorKind::kUnboundVariable, "unbound variable " + v);
    return it->second;
  };
  switch (n->kind) {
    case NodeKind::kClass:
      c.symbol = sig_->require(n->symbol, 1);
      c.a = slot(n->vars[0]);
      break;
    case NodeKind::kRelation:
      c.symbol = sig_->require(n->symbol, 2);
      c.a = slot(n->vars[0]);
      c.b = slot(n->vars[1]);
      break;
    case NodeKind::kEquals:
      c.a = slot(n->vars[0]);
      c.b = slot(n->vars[1]);
      break;
    case NodeKind::kExists:
    case NodeKind::kForall: {
      c.a = num_slots_++;
      auto saved = scope.find(n->vars[0]) == scope.end() ? -1 : scope[n->vars[0]];
      scope[n->vars[0]] = c.a;
      c.children.push_back(build(n->children[0], scope));
      if (saved < 0) {
        scope.erase(n->vars[0]);
      } else {
        scope[n->vars[0]] = saved;
      }
      break;
    }
    default:
      for (const auto& ch : n->children) c.children.push_back(build(ch, scope));
  }
  nodes_.push_back(std::move(c));
  return static_cast<int>(nodes_.size()) - 1;
}

namespace {

inline bool skipped(const PartialModel& m, int o, const Multiplicity* mult) {
  if (m.exists(o) == Truth::kFalse) return true;
  return mult != nullptr && m.is_multi(o) && (*mult)[o] && *(*mult)[o] == 0;
}

}  // namespace

Truth Compiled::eval_node(int id, const PartialModel& m, std::vector<int>& env, const Multiplicity* mult) const {
  const CNode& c = nodes_[id];
  switch (c.kind) {
    case NodeKind::kTrue:
      return Truth::kTrue;
    case NodeKind::kFalse:
      return Truth::kFalse;
    case NodeKind::kClass:
      return m.get(c.symbol, env[c.a]);
    case NodeKind::kRelation:
      return m.get(c.symbol, env[c.a], env[c.b]);
    case NodeKind::kEquals:
      return m.get(Signature::kEquals, env[c.a], env[c.b]);
    case NodeKind::kNot:
      return model::t_not(eval_node(c.children[0], m, env, mult));
    case NodeKind::kAnd: {
      Truth acc = Truth::kTrue;
      for (int ch : c.children) {
        acc = model::t_and(acc, eval_node(ch, m, env, mult));
        if (acc == Truth::kFalse) break;
      }
      return acc;
    }
    case NodeKind::kOr: {
      Truth acc = Truth::kFalse;
      for (int ch : c.children) {
        acc = model::t_or(acc, eval_node(ch, m, env, mult));
        if (acc == Truth::kTrue) break;
      }
      return acc;
    }
    case NodeKind::kExists: {
      Truth acc = Truth::kFalse;
      for (int o = 0; o < m.size() && acc != Truth::kTrue; ++o) {
        if (skipped(m, o, mult)) continue;
        env[c.a] = o;
        acc = model::t_or(acc, model::t_and(m.exists(o), eval_node(c.children[0], m, env, mult)));
      }
      return acc;
    }
    case NodeKind::kForall: {
      Truth acc = Truth::kTrue;
      for (int o = 0; o < m.size() && acc != Truth::kFalse; ++o) {
        if (skipped(m, o, mult)) continue;
        env[c.a] = o;
        acc = model::t_and(acc, model::t_or(model::t_not(m.exists(o)), eval_node(c.children[0], m, env, mult)));
      }
      return acc;
    }
  }
  return Truth::kUnknown;
}

Truth Compiled::eval(const PartialModel& m, std::vector<int>& env, const Multiplicity* mult) const {
  env.resize(std::max<size_t>(env.size(), num_slots_));
  return eval_node(root_, m, env, mult);
}

template <class F>
void Compiled::enumerate(const PartialModel& m, const Multiplicity* mult, F&& visit) const {
  std::vector<int> env(std::max(num_slots_, 1), 0);
  Truth start = Truth::kTrue;
  for (int id : stage_[0]) {
    start = model::t_and(start, eval_node(id, m, env, mult));
    if (start == Truth::kFalse) return;
  }
  const int n = m.size();
  auto rec = [&](auto&& self, int depth, Truth cur) -> void {
    if (depth == num_params_) {
      visit(env, cur);
      return;
    }
    for (int o = 0; o < n; ++o) {
      if (skipped(m, o, mult)) continue;
      env[depth] = o;
      Truth v = cur;
      for (int id : stage_[depth + 1]) {
        v = model::t_and(v, eval_node(id, m, env, mult));
        if (v == Truth::kFalse) break;
      }
      if (v != Truth::kFalse) self(self, depth + 1, v);
    }
  };
  rec(rec, 0, start);
}

MatchSet Compiled::matches(const PartialModel& m) const {
  MatchSet out;
  out.params = source_.params;
  enumerate(m, nullptr, [&](const std::vector<int>& env, Truth v) {
    if (v != Truth::kTrue) return;
    std::vector<std::string> t;
    for (int i = 0; i < num_params_; ++i) t.push_back(m.objects()[env[i]]);
    out.tuples.push_back(std::move(t));
  });
  return out;
}

std::int64_t Compiled::count(const PartialModel& m) const {
  std::int64_t k = 0;
  enumerate(m, nullptr, [&](const std::vector<int>&, Truth v) { k += v == Truth::kTrue; });
  return k;
}

CountBounds Compiled::count_bounds(const PartialModel& m, const Multiplicity* mult) const {
  CountBounds b;
  std::int64_t upper = 0;
  bool unbounded = false;
  enumerate(m, mult, [&](const std::vector<int>& env, Truth v) {
    bool sure = true;
    std::int64_t factor = 1;
    for (int i = 0; i < num_params_; ++i) {
      const int o = env[i];
      if (!m.is_sure_single(o)) sure = false;
      if (m.is_multi(o)) {
        if (mult == nullptr || !(*mult)[o]) {
          unbounded = true;
        } else {
          factor *= *(*mult)[o];
        }
      }
    }
    if (v == Truth::kTrue && sure) ++b.lower;
    upper += factor;
  });
  if (!unbounded) b.upper = upper;
  return b;
}

namespace {

std::vector<int> bind(const PartialModel& m, const Predicate& p, const Binding& z) {
  std::vector<int> env;
  for (const auto& v : p.params) {
    auto it = z.find(v);
    if (it == z.end()) throw Error(ErrorKind::kUnboundVariable, "parameter " + v + " of " + p.name + " unbound");
    env.push_back(m.require_index(it->second));
  }
  return env;
}

}  // namespace

Truth eval3(const PartialModel& m, const Predicate& p, const Binding& z) {
  std::vector<int> env = bind(m, p, z);
  Compiled c(p, m.signature());
  return c.eval(m, env);
}

MatchSet matches(const PartialModel& m, const Predicate& p) { return Compiled(p, m.signature()).matches(m); }

CountBounds count_bounds(const PartialModel& m, const Predicate& p, const Multiplicity* mult) {
  return Compiled(p, m.signature()).count_bounds(m, mult);
}

}  // namespace wcetw::logic
