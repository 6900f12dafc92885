#include <algorithm>
#include <set>

#include "wcetw/error.h"
#include "wcetw/witness.h"

namespace wcetw::witness {

using linear::LinExpr;
using model::PartialModel;
using model::Signature;
using model::Truth;

namespace {

std::string fresh_name(const std::string& base, std::set<std::string>& used, bool rename) {
  if (used.count(base) && !rename) throw Error(ErrorKind::kVariableClash, "variable " + base + " is taken");
  std::string name = base;
  for (int k = 1; used.count(name); ++k) name = base + "_" + std::to_string(k);
  used.insert(name);
  return name;
}

}  // namespace

WitnessTask build_witness_task(const queryc::Cfg& cfg, const queryc::ProgramIR& ir, const PartialModel& p,
                               const model::Theory& t, const TaskOptions& options) {
  std::set<std::string> taken = p.scope().variables();
  for (const auto& e : t.entries()) taken.insert(e.variable);
  ipet::Ipet ip = ipet::build_ipet(cfg, taken, options.rename);
  for (const auto& v : ip.f.vars) taken.insert(v);

  std::set<std::string> predicate_names;
  for (const auto& e : t.entries()) predicate_names.insert(e.predicate.name);

  WitnessTask task{p, t, ip.ilp.objective, ip.f, {}};
  linear::LinearSystem scope = p.scope();
  scope.append(ip.ilp.system);
  const ipet::BlockPredicates preds = ipet::derive_predicates(cfg, ir);
  auto add_predicate = [&](logic::Predicate pred, const std::string& var_base) {
    pred.name = fresh_name(pred.name, predicate_names, true);
    const std::string var = fresh_name(var_base, taken, options.rename);
    task.block_variables[pred.name] = var;
    task.theory.add(std::move(pred), var);
    return LinExpr::var(var);
  };
  for (size_t b = 0; b < cfg.blocks.size(); ++b) {
    const std::string& id = cfg.blocks[b].id;
    LinExpr merge = add_predicate(preds.psi.at(id), "psi_" + id);
    auto loop = preds.psi_loop.find(id);
    if (loop != preds.psi_loop.end()) merge += add_predicate(loop->second, "psi_loop_" + id);
    merge -= ipet::block_flow(cfg, ip.f, static_cast<int>(b));
    scope.add_eq(merge, 0);
  }
  task.model.set_scope(std::move(scope));
  return task;
}

TaskContext::TaskContext(const WitnessTask& task) : task_(task), root_(model::drop_nonexistent(task.model)) {
  const PartialModel& m = root_;
  for (int a = 0; a < m.size(); ++a) {
    for (int b = 0; b < m.size(); ++b) {
      const Truth e = m.get(Signature::kEquals, a, b);
      if (a != b && e != Truth::kFalse) {
        throw Error(ErrorKind::kValidation, "objects " + m.objects()[a] + " and " + m.objects()[b] +
                                                " may be equal; only multi-objects may be unknown");
      }
      if (a == b && e == Truth::kFalse) {
        throw Error(ErrorKind::kValidation, "object " + m.objects()[a] + " is not equal to itself");
      }
    }
    if (m.is_multi(a) && m.exists(a) == Truth::kTrue) {
      throw Error(ErrorKind::kValidation, "multi-object " + m.objects()[a] + " must have unknown existence");
    }
  }
  for (size_t i = 0; i < task.theory.entries().size(); ++i) {
    const auto& e = task.theory.entries()[i];
    compiled_.emplace_back(e.predicate, m.signature());
    root_bounds_.push_back(linear::bounds(m.scope(), e.variable));
    if (e.predicate.params.size() == 1) unary_.push_back(static_cast<int>(i));
  }
  logic::Multiplicity mult = multiplicity(m);
  for (int o = 0; o < m.size(); ++o) {
    if (m.is_multi(o) && !mult[o]) {
      throw Error(ErrorKind::kNonterminatingScope,
                  "scope bounds no unary predicate that holds for multi-object " + m.objects()[o]);
    }
  }
}

logic::Multiplicity TaskContext::multiplicity(const PartialModel& m) const {
  logic::Multiplicity mult(m.size());
  std::vector<int> env(1);
  for (int k : unary_) {
    const auto& upper = root_bounds_[k].upper;
    if (!upper) continue;
    bool relevant = false;
    for (int o = 0; o < m.size() && !relevant; ++o) {
      if (!m.is_multi(o)) continue;
      env.assign(1, o);
      relevant = compiled_[k].eval(m, env) == Truth::kTrue;
    }
    if (!relevant) continue;
    const std::int64_t lower = compiled_[k].count_bounds(m, nullptr).lower;
    const std::int64_t room = std::max<std::int64_t>(0, *upper - lower);
    for (int o = 0; o < m.size(); ++o) {
      if (!m.is_multi(o)) continue;
      env.assign(1, o);
      if (compiled_[k].eval(m, env) != Truth::kTrue) continue;
      if (!mult[o] || room < *mult[o]) mult[o] = room;
    }
  }
  return mult;
}

Analysis TaskContext::analyze(const PartialModel& m, bool with_bound) const {
  Analysis a;
  const logic::Multiplicity mult = multiplicity(m);
  for (int o = 0; o < m.size(); ++o) {
    if (m.is_multi(o) && !mult[o]) {
      throw Error(ErrorKind::kNonterminatingScope, "multi-object " + m.objects()[o] + " has no copy bound");
    }
  }
  std::vector<std::int64_t> key;
  for (size_t i = 0; i < compiled_.size(); ++i) {
    logic::CountBounds cb = compiled_[i].count_bounds(m, &mult);
    const auto& root = root_bounds_[i];
    if ((root.upper && cb.lower > *root.upper) || (root.lower && cb.upper && *cb.upper < *root.lower) ||
        root.infeasible) {
      return a;
    }
    key.push_back(cb.lower);
    key.push_back(cb.upper ? *cb.upper : -1);
    a.counts.push_back(cb);
  }
  if (!with_bound) {
    a.feasible = true;
    return a;
  }
  {
    std::lock_guard<std::mutex> lock(memo_mutex_);
    auto it = memo_.find(key);
    if (it != memo_.end()) {
      a.feasible = it->second.has_value();
      if (a.feasible) a.bound = *it->second;
      return a;
    }
  }
  linear::LinearSystem s = m.scope();
  for (size_t i = 0; i < compiled_.size(); ++i) {
    const LinExpr x = LinExpr::var(task_.theory.entries()[i].variable);
    s.add_ge(x, linear::Rational(static_cast<long>(a.counts[i].lower)));
    if (a.counts[i].upper) s.add_le(x, linear::Rational(static_cast<long>(*a.counts[i].upper)));
  }
  linear::LpResult lp = linear::lp_maximize(s, task_.objective);
  std::optional<std::optional<std::int64_t>> entry;
  if (lp.status == linear::LpResult::Status::kOptimal) {
    entry = std::optional<std::int64_t>(linear::to_int64(linear::floor_q(lp.value)));
  } else if (lp.status == linear::LpResult::Status::kUnbounded) {
    entry = std::optional<std::int64_t>();
  }
  {
    std::lock_guard<std::mutex> lock(memo_mutex_);
    memo_.emplace(key, entry);
  }
  a.feasible = entry.has_value();
  if (a.feasible) a.bound = *entry;
  return a;
}

linear::LinearSystem TaskContext::pinned_scope(const PartialModel& m) const {
  linear::LinearSystem s = m.scope();
  for (size_t i = 0; i < compiled_.size(); ++i) {
    s.add_eq(LinExpr::var(task_.theory.entries()[i].variable),
             linear::Rational(static_cast<long>(compiled_[i].count(m))));
  }
  return s;
}

std::optional<linear::IlpResult> TaskContext::evaluate(const PartialModel& m) const {
  linear::IlpResult r = linear::solve_ilp({task_.objective, pinned_scope(m)});
  if (r.status == linear::IlpResult::Status::kInfeasible) return std::nullopt;
  if (r.status == linear::IlpResult::Status::kUnbounded) {
    throw Error(ErrorKind::kUnbounded, "objective is unbounded on a concrete model");
  }
  return r;
}

std::vector<PartialModel> branch(const PartialModel& m, const logic::Multiplicity& mult) {
  const Signature& sig = m.signature();
  const int n = m.size();
  for (int o = 0; o < n; ++o) {
    if (m.is_multi(o) || m.exists(o) != Truth::kUnknown) continue;
    PartialModel yes = m, no = m;
    yes.set(Signature::kExists, o, Truth::kTrue);
    no.set(Signature::kExists, o, Truth::kFalse);
    return {std::move(yes), model::drop_nonexistent(no)};
  }
  for (model::SymbolId s = sig.first_user_symbol(); s < sig.size(); ++s) {
    if (sig.arity(s) == 1) {
      for (int o = 0; o < n; ++o) {
        if (m.is_multi(o) || m.get(s, o) != Truth::kUnknown) continue;
        PartialModel yes = m, no = m;
        yes.set(s, o, Truth::kTrue);
        no.set(s, o, Truth::kFalse);
        return {std::move(yes), std::move(no)};
      }
    } else {
      for (int a = 0; a < n; ++a) {
        if (m.is_multi(a)) continue;
        for (int b = 0; b < n; ++b) {
          if (m.is_multi(b) || m.get(s, a, b) != Truth::kUnknown) continue;
          PartialModel yes = m, no = m;
          yes.set(s, a, b, Truth::kTrue);
          no.set(s, a, b, Truth::kFalse);
          return {std::move(yes), std::move(no)};
        }
      }
    }
  }
  for (int o = 0; o < n; ++o) {
    if (!m.is_multi(o)) continue;
    auto [with, none] = model::concretize_multi(m, o);
    std::vector<PartialModel> out;
    if (!mult[o] || *mult[o] > 0) out.push_back(std::move(with));
    out.push_back(model::drop_nonexistent(none));
    return out;
  }
  return {};
}

std::string canonical_form(const PartialModel& m) {
  // Copies grouped by origin; only ids containing '#' take part.
  std::map<std::string, std::vector<int>> groups;
  for (int o = 0; o < m.size(); ++o) {
    const std::string& id = m.objects()[o];
    if (id.find('#') != std::string::npos) groups[model::origin_of(id)].push_back(o);
  }
  std::vector<std::vector<int>> movable;
  for (auto& [origin, members] : groups) {
    if (members.size() > 1) movable.push_back(members);
  }
  if (movable.empty()) return m.serialize();

  const int n = m.size();
  const Signature& sig = m.signature();
  std::vector<int> perm(n);  // new position of each object
  for (int i = 0; i < n; ++i) perm[i] = i;
  std::string best;
  auto render = [&] {
    // Object list is unchanged: renaming only swaps which copy carries which facts.
    std::vector<int> inv(n);
    for (int i = 0; i < n; ++i) inv[perm[i]] = i;
    PartialModel q = m;
    for (model::SymbolId s = 0; s < sig.size(); ++s) {
      if (sig.arity(s) == 1) {
        for (int i = 0; i < n; ++i) q.set(s, i, m.get(s, inv[i]));
      } else {
        for (int i = 0; i < n; ++i) {
          for (int j = 0; j < n; ++j) q.set(s, i, j, m.get(s, inv[i], inv[j]));
        }
      }
    }
    std::string text = q.serialize();
    if (best.empty() || text < best) best = std::move(text);
  };
  auto rec = [&](auto&& self, size_t g) -> void {
    if (g == movable.size()) {
      render();
      return;
    }
    std::vector<int> targets = movable[g];
    std::sort(targets.begin(), targets.end());
    do {
      for (size_t k = 0; k < movable[g].size(); ++k) perm[movable[g][k]] = targets[k];
      self(self, g + 1);
    } while (std::next_permutation(targets.begin(), targets.end()));
    for (int o : movable[g]) perm[o] = o;
  };
  rec(rec, 0);
  return best;
}

const char* outcome_name(Outcome o) {
  switch (o) {
    case Outcome::kPrunedInfeasible: return "pruned_infeasible";
    case Outcome::kPrunedBound: return "pruned_bound";
    case Outcome::kIsoDuplicate: return "iso_duplicate";
    case Outcome::kSolution: return "solution";
    case Outcome::kBranched: return "branched";
  }
  return "?";
}

}  // namespace wcetw::witness
