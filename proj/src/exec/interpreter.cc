#include <algorithm>

#include "wcetw/error.h"
#include "wcetw/exec.h"
#include "wcetw/ipet.h"

namespace wcetw::exec {

using model::Signature;
using model::Truth;
using queryc::Navigation;
using queryc::StmtKind;

namespace {

struct Resolved {
  model::SymbolId symbol = -1;
  std::vector<int> slots;  // variable slots of the atom arguments
  int var = -1;
  std::vector<int> pending;
};

class Interpreter {
 public:
  Interpreter(const queryc::ProgramIR& ir, const model::PartialModel& m, const queryc::TimingProfile& tp, bool trace)
      : ir_(ir), m_(m), trace_(trace) {
    queryc::Cfg cfg = queryc::build_cfg(ir, tp);
    for (const auto& b : cfg.blocks) {
      ids_.push_back(b.id);
      costs_.push_back(tp.cost(b));
      counts_.push_back(0);
    }
    for (const auto& st : ir.stmts) {
      Resolved r;
      if (st.kind != StmtKind::kEmit) {
        const auto& a = st.atom;
        if (a.kind != logic::NodeKind::kEquals) {
          try {
            r.symbol = m.signature().require(a.symbol, static_cast<int>(a.vars.size()));
          } catch (const Error& e) {
            throw Error(ErrorKind::kSymbolMismatch, e.what());
          }
        }
        for (const auto& v : a.vars) r.slots.push_back(slot(v));
        if (!st.var.empty()) r.var = slot(st.var);
        for (const auto& v : st.pending) r.pending.push_back(slot(v));
      }
      resolved_.push_back(std::move(r));
    }
    for (const auto& p : ir.params) param_slots_.push_back(slot(p));
    env_.assign(names_.size(), -1);
  }

  RunReport run() {
    enter(0);
    if (ir_.stmts.empty()) throw Error(ErrorKind::kIllFormedPlan, "program has no emit");
    exec(0);
    enter(static_cast<int>(ids_.size()) - 1);
    RunReport r;
    std::sort(matches_.begin(), matches_.end());
    matches_.erase(std::unique(matches_.begin(), matches_.end()), matches_.end());
    r.match_set.params = ir_.params;
    for (const auto& t : matches_) {
      std::vector<std::string> ids;
      for (int o : t) ids.push_back(m_.objects()[o]);
      r.match_set.tuples.push_back(std::move(ids));
    }
    r.emitted = emitted_;
    for (size_t b = 0; b < ids_.size(); ++b) {
      r.bb_counts[ids_[b]] = counts_[b];
      r.cost += counts_[b] * costs_[b];
    }
    r.trace = std::move(trace_log_);
    return r;
  }

 private:
  int slot(const std::string& v) {
    auto it = std::find(names_.begin(), names_.end(), v);
    if (it != names_.end()) return static_cast<int>(it - names_.begin());
    names_.push_back(v);
    return static_cast<int>(names_.size()) - 1;
  }

  // Block k + 1 belongs to statement k.
  void enter(int block) {
    ++counts_[block];
    if (!trace_) return;
    TraceEntry e{ids_[block], {}};
    for (size_t i = 0; i < names_.size(); ++i) {
      if (env_[i] >= 0) e.binding.emplace_back(names_[i], m_.objects()[env_[i]]);
    }
    trace_log_.push_back(std::move(e));
  }

  bool atom_holds(const queryc::Statement& st, const Resolved& r) const {
    bool v;
    switch (st.atom.kind) {
      case logic::NodeKind::kClass:
        v = m_.get(r.symbol, env_[r.slots[0]]) == Truth::kTrue;
        break;
      case logic::NodeKind::kRelation:
        v = m_.get(r.symbol, env_[r.slots[0]], env_[r.slots[1]]) == Truth::kTrue;
        break;
      default:
        v = env_[r.slots[0]] == env_[r.slots[1]];
    }
    return v != st.atom.negated;
  }

  // Candidate test for the statement's variable, with the variable bound.
  bool candidate(const queryc::Statement& st, const Resolved& r) {
    if (m_.exists(env_[r.var]) != Truth::kTrue) return false;
    if (r.pending.empty()) return atom_holds(st, r);
    // Source scan: some later binding of the pending variable works.
    const int p = r.pending[0];
    for (int o = 0; o < m_.size(); ++o) {
      if (m_.exists(o) != Truth::kTrue) continue;
      env_[p] = o;
      const bool ok = atom_holds(st, r);
      env_[p] = -1;
      if (ok) return true;
    }
    return false;
  }

  void exec(int k) {
    const queryc::Statement& st = ir_.stmts[k];
    const Resolved& r = resolved_[k];
    const int block = k + 1;
    switch (st.kind) {
      case StmtKind::kEmit: {
        enter(block);
        ++emitted_;
        std::vector<int> t;
        for (int s : param_slots_) t.push_back(env_[s]);
        matches_.push_back(std::move(t));
        return;
      }
      case StmtKind::kIf:
        enter(block);
        if (atom_holds(st, r)) exec(k + 1);
        return;
      case StmtKind::kAssign: {
        enter(block);
        int found = -1;
        if (st.nav == Navigation::kAlias) {
          found = env_[st.atom.vars[0] == st.var ? r.slots[1] : r.slots[0]];
        } else {
          for (int o = 0; o < m_.size() && found < 0; ++o) {
            env_[r.var] = o;
            if (candidate(st, r)) found = o;
          }
        }
        env_[r.var] = found;
        if (found >= 0) exec(k + 1);
        env_[r.var] = -1;
        return;
      }
      case StmtKind::kForEach: {
        for (int o = 0; o < m_.size(); ++o) {
          env_[r.var] = o;
          if (!candidate(st, r)) continue;
          enter(block);
          exec(k + 1);
          env_[r.var] = o;
        }
        env_[r.var] = -1;
        enter(block);  // the exiting test
        return;
      }
    }
  }

  const queryc::ProgramIR& ir_;
  const model::PartialModel& m_;
  bool trace_;
  std::vector<std::string> ids_;
  std::vector<std::int64_t> costs_;
  std::vector<std::int64_t> counts_;
  std::vector<Resolved> resolved_;
  std::vector<std::string> names_;
  std::vector<int> param_slots_;
  std::vector<int> env_;
  std::vector<std::vector<int>> matches_;
  std::int64_t emitted_ = 0;
  std::vector<TraceEntry> trace_log_;
};

}  // namespace

RunReport run_query(const queryc::ProgramIR& ir, const model::PartialModel& m, const queryc::TimingProfile& tp,
                    bool trace) {
  return Interpreter(ir, m, tp, trace).run();
}

Json to_json(const RunReport& r) {
  Json tuples = Json::array();
  for (const auto& t : r.match_set.tuples) tuples.push_back(t);
  Json counts = Json::object();
  for (const auto& [bb, c] : r.bb_counts) counts[bb] = c;
  Json out{{"kind", "run"},
           {"params", r.match_set.params},
           {"matches", tuples},
           {"match_count", r.match_set.count()},
           {"emitted", r.emitted},
           {"cost", r.cost},
           {"bb_counts", counts}};
  if (!r.trace.empty()) {
    Json tr = Json::array();
    for (const auto& e : r.trace) {
      Json b = Json::object();
      for (const auto& [v, o] : e.binding) b[v] = o;
      tr.push_back({{"bb", e.block}, {"binding", b}});
    }
    out["trace"] = tr;
  }
  return out;
}

bool check_bb_correspondence(const queryc::ProgramIR& ir, const model::PartialModel& m,
                             const queryc::TimingProfile& tp) {
  RunReport r = run_query(ir, m, tp);
  queryc::Cfg cfg = queryc::build_cfg(ir, tp);
  ipet::BlockPredicates preds = ipet::derive_predicates(cfg, ir);
  for (const auto& b : cfg.blocks) {
    std::int64_t expected = logic::matches(m, preds.psi.at(b.id)).count();
    auto loop = preds.psi_loop.find(b.id);
    if (loop != preds.psi_loop.end()) expected += logic::matches(m, loop->second).count();
    if (r.bb_counts.at(b.id) != expected) return false;
  }
  return true;
}

}  // namespace wcetw::exec
