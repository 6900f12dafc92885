#include "wcetw/ipet.h"

#include <algorithm>
#include <functional>
#include <optional>

#include "wcetw/error.h"

namespace wcetw::ipet {

using linear::LinExpr;
using queryc::Cfg;

Ipet build_ipet(const Cfg& cfg, const std::set<std::string>& taken, bool rename) {
  cfg.validate();
  Ipet out;
  std::set<std::string> used = taken;
  for (const auto& e : cfg.edges) {
    const std::string base = "f_" + cfg.nodes[e.from].id + "_" + cfg.nodes[e.to].id;
    std::string name = base;
    if (taken.count(name) && !rename) throw Error(ErrorKind::kVariableClash, "edge variable " + name + " is taken");
    for (int k = 1; used.count(name) || !linear::is_valid_variable_name(name); ++k) {
      if (!linear::is_valid_variable_name(base)) {
        name = "f_e" + std::to_string(k);
      } else {
        name = base + "_" + std::to_string(k);
      }
    }
    used.insert(name);
    out.f.vars.push_back(name);
  }
  const int n = static_cast<int>(cfg.nodes.size());
  std::vector<LinExpr> in(n), outflow(n);
  LinExpr objective;
  for (size_t i = 0; i < cfg.edges.size(); ++i) {
    const auto& e = cfg.edges[i];
    LinExpr x = LinExpr::var(out.f.vars[i]);
    outflow[e.from] += x;
    in[e.to] += x;
    objective += linear::Rational(static_cast<long>(e.weight)) * x;
    out.ilp.system.add_ge(x, 0);
  }
  out.ilp.system.add_eq(outflow[cfg.start], 1);
  out.ilp.system.add_eq(in[cfg.end], 1);
  for (int v = 0; v < n; ++v) {
    if (v == cfg.start || v == cfg.end) continue;
    out.ilp.system.add_eq(in[v] - outflow[v], 0);
  }
  out.ilp.objective = objective;
  return out;
}

LinExpr block_flow(const Cfg& cfg, const EdgeVarMap& f, int block) {
  LinExpr sum;
  for (size_t i = 0; i < cfg.edges.size(); ++i) {
    const auto& e = cfg.edges[i];
    if (cfg.nodes[e.from].block == block) sum += LinExpr::var(f.vars[i]);
    if (e.to == cfg.end && cfg.nodes[e.to].block == block) sum += LinExpr::var(f.vars[i]);
  }
  return sum;
}

logic::NodePtr statement_to_logic(const queryc::Statement& st) {
  if (st.kind == queryc::StmtKind::kEmit) {
    throw Error(ErrorKind::kUnknownConstraintKind, "the emit statement carries no constraint");
  }
  logic::NodePtr n = st.atom.to_logic();
  for (auto it = st.pending.rbegin(); it != st.pending.rend(); ++it) n = logic::exists(*it, n);
  return n;
}

BlockPredicates derive_predicates(const Cfg& cfg, const queryc::ProgramIR& ir) {
  BlockPredicates out;
  for (const auto& b : cfg.blocks) {
    // The outermost statement on the block's lines decides what encloses it.
    std::optional<int> first;
    for (int line = b.first_line; line <= b.last_line; ++line) {
      auto k = ir.statement_at(line);
      if (k && (!first || *k < *first)) first = k;
    }
    if (b.first_line < 0 || b.last_line < b.first_line) {
      throw Error(ErrorKind::kTraceGap, "block " + b.id + " has no line trace");
    }
    std::vector<logic::NodePtr> parts;
    std::vector<std::string> params;
    const int enclosing = first ? *first : 0;
    for (int k = 0; k < enclosing; ++k) {
      const auto& st = ir.stmts[k];
      parts.push_back(statement_to_logic(st));
      if (!st.var.empty()) params.push_back(st.var);
    }
    out.psi[b.id] = logic::normalize(logic::Predicate{"psi_" + b.id, params, logic::conj(parts)});
    if (b.loop_header()) {
      if (!first || ir.stmts[*first].kind == queryc::StmtKind::kEmit) {
        throw Error(ErrorKind::kTraceGap, "loop header " + b.id + " implements no plan step");
      }
      const auto& st = ir.stmts[*first];
      parts.push_back(statement_to_logic(st));
      params.push_back(st.var);
      out.psi_loop[b.id] = logic::normalize(logic::Predicate{"psi_loop_" + b.id, params, logic::conj(parts)});
    }
  }
  return out;
}

linear::LinearSystem precise_flow_facts(const Cfg& cfg, const EdgeVarMap& f, const BlockPredicates& preds,
                                        const model::PartialModel& m) {
  linear::LinearSystem facts;
  for (size_t b = 0; b < cfg.blocks.size(); ++b) {
    const std::string& id = cfg.blocks[b].id;
    std::int64_t count = logic::matches(m, preds.psi.at(id)).count();
    auto loop = preds.psi_loop.find(id);
    if (loop != preds.psi_loop.end()) count += logic::matches(m, loop->second).count();
    facts.add_eq(block_flow(cfg, f, static_cast<int>(b)), static_cast<long>(count));
  }
  return facts;
}

const char* estimate_kind_name(EstimateKind k) {
  switch (k) {
    case EstimateKind::kCL: return "CL";
    case EstimateKind::kDSM: return "DS_M";
    case EstimateKind::kDSSigma: return "DS_Sigma";
    case EstimateKind::kDSP: return "DS_P";
  }
  return "?";
}

Json to_json(const WcetEstimate& e) {
  Json val = Json::object();
  for (const auto& [v, x] : e.valuation) val[v] = x;
  Json facts = Json::array();
  for (const auto& line : e.facts_used.to_lines()) facts.push_back(line);
  return {{"kind", estimate_kind_name(e.kind)}, {"value", e.value}, {"valuation", val}, {"facts_used", facts}};
}

namespace {

WcetEstimate solve(const Ipet& ipet, const linear::LinearSystem& facts, EstimateKind kind) {
  linear::Ilp p = ipet.ilp;
  p.system.append(facts);
  linear::IlpResult r = linear::solve_ilp(p);
  switch (r.status) {
    case linear::IlpResult::Status::kInfeasible:
      throw Error(ErrorKind::kInfeasibleFlow, "flow facts admit no execution");
    case linear::IlpResult::Status::kUnbounded:
      throw Error(ErrorKind::kUnbounded, "IPET problem is unbounded; loop bounds are missing");
    default:
      break;
  }
  return WcetEstimate{kind, r.value, r.valuation, facts};
}

}  // namespace

WcetEstimate dsm_estimate(const Ipet& ipet, const linear::LinearSystem& flow_facts) {
  return solve(ipet, flow_facts, EstimateKind::kDSM);
}

WcetEstimate cl_estimate(const Ipet& ipet, const linear::LinearSystem& loop_facts) {
  return solve(ipet, loop_facts, EstimateKind::kCL);
}

std::vector<NaturalLoop> natural_loops(const Cfg& cfg) {
  const int n = static_cast<int>(cfg.nodes.size());
  std::vector<std::vector<int>> pred(n);
  for (const auto& e : cfg.edges) pred[e.to].push_back(e.from);
  // Iterative dominator sets; CFGs here are small.
  std::vector<std::vector<bool>> dom(n, std::vector<bool>(n, true));
  dom[cfg.start].assign(n, false);
  dom[cfg.start][cfg.start] = true;
  for (bool changed = true; changed;) {
    changed = false;
    for (int v = 0; v < n; ++v) {
      if (v == cfg.start) continue;
      std::vector<bool> d(n, true);
      for (int p : pred[v]) {
        for (int x = 0; x < n; ++x) d[x] = d[x] && dom[p][x];
      }
      d[v] = true;
      if (d != dom[v]) {
        dom[v] = d;
        changed = true;
      }
    }
  }
  std::map<int, std::set<int>> body;
  for (const auto& e : cfg.edges) {
    if (!dom[e.from][e.to]) continue;
    std::set<int>& nodes = body[e.to];
    nodes.insert(e.to);
    std::vector<int> stack{e.from};
    while (!stack.empty()) {
      int x = stack.back();
      stack.pop_back();
      if (!nodes.insert(x).second) continue;
      for (int p : pred[x]) stack.push_back(p);
    }
  }
  std::vector<NaturalLoop> loops;
  for (const auto& [h, nodes] : body) {
    NaturalLoop l;
    l.header = h;
    l.nodes.assign(nodes.begin(), nodes.end());
    for (size_t i = 0; i < cfg.edges.size(); ++i) {
      const auto& e = cfg.edges[i];
      if (e.from == h && nodes.count(e.to)) l.body_edges.push_back(static_cast<int>(i));
      if (e.to == h && !nodes.count(e.from)) l.entry_edges.push_back(static_cast<int>(i));
    }
    loops.push_back(std::move(l));
  }
  return loops;
}

linear::LinearSystem loop_bound_facts(const Cfg& cfg, const EdgeVarMap& f,
                                      const std::map<std::string, std::int64_t>& bound_by_block) {
  linear::LinearSystem facts;
  for (const auto& l : natural_loops(cfg)) {
    auto it = bound_by_block.find(cfg.blocks[cfg.nodes[l.header].block].id);
    if (it == bound_by_block.end()) continue;
    LinExpr e;
    for (int i : l.body_edges) e += LinExpr::var(f.vars[i]);
    for (int i : l.entry_edges) e -= LinExpr::var(f.vars[i], linear::Rational(static_cast<long>(it->second)));
    facts.add_le(e, 0);
  }
  return facts;
}

std::map<std::string, std::int64_t> scope_loop_bounds(const queryc::ProgramIR& ir, const model::Metamodel* mm,
                                                      std::int64_t max_objects) {
  std::map<std::string, std::int64_t> out;
  for (const auto& st : ir.stmts) {
    if (st.kind != queryc::StmtKind::kForEach) continue;
    std::int64_t b = max_objects;
    if (st.nav == queryc::Navigation::kForward && mm) {
      const model::RelationDecl* d = mm->relation(st.atom.symbol);
      if (d && d->upper_bound) b = std::min<std::int64_t>(b, *d->upper_bound);
    }
    out[queryc::block_id_for_line(st.line)] = b;
  }
  return out;
}

}  // namespace wcetw::ipet
