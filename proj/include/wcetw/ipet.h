#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "wcetw/linear.h"
#include "wcetw/logic.h"
#include "wcetw/queryc.h"

namespace wcetw::ipet {

using Json = nlohmann::ordered_json;

// Linear variable of every CFG edge, indexed like Cfg::edges.
struct EdgeVarMap {
  std::vector<std::string> vars;
};

struct Ipet {
  linear::Ilp ilp;  // objective: sum of weight * edge flow
  EdgeVarMap f;
};

// Unit flow out of the start and into the end, conservation at every other
// node, nonnegative flows. Edge variables are named f_<from>_<to>; a numeric
// suffix keeps them apart from parallel edges and from `taken`. With
// rename = false a collision with `taken` throws kVariableClash instead.
Ipet build_ipet(const queryc::Cfg& cfg, const std::set<std::string>& taken = {}, bool rename = true);

// Sum of the flows that count executions of a block: outgoing edges of its
// nodes, incoming edges for the end node.
linear::LinExpr block_flow(const queryc::Cfg& cfg, const EdgeVarMap& f, int block);

struct BlockPredicates {
  std::map<std::string, logic::Predicate> psi;       // every block
  std::map<std::string, logic::Predicate> psi_loop;  // loop headers
};

logic::NodePtr statement_to_logic(const queryc::Statement& st);

// psi of a block conjoins the constraints of the statements enclosing it;
// parameters follow plan binding order.
BlockPredicates derive_predicates(const queryc::Cfg& cfg, const queryc::ProgramIR& ir);

linear::LinearSystem precise_flow_facts(const queryc::Cfg& cfg, const EdgeVarMap& f, const BlockPredicates& preds,
                                        const model::PartialModel& m);

enum class EstimateKind { kCL, kDSM, kDSSigma, kDSP };
const char* estimate_kind_name(EstimateKind k);

struct WcetEstimate {
  EstimateKind kind = EstimateKind::kDSM;
  std::int64_t value = 0;
  linear::Valuation valuation;
  linear::LinearSystem facts_used;
};

Json to_json(const WcetEstimate& e);

// kInfeasibleFlow when the facts admit no flow, kUnbounded when the ILP is.
WcetEstimate dsm_estimate(const Ipet& ipet, const linear::LinearSystem& flow_facts);
WcetEstimate cl_estimate(const Ipet& ipet, const linear::LinearSystem& loop_facts);

struct NaturalLoop {
  int header = 0;               // node
  std::vector<int> nodes;       // header included
  std::vector<int> body_edges;  // header into the loop
  std::vector<int> entry_edges; // outside into the header
};

std::vector<NaturalLoop> natural_loops(const queryc::Cfg& cfg);

// For every natural loop whose header block has a bound B:
// sum(body edges) - B * sum(entry edges) <= 0.
linear::LinearSystem loop_bound_facts(const queryc::Cfg& cfg, const EdgeVarMap& f,
                                      const std::map<std::string, std::int64_t>& bound_by_block);

// Iterations per entry implied by an object-count maximum, or by the
// relation's upper bound for forward navigation.
std::map<std::string, std::int64_t> scope_loop_bounds(const queryc::ProgramIR& ir, const model::Metamodel* mm,
                                                      std::int64_t max_objects);

}  // namespace wcetw::ipet
