#include <gtest/gtest.h>

#include "fixtures.h"
#include "wcetw/error.h"
#include "wcetw/exec.h"
#include "wcetw/io.h"
#include "wcetw/ipet.h"

namespace wcetw {
namespace {

using linear::LinExpr;

struct Program {
  queryc::ProgramIR ir;
  queryc::TimingProfile tp;
  queryc::Cfg cfg;
};

Program program(const std::string& plan) {
  Program p;
  p.ir = queryc::compile_search_plan(
      queryc::plan_from_json(io::read_json_file(fixture::data_path("modes3/plans/" + plan + ".json"))),
      &fixture::modes3());
  p.tp = queryc::profile_from_json(io::read_json_file(fixture::data_path("modes3/profile.json")));
  p.cfg = queryc::build_cfg(p.ir, p.tp);
  return p;
}

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorKind::kParse;
}

TEST(DerivePredicates, InnerNeighbourLoop) {
  Program p = program("close_trains");
  ipet::BlockPredicates preds = ipet::derive_predicates(p.cfg, p.ir);
  const logic::Predicate& psi = preds.psi.at("bb4");
  EXPECT_EQ(psi.params, (std::vector<std::string>{"t", "s", "m"}));
  EXPECT_EQ(logic::to_text(psi.body), "Train(t) & location(t, s) & connectedTo(s, m)");
  const logic::Predicate& loop = preds.psi_loop.at("bb4");
  EXPECT_EQ(loop.params, (std::vector<std::string>{"t", "s", "m", "e"}));
  EXPECT_EQ(preds.psi_loop.count("bb2"), 0u);
  EXPECT_EQ(preds.psi.at("bb0").params.size(), 0u);
}

TEST(DerivePredicates, CountsMatchExecutions) {
  Program p = program("close_trains");
  model::PartialModel m = fixture::load_model("turnout_loop");
  ipet::BlockPredicates preds = ipet::derive_predicates(p.cfg, p.ir);
  EXPECT_EQ(logic::matches(m, preds.psi.at("bb4")).count(), 4);
  EXPECT_EQ(logic::matches(m, preds.psi_loop.at("bb4")).count(), 8);
  exec::RunReport r = exec::run_query(p.ir, m, p.tp);
  EXPECT_EQ(r.bb_counts.at("bb4"), 12);
  EXPECT_TRUE(exec::check_bb_correspondence(p.ir, m, p.tp));
}

TEST(StatementToLogic, EmitHasNoConstraint) {
  Program p = program("train_locations");
  EXPECT_EQ(kind_of([&] { ipet::statement_to_logic(p.ir.stmts.back()); }), ErrorKind::kUnknownConstraintKind);
}

TEST(BuildIpet, EdgeNamesAvoidTakenVariables) {
  Program p = program("train_locations");
  ipet::Ipet plain = ipet::build_ipet(p.cfg);
  const std::string first = plain.f.vars[0];
  ipet::Ipet renamed = ipet::build_ipet(p.cfg, {first});
  EXPECT_NE(renamed.f.vars[0], first);
  EXPECT_EQ(kind_of([&] { ipet::build_ipet(p.cfg, {first}, false); }), ErrorKind::kVariableClash);
}

// The canonical graph's flow is fixed by per-block counts, so the estimate
// equals the interpreted cost.
TEST(DsmEstimate, EqualsInterpretedCost) {
  std::mt19937_64 rng(7);
  for (const char* plan : {"close_trains", "end_of_siding", "misaligned_turnout", "train_locations"}) {
    Program p = program(plan);
    ipet::Ipet ip = ipet::build_ipet(p.cfg);
    ipet::BlockPredicates preds = ipet::derive_predicates(p.cfg, p.ir);
    std::vector<model::PartialModel> models{fixture::load_model("two_trains"), fixture::load_model("turnout_loop")};
    for (int i = 0; i < 5; ++i) models.push_back(fixture::random_railway(rng, 5, 2, 3));
    for (const auto& m : models) {
      ipet::WcetEstimate e = ipet::dsm_estimate(ip, ipet::precise_flow_facts(p.cfg, ip.f, preds, m));
      EXPECT_EQ(e.kind, ipet::EstimateKind::kDSM);
      EXPECT_EQ(e.value, exec::run_query(p.ir, m, p.tp).cost) << plan;
    }
  }
}

TEST(DsmEstimate, NoTrains) {
  Program p = program("close_trains");
  std::mt19937_64 rng(3);
  model::PartialModel m = fixture::random_railway(rng, 4, 1, 0);
  ipet::Ipet ip = ipet::build_ipet(p.cfg);
  ipet::WcetEstimate e =
      ipet::dsm_estimate(ip, ipet::precise_flow_facts(p.cfg, ip.f, ipet::derive_predicates(p.cfg, p.ir), m));
  // Prologue, one empty class scan, epilogue.
  EXPECT_EQ(e.value, 12 + 9 + 8);
  ipet::WcetEstimate cl =
      ipet::cl_estimate(ip, ipet::loop_bound_facts(p.cfg, ip.f, ipet::scope_loop_bounds(p.ir, &fixture::modes3(), 6)));
  EXPECT_LE(e.value, cl.value);
}

TEST(DsmEstimate, ContradictoryFactsAreInfeasible) {
  Program p = program("train_locations");
  ipet::Ipet ip = ipet::build_ipet(p.cfg);
  linear::LinearSystem facts;
  facts.add_eq(ipet::block_flow(p.cfg, ip.f, 0), 2);
  EXPECT_EQ(kind_of([&] { ipet::dsm_estimate(ip, facts); }), ErrorKind::kInfeasibleFlow);
}

queryc::Cfg one_loop() {
  return queryc::cfg_from_json(queryc::Json::parse(R"({
    "blocks": [
      {"id": "entry", "kind": "prologue"}, {"id": "head", "kind": "loop_header"},
      {"id": "body", "kind": "condition"}, {"id": "exit", "kind": "epilogue"}
    ],
    "nodes": [{"id": "s", "bb": "entry"}, {"id": "h", "bb": "head"}, {"id": "b", "bb": "body"}, {"id": "e", "bb": "exit"}],
    "edges": [
      {"from": "s", "to": "h", "weight": 10}, {"from": "h", "to": "b", "weight": 5},
      {"from": "b", "to": "h", "weight": 3}, {"from": "h", "to": "e", "weight": 0}
    ],
    "start": "s", "end": "e"
  })"));
}

TEST(ClEstimate, OneLoopHandComputed) {
  queryc::Cfg g = one_loop();
  ipet::Ipet ip = ipet::build_ipet(g);
  std::vector<ipet::NaturalLoop> loops = ipet::natural_loops(g);
  ASSERT_EQ(loops.size(), 1u);
  EXPECT_EQ(g.nodes[loops[0].header].id, "h");
  ipet::WcetEstimate e = ipet::cl_estimate(ip, ipet::loop_bound_facts(g, ip.f, {{"head", 3}}));
  EXPECT_EQ(e.kind, ipet::EstimateKind::kCL);
  EXPECT_EQ(e.value, 10 + 3 * 5 + 3 * 3);
  EXPECT_EQ(e.value, 34);
}

TEST(ClEstimate, MissingLoopBoundIsUnbounded) {
  queryc::Cfg g = one_loop();
  ipet::Ipet ip = ipet::build_ipet(g);
  EXPECT_EQ(kind_of([&] { ipet::cl_estimate(ip, {}); }), ErrorKind::kUnbounded);
}

TEST(NaturalLoops, OnePerForEach) {
  Program p = program("close_trains");
  std::vector<ipet::NaturalLoop> loops = ipet::natural_loops(p.cfg);
  std::vector<std::string> headers;
  for (const auto& l : loops) headers.push_back(p.cfg.blocks[p.cfg.nodes[l.header].block].id);
  std::sort(headers.begin(), headers.end());
  EXPECT_EQ(headers, (std::vector<std::string>{"bb1", "bb3", "bb4", "bb6"}));
}

TEST(ClEstimate, BoundsEveryModelWithinScope) {
  std::mt19937_64 rng(11);
  for (const char* plan : {"close_trains", "end_of_siding", "misaligned_turnout", "train_locations"}) {
    Program p = program(plan);
    ipet::Ipet ip = ipet::build_ipet(p.cfg);
    const std::int64_t cl =
        ipet::cl_estimate(ip, ipet::loop_bound_facts(p.cfg, ip.f, ipet::scope_loop_bounds(p.ir, &fixture::modes3(), 8)))
            .value;
    for (int i = 0; i < 10; ++i) {
      model::PartialModel m = fixture::random_railway(rng, 5, 2, 3);
      EXPECT_LE(exec::run_query(p.ir, m, p.tp).cost, cl) << plan;
    }
  }
}

TEST(EstimateJson, IntegerValueAndKind) {
  queryc::Cfg g = one_loop();
  ipet::Ipet ip = ipet::build_ipet(g);
  ipet::Json j = ipet::to_json(ipet::cl_estimate(ip, ipet::loop_bound_facts(g, ip.f, {{"head", 3}})));
  EXPECT_EQ(j.at("kind"), "CL");
  EXPECT_TRUE(j.at("value").is_number_integer());
  EXPECT_EQ(j.at("value").get<std::int64_t>(), 34);
}

}  // namespace
}  // namespace wcetw
