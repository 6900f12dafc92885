// Parallel kernels against their serial references.

#include <benchmark/benchmark.h>

#include "fixtures.h"
#include "wcetw/cli.h"
#include "wcetw/io.h"
#include "wcetw/witness.h"

namespace wcetw {
namespace {

witness::WitnessTask sigma_task(const std::string& plan) {
  static std::map<std::string, queryc::ProgramIR> irs;
  static std::map<std::string, queryc::Cfg> cfgs;
  auto& ir = irs[plan];
  ir = queryc::compile_search_plan(
      queryc::plan_from_json(io::read_json_file(fixture::data_path("modes3/plans/" + plan + ".json"))),
      &fixture::modes3());
  cfgs[plan] = queryc::build_cfg(
      ir, queryc::profile_from_json(io::read_json_file(fixture::data_path("modes3/profile.json"))));
  model::Theory t = io::theory_from_json(io::read_json_file(fixture::data_path("modes3/counts.json")));
  t.append(fixture::modes3_wellformedness().theory);
  linear::LinearSystem scope = linear::parse_system({"x_obj <= 2", "x_train <= 1"});
  scope.append(fixture::modes3_wellformedness().scope);
  return witness::build_witness_task(cfgs[plan], ir, model::initial_partial_model(fixture::modes3_signature(), scope),
                                     t);
}

witness::WitnessTask reduced_layout_task() {
  cli::Workspace ws = cli::load_workspace(fixture::data_path("modes3/workspaces/reduced_layout.json"));
  model::PartialModel p = *ws.partial_model;
  linear::LinearSystem s = p.scope();
  s.append(ws.wellformedness_scope());
  p.set_scope(s);
  return witness::WitnessTask{p, ws.full_theory(), ws.objective.value_or(linear::LinExpr{}), {}, {}};
}

void BM_ExploreSerial(benchmark::State& state) {
  const witness::WitnessTask task = sigma_task("close_trains");
  for (auto _ : state) benchmark::DoNotOptimize(witness::explore_serial(task));
}
BENCHMARK(BM_ExploreSerial)->Unit(benchmark::kMillisecond);

void BM_ExploreParallel(benchmark::State& state) {
  const witness::WitnessTask task = sigma_task("close_trains");
  const witness::ExplorerConfig config{.workers = static_cast<int>(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(witness::explore(task, config));
}
BENCHMARK(BM_ExploreParallel)->Arg(1)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_BruteForce(benchmark::State& state) {
  const witness::WitnessTask task = reduced_layout_task();
  const witness::BruteForceConfig config{.workers = static_cast<int>(state.range(0))};
  for (auto _ : state) benchmark::DoNotOptimize(witness::brute_force_witness(task, config));
}
BENCHMARK(BM_BruteForce)->Arg(1)->Arg(2)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace wcetw

BENCHMARK_MAIN();
