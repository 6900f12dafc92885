#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "wcetw/ipet.h"
#include "wcetw/logic.h"
#include "wcetw/queryc.h"
#include "wcetw/theory.h"

namespace wcetw::witness {

using Json = nlohmann::ordered_json;

// Maximize `objective` over the concrete refinements of `model` compatible
// with `theory`.
struct WitnessTask {
  model::PartialModel model;
  model::Theory theory;
  linear::LinExpr objective;
  ipet::EdgeVarMap edges;                             // empty for hand-built tasks
  std::map<std::string, std::string> block_variables; // psi predicate name -> count variable
};

struct TaskOptions {
  bool rename = true;  // false: clashing variable names throw kVariableClash
};

// Adds the IPET system, one count variable per block predicate and the merge
// equations x + x' - flow(bb) = 0 to the scope of P.
WitnessTask build_witness_task(const queryc::Cfg& cfg, const queryc::ProgramIR& ir, const model::PartialModel& p,
                               const model::Theory& t, const TaskOptions& options = {});

// Per-state result of count propagation and the relaxed objective bound.
struct Analysis {
  bool feasible = false;
  std::optional<std::int64_t> bound;  // nullopt: unbounded relaxation
  std::vector<logic::CountBounds> counts;
};

// Shared, thread-safe evaluation context for one task.
class TaskContext {
 public:
  // Throws kValidation for malformed equality entries or multi-objects that
  // surely exist, kNonterminatingScope when a multi-object has no finite copy
  // bound.
  explicit TaskContext(const WitnessTask& task);

  const WitnessTask& task() const { return task_; }
  const model::PartialModel& root() const { return root_; }

  // Copies a multi-object may still stand for; nullopt entries for singles.
  logic::Multiplicity multiplicity(const model::PartialModel& m) const;

  // Interval check against the root scope, then an LP bound; with
  // with_bound = false only the interval check runs.
  Analysis analyze(const model::PartialModel& m, bool with_bound = true) const;

  // Exact objective of a concrete state with every count pinned; nullopt when
  // incompatible.
  std::optional<linear::IlpResult> evaluate(const model::PartialModel& m) const;

  // Scope of a concrete state: the task scope plus pinned counts.
  linear::LinearSystem pinned_scope(const model::PartialModel& m) const;

 private:
  const WitnessTask& task_;
  model::PartialModel root_;
  std::vector<logic::Compiled> compiled_;
  std::vector<linear::Bounds> root_bounds_;
  std::vector<int> unary_;  // theory entries with one parameter

  mutable std::mutex memo_mutex_;
  mutable std::map<std::vector<std::int64_t>, std::optional<std::optional<std::int64_t>>> memo_;
};

// Children of a non-concrete state in canonical order: the first UNKNOWN
// existence, class or relation entry over single objects (TRUE first), else
// the first multi-object (new copy, then no more copies).
std::vector<model::PartialModel> branch(const model::PartialModel& m, const logic::Multiplicity& mult);

// Smallest serialization over renamings that permute copies of one origin.
std::string canonical_form(const model::PartialModel& m);

enum class Outcome { kPrunedInfeasible, kPrunedBound, kIsoDuplicate, kSolution, kBranched };
const char* outcome_name(Outcome o);

struct StateEvent {
  const model::PartialModel* state = nullptr;
  Outcome outcome = Outcome::kBranched;
  const Analysis* analysis = nullptr;  // null when pruned on the parent bound
  std::optional<std::int64_t> value;   // solutions only
};

struct ExplorerConfig {
  int workers = 1;
  int batch_size = 64;
  std::int64_t state_cap = 10'000'000;
  bool iso_reduction = false;
  std::function<void(const StateEvent&)> observer;  // called in deterministic order
};

struct ExploreStats {
  std::int64_t states_visited = 0;
  std::int64_t pruned_infeasible = 0;
  std::int64_t pruned_bound = 0;
  std::int64_t frontier_peak = 0;
  std::int64_t iso_duplicates = 0;
  std::int64_t solutions = 0;
};

struct WitnessResult {
  std::optional<model::PartialModel> witness;  // scope pinned; nullopt when no solution
  ipet::WcetEstimate estimate;
  ExploreStats stats;
};

// Best-first branch and bound in synchronous batches. Each batch is analyzed
// in parallel against the incumbent from the batch start and merged in order,
// so results and stats do not depend on the worker count. Ties keep the
// smallest serialization. Throws kResourceExceeded past the state cap.
WitnessResult explore(const WitnessTask& task, const ExplorerConfig& config = {},
                      ipet::EstimateKind kind = ipet::EstimateKind::kDSP);

// One state at a time, no threads.
WitnessResult explore_serial(const WitnessTask& task, const ExplorerConfig& config = {},
                             ipet::EstimateKind kind = ipet::EstimateKind::kDSP);

struct BruteForceConfig {
  int workers = 1;
  std::int64_t state_cap = 50'000'000;
  bool count_iso_classes = false;
  std::function<void(const model::PartialModel&, std::int64_t)> on_solution;  // serial only
};

struct BruteForceResult {
  std::optional<model::PartialModel> witness;
  std::optional<std::int64_t> value;
  std::int64_t space_size = 0;  // concrete refinements before any filtering
  std::int64_t leaves = 0;      // concrete refinements reached past the prefilter
  std::int64_t solutions = 0;  // compatible ones
  std::int64_t iso_classes = 0;
  std::int64_t states = 0;
};

// Enumerates every concrete refinement: copy counts, optional objects, then
// every UNKNOWN entry, with only the count-interval check as a prefilter.
BruteForceResult brute_force_witness(const WitnessTask& task, const BruteForceConfig& config = {});

// Estimate over every model the scope admits.
WitnessResult ds_sigma(model::SignaturePtr sig, const linear::LinearSystem& scope, const model::Theory& t,
                       const queryc::Cfg& cfg, const queryc::ProgramIR& ir, const ExplorerConfig& config = {});

WitnessResult ds_p(const model::PartialModel& p, const model::Theory& t, const queryc::Cfg& cfg,
                   const queryc::ProgramIR& ir, const ExplorerConfig& config = {});

Json to_json(const ExploreStats& s);
Json to_json(const WitnessResult& r);
Json to_json(const BruteForceResult& r);

}  // namespace wcetw::witness
