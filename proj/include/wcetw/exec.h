#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "wcetw/logic.h"
#include "wcetw/queryc.h"
#include "wcetw/theory.h"

namespace wcetw::exec {

using Json = nlohmann::ordered_json;

struct TraceEntry {
  std::string block;
  std::vector<std::pair<std::string, std::string>> binding;  // variables bound on entry
};

struct RunReport {
  logic::MatchSet match_set;  // distinct parameter tuples, in object order
  std::int64_t emitted = 0;   // emit executions, duplicates included
  std::int64_t cost = 0;
  std::map<std::string, std::int64_t> bb_counts;
  std::vector<TraceEntry> trace;
};

// Nested iteration in ascending object order. Assignments take the first
// candidate. Throws kSymbolMismatch when the plan names symbols the model's
// signature lacks.
RunReport run_query(const queryc::ProgramIR& ir, const model::PartialModel& m, const queryc::TimingProfile& tp,
                    bool trace = false);

Json to_json(const RunReport& r);

// Every block's execution count equals its predicate's match count (plus the
// loop predicate at headers).
bool check_bb_correspondence(const queryc::ProgramIR& ir, const model::PartialModel& m,
                             const queryc::TimingProfile& tp);

struct SampleOptions {
  std::int64_t attempt_budget = 200'000;  // refinement states before giving up
};

// Randomized refinement walk with backtracking; the result's scope pins every
// theory variable to its count. Throws kExhausted when the budget runs out.
model::PartialModel random_concrete(const model::PartialModel& p, const model::Theory& t, std::uint64_t seed,
                                    const SampleOptions& options = {});

}  // namespace wcetw::exec
