#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "wcetw/logic.h"
#include "wcetw/theory.h"

namespace wcetw::queryc {

using Json = nlohmann::ordered_json;

// A search-plan constraint: class, relation or equality atom, maybe negated.
struct Atom {
  logic::NodeKind kind = logic::NodeKind::kClass;
  std::string symbol;
  std::vector<std::string> vars;
  bool negated = false;

  logic::NodePtr to_logic() const;
  std::string text() const;
  bool operator==(const Atom&) const = default;
};

// Accepts "Train(t)", "!connectedTo(tu, s)", "s = e", "!(s = e)", "s != e".
Atom parse_atom(std::string_view text);

enum class OpType { kExtend, kCheck };
const char* op_name(OpType op);

struct Step {
  Atom atom;
  int index = 0;  // 1-based
  OpType op = OpType::kCheck;
  std::vector<std::string> fresh;  // extend only, in atom argument order
};

struct SearchPlan {
  std::string name;
  std::vector<std::string> params;  // emitted variables
  std::vector<Step> steps;
};

// Marks each atom extend or check from the variables bound so far. Empty
// params means every bound variable, in binding order.
SearchPlan infer_op_types(const std::string& name, std::vector<std::string> params, const std::vector<Atom>& atoms);

// The query the plan evaluates: non-parameter variables existentially bound.
logic::Predicate plan_predicate(const SearchPlan& sp);

SearchPlan plan_from_json(const Json& j);
Json to_json(const SearchPlan& sp);

enum class StmtKind { kForEach, kAssign, kIf, kEmit };
const char* stmt_name(StmtKind k);

// How a loop or assignment finds candidates for its variable.
enum class Navigation { kNone, kClassScan, kForward, kBackward, kSourceScan, kAlias };

struct Statement {
  StmtKind kind = StmtKind::kEmit;
  int step = 0;  // plan trace; 0 for the emit
  int line = 0;  // line trace
  std::string var;
  Navigation nav = Navigation::kNone;
  Atom atom;  // the plan constraint this statement implements
  // Atom variables bound by a later loop of the same step.
  std::vector<std::string> pending;
};

// Statements nest in order: each one encloses every later one, and the last
// is the emit. Line 0 is the entry, statement k sits on line k, the emit on
// line n + 1 and the exit on line n + 2. Statement k spans lines k..n+1.
struct ProgramIR {
  std::string query;
  std::vector<std::string> params;
  std::vector<Statement> stmts;

  int entry_line() const { return 0; }
  int emit_line() const { return static_cast<int>(stmts.size()); }
  int exit_line() const { return static_cast<int>(stmts.size()) + 1; }
  // Index into stmts of the statement on a line; nullopt for entry/exit,
  // throws kTraceGap outside the program.
  std::optional<int> statement_at(int line) const;
};

// Single-valued forward navigations (relation upper bound 1) become an
// if-guarded assignment when a metamodel is given.
ProgramIR compile_search_plan(const SearchPlan& sp, const model::Metamodel* mm = nullptr);

std::string dump(const ProgramIR& ir);

enum class BlockKind { kPrologue, kLoopHeader, kCondition, kAssign, kEmit, kEpilogue };
const char* block_kind_name(BlockKind k);

struct Block {
  std::string id;
  BlockKind kind = BlockKind::kCondition;
  int first_line = 0;
  int last_line = 0;
  bool loop_header() const { return kind == BlockKind::kLoopHeader; }
};

struct CfgNode {
  std::string id;
  int block = 0;  // index into blocks
};

struct CfgEdge {
  int from = 0;
  int to = 0;
  std::int64_t weight = 0;
};

struct Cfg {
  std::vector<Block> blocks;
  std::vector<CfgNode> nodes;
  std::vector<CfgEdge> edges;
  int start = 0;
  int end = 0;

  int block_index(std::string_view id) const;  // -1 when absent
  int cyclomatic_complexity() const;
  // Throws kStructure on missing endpoints, dangling ids, unreachable nodes
  // or nodes that cannot reach the end.
  void validate() const;
  bool operator==(const Cfg& other) const;
};

std::string block_id_for_line(int line);

struct TimingProfile {
  std::int64_t prologue = 1;
  std::int64_t epilogue = 1;
  std::int64_t loop_header = 1;
  std::int64_t condition = 1;
  std::int64_t assign = 1;
  std::int64_t emit = 1;
  std::map<std::string, std::int64_t> overrides;  // by block id

  std::int64_t cost(const Block& b) const;
};

TimingProfile profile_from_json(const Json& j);
Json to_json(const TimingProfile& tp);

// One block per statement plus prologue, emit and epilogue; nodes map 1:1
// to blocks. An edge costs its source block, and edges into the end node
// also carry the end block's cost.
Cfg build_cfg(const ProgramIR& ir, const TimingProfile& tp);

Cfg cfg_from_json(const Json& j);
Json to_json(const Cfg& cfg);
Cfg load_cfg(const std::filesystem::path& path);

}  // namespace wcetw::queryc
