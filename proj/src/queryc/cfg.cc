#include <algorithm>
#include <deque>
#include <fstream>

#include "wcetw/error.h"
#include "wcetw/queryc.h"

namespace wcetw::queryc {

const char* block_kind_name(BlockKind k) {
  switch (k) {
    case BlockKind::kPrologue: return "prologue";
    case BlockKind::kLoopHeader: return "loop_header";
    case BlockKind::kCondition: return "condition";
    case BlockKind::kAssign: return "assign";
    case BlockKind::kEmit: return "emit";
    case BlockKind::kEpilogue: return "epilogue";
  }
  return "?";
}

namespace {

BlockKind parse_block_kind(const std::string& s) {
  for (BlockKind k : {BlockKind::kPrologue, BlockKind::kLoopHeader, BlockKind::kCondition, BlockKind::kAssign,
                      BlockKind::kEmit, BlockKind::kEpilogue}) {
    if (s == block_kind_name(k)) return k;
  }
  throw Error(ErrorKind::kParse, "unknown block kind \"" + s + "\"");
}

}  // namespace

std::string block_id_for_line(int line) { return "bb" + std::to_string(line); }

int Cfg::block_index(std::string_view id) const {
  for (size_t i = 0; i < blocks.size(); ++i) {
    if (blocks[i].id == id) return static_cast<int>(i);
  }
  return -1;
}

int Cfg::cyclomatic_complexity() const {
  return static_cast<int>(edges.size()) - static_cast<int>(nodes.size()) + 2;
}

void Cfg::validate() const {
  const int n = static_cast<int>(nodes.size());
  auto fail = [](const std::string& what) { throw Error(ErrorKind::kStructure, what); };
  if (n == 0) fail("CFG has no nodes");
  if (start < 0 || start >= n) fail("missing start node");
  if (end < 0 || end >= n) fail("missing end node");
  for (const auto& v : nodes) {
    if (v.block < 0 || v.block >= static_cast<int>(blocks.size())) fail("node " + v.id + " maps to an unknown block");
  }
  std::vector<std::vector<int>> succ(n), pred(n);
  for (const auto& e : edges) {
    if (e.from < 0 || e.from >= n || e.to < 0 || e.to >= n) fail("edge endpoint out of range");
    if (e.weight < 0) fail("negative edge weight");
    if (e.to == start) fail("start node has an incoming edge");
    if (e.from == end) fail("end node has an outgoing edge");
    succ[e.from].push_back(e.to);
    pred[e.to].push_back(e.from);
  }
  auto reach = [&](int root, const std::vector<std::vector<int>>& adj) {
    std::vector<bool> seen(n, false);
    std::deque<int> q{root};
    seen[root] = true;
    while (!q.empty()) {
      int x = q.front();
      q.pop_front();
      for (int y : adj[x]) {
        if (!seen[y]) {
          seen[y] = true;
          q.push_back(y);
        }
      }
    }
    return seen;
  };
  auto fwd = reach(start, succ);
  auto bwd = reach(end, pred);
  for (int v = 0; v < n; ++v) {
    if (!fwd[v]) fail("node " + nodes[v].id + " is unreachable from the start");
    if (!bwd[v]) fail("node " + nodes[v].id + " cannot reach the end");
  }
}

bool Cfg::operator==(const Cfg& o) const {
  if (start != o.start || end != o.end || blocks.size() != o.blocks.size() || nodes.size() != o.nodes.size() ||
      edges.size() != o.edges.size()) {
    return false;
  }
  for (size_t i = 0; i < blocks.size(); ++i) {
    const Block &a = blocks[i], &b = o.blocks[i];
    if (a.id != b.id || a.kind != b.kind || a.first_line != b.first_line || a.last_line != b.last_line) return false;
  }
  for (size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].id != o.nodes[i].id || nodes[i].block != o.nodes[i].block) return false;
  }
  for (size_t i = 0; i < edges.size(); ++i) {
    const CfgEdge &a = edges[i], &b = o.edges[i];
    if (a.from != b.from || a.to != b.to || a.weight != b.weight) return false;
  }
  return true;
}

std::int64_t TimingProfile::cost(const Block& b) const {
  auto it = overrides.find(b.id);
  if (it != overrides.end()) return it->second;
  switch (b.kind) {
    case BlockKind::kPrologue: return prologue;
    case BlockKind::kLoopHeader: return loop_header;
    case BlockKind::kCondition: return condition;
    case BlockKind::kAssign: return assign;
    case BlockKind::kEmit: return emit;
    case BlockKind::kEpilogue: return epilogue;
  }
  return 0;
}

TimingProfile profile_from_json(const Json& j) {
  TimingProfile tp;
  auto get = [](const Json& obj, const char* key, std::int64_t& dst) {
    if (!obj.contains(key)) return;
    if (!obj.at(key).is_number_integer() || obj.at(key).get<std::int64_t>() < 0) {
      throw Error(ErrorKind::kValidation, std::string("timing cost \"") + key + "\" must be a nonnegative integer");
    }
    dst = obj.at(key).get<std::int64_t>();
  };
  if (j.contains("defaults")) {
    const Json& d = j.at("defaults");
    get(d, "prologue", tp.prologue);
    get(d, "epilogue", tp.epilogue);
    get(d, "loop_header", tp.loop_header);
    get(d, "condition", tp.condition);
    get(d, "assign", tp.assign);
    get(d, "emit", tp.emit);
  }
  if (j.contains("overrides")) {
    for (const auto& [bb, v] : j.at("overrides").items()) {
      std::int64_t c = 0;
      get(j.at("overrides"), bb.c_str(), c);
      tp.overrides[bb] = c;
    }
  }
  return tp;
}

Json to_json(const TimingProfile& tp) {
  Json o = Json::object();
  for (const auto& [bb, c] : tp.overrides) o[bb] = c;
  return {{"defaults",
           {{"prologue", tp.prologue},
            {"epilogue", tp.epilogue},
            {"loop_header", tp.loop_header},
            {"condition", tp.condition},
            {"assign", tp.assign},
            {"emit", tp.emit}}},
          {"overrides", o}};
}

Cfg build_cfg(const ProgramIR& ir, const TimingProfile& tp) {
  Cfg g;
  const int n = static_cast<int>(ir.stmts.size()) - 1;  // statements before the emit
  g.blocks.push_back({block_id_for_line(0), BlockKind::kPrologue, 0, 0});
  for (int k = 0; k < n; ++k) {
    const Statement& st = ir.stmts[k];
    BlockKind kind = st.kind == StmtKind::kForEach ? BlockKind::kLoopHeader
                     : st.kind == StmtKind::kAssign ? BlockKind::kAssign
                                                    : BlockKind::kCondition;
    g.blocks.push_back({block_id_for_line(st.line), kind, st.line, st.line});
  }
  g.blocks.push_back({block_id_for_line(ir.emit_line()), BlockKind::kEmit, ir.emit_line(), ir.emit_line()});
  g.blocks.push_back({block_id_for_line(ir.exit_line()), BlockKind::kEpilogue, ir.exit_line(), ir.exit_line()});
  for (size_t b = 0; b < g.blocks.size(); ++b) g.nodes.push_back({"n" + std::to_string(b), static_cast<int>(b)});
  g.start = 0;
  g.end = n + 2;
  const int emit = n + 1;

  // Node k + 1 belongs to statement k; a statement's continue target is the
  // nearest enclosing loop header, else the epilogue.
  auto cont = [&](int k) {
    for (int j = k - 1; j >= 0; --j) {
      if (ir.stmts[j].kind == StmtKind::kForEach) return j + 1;
    }
    return g.end;
  };
  auto edge = [&](int from, int to) {
    std::int64_t w = tp.cost(g.blocks[from]);
    if (to == g.end) w += tp.cost(g.blocks[g.end]);
    g.edges.push_back({from, to, w});
  };
  edge(0, 1);
  for (int k = 0; k < n; ++k) {
    edge(k + 1, k + 2);
    edge(k + 1, cont(k));
  }
  edge(emit, cont(n));
  return g;
}

Cfg cfg_from_json(const Json& j) {
  Cfg g;
  try {
    for (const auto& b : j.at("blocks")) {
      Block blk;
      blk.id = b.at("id").get<std::string>();
      blk.kind = parse_block_kind(b.value("kind", std::string("condition")));
      if (b.contains("lines")) {
        blk.first_line = b.at("lines").at(0).get<int>();
        blk.last_line = b.at("lines").at(1).get<int>();
      } else {
        blk.first_line = blk.last_line = -1;
      }
      if (g.block_index(blk.id) >= 0) throw Error(ErrorKind::kStructure, "duplicate block " + blk.id);
      g.blocks.push_back(blk);
    }
    std::map<std::string, int> node_index;
    for (const auto& v : j.at("nodes")) {
      CfgNode node;
      node.id = v.at("id").get<std::string>();
      const std::string bb = v.at("bb").get<std::string>();
      node.block = g.block_index(bb);
      if (node.block < 0) throw Error(ErrorKind::kStructure, "node " + node.id + " maps to unknown block " + bb);
      if (v.value("loop_header", g.blocks[node.block].loop_header()) != g.blocks[node.block].loop_header()) {
        throw Error(ErrorKind::kStructure, "node " + node.id + " disagrees with its block's loop-header flag");
      }
      if (!node_index.emplace(node.id, static_cast<int>(g.nodes.size())).second) {
        throw Error(ErrorKind::kStructure, "duplicate node " + node.id);
      }
      g.nodes.push_back(node);
    }
    auto lookup = [&](const std::string& id) {
      auto it = node_index.find(id);
      if (it == node_index.end()) throw Error(ErrorKind::kStructure, "unknown node " + id);
      return it->second;
    };
    for (const auto& e : j.at("edges")) {
      g.edges.push_back({lookup(e.at("from").get<std::string>()), lookup(e.at("to").get<std::string>()),
                         e.at("weight").get<std::int64_t>()});
    }
    if (!j.contains("start") || !j.contains("end")) throw Error(ErrorKind::kStructure, "missing start or end node");
    g.start = lookup(j.at("start").get<std::string>());
    g.end = lookup(j.at("end").get<std::string>());
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kParse, std::string("cfg: ") + e.what());
  }
  g.validate();
  return g;
}

Json to_json(const Cfg& g) {
  Json blocks = Json::array(), nodes = Json::array(), edges = Json::array();
  for (const auto& b : g.blocks) {
    blocks.push_back({{"id", b.id}, {"kind", block_kind_name(b.kind)}, {"lines", {b.first_line, b.last_line}}});
  }
  for (const auto& v : g.nodes) {
    nodes.push_back({{"id", v.id}, {"bb", g.blocks[v.block].id}, {"loop_header", g.blocks[v.block].loop_header()}});
  }
  for (const auto& e : g.edges) {
    edges.push_back({{"from", g.nodes[e.from].id}, {"to", g.nodes[e.to].id}, {"weight", e.weight}});
  }
  return {{"blocks", blocks},
          {"nodes", nodes},
          {"edges", edges},
          {"start", g.nodes[g.start].id},
          {"end", g.nodes[g.end].id}};
}

Cfg load_cfg(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kParse, "cannot open " + path.string());
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kParse, path.string() + ": " + e.what());
  }
  return cfg_from_json(j);
}

}  // namespace wcetw::queryc
