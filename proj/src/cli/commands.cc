#include <fstream>

#include "CLI11.hpp"
#include "wcetw/cli.h"
#include "wcetw/error.h"
#include "wcetw/exec.h"
#include "wcetw/io.h"
#include "wcetw/ipet.h"
#include "wcetw/witness.h"

namespace wcetw::cli {

namespace fs = std::filesystem;

namespace {

struct Program {
  queryc::ProgramIR ir;
  queryc::Cfg cfg;
};

class Session {
 public:
  Session(const Options& o, std::ostream& err) : opt_(o), err_(err) {}

  Json dispatch() {
    ws_ = load_workspace(opt_.workspace);
    out_dir_ = opt_.output ? *opt_.output : ws_.output;
    const std::string& c = opt_.command;
    if (c == "compile") return compile();
    if (c == "eval") return eval();
    if (c == "estimate") return estimate();
    if (c == "witness") return witness_cmd();
    if (c == "oracle") return oracle();
    if (c == "simulate") return simulate();
    throw Error(ErrorKind::kValidation, "unknown command " + c);
  }

 private:
  void info(const Json& j) {
    Json line{{"level", "info"}};
    line.update(j);
    err_ << line.dump() << "\n";
  }

  fs::path write(const std::string& name, const std::string& text) {
    fs::create_directories(out_dir_);
    const fs::path p = out_dir_ / name;
    std::ofstream f(p);
    f << text;
    info({{"event", "wrote"}, {"path", p.string()}});
    return p;
  }

  fs::path write(const std::string& name, const Json& j) { return write(name, j.dump(2) + "\n"); }

  Program program() {
    if (!ws_.plan) throw Error(ErrorKind::kValidation, "workspace has no plan");
    Program p;
    p.ir = queryc::compile_search_plan(*ws_.plan, &ws_.metamodel);
    p.cfg = ws_.cfg ? *ws_.cfg : queryc::build_cfg(p.ir, ws_.profile);
    return p;
  }

  const model::PartialModel& concrete_model() {
    if (ws_.models.empty()) throw Error(ErrorKind::kValidation, "workspace has no model");
    const model::PartialModel& m = ws_.models.front().second;
    if (!model::is_concrete(m)) throw Error(ErrorKind::kValidation, "model " + ws_.models.front().first + " is not concrete");
    return m;
  }

  model::PartialModel partial_model() {
    if (!ws_.partial_model) throw Error(ErrorKind::kValidation, "workspace has no partial_model");
    model::PartialModel p = *ws_.partial_model;
    linear::LinearSystem s = p.scope();
    s.append(ws_.wellformedness_scope());
    p.set_scope(s);
    return p;
  }

  witness::ExplorerConfig explorer() const {
    witness::ExplorerConfig c;
    c.workers = opt_.workers;
    c.state_cap = opt_.state_cap;
    c.iso_reduction = opt_.iso_reduction;
    return c;
  }

  static std::string lines(const linear::LinearSystem& s) {
    std::string out;
    for (const auto& l : s.to_lines()) out += l + "\n";
    return out;
  }

  Json compile() {
    Program p = program();
    write("ir.txt", queryc::dump(p.ir));
    write("cfg.json", queryc::to_json(p.cfg));
    return {{"kind", "compile"},
            {"query", p.ir.query},
            {"statements", p.ir.stmts.size()},
            {"blocks", p.cfg.blocks.size()},
            {"nodes", p.cfg.nodes.size()},
            {"edges", p.cfg.edges.size()},
            {"cyclomatic_complexity", p.cfg.cyclomatic_complexity()}};
  }

  Json eval() {
    Program p = program();
    const logic::Predicate query = queryc::plan_predicate(*ws_.plan);
    if (ws_.models.empty()) throw Error(ErrorKind::kValidation, "workspace has no model");
    Json results = Json::array();
    for (const auto& [name, m] : ws_.models) {
      logic::MatchSet ms = logic::matches(m, query);
      exec::RunReport run = exec::run_query(p.ir, m, ws_.profile);
      auto a = ms.tuples, b = run.match_set.tuples;
      std::sort(a.begin(), a.end());
      std::sort(b.begin(), b.end());
      Json tuples = Json::array();
      for (const auto& t : ms.tuples) tuples.push_back(t);
      results.push_back({{"model", name},
                         {"match_count", ms.count()},
                         {"matches", tuples},
                         {"interpreter_agrees", a == b}});
    }
    return {{"kind", "eval"}, {"query", query.name}, {"params", query.params}, {"results", results}};
  }

  Json estimate() {
    const std::string& mode = opt_.mode;
    if (mode == "cl") {
      Program p = program();
      ipet::Ipet ip = ipet::build_ipet(p.cfg);
      std::map<std::string, std::int64_t> bounds = ws_.loop_bounds;
      if (bounds.empty() && ws_.max_objects) bounds = ipet::scope_loop_bounds(p.ir, &ws_.metamodel, *ws_.max_objects);
      linear::LinearSystem facts = ipet::loop_bound_facts(p.cfg, ip.f, bounds);
      write("facts.txt", lines(facts));
      return ipet::to_json(ipet::cl_estimate(ip, facts));
    }
    if (mode == "ds-m") {
      Program p = program();
      const model::PartialModel& m = concrete_model();
      ipet::Ipet ip = ipet::build_ipet(p.cfg);
      linear::LinearSystem facts =
          ipet::precise_flow_facts(p.cfg, ip.f, ipet::derive_predicates(p.cfg, p.ir), m);
      write("facts.txt", lines(facts));
      return ipet::to_json(ipet::dsm_estimate(ip, facts));
    }
    if (mode == "ds-sigma") {
      Program p = program();
      linear::LinearSystem scope = ws_.scope;
      scope.append(ws_.wellformedness_scope());
      witness::WitnessResult r =
          witness::ds_sigma(ws_.metamodel.signature, scope, ws_.full_theory(), p.cfg, p.ir, explorer());
      return witness_report(r);
    }
    if (mode == "ds-p") {
      Program p = program();
      witness::WitnessResult r = witness::ds_p(partial_model(), ws_.full_theory(), p.cfg, p.ir, explorer());
      return witness_report(r);
    }
    throw Error(ErrorKind::kValidation, "unknown estimate mode \"" + mode + "\"");
  }

  witness::WitnessTask task() {
    if (ws_.objective) return witness::WitnessTask{partial_model(), ws_.full_theory(), *ws_.objective, {}, {}};
    Program p = program();
    return witness::build_witness_task(p.cfg, p.ir, partial_model(), ws_.full_theory());
  }

  Json witness_report(const witness::WitnessResult& r) {
    if (r.witness) write("witness.json", io::to_json(*r.witness));
    Json j = witness::to_json(r);
    j.erase("witness");
    j["witness_objects"] = r.witness ? Json(r.witness->objects()) : Json(nullptr);
    return j;
  }

  Json witness_cmd() {
    witness::WitnessTask t = task();
    return witness_report(witness::explore(t, explorer()));
  }

  Json oracle() {
    witness::WitnessTask t = task();
    witness::BruteForceConfig bc;
    bc.workers = opt_.workers;
    bc.state_cap = opt_.state_cap;
    bc.count_iso_classes = true;
    witness::BruteForceResult b = witness::brute_force_witness(t, bc);
    witness::WitnessResult e = witness::explore(t, explorer());
    const bool agree = b.value.has_value() == e.witness.has_value() && (!b.value || *b.value == e.estimate.value);
    if (b.witness) write("oracle_witness.json", io::to_json(*b.witness));
    return {{"kind", "oracle"},
            {"space_size", b.space_size},
            {"leaves", b.leaves},
            {"solutions", b.solutions},
            {"iso_classes", b.iso_classes},
            {"states", b.states},
            {"optimum", b.value ? Json(*b.value) : Json(nullptr)},
            {"explore_value", e.witness ? Json(e.estimate.value) : Json(nullptr)},
            {"agreement", agree}};
  }

  Json simulate() {
    Program p = program();
    std::vector<std::pair<std::string, model::PartialModel>> runs = ws_.models;
    if (ws_.samples > 0) {
      if (!ws_.partial_model) throw Error(ErrorKind::kValidation, "samples need a partial_model");
      const model::PartialModel base = partial_model();
      const model::Theory t = ws_.full_theory();
      for (std::int64_t i = 0; i < ws_.samples; ++i) {
        const std::uint64_t seed = opt_.seed + static_cast<std::uint64_t>(i);
        runs.emplace_back("sample" + std::to_string(seed), exec::random_concrete(base, t, seed));
      }
    }
    if (runs.empty()) throw Error(ErrorKind::kValidation, "nothing to simulate");
    std::string csv = "model,matches,cost\n";
    Json rows = Json::array();
    std::optional<exec::RunReport> single;
    std::int64_t lo = 0, hi = 0;
    for (size_t i = 0; i < runs.size(); ++i) {
      exec::RunReport r = exec::run_query(p.ir, runs[i].second, ws_.profile);
      csv += runs[i].first + "," + std::to_string(r.match_set.count()) + "," + std::to_string(r.cost) + "\n";
      rows.push_back({{"model", runs[i].first}, {"match_count", r.match_set.count()}, {"cost", r.cost}});
      lo = i == 0 ? r.cost : std::min(lo, r.cost);
      hi = i == 0 ? r.cost : std::max(hi, r.cost);
      if (runs.size() == 1) single = std::move(r);
    }
    write("runs.csv", csv);
    if (single) return exec::to_json(*single);
    return {{"kind", "simulate"}, {"runs", rows}, {"min_cost", lo}, {"max_cost", hi}};
  }

  const Options& opt_;
  std::ostream& err_;
  Workspace ws_;
  fs::path out_dir_;
};

int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::kUnbounded: return 3;
    case ErrorKind::kNonterminatingScope: return 4;
    case ErrorKind::kResourceExceeded: return 5;
    case ErrorKind::kInfeasibleFlow:
    case ErrorKind::kExhausted: return 1;
    default: return 2;
  }
}

}  // namespace

int run(const Options& options, std::ostream& out, std::ostream& err) {
  try {
    Session s(options, err);
    Json report = s.dispatch();
    out << report.dump(2) << "\n";
    return 0;
  } catch (const Error& e) {
    err << Json{{"level", "error"}, {"kind", error_kind_name(e.kind())}, {"message", e.what()}}.dump() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    err << Json{{"level", "error"}, {"kind", "internal"}, {"message", e.what()}}.dump() << "\n";
    return 1;
  }
}

int main(int argc, char** argv) {
  CLI::App app{"WCET estimation and witness synthesis for graph-query monitors"};
  Options o;
  std::string workspace;
  std::string output;
  app.add_option("command", o.command, "compile | eval | estimate | witness | oracle | simulate")
      ->required()
      ->check(CLI::IsMember({"compile", "eval", "estimate", "witness", "oracle", "simulate"}));
  app.add_option("--mode", o.mode, "estimate mode: cl | ds-m | ds-sigma | ds-p")
      ->check(CLI::IsMember({"cl", "ds-m", "ds-sigma", "ds-p"}));
  app.add_option("-w,--workspace", workspace, "workspace JSON")->required();
  app.add_option("-o,--output", output, "output directory");
  app.add_option("--workers", o.workers, "explorer threads")->check(CLI::PositiveNumber);
  app.add_option("--seed", o.seed, "first sampling seed");
  app.add_option("--state-cap", o.state_cap, "explored state limit")->check(CLI::PositiveNumber);
  app.add_flag("--iso-reduction", o.iso_reduction, "skip states isomorphic to visited ones");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << Json{{"level", "error"}, {"kind", "usage"}, {"message", e.what()}}.dump() << "\n";
    return 2;
  }
  if (o.command == "estimate" && o.mode.empty()) {
    std::cerr << Json{{"level", "error"}, {"kind", "usage"}, {"message", "estimate needs --mode"}}.dump() << "\n";
    return 2;
  }
  o.workspace = workspace;
  if (!output.empty()) o.output = output;
  return run(o, std::cout, std::cerr);
}

}  // namespace wcetw::cli
