// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on failure.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <limits>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "fixtures.h"
#include "oracles.h"
#include "wcetw/cli.h"
#include "wcetw/error.h"
#include "wcetw/exec.h"
#include "wcetw/io.h"
#include "wcetw/ipet.h"
#include "wcetw/witness.h"

namespace wcetw {
namespace {

using model::PartialModel;
using model::Truth;

const std::vector<std::string> kPlans{"close_trains", "end_of_siding", "misaligned_turnout", "train_locations"};

struct Program {
  queryc::ProgramIR ir;
  queryc::TimingProfile tp;
  queryc::Cfg cfg;
};

queryc::SearchPlan load_plan(const std::string& name) {
  return queryc::plan_from_json(io::read_json_file(fixture::data_path("modes3/plans/" + name + ".json")));
}

queryc::TimingProfile base_profile() {
  return queryc::profile_from_json(io::read_json_file(fixture::data_path("modes3/profile.json")));
}

Program program(const std::string& plan, const queryc::TimingProfile& tp = base_profile()) {
  Program p;
  p.ir = queryc::compile_search_plan(load_plan(plan), &fixture::modes3());
  p.tp = tp;
  p.cfg = queryc::build_cfg(p.ir, p.tp);
  return p;
}

// Collects the first few violations of a criterion.
class Check {
 public:
  void fail(const std::string& what) {
    if (failures_++ < 3) detail_ << (detail_.tellp() > 0 ? "; " : "") << what;
  }
  void expect(bool ok, const std::string& what) {
    if (!ok) fail(what);
  }
  bool ok() const { return failures_ == 0; }
  std::string detail() const { return detail_.str(); }
  int failures() const { return failures_; }

 private:
  int failures_ = 0;
  std::ostringstream detail_;
};

struct Verdict {
  bool pass;
  std::string summary;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt_seconds(double s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f s", s);
  return buf;
}

Verdict finish(const Check& c, std::string summary) {
  if (!c.ok()) summary += " | " + std::to_string(c.failures()) + " violation(s): " + c.detail();
  return {c.ok(), summary};
}

std::vector<std::string> sure_train_segments(const PartialModel& w) {
  const auto loc = *w.signature().find("location");
  std::vector<std::string> out;
  for (int t = 0; t < w.size(); ++t) {
    if (w.exists(t) != Truth::kTrue) continue;
    for (int s = 0; s < w.size(); ++s) {
      if (w.get(loc, t, s) == Truth::kTrue) out.push_back(w.objects()[s]);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

Verdict placement_witness() {
  Check c;
  const auto t0 = std::chrono::steady_clock::now();
  witness::WitnessTask task = fixture::placement_task();
  int middle_pruned = 0;
  int middle_solutions = 0;
  witness::ExplorerConfig config;
  config.observer = [&](const witness::StateEvent& e) {
    const auto segs = sure_train_segments(*e.state);
    if (std::find(segs.begin(), segs.end(), "s2") == segs.end()) return;
    if (e.outcome == witness::Outcome::kSolution && e.value && *e.value > 0) ++middle_solutions;
    if (e.outcome != witness::Outcome::kPrunedBound) return;
    // With a train in the middle no pair of trains is adjacent: x2 = 0.
    if (e.analysis != nullptr && e.analysis->bound == 0) ++middle_pruned;
  };
  witness::WitnessResult r = witness::explore(task, config);
  const double secs = seconds_since(t0);
  c.expect(r.witness.has_value(), "no witness");
  c.expect(r.estimate.value == 250, "value " + std::to_string(r.estimate.value));
  if (r.witness) {
    const auto segs = sure_train_segments(*r.witness);
    c.expect(segs == std::vector<std::string>{"s1", "s3"}, "trains not on the outer segments");
    c.expect(model::is_concrete(*r.witness) && model::compatible(*r.witness, task.theory), "witness not compatible");
  }
  c.expect(middle_pruned > 0, "no middle-placement state pruned by bound");
  c.expect(middle_solutions == 0, "middle-placement state scored positive");
  c.expect(secs < 1.0, "runtime " + fmt_seconds(secs));
  return finish(c, "placement witness value " + std::to_string(r.estimate.value) + ", " +
                       std::to_string(middle_pruned) + " middle-placement states pruned, " + fmt_seconds(secs));
}

Verdict close_trains_semantics() {
  Check c;
  Program p = program("close_trains");
  PartialModel m = fixture::load_model("two_trains");
  exec::RunReport run = exec::run_query(p.ir, m, p.tp);
  logic::MatchSet logic_ms = logic::matches(m, queryc::plan_predicate(load_plan("close_trains")));
  auto a = run.match_set.tuples;
  auto b = logic_ms.tuples;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  c.expect(run.match_set.count() == 2, "interpreter found " + std::to_string(run.match_set.count()));
  c.expect(a == b, "interpreter and logic disagree");
  const auto segment = *m.signature().find("Segment");
  for (const auto& t : a) {
    c.expect(t.size() == 2, "match arity");
    for (const auto& id : t) c.expect(m.get(segment, m.require_index(id)) == Truth::kTrue, id + " is no segment");
  }
  std::ostringstream out, err;
  cli::Options o;
  o.command = "eval";
  o.workspace = fixture::data_path("modes3/workspaces/close_trains.json");
  o.output = std::filesystem::temp_directory_path() / "wcetw_acceptance";
  const int code = cli::run(o, out, err);
  c.expect(code == 0, "eval exit " + std::to_string(code));
  if (code == 0) {
    const cli::Json res = cli::Json::parse(out.str())["results"][0];
    c.expect(res["match_count"] == 2, "eval reported " + res["match_count"].dump());
    c.expect(res["interpreter_agrees"] == true, "eval reports disagreement");
  }
  return finish(c, "closeTrains on two_trains: " + std::to_string(a.size()) + " segment pairs");
}

Verdict block_correspondence() {
  Check c;
  Program p = program("close_trains");
  PartialModel m = fixture::load_model("turnout_loop");
  ipet::BlockPredicates preds = ipet::derive_predicates(p.cfg, p.ir);
  const std::int64_t psi = logic::matches(m, preds.psi.at("bb4")).count();
  const std::int64_t psi_loop = logic::matches(m, preds.psi_loop.at("bb4")).count();
  exec::RunReport r = exec::run_query(p.ir, m, p.tp);
  const std::int64_t header = r.bb_counts.at("bb4");
  c.expect(psi == 4, "psi count " + std::to_string(psi));
  c.expect(psi_loop == 8, "loop psi count " + std::to_string(psi_loop));
  c.expect(header == 12, "header executions " + std::to_string(header));
  c.expect(header == psi + psi_loop, "header is not psi + loop psi");
  c.expect(exec::check_bb_correspondence(p.ir, m, p.tp), "interpreter counters disagree with predicates");
  return finish(c, "inner loop header: psi " + std::to_string(psi) + ", loop psi " + std::to_string(psi_loop) +
                       ", executions " + std::to_string(header));
}

queryc::TimingProfile random_profile(std::mt19937_64& rng, const Program& p) {
  std::uniform_int_distribution<std::int64_t> cost(1, 40);
  queryc::TimingProfile tp;
  tp.prologue = cost(rng);
  tp.epilogue = cost(rng);
  tp.loop_header = cost(rng);
  tp.condition = cost(rng);
  tp.assign = cost(rng);
  tp.emit = cost(rng);
  for (const auto& b : p.cfg.blocks) {
    if (rng() % 4 == 0) tp.overrides[b.id] = cost(rng);
  }
  return tp;
}

Verdict safety_chain() {
  Check c;
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(4);
  const int kMaxObjects = 8;
  int pairs = 0;
  for (int i = 0; i < 120; ++i) {
    const std::string& plan = kPlans[i % kPlans.size()];
    Program p = program(plan);
    p.tp = random_profile(rng, p);
    p.cfg = queryc::build_cfg(p.ir, p.tp);
    const int segments = 2 + static_cast<int>(rng() % 5);
    const int trains = static_cast<int>(rng() % (kMaxObjects - segments + 1));
    const int turnouts = static_cast<int>(rng() % 3);
    PartialModel m = fixture::random_railway(rng, segments, std::min(turnouts, segments), trains);
    ipet::Ipet ip = ipet::build_ipet(p.cfg);
    const std::int64_t tau = exec::run_query(p.ir, m, p.tp).cost;
    const std::int64_t dsm =
        ipet::dsm_estimate(ip, ipet::precise_flow_facts(p.cfg, ip.f, ipet::derive_predicates(p.cfg, p.ir), m)).value;
    const std::int64_t cl =
        ipet::cl_estimate(ip, ipet::loop_bound_facts(p.cfg, ip.f, ipet::scope_loop_bounds(p.ir, &fixture::modes3(),
                                                                                         kMaxObjects)))
            .value;
    c.expect(tau <= dsm && dsm <= cl, plan + " pair " + std::to_string(i) + ": " + std::to_string(tau) + " / " +
                                          std::to_string(dsm) + " / " + std::to_string(cl));
    ++pairs;
  }
  const double secs = seconds_since(t0);
  c.expect(secs < 60.0, "runtime " + fmt_seconds(secs));
  return finish(c, std::to_string(pairs) + " (model, profile) pairs, " + fmt_seconds(secs));
}

// Objective evaluated straight from match counts, independent of the solver.
std::int64_t direct_objective(const witness::WitnessTask& task, const PartialModel& m) {
  linear::Valuation counts;
  for (const auto& e : task.theory.entries()) counts[e.variable] = oracle::count_matches(m, e.predicate);
  linear::Rational v = task.objective.constant();
  for (const auto& [var, coeff] : task.objective.terms()) v += coeff * counts.at(var);
  return v.get_num().get_si() / v.get_den().get_si();
}

// Match counts computed by the oracle satisfy the task scope.
bool in_scope(const witness::WitnessTask& task, const PartialModel& m) {
  linear::Valuation counts;
  for (const auto& e : task.theory.entries()) counts[e.variable] = oracle::count_matches(m, e.predicate);
  return model::is_concrete(m) && linear::satisfies(counts, task.model.scope());
}

std::vector<witness::WitnessTask> criterion_tasks() {
  std::mt19937_64 rng(505);
  std::vector<witness::WitnessTask> out;
  for (int i = 0; i < 24; ++i) out.push_back(oracle::random_witness_task(rng));
  return out;
}

Verdict witness_optimality(const std::vector<witness::WitnessTask>& tasks) {
  Check c;
  const auto t0 = std::chrono::steady_clock::now();
  int with_solutions = 0;
  std::int64_t enumerated = 0;
  for (size_t i = 0; i < tasks.size(); ++i) {
    const auto& task = tasks[i];
    const std::string tag = "task " + std::to_string(i);
    c.expect(task.model.size() <= 6, tag + " has more than six objects");
    witness::WitnessResult r = witness::explore(task);
    std::int64_t worst = std::numeric_limits<std::int64_t>::min();
    std::vector<std::int64_t> direct;
    witness::BruteForceResult b = witness::brute_force_witness(task, {.on_solution = [&](const PartialModel& m, std::int64_t v) {
                                                                        worst = std::max(worst, v);
                                                                        direct.push_back(direct_objective(task, m));
                                                                        c.expect(in_scope(task, m), tag + " enumerated model outside the scope");
                                                                      }});
    enumerated += static_cast<std::int64_t>(direct.size());
    c.expect(r.witness.has_value() == b.value.has_value(), tag + " feasibility differs");
    if (!b.value || !r.witness) continue;
    ++with_solutions;
    c.expect(r.estimate.value == *b.value,
             tag + " explore " + std::to_string(r.estimate.value) + " vs brute force " + std::to_string(*b.value));
    c.expect(worst == *b.value, tag + " best enumerated value differs");
    for (std::int64_t v : direct) c.expect(v <= r.estimate.value, tag + " enumerated model exceeds the witness");
    c.expect(direct_objective(task, *r.witness) == r.estimate.value, tag + " witness value not reproduced");
  }
  const double secs = seconds_since(t0);
  c.expect(with_solutions >= 20, "only " + std::to_string(with_solutions) + " tasks with solutions");
  c.expect(secs < 300.0, "runtime " + fmt_seconds(secs));
  return finish(c, std::to_string(tasks.size()) + " tasks (" + std::to_string(with_solutions) + " feasible), " +
                       std::to_string(enumerated) + " models enumerated, " + fmt_seconds(secs));
}

model::Theory modes3_theory() {
  model::Theory t = io::theory_from_json(io::read_json_file(fixture::data_path("modes3/counts.json")));
  t.append(fixture::modes3_wellformedness().theory);
  return t;
}

Verdict tightening() {
  Check c;
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(66);
  const model::Theory theory = modes3_theory();
  linear::LinearSystem scope = linear::parse_system({"x_obj <= 2", "x_train <= 1"});
  scope.append(fixture::modes3_wellformedness().scope);
  const PartialModel root = model::initial_partial_model(fixture::modes3_signature(), scope);
  int chains = 0;
  int attempts = 0;
  while (chains < 20 && attempts < 200) {
    const std::string& plan = kPlans[attempts++ % kPlans.size()];
    Program p = program(plan);
    witness::WitnessTask task = witness::build_witness_task(p.cfg, p.ir, root, theory);
    witness::TaskContext ctx(task);
    auto walk = [&](PartialModel m, int steps) {
      for (int s = 0; s < steps && !model::is_concrete(m); ++s) {
        std::vector<PartialModel> kids;
        for (auto& k : witness::branch(m, ctx.multiplicity(m))) {
          if (ctx.analyze(k, false).feasible) kids.push_back(std::move(k));
        }
        if (kids.empty()) break;
        m = kids[rng() % kids.size()];
      }
      return m;
    };
    const PartialModel pm = walk(root, static_cast<int>(rng() % 8));
    const PartialModel qm = walk(pm, 1 + static_cast<int>(rng() % 12));
    const std::string tag = plan + " chain " + std::to_string(chains);
    c.expect(model::check_refinement(pm, qm, model::canonical_abstraction(pm, qm)), tag + ": Q does not refine P");
    witness::WitnessResult sigma = witness::ds_sigma(fixture::modes3_signature(), scope, theory, p.cfg, p.ir);
    witness::WitnessResult dp = witness::ds_p(pm, theory, p.cfg, p.ir);
    witness::WitnessResult dq = witness::ds_p(qm, theory, p.cfg, p.ir);
    if (!dq.witness) continue;  // Q has no compatible refinement in scope
    c.expect(dp.witness && sigma.witness, tag + ": P or the scope lost every witness");
    if (!dp.witness || !sigma.witness) continue;
    c.expect(dq.estimate.value <= dp.estimate.value, tag + ": DS_P(Q) " + std::to_string(dq.estimate.value) +
                                                          " > DS_P(P) " + std::to_string(dp.estimate.value));
    c.expect(dp.estimate.value <= sigma.estimate.value, tag + ": DS_P(P) above DS_Sigma");
    ++chains;
  }
  const double secs = seconds_since(t0);
  c.expect(chains >= 20, "only " + std::to_string(chains) + " chains with witnesses");
  return finish(c, std::to_string(chains) + " refinement chains, " + fmt_seconds(secs));
}

model::SignaturePtr ab_signature() {
  static const model::SignaturePtr sig =
      std::make_shared<const model::Signature>(std::vector<std::string>{"A"}, std::vector<std::string>{"R"});
  return sig;
}

struct Entry {
  model::SymbolId s;
  int a, b;
};

std::vector<Entry> entries_of(const PartialModel& m) {
  std::vector<Entry> out;
  const auto& sig = m.signature();
  for (int a = 0; a < m.size(); ++a) {
    out.push_back({model::Signature::kExists, a, -1});
    out.push_back({model::Signature::kEquals, a, a});
    for (model::SymbolId s = sig.first_user_symbol(); s < sig.size(); ++s) {
      if (sig.arity(s) == 1) {
        out.push_back({s, a, -1});
      } else {
        for (int b = 0; b < m.size(); ++b) out.push_back({s, a, b});
      }
    }
  }
  return out;
}

void set_entry(PartialModel& m, const Entry& e, Truth v) {
  if (e.b < 0) {
    m.set(e.s, e.a, v);
  } else {
    m.set(e.s, e.a, e.b, v);
  }
}

// Every subset of at most three entries made UNKNOWN.
template <class F>
void unknown_subsets(const PartialModel& base, F&& visit) {
  const auto es = entries_of(base);
  const int n = static_cast<int>(es.size());
  visit(base);
  for (int i = 0; i < n; ++i) {
    PartialModel m1 = base;
    set_entry(m1, es[i], Truth::kUnknown);
    visit(m1);
    for (int j = i + 1; j < n; ++j) {
      PartialModel m2 = m1;
      set_entry(m2, es[j], Truth::kUnknown);
      visit(m2);
      for (int k = j + 1; k < n; ++k) {
        PartialModel m3 = m2;
        set_entry(m3, es[k], Truth::kUnknown);
        visit(m3);
      }
    }
  }
}

Verdict ilp_and_count_bounds() {
  Check c;
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<int> nvars(1, 4);
  std::uniform_int_distribution<int> obj(-5, 5);
  int feasible = 0;
  for (int round = 0; round < 50; ++round) {
    std::vector<std::string> vars;
    for (int i = 0, n = nvars(rng); i < n; ++i) vars.push_back("v" + std::to_string(i));
    linear::Ilp p;
    p.system = oracle::random_system(rng, vars, 3, 4, 12);
    for (const auto& v : vars) {
      p.system.add_ge(linear::LinExpr::var(v), 0);
      p.system.add_le(linear::LinExpr::var(v), 6);
      p.objective.add(v, obj(rng));
    }
    const auto expected = oracle::enumerate_ilp(p, vars, 0, 6);
    const linear::IlpResult got = linear::solve_ilp(p);
    const std::string tag = "ILP " + std::to_string(round);
    if (!expected.feasible) {
      c.expect(got.status == linear::IlpResult::Status::kInfeasible, tag + " should be infeasible");
      continue;
    }
    ++feasible;
    c.expect(got.status == linear::IlpResult::Status::kOptimal && got.value == expected.value,
             tag + " value " + std::to_string(got.value) + " vs " + std::to_string(expected.value));
    c.expect(linear::satisfies(got.valuation, p.system), tag + " optimum violates the system");
  }

  const std::vector<logic::Predicate> preds{
      logic::parse_predicate("a(x) := A(x)"),
      logic::parse_predicate("r(x, y) := R(x, y) & !(x = y)"),
      logic::parse_predicate("out(x) := exists y: R(x, y)"),
      logic::parse_predicate("closed(x) := forall y: !R(x, y) | A(y)"),
      logic::parse_predicate("two(x, y) := exists z: R(x, z) & R(z, y)"),
      logic::parse_predicate("all() := forall x: A(x)"),
  };
  const int kCopies = 2;
  std::int64_t models = 0;
  std::int64_t checks = 0;
  auto verify = [&](const PartialModel& p) {
    ++models;
    logic::Multiplicity mult(p.size(), kCopies);
    const auto refinements = oracle::concrete_refinements(p, kCopies);
    for (const auto& phi : preds) {
      const logic::CountBounds loose = logic::count_bounds(p, phi);
      const logic::CountBounds tight = logic::count_bounds(p, phi, &mult);
      for (const auto& r : refinements) {
        const std::int64_t k = oracle::count_matches(r.model, phi);
        ++checks;
        const bool ok = loose.lower <= k && (!loose.upper || k <= *loose.upper) && tight.lower <= k && tight.upper &&
                        k <= *tight.upper;
        c.expect(ok, phi.name + " on " + p.serialize());
      }
    }
  };
  // Up to two objects: every concrete base; three and four: fixed bases.
  for (int n = 0; n <= 4; ++n) {
    std::vector<std::string> ids;
    for (int i = 0; i < n; ++i) ids.push_back(std::string(1, static_cast<char>('a' + i)));
    const int bits = n + n * n;
    std::vector<std::int64_t> masks;
    if (n <= 2) {
      for (std::int64_t mask = 0; mask < (std::int64_t{1} << bits); ++mask) masks.push_back(mask);
    } else {
      for (int i = 0; i < 3; ++i) masks.push_back(static_cast<std::int64_t>(rng() & ((std::int64_t{1} << bits) - 1)));
    }
    const auto a = *ab_signature()->find("A");
    const auto r = *ab_signature()->find("R");
    for (std::int64_t mask : masks) {
      PartialModel base(ab_signature(), ids);
      for (int i = 0; i < n; ++i) base.set(a, i, model::from_bool(mask >> i & 1));
      for (int i = 0; i < n * n; ++i) base.set(r, i / n, i % n, model::from_bool(mask >> (n + i) & 1));
      if (n <= 2) {
        // Distinct partial models only: an UNKNOWN entry's base value is irrelevant.
        std::set<std::string> seen;
        unknown_subsets(base, [&](const PartialModel& p) {
          if (seen.insert(p.serialize()).second) verify(p);
        });
      } else {
        unknown_subsets(base, verify);
      }
    }
  }
  const double secs = seconds_since(t0);
  return finish(c, "50 ILPs (" + std::to_string(feasible) + " feasible), count bounds on " + std::to_string(models) +
                       " partial models / " + std::to_string(checks) + " refinement checks, " + fmt_seconds(secs));
}

Verdict cyclomatic_complexity() {
  Check c;
  const int expected[] = {7, 6, 5, 3};
  std::string got;
  for (size_t i = 0; i < kPlans.size(); ++i) {
    const int cc = program(kPlans[i]).cfg.cyclomatic_complexity();
    got += (i ? "/" : "") + std::to_string(cc);
    c.expect(cc == expected[i], kPlans[i] + " has CC " + std::to_string(cc));
  }
  return finish(c, "cyclomatic complexity " + got);
}

std::int64_t binomial(int n, int k) {
  std::int64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

std::int64_t factorial(int n) { return n <= 1 ? 1 : n * factorial(n - 1); }

Verdict counting_fidelity() {
  Check c;
  const auto t0 = std::chrono::steady_clock::now();
  cli::Workspace ws = cli::load_workspace(fixture::data_path("modes3/workspaces/reduced_layout.json"));
  PartialModel p = *ws.partial_model;
  linear::LinearSystem s = p.scope();
  s.append(ws.wellformedness_scope());
  p.set_scope(s);
  witness::WitnessTask task{p, ws.full_theory(), ws.objective.value_or(linear::LinExpr{}), {}, {}};
  witness::BruteForceResult b = witness::brute_force_witness(task, {.count_iso_classes = true});
  // Two three-state turnouts, at most two trains on distinct segments of six.
  const int kTurnouts = 2, kSegments = 6, kTrains = 2;
  std::int64_t turnout_states = 1;
  for (int i = 0; i < kTurnouts; ++i) turnout_states *= 3;
  std::int64_t unlabelled = 0, labelled = 0;
  for (int i = 0; i <= kTrains; ++i) {
    unlabelled += binomial(kSegments, i);
    labelled += binomial(kSegments, i) * factorial(i);
  }
  c.expect(b.solutions == turnout_states * labelled,
           "refinements " + std::to_string(b.solutions) + " vs " + std::to_string(turnout_states * labelled));
  c.expect(b.iso_classes == turnout_states * unlabelled,
           "iso classes " + std::to_string(b.iso_classes) + " vs " + std::to_string(turnout_states * unlabelled));
  const double secs = seconds_since(t0);
  return finish(c, std::to_string(b.solutions) + " refinements = 3^2 * " + std::to_string(labelled) + ", " +
                       std::to_string(b.iso_classes) + " up to train renaming = 3^2 * " + std::to_string(unlabelled) +
                       ", " + fmt_seconds(secs));
}

Verdict determinism(const std::vector<witness::WitnessTask>& tasks) {
  Check c;
  for (size_t i = 0; i < tasks.size(); ++i) {
    witness::WitnessResult one = witness::explore(tasks[i], {.workers = 1});
    witness::WitnessResult four = witness::explore(tasks[i], {.workers = 4});
    const std::string a = (one.witness ? one.witness->serialize() : "") + "|" + std::to_string(one.estimate.value);
    const std::string b = (four.witness ? four.witness->serialize() : "") + "|" + std::to_string(four.estimate.value);
    c.expect(a == b, "task " + std::to_string(i) + " witness differs");
    c.expect(witness::to_json(one).dump() == witness::to_json(four).dump(), "task " + std::to_string(i) + " report differs");
  }
  return finish(c, std::to_string(tasks.size()) + " tasks byte-identical with 1 and 4 workers");
}

}  // namespace
}  // namespace wcetw

int main() {
  using namespace wcetw;
  const auto tasks = criterion_tasks();
  const std::vector<std::pair<int, std::function<Verdict()>>> criteria{
      {1, placement_witness},
      {2, close_trains_semantics},
      {3, block_correspondence},
      {4, safety_chain},
      {5, [&] { return witness_optimality(tasks); }},
      {6, tightening},
      {7, ilp_and_count_bounds},
      {8, cyclomatic_complexity},
      {9, counting_fidelity},
      {10, [&] { return determinism(tasks); }},
  };
  int failed = 0;
  for (const auto& [id, run] : criteria) {
    Verdict v;
    try {
      v = run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    failed += !v.pass;
    std::cout << (v.pass ? "PASS" : "FAIL") << " criterion " << id << ": " << v.summary << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
