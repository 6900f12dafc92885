#include <omp.h>

#include <algorithm>
#include <queue>
#include <unordered_set>

#include "wcetw/error.h"
#include "wcetw/io.h"
#include "wcetw/witness.h"

namespace wcetw::witness {

using model::PartialModel;

namespace {

struct Node {
  PartialModel state;
  std::optional<std::int64_t> parent_bound;  // nullopt: unbounded
  std::int64_t seq = 0;
};

// Larger parent bound first, then the most recently pushed.
struct NodeOrder {
  bool operator()(const Node& a, const Node& b) const {
    if (a.parent_bound != b.parent_bound) {
      if (!a.parent_bound) return false;
      if (!b.parent_bound) return true;
      return *a.parent_bound < *b.parent_bound;
    }
    return a.seq < b.seq;
  }
};

bool below(const std::optional<std::int64_t>& bound, const std::optional<std::int64_t>& incumbent) {
  return incumbent && bound && *bound < *incumbent;
}

struct Processed {
  Outcome outcome = Outcome::kBranched;
  Analysis analysis;
  bool analyzed = false;
  std::optional<linear::IlpResult> solution;
  std::vector<PartialModel> children;
};

Processed process(const TaskContext& ctx, const Node& node, const std::optional<std::int64_t>& incumbent) {
  Processed p;
  if (below(node.parent_bound, incumbent)) {
    p.outcome = Outcome::kPrunedBound;
    return p;
  }
  p.analysis = ctx.analyze(node.state);
  p.analyzed = true;
  if (!p.analysis.feasible) {
    p.outcome = Outcome::kPrunedInfeasible;
    return p;
  }
  if (below(p.analysis.bound, incumbent)) {
    p.outcome = Outcome::kPrunedBound;
    return p;
  }
  if (model::is_concrete(node.state)) {
    p.solution = ctx.evaluate(node.state);
    p.outcome = p.solution ? Outcome::kSolution : Outcome::kPrunedInfeasible;
    return p;
  }
  p.children = branch(node.state, ctx.multiplicity(node.state));
  return p;
}

struct Incumbent {
  std::optional<std::int64_t> value;
  std::string key;
  std::optional<PartialModel> model;
  linear::Valuation valuation;
};

WitnessResult run(const WitnessTask& task, const ExplorerConfig& config, ipet::EstimateKind kind, int batch_size,
                  bool parallel) {
  TaskContext ctx(task);
  WitnessResult result;
  ExploreStats& stats = result.stats;
  Incumbent inc;
  std::priority_queue<Node, std::vector<Node>, NodeOrder> frontier;
  std::unordered_set<std::string> seen;
  std::int64_t seq = 0;

  auto push = [&](PartialModel m, const std::optional<std::int64_t>& bound) {
    if (config.iso_reduction && !seen.insert(canonical_form(m)).second) {
      ++stats.iso_duplicates;
      if (config.observer) config.observer(StateEvent{&m, Outcome::kIsoDuplicate, nullptr, std::nullopt});
      return;
    }
    frontier.push(Node{std::move(m), bound, seq++});
  };
  push(ctx.root(), std::nullopt);
  stats.frontier_peak = 1;

  std::vector<Node> batch;
  std::vector<Processed> out;
  while (!frontier.empty()) {
    batch.clear();
    while (!frontier.empty() && static_cast<int>(batch.size()) < batch_size) {
      batch.push_back(frontier.top());
      frontier.pop();
    }
    if (stats.states_visited + static_cast<std::int64_t>(batch.size()) > config.state_cap) {
      throw Error(ErrorKind::kResourceExceeded, "state cap of " + std::to_string(config.state_cap) + " reached");
    }
    const std::optional<std::int64_t> snapshot = inc.value;
    out.assign(batch.size(), Processed{});
    const int count = static_cast<int>(batch.size());
    if (parallel) {
      std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 1) num_threads(std::max(1, config.workers))
      for (int i = 0; i < count; ++i) {
        try {
          out[i] = process(ctx, batch[i], snapshot);
        } catch (...) {
#pragma omp critical(wcetw_explore_failure)
          if (!failure) failure = std::current_exception();
        }
      }
      if (failure) std::rethrow_exception(failure);
    } else {
      for (int i = 0; i < count; ++i) out[i] = process(ctx, batch[i], snapshot);
    }

    for (int i = 0; i < count; ++i) {
      Processed& p = out[i];
      ++stats.states_visited;
      // Re-check against the incumbent as updated by earlier merges of this batch.
      if (p.analyzed && (p.outcome == Outcome::kBranched || p.outcome == Outcome::kSolution) &&
          below(p.analysis.bound, inc.value)) {
        p.outcome = Outcome::kPrunedBound;
        p.solution.reset();
        p.children.clear();
      }
      switch (p.outcome) {
        case Outcome::kPrunedInfeasible: ++stats.pruned_infeasible; break;
        case Outcome::kPrunedBound: ++stats.pruned_bound; break;
        case Outcome::kSolution: {
          ++stats.solutions;
          const std::int64_t v = p.solution->value;
          std::string key = batch[i].state.serialize();
          if (!inc.value || v > *inc.value || (v == *inc.value && key < inc.key)) {
            inc.value = v;
            inc.key = std::move(key);
            inc.model = batch[i].state;
            inc.valuation = p.solution->valuation;
          }
          break;
        }
        default: break;
      }
      if (config.observer) {
        config.observer(StateEvent{&batch[i].state, p.outcome, p.analyzed ? &p.analysis : nullptr,
                                   p.solution ? std::optional<std::int64_t>(p.solution->value) : std::nullopt});
      }
      if (p.outcome == Outcome::kBranched) {
        for (auto it = p.children.rbegin(); it != p.children.rend(); ++it) push(std::move(*it), p.analysis.bound);
      }
    }
    stats.frontier_peak = std::max(stats.frontier_peak, static_cast<std::int64_t>(frontier.size()));
  }

  result.estimate.kind = kind;
  if (inc.model) {
    PartialModel w = *inc.model;
    w.set_scope(ctx.pinned_scope(w));
    result.witness = std::move(w);
    result.estimate.value = *inc.value;
    result.estimate.valuation = inc.valuation;
  }
  return result;
}

}  // namespace

WitnessResult explore(const WitnessTask& task, const ExplorerConfig& config, ipet::EstimateKind kind) {
  return run(task, config, kind, std::max(1, config.batch_size), config.workers > 1);
}

WitnessResult explore_serial(const WitnessTask& task, const ExplorerConfig& config, ipet::EstimateKind kind) {
  return run(task, config, kind, 1, false);
}

WitnessResult ds_sigma(model::SignaturePtr sig, const linear::LinearSystem& scope, const model::Theory& t,
                       const queryc::Cfg& cfg, const queryc::ProgramIR& ir, const ExplorerConfig& config) {
  PartialModel p = model::initial_partial_model(std::move(sig), scope);
  return explore(build_witness_task(cfg, ir, p, t), config, ipet::EstimateKind::kDSSigma);
}

WitnessResult ds_p(const PartialModel& p, const model::Theory& t, const queryc::Cfg& cfg,
                   const queryc::ProgramIR& ir, const ExplorerConfig& config) {
  return explore(build_witness_task(cfg, ir, p, t), config, ipet::EstimateKind::kDSP);
}

Json to_json(const ExploreStats& s) {
  return Json{{"states_visited", s.states_visited}, {"states_pruned_infeasible", s.pruned_infeasible},
              {"states_pruned_bound", s.pruned_bound},  {"frontier_peak", s.frontier_peak},
              {"iso_duplicates", s.iso_duplicates},     {"solutions", s.solutions}};
}

Json to_json(const WitnessResult& r) {
  Json j{{"kind", ipet::estimate_kind_name(r.estimate.kind)}};
  if (r.witness) {
    j["value"] = r.estimate.value;
    j["valuation"] = io::to_json(r.estimate.valuation);
    j["witness"] = io::to_json(*r.witness);
  } else {
    j["value"] = nullptr;
    j["witness"] = nullptr;
  }
  j["stats"] = to_json(r.stats);
  return j;
}

Json to_json(const BruteForceResult& r) {
  Json j{{"kind", "brute_force"}};
  j["value"] = r.value ? Json(*r.value) : Json(nullptr);
  j["space_size"] = r.space_size;
  j["leaves"] = r.leaves;
  j["solutions"] = r.solutions;
  j["iso_classes"] = r.iso_classes;
  j["states"] = r.states;
  j["witness"] = r.witness ? io::to_json(*r.witness) : Json(nullptr);
  return j;
}

}  // namespace wcetw::witness
