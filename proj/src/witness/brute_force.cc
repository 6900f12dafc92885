#include <omp.h>

#include <algorithm>
#include <atomic>
#include <limits>
#include <set>

#include "wcetw/error.h"
#include "wcetw/witness.h"

namespace wcetw::witness {

using model::PartialModel;
using model::Signature;
using model::Truth;

namespace {

struct Partial {
  std::optional<std::int64_t> value;
  std::string key;
  std::optional<PartialModel> witness;
  std::int64_t leaves = 0;
  std::int64_t solutions = 0;
  std::set<std::string> classes;

  void offer(const PartialModel& m, std::int64_t v) {
    std::string k = m.serialize();
    if (!value || v > *value || (v == *value && k < key)) {
      value = v;
      key = std::move(k);
      witness = m;
    }
  }

  void merge(Partial&& other) {
    if (other.witness) offer(*other.witness, *other.value);
    leaves += other.leaves;
    solutions += other.solutions;
    classes.merge(other.classes);
  }
};

class Enumerator {
 public:
  Enumerator(const TaskContext& ctx, const BruteForceConfig& config) : ctx_(ctx), config_(config) {}

  // Every choice of copy counts and optional-object existence.
  std::vector<PartialModel> structures(const PartialModel& root) const {
    const logic::Multiplicity mult = ctx_.multiplicity(root);
    std::vector<std::string> multi, optional;
    std::map<std::string, std::int64_t> cap;
    for (int o = 0; o < root.size(); ++o) {
      if (root.is_multi(o)) {
        multi.push_back(root.objects()[o]);
        cap[root.objects()[o]] = *mult[o];
      } else if (root.exists(o) == Truth::kUnknown) {
        optional.push_back(root.objects()[o]);
      }
    }
    std::vector<PartialModel> layer{root};
    for (const auto& id : multi) {
      std::vector<PartialModel> next;
      for (const auto& m : layer) {
        PartialModel cur = m;
        for (std::int64_t k = 0;; ++k) {
          auto [with, none] = model::concretize_multi(cur, cur.require_index(id));
          next.push_back(model::drop_nonexistent(none));
          if (k == cap.at(id)) break;
          cur = std::move(with);
        }
      }
      layer = std::move(next);
    }
    for (const auto& id : optional) {
      std::vector<PartialModel> next;
      for (const auto& m : layer) {
        const int o = m.require_index(id);
        PartialModel yes = m, no = m;
        yes.set(Signature::kExists, o, Truth::kTrue);
        no.set(Signature::kExists, o, Truth::kFalse);
        next.push_back(std::move(yes));
        next.push_back(model::drop_nonexistent(no));
      }
      layer = std::move(next);
    }
    return layer;
  }

  // Splits the entry decisions into independent work items.
  std::vector<PartialModel> split(std::vector<PartialModel> items, size_t target) {
    for (int depth = 0; depth < 12 && items.size() < target; ++depth) {
      std::vector<PartialModel> next;
      bool grew = false;
      for (auto& m : items) {
        tick();
        if (!ctx_.analyze(m, false).feasible) continue;
        std::vector<PartialModel> kids = branch(m, {});
        if (kids.empty()) {
          next.push_back(std::move(m));
          continue;
        }
        grew = true;
        for (auto& k : kids) next.push_back(std::move(k));
      }
      items = std::move(next);
      if (!grew) break;
    }
    return items;
  }

  void walk(const PartialModel& m, Partial& acc) {
    tick();
    if (!ctx_.analyze(m, false).feasible) return;
    std::vector<PartialModel> kids = branch(m, {});
    if (!kids.empty()) {
      for (const auto& k : kids) walk(k, acc);
      return;
    }
    ++acc.leaves;
    std::optional<linear::IlpResult> r = ctx_.evaluate(m);
    if (!r) return;
    ++acc.solutions;
    acc.offer(m, r->value);
    if (config_.count_iso_classes) acc.classes.insert(canonical_form(m));
    if (config_.on_solution) config_.on_solution(m, r->value);
  }

  std::int64_t states() const { return states_.load(); }

 private:
  void tick() {
    if (states_.fetch_add(1) + 1 > config_.state_cap) {
      throw Error(ErrorKind::kResourceExceeded,
                  "brute-force enumeration exceeded " + std::to_string(config_.state_cap) + " states");
    }
  }

  const TaskContext& ctx_;
  const BruteForceConfig& config_;
  std::atomic<std::int64_t> states_{0};
};

}  // namespace

BruteForceResult brute_force_witness(const WitnessTask& task, const BruteForceConfig& config) {
  TaskContext ctx(task);
  Enumerator en(ctx, config);
  std::vector<PartialModel> items = en.structures(ctx.root());
  BruteForceResult r;
  for (const auto& m : items) {
    std::int64_t unknown = 0;
    const Signature& sig = m.signature();
    for (model::SymbolId s = sig.first_user_symbol(); s < sig.size(); ++s) {
      for (int a = 0; a < m.size(); ++a) {
        if (sig.arity(s) == 1) {
          unknown += m.get(s, a) == Truth::kUnknown;
        } else {
          for (int b = 0; b < m.size(); ++b) unknown += m.get(s, a, b) == Truth::kUnknown;
        }
      }
    }
    r.space_size += unknown >= 62 ? std::numeric_limits<std::int64_t>::max() / 2 : std::int64_t{1} << unknown;
  }
  Partial total;
  if (config.workers <= 1) {
    for (const auto& m : items) en.walk(m, total);
  } else {
    items = en.split(std::move(items), static_cast<size_t>(config.workers) * 16);
    std::vector<Partial> parts(items.size());
    std::exception_ptr failure;
    const int n = static_cast<int>(items.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(config.workers)
    for (int i = 0; i < n; ++i) {
      try {
        en.walk(items[i], parts[i]);
      } catch (...) {
#pragma omp critical(wcetw_brute_failure)
        if (!failure) failure = std::current_exception();
      }
    }
    if (failure) std::rethrow_exception(failure);
    for (auto& p : parts) total.merge(std::move(p));
  }
  r.value = total.value;
  if (total.witness) {
    PartialModel w = *total.witness;
    w.set_scope(ctx.pinned_scope(w));
    r.witness = std::move(w);
  }
  r.leaves = total.leaves;
  r.solutions = total.solutions;
  r.iso_classes = static_cast<std::int64_t>(total.classes.size());
  r.states = en.states();
  return r;
}

}  // namespace wcetw::witness
