#include <algorithm>
#include <random>

#include "wcetw/error.h"
#include "wcetw/exec.h"
#include "wcetw/witness.h"

namespace wcetw::exec {

model::PartialModel random_concrete(const model::PartialModel& p, const model::Theory& t, std::uint64_t seed,
                                    const SampleOptions& options) {
  const witness::WitnessTask task{p, t, linear::LinExpr(), {}, {}};
  const witness::TaskContext ctx(task);
  std::mt19937_64 rng(seed);
  std::vector<model::PartialModel> stack{ctx.root()};
  std::int64_t visited = 0;
  while (!stack.empty()) {
    if (++visited > options.attempt_budget) break;
    model::PartialModel m = std::move(stack.back());
    stack.pop_back();
    if (!ctx.analyze(m).feasible) continue;
    if (model::is_concrete(m)) {
      if (!ctx.evaluate(m)) continue;
      m.set_scope(ctx.pinned_scope(m));
      return m;
    }
    std::vector<model::PartialModel> kids = witness::branch(m, ctx.multiplicity(m));
    std::shuffle(kids.begin(), kids.end(), rng);
    for (auto& k : kids) stack.push_back(std::move(k));
  }
  throw Error(ErrorKind::kExhausted, "no compatible concrete refinement within " +
                                         std::to_string(options.attempt_budget) + " states");
}

}  // namespace wcetw::exec
