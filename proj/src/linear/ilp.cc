#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "lp_internal.h"
#include "wcetw/error.h"
#include "wcetw/linear.h"

namespace wcetw::linear {
namespace {

using BoundVec = std::vector<std::optional<Rational>>;

struct Node {
  BoundVec lower;
  BoundVec upper;
};

bool objective_is_integral(const LinExpr& e) {
  if (e.constant().get_den() != 1) return false;
  for (const auto& [name, c] : e.terms()) {
    if (c.get_den() != 1) return false;
  }
  return true;
}

// Depth-first branch and bound. Returns the best point, if any.
struct Search {
  Search(const LpProblem& l, const LinExpr& obj, const IlpOptions& opt, bool integral)
      : lp(l), objective(obj), options(opt), integral_objective(integral) {}

  const LpProblem& lp;
  const LinExpr& objective;
  const IlpOptions& options;
  bool integral_objective;
  std::int64_t nodes = 0;
  std::optional<Rational> best_value;
  std::map<std::string, Rational> best_point;

  void run() {
    const size_t n = lp.names.size();
    std::vector<Node> stack;
    stack.push_back({BoundVec(n), BoundVec(n)});
    while (!stack.empty()) {
      Node node = std::move(stack.back());
      stack.pop_back();
      if (++nodes > options.node_limit) {
        throw Error(ErrorKind::kResourceExceeded,
                    "branch-and-bound node limit " + std::to_string(options.node_limit) + " exceeded");
      }
      LpResult r = lp.maximize(objective, &node.lower, &node.upper);
      if (r.status == LpResult::Status::kInfeasible) continue;
      if (r.status == LpResult::Status::kUnbounded) {
        throw Error(ErrorKind::kUnbounded, "relaxation unbounded below the root");
      }
      if (best_value) {
        Rational bound = integral_objective ? floor_q(r.value) : r.value;
        if (bound <= *best_value) continue;
      }
      // Most fractional variable; ties go to the lowest index.
      size_t pick = n;
      Rational best_dist;
      for (size_t v = 0; v < n; ++v) {
        const Rational& x = r.point.at(lp.names[v]);
        if (x.get_den() == 1) continue;
        Rational frac = x - floor_q(x);
        Rational dist = abs(frac - Rational(1, 2));
        if (pick == n || dist < best_dist) {
          pick = v;
          best_dist = dist;
        }
      }
      if (pick == n) {
        best_value = r.value;
        best_point = std::move(r.point);
        continue;
      }
      const Rational& x = r.point.at(lp.names[pick]);
      Node up = node;
      up.lower[pick] = ceil_q(x);
      Node down = std::move(node);
      down.upper[pick] = floor_q(x);
      // Lower branch is explored first.
      stack.push_back(std::move(up));
      stack.push_back(std::move(down));
    }
  }
};

IlpResult finish(const Search& s) {
  IlpResult result;
  result.nodes = s.nodes;
  if (!s.best_value) {
    result.status = IlpResult::Status::kInfeasible;
    return result;
  }
  result.status = IlpResult::Status::kOptimal;
  result.value = to_int64(*s.best_value);
  for (const auto& [name, q] : s.best_point) result.valuation.emplace(name, to_int64(q));
  return result;
}

// An integral equality whose coefficient gcd does not divide the right-hand
// side has no integer solution.
bool gcd_infeasible(const LinearSystem& s) {
  const auto& cs = s.constraints();
  for (size_t i = 0; i + 1 < cs.size(); ++i) {
    const Constraint& c = cs[i];
    if (c.lhs.is_constant() || !(cs[i + 1].lhs == -c.lhs && cs[i + 1].rhs == -c.rhs)) continue;
    mpz_class g = 0;
    bool integral = c.rhs.get_den() == 1;
    for (const auto& [name, q] : c.lhs.terms()) {
      if (q.get_den() != 1) integral = false;
      g = gcd(g, q.get_num());
    }
    if (integral && g != 0 && c.rhs.get_num() % g != 0) return true;
  }
  return false;
}

}  // namespace

IlpResult solve_ilp(const Ilp& p, const IlpOptions& options) {
  if (!objective_is_integral(p.objective)) {
    throw Error(ErrorKind::kValidation, "ILP objective coefficients must be integers");
  }
  std::set<std::string> extra;
  for (const auto& [name, c] : p.objective.terms()) extra.insert(name);
  LpProblem lp(p.system, extra);

  LpResult root = lp.maximize(p.objective);
  if (root.status == LpResult::Status::kInfeasible || gcd_infeasible(p.system)) {
    IlpResult r;
    r.status = IlpResult::Status::kInfeasible;
    r.nodes = 1;
    return r;
  }
  if (root.status == LpResult::Status::kUnbounded) {
    // A rational polyhedron with an unbounded relaxation and one integer
    // point has unbounded integer optimum.
    LinExpr zero;
    Search feas(lp, zero, options, true);
    feas.run();
    IlpResult r;
    r.nodes = feas.nodes;
    r.status = feas.best_value ? IlpResult::Status::kUnbounded : IlpResult::Status::kInfeasible;
    return r;
  }
  Search search(lp, p.objective, options, true);
  search.run();
  IlpResult result = finish(search);
  if (result.status == IlpResult::Status::kOptimal && !satisfies(result.valuation, p.system)) {
    throw Error(ErrorKind::kValidation, "internal: ILP optimum violates its system");
  }
  return result;
}

bool entails(const LinearSystem& s1, const LinearSystem& s2) {
  std::set<std::string> extra = s2.variables();
  LpProblem lp(s1, extra);
  for (const auto& c : s2.constraints()) {
    LpResult r = lp.maximize(c.lhs);
    if (r.status == LpResult::Status::kInfeasible) return true;
    if (r.status == LpResult::Status::kUnbounded) return false;
    if (r.value > c.rhs) return false;
  }
  return true;
}

Bounds bounds(const LinearSystem& s, const std::string& var) {
  LpProblem lp(s, {var});
  Bounds b;
  LpResult hi = lp.maximize(LinExpr::var(var));
  if (hi.status == LpResult::Status::kInfeasible) {
    b.infeasible = true;
    return b;
  }
  if (hi.status == LpResult::Status::kOptimal) b.upper = to_int64(floor_q(hi.value));
  LpResult lo = lp.maximize(LinExpr::var(var, -1));
  if (lo.status == LpResult::Status::kOptimal) b.lower = to_int64(ceil_q(-lo.value));
  return b;
}

}  // namespace wcetw::linear
