#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "wcetw/linear.h"

namespace wcetw::linear {

// A system pre-split into single-variable bounds, equalities and general
// inequalities, so repeated solves with different bounds or objectives
// skip the parsing work.
struct LpProblem {
  struct Row {
    std::vector<Rational> a;
    Rational b;
  };

  LpProblem(const LinearSystem& s, const std::set<std::string>& extra_vars);

  LpResult maximize(const LinExpr& objective,
                    const std::vector<std::optional<Rational>>* extra_lower = nullptr,
                    const std::vector<std::optional<Rational>>* extra_upper = nullptr) const;

  void tighten(size_t v, const std::optional<Rational>& lo, const std::optional<Rational>& up);

  std::vector<std::string> names;
  std::map<std::string, size_t> index;
  std::vector<std::optional<Rational>> lower;
  std::vector<std::optional<Rational>> upper;
  std::vector<Row> eqs;
  std::vector<Row> les;
  bool trivially_infeasible = false;
};

}  // namespace wcetw::linear
