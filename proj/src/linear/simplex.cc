#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "lp_internal.h"
#include "wcetw/error.h"
#include "wcetw/linear.h"

namespace wcetw::linear {
namespace {

using Vec = std::vector<Rational>;

// Dense tableau for max c.y s.t. A y <= b, y >= 0.
class Tableau {
 public:
  Tableau(std::vector<Vec> a, Vec b, Vec c)
      : m_(a.size()), ny_(c.size()), rows_(std::move(a)), rhs_(std::move(b)), cost_(std::move(c)) {}

  enum class Outcome { kOptimal, kInfeasible, kUnbounded };

  Outcome run() {
    // Slack columns follow the structural ones; column ny_+m_ is the
    // phase-one artificial.
    cols_ = ny_ + m_ + 1;
    art_ = ny_ + m_;
    for (size_t i = 0; i < m_; ++i) {
      rows_[i].resize(cols_);
      rows_[i][ny_ + i] = 1;
      rows_[i][art_] = -1;
    }
    basis_.resize(m_);
    for (size_t i = 0; i < m_; ++i) basis_[i] = ny_ + i;
    obj_.assign(cols_, Rational(0));
    obj_const_ = 0;

    size_t worst = m_;
    for (size_t i = 0; i < m_; ++i) {
      if (rhs_[i] < 0 && (worst == m_ || rhs_[i] < rhs_[worst])) worst = i;
    }
    if (worst != m_) {
      // Phase one: maximize -x0.
      obj_[art_] = -1;
      pivot(worst, art_);
      if (iterate(true) != Outcome::kOptimal) return Outcome::kInfeasible;
      if (obj_const_ < 0) return Outcome::kInfeasible;
      for (size_t i = 0; i < m_; ++i) {
        if (basis_[i] != art_) continue;
        size_t enter = cols_;
        for (size_t j = 0; j < art_; ++j) {
          if (rows_[i][j] != 0) {
            enter = j;
            break;
          }
        }
        if (enter != cols_) {
          pivot(i, enter);
        } else {
          // Degenerate row holding only the artificial: drop it.
          drop_row(i);
          --i;
        }
      }
    }
    for (size_t i = 0; i < m_; ++i) rows_[i][art_] = 0;

    obj_.assign(cols_, Rational(0));
    obj_const_ = 0;
    for (size_t j = 0; j < ny_; ++j) obj_[j] = cost_[j];
    for (size_t i = 0; i < m_; ++i) {
      const size_t bj = basis_[i];
      if (obj_[bj] == 0) continue;
      Rational f = obj_[bj];
      for (size_t j = 0; j < cols_; ++j) {
        if (rows_[i][j] != 0) obj_[j] -= f * rows_[i][j];
      }
      obj_const_ += f * rhs_[i];
    }
    return iterate(false);
  }

  Rational value() const { return obj_const_; }

  Vec solution() const {
    Vec y(ny_, Rational(0));
    for (size_t i = 0; i < m_; ++i) {
      if (basis_[i] < ny_) y[basis_[i]] = rhs_[i];
    }
    return y;
  }

 private:
  Outcome iterate(bool phase_one) {
    while (true) {
      // Bland's rule: lowest-index improving column.
      size_t enter = cols_;
      for (size_t j = 0; j < cols_; ++j) {
        if (!phase_one && j == art_) continue;
        if (obj_[j] > 0) {
          enter = j;
          break;
        }
      }
      if (enter == cols_) return Outcome::kOptimal;
      size_t leave = m_;
      Rational best;
      for (size_t i = 0; i < m_; ++i) {
        if (rows_[i][enter] <= 0) continue;
        Rational ratio = rhs_[i] / rows_[i][enter];
        if (leave == m_ || ratio < best || (ratio == best && basis_[i] < basis_[leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (leave == m_) return Outcome::kUnbounded;
      pivot(leave, enter);
    }
  }

  void pivot(size_t r, size_t e) {
    Vec& pr = rows_[r];
    if (pr[e] != 1) {
      Rational inv = 1 / pr[e];
      for (size_t j = 0; j < cols_; ++j) {
        if (pr[j] != 0) pr[j] *= inv;
      }
      rhs_[r] *= inv;
    }
    nz_.clear();
    for (size_t j = 0; j < cols_; ++j) {
      if (pr[j] != 0) nz_.push_back(j);
    }
    Rational f;
    for (size_t i = 0; i < m_; ++i) {
      if (i == r || rows_[i][e] == 0) continue;
      f = rows_[i][e];
      Vec& row = rows_[i];
      for (size_t j : nz_) row[j] -= f * pr[j];
      rhs_[i] -= f * rhs_[r];
    }
    if (obj_[e] != 0) {
      f = obj_[e];
      for (size_t j : nz_) obj_[j] -= f * pr[j];
      obj_const_ += f * rhs_[r];
    }
    basis_[r] = e;
  }

  void drop_row(size_t i) {
    rows_.erase(rows_.begin() + static_cast<std::ptrdiff_t>(i));
    rhs_.erase(rhs_.begin() + static_cast<std::ptrdiff_t>(i));
    basis_.erase(basis_.begin() + static_cast<std::ptrdiff_t>(i));
    --m_;
  }

  size_t m_;
  size_t ny_;
  size_t cols_ = 0;
  size_t art_ = 0;
  std::vector<Vec> rows_;
  Vec rhs_;
  Vec cost_;
  Vec obj_;
  Rational obj_const_;
  std::vector<size_t> basis_;
  std::vector<size_t> nz_;
};

struct DenseRow {
  Vec a;
  Rational b;
};

// Substitutes x_p = d0 + sum_j d_j x_j into a.x (<= or =) b.
void substitute(Vec& a, Rational& b, size_t p, const Vec& d, const Rational& d0) {
  if (a[p] == 0) return;
  Rational f = a[p];
  a[p] = 0;
  for (size_t j = 0; j < a.size(); ++j) {
    if (d[j] != 0) a[j] += f * d[j];
  }
  b -= f * d0;
}

}  // namespace

LpProblem::LpProblem(const LinearSystem& s, const std::set<std::string>& extra_vars) {
  std::set<std::string> vars = s.variables();
  vars.insert(extra_vars.begin(), extra_vars.end());
  names.assign(vars.begin(), vars.end());
  for (size_t i = 0; i < names.size(); ++i) index.emplace(names[i], i);
  const size_t n = names.size();
  lower.assign(n, std::nullopt);
  upper.assign(n, std::nullopt);

  const auto& cs = s.constraints();
  auto dense = [&](const LinExpr& e) {
    Vec a(n, Rational(0));
    for (const auto& [name, c] : e.terms()) a[index.at(name)] = c;
    return a;
  };
  for (size_t i = 0; i < cs.size(); ++i) {
    const Constraint& c = cs[i];
    bool pair = i + 1 < cs.size() && cs[i + 1].lhs == -c.lhs && cs[i + 1].rhs == -c.rhs &&
                !c.lhs.is_constant();
    if (c.lhs.is_constant()) {
      if (c.rhs < 0) trivially_infeasible = true;
      continue;
    }
    if (c.lhs.terms().size() == 1) {
      const auto& [name, a] = *c.lhs.terms().begin();
      size_t v = index.at(name);
      Rational q = c.rhs / a;
      if (pair) {
        tighten(v, q, q);
        ++i;
      } else if (a > 0) {
        tighten(v, std::nullopt, q);
      } else {
        tighten(v, q, std::nullopt);
      }
      continue;
    }
    if (pair) {
      eqs.push_back({dense(c.lhs), c.rhs});
      ++i;
    } else {
      les.push_back({dense(c.lhs), c.rhs});
    }
  }
}

void LpProblem::tighten(size_t v, const std::optional<Rational>& lo, const std::optional<Rational>& up) {
  if (lo && (!lower[v] || *lo > *lower[v])) lower[v] = *lo;
  if (up && (!upper[v] || *up < *upper[v])) upper[v] = *up;
}

LpResult LpProblem::maximize(const LinExpr& objective, const std::vector<std::optional<Rational>>* extra_lower,
                             const std::vector<std::optional<Rational>>* extra_upper) const {
  LpResult result;
  result.status = LpResult::Status::kInfeasible;
  if (trivially_infeasible) return result;
  const size_t n = names.size();

  std::vector<std::optional<Rational>> lo = lower;
  std::vector<std::optional<Rational>> up = upper;
  if (extra_lower != nullptr) {
    for (size_t v = 0; v < n; ++v) {
      const auto& q = (*extra_lower)[v];
      if (q && (!lo[v] || *q > *lo[v])) lo[v] = q;
    }
  }
  if (extra_upper != nullptr) {
    for (size_t v = 0; v < n; ++v) {
      const auto& q = (*extra_upper)[v];
      if (q && (!up[v] || *q < *up[v])) up[v] = q;
    }
  }
  for (size_t v = 0; v < n; ++v) {
    if (lo[v] && up[v] && *lo[v] > *up[v]) return result;
  }

  Vec c(n, Rational(0));
  Rational c0 = objective.constant();
  for (const auto& [name, q] : objective.terms()) {
    auto it = index.find(name);
    if (it == index.end()) {
      // Variable unconstrained by the system: unbounded unless zero.
      result.status = LpResult::Status::kUnbounded;
      return result;
    }
    c[it->second] = q;
  }

  std::vector<DenseRow> eq;
  std::vector<DenseRow> le;
  eq.reserve(eqs.size());
  for (const auto& r : eqs) eq.push_back({r.a, r.b});
  le.reserve(les.size());
  for (const auto& r : les) le.push_back({r.a, r.b});

  // Fixed variables become constants.
  enum class Role { kActive, kFixed, kEliminated };
  std::vector<Role> role(n, Role::kActive);
  std::vector<Rational> fixed(n);
  std::vector<std::pair<size_t, std::pair<Vec, Rational>>> elim;  // x_p = d0 + d.x
  Vec zero(n, Rational(0));
  for (size_t v = 0; v < n; ++v) {
    if (lo[v] && up[v] && *lo[v] == *up[v]) {
      role[v] = Role::kFixed;
      fixed[v] = *lo[v];
      for (auto& r : eq) substitute(r.a, r.b, v, zero, fixed[v]);
      for (auto& r : le) substitute(r.a, r.b, v, zero, fixed[v]);
      if (c[v] != 0) {
        c0 += c[v] * fixed[v];
        c[v] = 0;
      }
    }
  }

  for (size_t k = 0; k < eq.size(); ++k) {
    DenseRow& row = eq[k];
    size_t p = n;
    int best_rank = 3;
    for (size_t j = 0; j < n; ++j) {
      if (row.a[j] == 0) continue;
      int rank = (lo[j] ? 1 : 0) + (up[j] ? 1 : 0);
      if (rank < best_rank) {
        best_rank = rank;
        p = j;
      }
    }
    if (p == n) {
      if (row.b != 0) return result;
      continue;
    }
    Vec d(n, Rational(0));
    Rational inv = 1 / row.a[p];
    for (size_t j = 0; j < n; ++j) {
      if (j != p && row.a[j] != 0) d[j] = -row.a[j] * inv;
    }
    Rational d0 = row.b * inv;
    for (size_t q = k + 1; q < eq.size(); ++q) substitute(eq[q].a, eq[q].b, p, d, d0);
    for (auto& r : le) substitute(r.a, r.b, p, d, d0);
    for (auto& e : elim) {
      Vec& rd = e.second.first;
      if (rd[p] == 0) continue;
      Rational f = rd[p];
      rd[p] = 0;
      for (size_t j = 0; j < n; ++j) {
        if (d[j] != 0) rd[j] += f * d[j];
      }
      e.second.second += f * d0;
    }
    // Objective: c.x with x_p replaced.
    if (c[p] != 0) {
      Rational f = c[p];
      c[p] = 0;
      for (size_t j = 0; j < n; ++j) {
        if (d[j] != 0) c[j] += f * d[j];
      }
      c0 += f * d0;
    }
    // Bounds of x_p turn into rows over the remaining variables.
    if (lo[p]) {
      Vec neg(n, Rational(0));
      for (size_t j = 0; j < n; ++j) {
        if (d[j] != 0) neg[j] = -d[j];
      }
      le.push_back({std::move(neg), d0 - *lo[p]});
    }
    if (up[p]) le.push_back({d, *up[p] - d0});
    role[p] = Role::kEliminated;
    elim.emplace_back(p, std::make_pair(std::move(d), std::move(d0)));
  }
  // Map remaining active variables to nonnegative columns.
  struct Column {
    size_t var;
    int sign;
  };
  std::vector<Column> columns;
  std::vector<Rational> shift(n, Rational(0));
  std::vector<int> col_pos(n, -1), col_neg(n, -1);
  for (size_t v = 0; v < n; ++v) {
    if (role[v] != Role::kActive) continue;
    if (lo[v]) {
      shift[v] = *lo[v];
      col_pos[v] = static_cast<int>(columns.size());
      columns.push_back({v, 1});
    } else if (up[v]) {
      shift[v] = *up[v];
      col_neg[v] = static_cast<int>(columns.size());
      columns.push_back({v, -1});
    } else {
      col_pos[v] = static_cast<int>(columns.size());
      columns.push_back({v, 1});
      col_neg[v] = static_cast<int>(columns.size());
      columns.push_back({v, -1});
    }
  }
  const size_t ny = columns.size();

  std::vector<Vec> a;
  Vec b;
  auto add_row = [&](const Vec& coeffs, Rational rhs) {
    Vec row(ny, Rational(0));
    bool any = false;
    for (size_t v = 0; v < n; ++v) {
      if (coeffs[v] == 0) continue;
      rhs -= coeffs[v] * shift[v];
      if (col_pos[v] >= 0) row[col_pos[v]] = coeffs[v];
      if (col_neg[v] >= 0) row[col_neg[v]] = -coeffs[v];
      any = true;
    }
    if (!any) {
      return rhs >= 0;
    }
    a.push_back(std::move(row));
    b.push_back(std::move(rhs));
    return true;
  };
  for (const auto& r : le) {
    if (!add_row(r.a, r.b)) return result;
  }
  for (size_t v = 0; v < n; ++v) {
    if (role[v] == Role::kActive && lo[v] && up[v]) {
      Vec unit(n, Rational(0));
      unit[v] = 1;
      if (!add_row(unit, *up[v])) return result;
    }
  }
  Vec cy(ny, Rational(0));
  Rational cconst = c0;
  for (size_t v = 0; v < n; ++v) {
    if (c[v] == 0) continue;
    cconst += c[v] * shift[v];
    if (col_pos[v] >= 0) cy[col_pos[v]] = c[v];
    if (col_neg[v] >= 0) cy[col_neg[v]] = -c[v];
  }

  Tableau t(std::move(a), std::move(b), std::move(cy));
  auto outcome = t.run();
  if (outcome == Tableau::Outcome::kInfeasible) return result;
  if (outcome == Tableau::Outcome::kUnbounded) {
    result.status = LpResult::Status::kUnbounded;
    return result;
  }
  Vec y = t.solution();
  std::vector<Rational> x(n, Rational(0));
  for (size_t v = 0; v < n; ++v) {
    if (role[v] == Role::kFixed) {
      x[v] = fixed[v];
    } else if (role[v] == Role::kActive) {
      x[v] = shift[v];
      if (col_pos[v] >= 0) x[v] += y[col_pos[v]];
      if (col_neg[v] >= 0) x[v] -= y[col_neg[v]];
    }
  }
  for (auto it = elim.rbegin(); it != elim.rend(); ++it) {
    const auto& [p, expr] = *it;
    Rational val = expr.second;
    for (size_t j = 0; j < n; ++j) {
      if (expr.first[j] != 0) val += expr.first[j] * x[j];
    }
    x[p] = val;
  }
  result.status = LpResult::Status::kOptimal;
  result.value = t.value() + cconst;
  for (size_t v = 0; v < n; ++v) result.point.emplace(names[v], x[v]);
  return result;
}

LpResult lp_maximize(const LinearSystem& s, const LinExpr& objective) {
  std::set<std::string> extra;
  for (const auto& [name, c] : objective.terms()) extra.insert(name);
  return LpProblem(s, extra).maximize(objective);
}

}  // namespace wcetw::linear
