#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace wcetw::linear {

using Rational = mpq_class;
using Valuation = std::map<std::string, std::int64_t>;

// Sparse affine expression: sum of coefficient * variable plus a constant.
class LinExpr {
 public:
  LinExpr() = default;
  explicit LinExpr(Rational constant) : constant_(std::move(constant)) {}
  static LinExpr var(const std::string& name, Rational coeff = 1);

  LinExpr& add(const std::string& name, const Rational& coeff);
  LinExpr& operator+=(const LinExpr& other);
  LinExpr& operator-=(const LinExpr& other);
  LinExpr& operator*=(const Rational& factor);
  LinExpr operator-() const;

  const std::map<std::string, Rational>& terms() const { return terms_; }
  const Rational& constant() const { return constant_; }
  void set_constant(Rational c) { constant_ = std::move(c); }
  Rational coeff(const std::string& name) const;
  bool is_constant() const { return terms_.empty(); }

  // Throws Error(kMissingVariable) when a variable is absent from k.
  Rational evaluate(const Valuation& k) const;
  Rational evaluate(const std::map<std::string, Rational>& k) const;

  std::string to_string() const;
  bool operator==(const LinExpr& other) const = default;

 private:
  std::map<std::string, Rational> terms_;
  Rational constant_;
};

LinExpr operator+(LinExpr a, const LinExpr& b);
LinExpr operator-(LinExpr a, const LinExpr& b);
LinExpr operator*(const Rational& f, LinExpr a);

enum class Relation { kLessEq, kEqual, kGreaterEq };

// Normalized constraint: lhs <= rhs, lhs has no constant part.
struct Constraint {
  LinExpr lhs;
  Rational rhs;
  bool operator==(const Constraint&) const = default;
};

class LinearSystem {
 public:
  LinearSystem() = default;

  void add(const LinExpr& lhs, Relation rel, const LinExpr& rhs);
  void add_le(const LinExpr& lhs, const Rational& rhs) { add(lhs, Relation::kLessEq, LinExpr(rhs)); }
  void add_ge(const LinExpr& lhs, const Rational& rhs) { add(lhs, Relation::kGreaterEq, LinExpr(rhs)); }
  void add_eq(const LinExpr& lhs, const Rational& rhs) { add(lhs, Relation::kEqual, LinExpr(rhs)); }
  void append(const LinearSystem& other);

  const std::vector<Constraint>& constraints() const { return constraints_; }
  bool empty() const { return constraints_.empty(); }
  std::set<std::string> variables() const;

  // Renders one constraint per line; paired <= constraints print as "=".
  std::vector<std::string> to_lines() const;

  bool operator==(const LinearSystem&) const = default;

 private:
  std::vector<Constraint> constraints_;
};

// Parses "2*x - y + 3 <= 4*z + 1" style constraints.
LinearSystem parse_constraint(std::string_view text);
LinExpr parse_expr(std::string_view text);
LinearSystem parse_system(const std::vector<std::string>& lines);
bool is_valid_variable_name(std::string_view name);

bool satisfies(const Valuation& k, const LinearSystem& s);

struct LpResult {
  enum class Status { kOptimal, kInfeasible, kUnbounded };
  Status status = Status::kInfeasible;
  Rational value;
  std::map<std::string, Rational> point;
};

// Exact rational simplex over the relaxation; variables are free unless
// bounded by constraints.
LpResult lp_maximize(const LinearSystem& s, const LinExpr& objective);

struct Ilp {
  LinExpr objective;
  LinearSystem system;
};

struct IlpOptions {
  std::int64_t node_limit = 1'000'000;
};

struct IlpResult {
  enum class Status { kOptimal, kInfeasible, kUnbounded };
  Status status = Status::kInfeasible;
  std::int64_t value = 0;
  Valuation valuation;
  std::int64_t nodes = 0;
};

// Throws Error(kResourceExceeded) past the node limit.
IlpResult solve_ilp(const Ilp& p, const IlpOptions& options = {});

bool entails(const LinearSystem& s1, const LinearSystem& s2);

struct Bounds {
  std::optional<std::int64_t> lower;
  std::optional<std::int64_t> upper;
  bool infeasible = false;
};

Bounds bounds(const LinearSystem& s, const std::string& var);

// floor/ceil for exact rationals.
Rational floor_q(const Rational& q);
Rational ceil_q(const Rational& q);
std::int64_t to_int64(const Rational& q);

}  // namespace wcetw::linear
