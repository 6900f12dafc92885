#include <cctype>
#include <map>
#include <sstream>
#include <utility>

#include "wcetw/error.h"
#include "wcetw/linear.h"

namespace wcetw::linear {

LinExpr LinExpr::var(const std::string& name, Rational coeff) {
  LinExpr e;
  e.add(name, coeff);
  return e;
}

LinExpr& LinExpr::add(const std::string& name, const Rational& coeff) {
  if (coeff == 0) return *this;
  auto [it, inserted] = terms_.emplace(name, coeff);
  if (!inserted) {
    it->second += coeff;
    if (it->second == 0) terms_.erase(it);
  }
  return *this;
}

LinExpr& LinExpr::operator+=(const LinExpr& other) {
  for (const auto& [name, c] : other.terms_) add(name, c);
  constant_ += other.constant_;
  return *this;
}

LinExpr& LinExpr::operator-=(const LinExpr& other) {
  for (const auto& [name, c] : other.terms_) add(name, -c);
  constant_ -= other.constant_;
  return *this;
}

LinExpr& LinExpr::operator*=(const Rational& factor) {
  if (factor == 0) {
    terms_.clear();
    constant_ = 0;
    return *this;
  }
  for (auto& [name, c] : terms_) c *= factor;
  constant_ *= factor;
  return *this;
}

LinExpr LinExpr::operator-() const {
  LinExpr e = *this;
  e *= -1;
  return e;
}

Rational LinExpr::coeff(const std::string& name) const {
  auto it = terms_.find(name);
  return it == terms_.end() ? Rational(0) : it->second;
}

Rational LinExpr::evaluate(const Valuation& k) const {
  Rational sum = constant_;
  for (const auto& [name, c] : terms_) {
    auto it = k.find(name);
    if (it == k.end()) throw Error(ErrorKind::kMissingVariable, "no value for variable " + name);
    sum += c * Rational(static_cast<long>(it->second));
  }
  return sum;
}

Rational LinExpr::evaluate(const std::map<std::string, Rational>& k) const {
  Rational sum = constant_;
  for (const auto& [name, c] : terms_) {
    auto it = k.find(name);
    if (it == k.end()) throw Error(ErrorKind::kMissingVariable, "no value for variable " + name);
    sum += c * it->second;
  }
  return sum;
}

namespace {

void append_term(std::ostringstream& out, bool first, const Rational& c, const std::string* name) {
  Rational a = abs(c);
  if (first) {
    if (c < 0) out << "-";
  } else {
    out << (c < 0 ? " - " : " + ");
  }
  if (name == nullptr) {
    out << a.get_str();
  } else if (a == 1) {
    out << *name;
  } else {
    out << a.get_str() << "*" << *name;
  }
}

}  // namespace

std::string LinExpr::to_string() const {
  std::ostringstream out;
  bool first = true;
  for (const auto& [name, c] : terms_) {
    append_term(out, first, c, &name);
    first = false;
  }
  if (constant_ != 0 || first) append_term(out, first, constant_, nullptr);
  return out.str();
}

LinExpr operator+(LinExpr a, const LinExpr& b) { return a += b; }
LinExpr operator-(LinExpr a, const LinExpr& b) { return a -= b; }
LinExpr operator*(const Rational& f, LinExpr a) { return a *= f; }

void LinearSystem::add(const LinExpr& lhs, Relation rel, const LinExpr& rhs) {
  LinExpr diff = lhs - rhs;
  Rational bound = -diff.constant();
  diff.set_constant(0);
  switch (rel) {
    case Relation::kLessEq:
      constraints_.push_back({diff, bound});
      break;
    case Relation::kGreaterEq:
      constraints_.push_back({-diff, -bound});
      break;
    case Relation::kEqual:
      constraints_.push_back({diff, bound});
      constraints_.push_back({-diff, -bound});
      break;
  }
}

void LinearSystem::append(const LinearSystem& other) {
  constraints_.insert(constraints_.end(), other.constraints_.begin(), other.constraints_.end());
}

std::set<std::string> LinearSystem::variables() const {
  std::set<std::string> vars;
  for (const auto& c : constraints_) {
    for (const auto& [name, coeff] : c.lhs.terms()) vars.insert(name);
  }
  return vars;
}

std::vector<std::string> LinearSystem::to_lines() const {
  std::vector<std::string> lines;
  const size_t n = constraints_.size();
  std::vector<bool> used(n, false);
  for (size_t i = 0; i < n; ++i) {
    if (used[i]) continue;
    const Constraint& c = constraints_[i];
    bool paired = false;
    if (i + 1 < n && !used[i + 1]) {
      const Constraint& d = constraints_[i + 1];
      if (d.lhs == -c.lhs && d.rhs == -c.rhs) paired = true;
    }
    if (paired) {
      used[i + 1] = true;
      lines.push_back(c.lhs.to_string() + " = " + c.rhs.get_str());
    } else {
      lines.push_back(c.lhs.to_string() + " <= " + c.rhs.get_str());
    }
  }
  return lines;
}

bool is_valid_variable_name(std::string_view name) {
  if (name.empty()) return false;
  if (!(std::isalpha(static_cast<unsigned char>(name[0])) || name[0] == '_')) return false;
  for (char ch : name) {
    if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '_')) return false;
  }
  return true;
}

namespace {

class ConstraintParser {
 public:
  explicit ConstraintParser(std::string_view text) : text_(text) {}

  LinearSystem parse() {
    LinExpr lhs = parse_expr();
    skip_ws();
    Relation rel;
    if (accept("<=")) {
      rel = Relation::kLessEq;
    } else if (accept(">=")) {
      rel = Relation::kGreaterEq;
    } else if (accept("=")) {
      rel = Relation::kEqual;
    } else {
      fail("expected <=, >= or =");
    }
    LinExpr rhs = parse_expr();
    skip_ws();
    if (pos_ != text_.size()) fail("trailing input");
    LinearSystem s;
    s.add(lhs, rel, rhs);
    return s;
  }

  LinExpr whole_expr() {
    LinExpr e = parse_expr();
    skip_ws();
    if (pos_ != text_.size()) fail("trailing input");
    return e;
  }

 private:
  LinExpr parse_expr() {
    LinExpr e;
    skip_ws();
    int sign = 1;
    if (accept("-")) sign = -1;
    else accept("+");
    parse_term(e, sign);
    while (true) {
      skip_ws();
      if (accept("+")) {
        parse_term(e, 1);
      } else if (accept("-")) {
        parse_term(e, -1);
      } else {
        break;
      }
    }
    return e;
  }

  void parse_term(LinExpr& e, int sign) {
    skip_ws();
    if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      Rational value(std::string(text_.substr(start, pos_ - start)));
      value *= sign;
      skip_ws();
      if (accept("*")) {
        skip_ws();
        e.add(parse_ident(), value);
      } else {
        e += LinExpr(value);
      }
      return;
    }
    e.add(parse_ident(), sign);
  }

  std::string parse_ident() {
    size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
    }
    std::string name(text_.substr(start, pos_ - start));
    if (!is_valid_variable_name(name)) fail("expected variable or integer");
    return name;
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(std::string_view tok) {
    if (text_.substr(pos_, tok.size()) == tok) {
      pos_ += tok.size();
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& what) {
    throw Error(ErrorKind::kParse,
                "constraint \"" + std::string(text_) + "\" at column " + std::to_string(pos_) + ": " + what);
  }

  std::string_view text_;
  size_t pos_ = 0;
};

}  // namespace

LinearSystem parse_constraint(std::string_view text) { return ConstraintParser(text).parse(); }

LinExpr parse_expr(std::string_view text) { return ConstraintParser(text).whole_expr(); }

LinearSystem parse_system(const std::vector<std::string>& lines) {
  LinearSystem s;
  for (const auto& line : lines) s.append(parse_constraint(line));
  return s;
}

bool satisfies(const Valuation& k, const LinearSystem& s) {
  bool ok = true;
  for (const auto& c : s.constraints()) {
    // Evaluate every constraint so a missing variable is always reported.
    if (c.lhs.evaluate(k) > c.rhs) ok = false;
  }
  return ok;
}

Rational floor_q(const Rational& q) {
  mpz_class r;
  mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return Rational(r);
}

Rational ceil_q(const Rational& q) {
  mpz_class r;
  mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
  return Rational(r);
}

std::int64_t to_int64(const Rational& q) {
  if (q.get_den() != 1 || !q.get_num().fits_slong_p()) {
    throw Error(ErrorKind::kValidation, "value " + q.get_str() + " is not a 64-bit integer");
  }
  return q.get_num().get_si();
}

}  // namespace wcetw::linear
