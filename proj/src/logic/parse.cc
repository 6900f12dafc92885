#include <cctype>

#include "wcetw/error.h"
#include "wcetw/logic.h"

namespace wcetw::logic {
namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Predicate predicate() {
    Predicate p;
    p.name = ident();
    expect("(");
    if (!peek(")")) {
      p.params.push_back(ident());
      while (accept(",")) p.params.push_back(ident());
    }
    expect(")");
    expect(":=");
    p.body = formula();
    end();
    return normalize(std::move(p));
  }

  NodePtr whole_formula() {
    NodePtr n = formula();
    end();
    return n;
  }

 private:
  NodePtr formula() {
    skip();
    if (keyword("exists") || keyword("forall")) return quantified();
    return disjunction();
  }

  NodePtr quantified() {
    bool is_exists = keyword("exists");
    pos_ += 6;
    std::vector<std::string> vars{ident()};
    while (accept(",")) vars.push_back(ident());
    expect(":");
    NodePtr body = formula();
    for (auto it = vars.rbegin(); it != vars.rend(); ++it) body = is_exists ? exists(*it, body) : forall(*it, body);
    return body;
  }

  NodePtr disjunction() {
    std::vector<NodePtr> parts{conjunction()};
    while (accept("|")) parts.push_back(conjunction());
    return disj(std::move(parts));
  }

  NodePtr conjunction() {
    std::vector<NodePtr> parts{unary()};
    while (accept("&")) parts.push_back(unary());
    return conj(std::move(parts));
  }

  NodePtr unary() {
    skip();
    if (peek("!") && !peek("!=")) {
      ++pos_;
      return neg(unary());
    }
    if (keyword("exists") || keyword("forall")) return quantified();
    return primary();
  }

  NodePtr primary() {
    if (accept("(")) {
      NodePtr n = formula();
      expect(")");
      return n;
    }
    std::string name = ident();
    if (name == "true") return lit(true);
    if (name == "false") return lit(false);
    if (accept("(")) {
      std::vector<std::string> args{ident()};
      while (accept(",")) args.push_back(ident());
      expect(")");
      if (args.size() == 1) return cls(name, args[0]);
      if (args.size() == 2) return rel(name, args[0], args[1]);
      fail("atoms take one or two arguments");
    }
    if (accept("!=")) return neg(eq(name, ident()));
    if (accept("=")) return eq(name, ident());
    fail("expected atom");
  }

  std::string ident() {
    skip();
    size_t start = pos_;
    while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
    }
    if (start == pos_ || std::isdigit(static_cast<unsigned char>(text_[start]))) fail("expected identifier");
    return std::string(text_.substr(start, pos_ - start));
  }

  bool keyword(std::string_view kw) {
    skip();
    if (text_.substr(pos_, kw.size()) != kw) return false;
    size_t after = pos_ + kw.size();
    return after >= text_.size() || !(std::isalnum(static_cast<unsigned char>(text_[after])) || text_[after] == '_');
  }

  void skip() {
    while (pos_ < text_.size()) {
      if (std::isspace(static_cast<unsigned char>(text_[pos_]))) {
        ++pos_;
      } else if (text_[pos_] == '#') {
        while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  bool peek(std::string_view tok) {
    skip();
    return text_.substr(pos_, tok.size()) == tok;
  }

  bool accept(std::string_view tok) {
    if (!peek(tok)) return false;
    pos_ += tok.size();
    return true;
  }

  void expect(std::string_view tok) {
    if (!accept(tok)) fail("expected \"" + std::string(tok) + "\"");
  }

  void end() {
    skip();
    if (pos_ != text_.size()) fail("trailing input");
  }

  [[noreturn]] void fail(const std::string& what) {
    size_t line = 1;
    for (size_t i = 0; i < pos_ && i < text_.size(); ++i) line += text_[i] == '\n';
    throw Error(ErrorKind::kParse, "predicate line " + std::to_string(line) + ": " + what);
  }

  std::string_view text_;
  size_t pos_ = 0;
};

}  // namespace

Predicate parse_predicate(std::string_view text) { return Parser(text).predicate(); }

NodePtr parse_formula(std::string_view text) { return Parser(text).whole_formula(); }

}  // namespace wcetw::logic
