#include "wcetw/model.h"

#include <algorithm>
#include <set>
#include <sstream>

#include "wcetw/error.h"

namespace wcetw::model {

const char* truth_name(Truth t) {
  switch (t) {
    case Truth::kTrue: return "true";
    case Truth::kFalse: return "false";
    case Truth::kUnknown: return "unknown";
  }
  return "?";
}

Truth parse_truth(std::string_view text) {
  if (text == "true") return Truth::kTrue;
  if (text == "false") return Truth::kFalse;
  if (text == "unknown") return Truth::kUnknown;
  throw Error(ErrorKind::kParse, "bad truth value \"" + std::string(text) + "\"");
}

Signature::Signature(std::vector<std::string> classes, std::vector<std::string> relations)
    : classes_(std::move(classes)), relations_(std::move(relations)) {
  names_ = {"exists", "equals"};
  std::set<std::string> seen;
  for (const auto* group : {&classes_, &relations_}) {
    for (const auto& n : *group) {
      if (n.empty() || n == "exists" || n == "equals" || !seen.insert(n).second) {
        throw Error(ErrorKind::kValidation, "invalid or duplicate symbol name \"" + n + "\"");
      }
      names_.push_back(n);
    }
  }
  first_relation_ = 2 + static_cast<SymbolId>(classes_.size());
}

std::optional<SymbolId> Signature::find(std::string_view name) const {
  for (SymbolId s = 2; s < size(); ++s) {
    if (names_[s] == name) return s;
  }
  return std::nullopt;
}

SymbolId Signature::require(std::string_view name, int arity) const {
  auto s = find(name);
  if (!s) throw Error(ErrorKind::kUnknownSymbol, "unknown symbol \"" + std::string(name) + "\"");
  if (this->arity(*s) != arity) {
    throw Error(ErrorKind::kSymbolMismatch, "symbol \"" + std::string(name) + "\" has arity " +
                                                std::to_string(this->arity(*s)));
  }
  return *s;
}

void PartialModel::allocate(Truth fill) {
  const int n = size();
  data_.assign(sig_->size(), {});
  for (SymbolId s = 0; s < sig_->size(); ++s) {
    data_[s].assign(sig_->arity(s) == 1 ? n : n * n, fill);
  }
}

PartialModel::PartialModel(SignaturePtr sig, std::vector<std::string> objects, linear::LinearSystem scope)
    : sig_(std::move(sig)), objects_(std::move(objects)), scope_(std::move(scope)) {
  std::sort(objects_.begin(), objects_.end());
  if (std::adjacent_find(objects_.begin(), objects_.end()) != objects_.end()) {
    throw Error(ErrorKind::kValidation, "duplicate object id");
  }
  allocate(Truth::kFalse);
  for (int o = 0; o < size(); ++o) {
    set(Signature::kExists, o, Truth::kTrue);
    set(Signature::kEquals, o, o, Truth::kTrue);
  }
}

PartialModel PartialModel::uniform(SignaturePtr sig, std::vector<std::string> objects, Truth value,
                                   linear::LinearSystem scope) {
  PartialModel p(std::move(sig), std::move(objects), std::move(scope));
  p.allocate(value);
  return p;
}

int PartialModel::index_of(std::string_view id) const {
  auto it = std::lower_bound(objects_.begin(), objects_.end(), id);
  if (it == objects_.end() || *it != id) return -1;
  return static_cast<int>(it - objects_.begin());
}

int PartialModel::require_index(std::string_view id) const {
  int i = index_of(id);
  if (i < 0) throw Error(ErrorKind::kUnknownObject, "unknown object \"" + std::string(id) + "\"");
  return i;
}

Truth PartialModel::get(SymbolId s, std::span<const int> tuple) const {
  return tuple.size() == 1 ? get(s, tuple[0]) : get(s, tuple[0], tuple[1]);
}

void PartialModel::set(SymbolId s, std::span<const int> tuple, Truth v) {
  if (tuple.size() == 1) {
    set(s, tuple[0], v);
  } else {
    set(s, tuple[0], tuple[1], v);
  }
}

PartialModel PartialModel::with_copy(const std::string& id, int source) const {
  if (index_of(id) >= 0) throw Error(ErrorKind::kValidation, "object \"" + id + "\" already exists");
  PartialModel q;
  q.sig_ = sig_;
  q.scope_ = scope_;
  q.objects_ = objects_;
  auto pos = std::lower_bound(q.objects_.begin(), q.objects_.end(), id);
  const int fresh = static_cast<int>(pos - q.objects_.begin());
  q.objects_.insert(pos, id);
  const int n = size();
  const int m = n + 1;
  // Old index of every new slot; the fresh slot reads from `source`.
  std::vector<int> from(m);
  for (int i = 0; i < m; ++i) from[i] = i < fresh ? i : i == fresh ? source : i - 1;
  q.data_.assign(sig_->size(), {});
  for (SymbolId s = 0; s < sig_->size(); ++s) {
    const auto& old = data_[s];
    auto& dst = q.data_[s];
    if (sig_->arity(s) == 1) {
      dst.resize(m);
      for (int i = 0; i < m; ++i) dst[i] = old[from[i]];
    } else {
      dst.resize(static_cast<size_t>(m) * m);
      for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) dst[i * m + j] = old[from[i] * n + from[j]];
      }
    }
  }
  return q;
}

PartialModel PartialModel::without(const std::vector<bool>& remove) const {
  PartialModel q;
  q.sig_ = sig_;
  q.scope_ = scope_;
  std::vector<int> keep;
  for (int i = 0; i < size(); ++i) {
    if (!remove[i]) {
      keep.push_back(i);
      q.objects_.push_back(objects_[i]);
    }
  }
  const int n = size();
  const int m = static_cast<int>(keep.size());
  q.data_.assign(sig_->size(), {});
  for (SymbolId s = 0; s < sig_->size(); ++s) {
    const auto& old = data_[s];
    auto& dst = q.data_[s];
    if (sig_->arity(s) == 1) {
      dst.resize(m);
      for (int i = 0; i < m; ++i) dst[i] = old[keep[i]];
    } else {
      dst.resize(static_cast<size_t>(m) * m);
      for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) dst[i * m + j] = old[keep[i] * n + keep[j]];
      }
    }
  }
  return q;
}

std::string PartialModel::serialize() const {
  static const char kChar[] = {'0', '?', '1'};
  std::string out;
  for (const auto& o : objects_) {
    out += o;
    out += ',';
  }
  out += '|';
  for (SymbolId s = 0; s < sig_->size(); ++s) {
    for (Truth t : data_[s]) out += kChar[static_cast<int>(t)];
    out += '|';
  }
  for (const auto& line : scope_.to_lines()) {
    out += line;
    out += ';';
  }
  return out;
}

bool PartialModel::operator==(const PartialModel& other) const {
  return *sig_ == *other.sig_ && objects_ == other.objects_ && data_ == other.data_ && scope_ == other.scope_;
}

bool is_concrete(const PartialModel& p) {
  const Signature& sig = p.signature();
  const int n = p.size();
  for (int o = 0; o < n; ++o) {
    if (p.exists(o) != Truth::kTrue) return false;
    for (int o2 = 0; o2 < n; ++o2) {
      if (p.get(Signature::kEquals, o, o2) != from_bool(o == o2)) return false;
    }
  }
  for (SymbolId s = sig.first_user_symbol(); s < sig.size(); ++s) {
    if (sig.arity(s) == 1) {
      for (int o = 0; o < n; ++o) {
        if (p.get(s, o) == Truth::kUnknown) return false;
      }
    } else {
      for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
          if (p.get(s, a, b) == Truth::kUnknown) return false;
        }
      }
    }
  }
  linear::Ilp feasibility{linear::LinExpr{}, p.scope()};
  return linear::solve_ilp(feasibility).status != linear::IlpResult::Status::kInfeasible;
}

bool check_refinement(const PartialModel& p, const PartialModel& q,
                      const std::map<std::string, std::string>& abs) {
  const Signature& sig = p.signature();
  if (!(sig == q.signature())) throw Error(ErrorKind::kSymbolMismatch, "refinement across signatures");
  std::vector<int> f(q.size());
  for (int i = 0; i < q.size(); ++i) {
    auto it = abs.find(q.objects()[i]);
    if (it == abs.end()) {
      throw Error(ErrorKind::kUnknownObject, "abstraction undefined for \"" + q.objects()[i] + "\"");
    }
    f[i] = p.require_index(it->second);
  }
  for (SymbolId s = 0; s < sig.size(); ++s) {
    if (sig.arity(s) == 1) {
      for (int a = 0; a < q.size(); ++a) {
        if (!refines(p.get(s, f[a]), q.get(s, a))) return false;
      }
    } else {
      for (int a = 0; a < q.size(); ++a) {
        for (int b = 0; b < q.size(); ++b) {
          if (!refines(p.get(s, f[a], f[b]), q.get(s, a, b))) return false;
        }
      }
    }
  }
  std::vector<bool> hit(p.size(), false);
  for (int i : f) hit[i] = true;
  for (int o = 0; o < p.size(); ++o) {
    if (p.exists(o) == Truth::kTrue && !hit[o]) return false;
  }
  return linear::entails(q.scope(), p.scope());
}

PartialModel decide(const PartialModel& p, SymbolId s, std::span<const int> tuple, bool value) {
  if (static_cast<int>(tuple.size()) != p.signature().arity(s)) {
    throw Error(ErrorKind::kSymbolMismatch, "tuple arity mismatch for " + p.signature().name(s));
  }
  if (p.get(s, tuple) != Truth::kUnknown) {
    throw Error(ErrorKind::kNotUnknown, "entry of " + p.signature().name(s) + " already decided");
  }
  PartialModel q = p;
  q.set(s, tuple, from_bool(value));
  return q;
}

PartialModel decide(const PartialModel& p, std::string_view symbol, const std::vector<std::string>& tuple,
                    bool value) {
  SymbolId s = p.signature().require(symbol, static_cast<int>(tuple.size()));
  std::vector<int> idx;
  for (const auto& id : tuple) idx.push_back(p.require_index(id));
  return decide(p, s, idx, value);
}

std::string origin_of(const std::string& id) {
  auto pos = id.rfind('#');
  return pos == std::string::npos ? id : id.substr(0, pos);
}

std::pair<PartialModel, PartialModel> concretize_multi(const PartialModel& p, int o) {
  if (o < 0 || o >= p.size()) throw Error(ErrorKind::kUnknownObject, "object index out of range");
  if (!p.is_multi(o)) throw Error(ErrorKind::kNotMulti, "\"" + p.objects()[o] + "\" is not a multi-object");
  const std::string& base = p.objects()[o];
  int next = 1;
  for (const auto& id : p.objects()) {
    if (origin_of(id) == base && id != base) {
      try {
        next = std::max(next, std::stoi(id.substr(base.size() + 1)) + 1);
      } catch (const std::exception&) {
      }
    }
  }
  std::string fresh_id = base + "#" + std::to_string(next);
  while (p.index_of(fresh_id) >= 0) fresh_id = base + "#" + std::to_string(++next);

  PartialModel with = p.with_copy(fresh_id, o);
  const int c = with.index_of(fresh_id);
  with.set(Signature::kExists, c, Truth::kTrue);
  for (int x = 0; x < with.size(); ++x) {
    with.set(Signature::kEquals, c, x, from_bool(x == c));
    with.set(Signature::kEquals, x, c, from_bool(x == c));
  }

  PartialModel none = p;
  const Signature& sig = p.signature();
  none.set(Signature::kExists, o, Truth::kFalse);
  for (SymbolId s = sig.first_user_symbol(); s < sig.size(); ++s) {
    if (sig.arity(s) == 1) {
      none.set(s, o, Truth::kFalse);
    } else {
      for (int x = 0; x < p.size(); ++x) {
        none.set(s, o, x, Truth::kFalse);
        none.set(s, x, o, Truth::kFalse);
      }
    }
  }
  return {std::move(with), std::move(none)};
}

PartialModel drop_nonexistent(const PartialModel& p) {
  std::vector<bool> remove(p.size(), false);
  bool any = false;
  for (int o = 0; o < p.size(); ++o) {
    if (p.exists(o) == Truth::kFalse) remove[o] = any = true;
  }
  return any ? p.without(remove) : p;
}

PartialModel initial_partial_model(SignaturePtr sig, linear::LinearSystem scope) {
  return PartialModel::uniform(std::move(sig), {"new"}, Truth::kUnknown, std::move(scope));
}

std::map<std::string, std::string> canonical_abstraction(const PartialModel& p, const PartialModel& q) {
  std::map<std::string, std::string> abs;
  for (const auto& id : q.objects()) {
    if (p.index_of(id) >= 0) {
      abs[id] = id;
    } else {
      abs[id] = origin_of(id);
    }
  }
  return abs;
}

}  // namespace wcetw::model
