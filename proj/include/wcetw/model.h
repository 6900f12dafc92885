#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "wcetw/linear.h"

namespace wcetw::model {

// Numeric embedding 0, 1/2, 1 scaled by two so min/max work on the enum.
enum class Truth : std::uint8_t { kFalse = 0, kUnknown = 1, kTrue = 2 };

inline Truth t_not(Truth a) { return static_cast<Truth>(2 - static_cast<int>(a)); }
inline Truth t_and(Truth a, Truth b) { return a < b ? a : b; }
inline Truth t_or(Truth a, Truth b) { return a < b ? b : a; }
inline Truth from_bool(bool b) { return b ? Truth::kTrue : Truth::kFalse; }

// X refines to Y iff X is UNKNOWN or X == Y.
inline bool refines(Truth abstract, Truth concrete) {
  return abstract == Truth::kUnknown || abstract == concrete;
}

const char* truth_name(Truth t);
Truth parse_truth(std::string_view text);

using SymbolId = int;

// Symbols 0 and 1 are the implicit existence (unary) and equality (binary)
// symbols; classes follow, then relations.
class Signature {
 public:
  static constexpr SymbolId kExists = 0;
  static constexpr SymbolId kEquals = 1;

  Signature(std::vector<std::string> classes, std::vector<std::string> relations);

  int size() const { return static_cast<int>(names_.size()); }
  int arity(SymbolId s) const { return s == kExists ? 1 : s == kEquals ? 2 : s < first_relation_ ? 1 : 2; }
  const std::string& name(SymbolId s) const { return names_[s]; }
  std::optional<SymbolId> find(std::string_view name) const;
  // Throws kUnknownSymbol or kSymbolMismatch (wrong arity).
  SymbolId require(std::string_view name, int arity) const;

  bool is_class(SymbolId s) const { return s >= 2 && s < first_relation_; }
  bool is_relation(SymbolId s) const { return s >= first_relation_; }
  SymbolId first_user_symbol() const { return 2; }
  const std::vector<std::string>& classes() const { return classes_; }
  const std::vector<std::string>& relations() const { return relations_; }

  bool operator==(const Signature& other) const {
    return classes_ == other.classes_ && relations_ == other.relations_;
  }

 private:
  std::vector<std::string> classes_;
  std::vector<std::string> relations_;
  std::vector<std::string> names_;
  SymbolId first_relation_;
};

using SignaturePtr = std::shared_ptr<const Signature>;

// Objects are kept in lexicographic id order; every symbol's interpretation
// is stored densely (models here have tens of objects).
class PartialModel {
 public:
  // Concrete-style defaults: classes and relations FALSE, existence TRUE,
  // equality the identity.
  PartialModel(SignaturePtr sig, std::vector<std::string> objects, linear::LinearSystem scope = {});

  // Every entry, including existence and equality, set to `value`.
  static PartialModel uniform(SignaturePtr sig, std::vector<std::string> objects, Truth value,
                              linear::LinearSystem scope = {});

  const Signature& signature() const { return *sig_; }
  const SignaturePtr& signature_ptr() const { return sig_; }
  int size() const { return static_cast<int>(objects_.size()); }
  const std::vector<std::string>& objects() const { return objects_; }
  int index_of(std::string_view id) const;  // -1 when absent
  int require_index(std::string_view id) const;

  Truth get(SymbolId s, int a) const { return data_[s][a]; }
  Truth get(SymbolId s, int a, int b) const { return data_[s][a * size() + b]; }
  Truth get(SymbolId s, std::span<const int> tuple) const;
  void set(SymbolId s, int a, Truth v) { data_[s][a] = v; }
  void set(SymbolId s, int a, int b, Truth v) { data_[s][a * size() + b] = v; }
  void set(SymbolId s, std::span<const int> tuple, Truth v);

  Truth exists(int o) const { return get(Signature::kExists, o); }
  bool is_multi(int o) const { return get(Signature::kEquals, o, o) == Truth::kUnknown; }
  bool is_sure_single(int o) const {
    return exists(o) == Truth::kTrue && get(Signature::kEquals, o, o) == Truth::kTrue;
  }

  const linear::LinearSystem& scope() const { return scope_; }
  void set_scope(linear::LinearSystem s) { scope_ = std::move(s); }

  // Adds `id` with every value copied from object `source` (its own
  // reflexive entries included).
  PartialModel with_copy(const std::string& id, int source) const;
  PartialModel without(const std::vector<bool>& remove) const;

  // Deterministic text form used for tie-breaking and hashing.
  std::string serialize() const;

  bool operator==(const PartialModel& other) const;

 private:
  PartialModel() = default;
  void allocate(Truth fill);

  SignaturePtr sig_;
  std::vector<std::string> objects_;
  std::vector<std::vector<Truth>> data_;
  linear::LinearSystem scope_;
};

bool is_concrete(const PartialModel& p);

// abs maps Q object ids to P object ids.
bool check_refinement(const PartialModel& p, const PartialModel& q, const std::map<std::string, std::string>& abs);

PartialModel decide(const PartialModel& p, SymbolId s, std::span<const int> tuple, bool value);
PartialModel decide(const PartialModel& p, std::string_view symbol, const std::vector<std::string>& tuple,
                    bool value);

// First: a fresh copy `o#k` of the multi-object o, o kept as residual.
// Second: o declared non-existent with every incident fact FALSE.
std::pair<PartialModel, PartialModel> concretize_multi(const PartialModel& p, int o);

// Drops objects whose existence is FALSE.
PartialModel drop_nonexistent(const PartialModel& p);

PartialModel initial_partial_model(SignaturePtr sig, linear::LinearSystem scope);

// Copies map to their origin (id up to the last '#'); other ids to themselves.
std::map<std::string, std::string> canonical_abstraction(const PartialModel& p, const PartialModel& q);
std::string origin_of(const std::string& id);

}  // namespace wcetw::model
