#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "luni/eval.h"
#include "luni/syntax.h"
#include "luni/type.h"

namespace luni {

class TypingContext {
 public:
  TypingContext() = default;

  /// Replaces any existing binding for `x`.
  void bind(Var x, Type a) { map_.insert_or_assign(x, std::move(a)); }
  void erase(Var x) { map_.erase(x); }
  const Type* find(Var x) const;
  bool contains(Var x) const { return map_.contains(x); }

  const std::map<Var, Type>& bindings() const { return map_; }
  std::size_t size() const { return map_.size(); }

 private:
  std::map<Var, Type> map_;
};

/// Constructor types. `Ok` has type `unit` unless declared otherwise.
class ConsSignature {
 public:
  ConsSignature() = default;

  void declare(ConsName c, Type a);
  std::optional<Type> find(ConsName c) const;
  Type ok_type() const;

  const std::map<ConsName, Type>& declared() const { return map_; }

 private:
  std::map<ConsName, Type> map_;
};

/// Number of arrows in `a`, i.e. the arity of a constructor of that type.
std::size_t arity(const Type& a);
/// The base type a constructor of type `a` ultimately builds.
Type result_type(const Type& a);

class TypeError : public std::runtime_error {
 public:
  TypeError(std::string rule, std::string message);
  const std::string& rule() const { return rule_; }

 private:
  std::string rule_;
};

struct Inference {
  Type type;
  /// The input with every binder annotated by its solved type.
  Program annotated;
  /// The input context extended with the free variables it did not cover.
  TypingContext context;
};

/// Principal type under Γ. With `allow_free`, variables missing from Γ get
/// inferred types instead of failing t-var. Leftover type variables become
/// rigid base types `'a`, `'b`, ...
Inference infer(const TypingContext& gamma, const ConsSignature& sigma, const Program& p, bool allow_free = false);
Inference infer(const TypingContext& gamma, const ConsSignature& sigma, const Term& t, bool allow_free = false);

/// Throws TypeError unless Γ ⊢ X : A. Annotated binders are respected.
void check(const TypingContext& gamma, const ConsSignature& sigma, const Program& p, const Type& a);
void check(const TypingContext& gamma, const ConsSignature& sigma, const Term& t, const Type& a);
bool has_type(const TypingContext& gamma, const ConsSignature& sigma, const Program& p, const Type& a);

struct SubjectReductionReport {
  bool pass = true;
  bool normal = false;
  Type type = Type::base("unit");
  std::vector<std::string> lines;
  std::size_t steps = 0;
  std::optional<std::size_t> failed_step;
  std::string error;
};

/// Infers P's type, then evaluates the annotated program and re-checks it
/// at that type after every step, extending Γ with each fresh variable.
SubjectReductionReport subject_reduction_check(const TypingContext& gamma, const ConsSignature& sigma, const Program& p,
                                               std::size_t fuel, const Strategy& strategy = {});

}  // namespace luni
