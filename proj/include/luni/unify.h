#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "luni/syntax.h"

namespace luni {

struct Goal {
  Term lhs;
  Term rhs;
};

bool operator==(const Goal& a, const Goal& b);

/// A finite set of goals. Insertion order is kept so that rewriting is
/// reproducible; α-equal duplicates collapse on insertion.
class UnificationProblem {
 public:
  UnificationProblem() = default;
  UnificationProblem(std::initializer_list<Goal> goals);

  /// Throws std::invalid_argument unless both sides are values.
  void add(Goal g);
  void add_all(const UnificationProblem& other);

  const std::vector<Goal>& goals() const { return goals_; }
  std::size_t size() const { return goals_.size(); }
  bool empty() const { return goals_.empty(); }

  VarSet free_vars() const;
  LocationSet locations() const;
  /// Both sides of every goal, as a flat list of terms.
  std::vector<Term> terms() const;

  /// Set equality.
  friend bool operator==(const UnificationProblem& a, const UnificationProblem& b);

 private:
  std::vector<Goal> goals_;
};

enum class ClashKind : std::uint8_t { Constructor, Arity, Type, Location, OccursCheck };

std::string to_string(ClashKind k);

/// Clash between two values; variables never clash. Occurs-check is not a
/// clash and is never returned here.
std::optional<ClashKind> clash(const Term& v, const Term& w);

enum class UnifyRule : std::uint8_t { Delete, Clash, OccursCheck, Orient, MatchLam, MatchCons, Eliminate };

std::string to_string(UnifyRule r);

struct UnifyStep {
  enum class Status : std::uint8_t { Stepped, Bottom, NormalForm };
  Status status = Status::NormalForm;
  UnificationProblem next;
  std::optional<UnifyRule> rule;
  std::optional<ClashKind> failure;
  std::optional<Goal> witness;
};

/// Applies one rule to the first goal that admits one. Throws CoherenceError
/// on two different abstractions sharing a location.
UnifyStep unify_step(const UnificationProblem& g);

struct Solved {
  Substitution sigma;
};

struct Failed {
  ClashKind kind;
  Goal goal;
};

using UnifyOutcome = std::variant<Solved, Failed>;

UnifyOutcome mgu(const UnificationProblem& g);
UnifyOutcome mgu(const Term& lhs, const Term& rhs);

bool is_unifier(const Substitution& sigma, const UnificationProblem& g);
UnificationProblem goal_subst(const UnificationProblem& g, const Substitution& sigma);

/// Solved form: x1 ≐ v1 ... xn ≐ vn, xi distinct and not free in any vj.
bool is_solved_form(const UnificationProblem& g);

}  // namespace luni
