#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "luni/syntax.h"
#include "luni/unify.h"

namespace luni {

enum class RuleTag : std::uint8_t { Alloc, Beta, Guard, Fresh, Unif, Fail };

std::string to_string(RuleTag r);
std::optional<RuleTag> parse_rule_tag(std::string_view s);

struct Redex {
  std::size_t thread = 0;
  WeakContext context;
  Term focus;
  RuleTag rule;
  /// Set for unif redexes.
  std::optional<Substitution> unifier;
};

/// Every redex of one thread, left to right and innermost first.
std::vector<Redex> thread_redexes(const Term& t, std::size_t thread = 0);
/// Every redex of every thread, in thread order.
std::vector<Redex> all_redexes(const Program& p);

struct Strategy {
  enum class Kind : std::uint8_t { Leftmost, Rightmost, Random };
  Kind kind = Kind::Leftmost;
  std::uint64_t seed = 0;

  static Strategy leftmost() { return {}; }
  static Strategy rightmost() { return {Kind::Rightmost, 0}; }
  static Strategy random(std::uint64_t seed) { return {Kind::Random, seed}; }
  /// `leftmost`, `rightmost`, `random` or `random:<seed>`.
  static std::optional<Strategy> parse(std::string_view s);
  std::string name() const;
};

struct TraceStep {
  RuleTag rule;
  std::size_t thread = 0;
  Program before;
  Program after;
  std::optional<Substitution> unifier;
  /// The variable introduced by a fresh step, with the binder's annotation.
  std::optional<Var> fresh_var;
  std::optional<Type> fresh_type;
  std::optional<Location> location;
};

/// Contracts `r` in `p`. New locations come from `supply`.
TraceStep fire(const Program& p, const Redex& r, LocationSupply& supply);

struct EvalOptions {
#ifdef NDEBUG
  bool check_every_step = false;
#else
  bool check_every_step = true;
#endif
  bool record_trace = true;
};

/// One evaluation: a program, a strategy and the fresh-location supply.
class Session {
 public:
  /// Throws CoherenceError if `initial` is not coherent.
  explicit Session(Program initial, Strategy strategy = {}, EvalOptions options = {});

  std::optional<Redex> find_redex() const;
  /// None iff the current program is normal.
  std::optional<TraceStep> step();

  const Program& current() const { return current_; }

 private:
  Program current_;
  Strategy strategy_;
  EvalOptions options_;
  LocationSupply supply_;
  mutable std::mt19937_64 rng_;
};

std::optional<Redex> find_redex(const Program& p, const Strategy& strategy = {});
/// A single step with a location supply starting above `p`.
std::optional<std::pair<Program, TraceStep>> step(const Program& p, const Strategy& strategy = {});

struct EvalResult {
  enum class Status : std::uint8_t { Normal, OutOfFuel };
  Status status;
  Program program;
  std::vector<TraceStep> trace;
  std::size_t steps = 0;

  bool normal() const { return status == Status::Normal; }
};

EvalResult evaluate(const Program& p, std::size_t fuel, const Strategy& strategy = {}, EvalOptions options = {});

struct Reachable {
  enum class Status : std::uint8_t { Complete, StateBound, Fuel };
  Status status = Status::Complete;
  /// Distinct up to ≡, in discovery order.
  std::vector<Program> normal_forms;
  std::size_t states = 0;
};

std::string to_string(Reachable::Status s);

/// Breadth-first exploration of every redex choice, identifying states up
/// to ≡. `fuel` bounds the depth.
Reachable reachable_normal_forms(const Program& p, std::size_t fuel, std::size_t max_states);

}  // namespace luni
