#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "luni/syntax.h"
#include "luni/types.h"

namespace luni {

struct ProductionWeights {
  unsigned var = 2;
  unsigned cons = 3;
  unsigned abs = 2;
  unsigned app = 3;
  unsigned fresh = 2;
  unsigned guard = 2;
  unsigned unif = 3;
};

struct GeneratorConfig {
  std::uint64_t seed = 0;
  int max_depth = 3;
  /// Constructors and the number of arguments they are applied to.
  std::vector<std::pair<ConsName, std::size_t>> constructors;
  std::vector<Var> free_vars;
  /// Names used for binders; overlapping `free_vars` exercises shadowing.
  std::vector<Var> binder_names;
  ProductionWeights weights;
  std::size_t max_threads = 2;
  /// Draw terms directed by the types in `signature` and `gamma`, then keep
  /// only programs that type-check.
  bool well_typed = false;
  ConsSignature signature;
  TypingContext gamma;
  /// Program type and binder types drawn in well-typed mode.
  std::vector<Type> type_pool;
  std::size_t max_attempts = 1000;

  /// C/1, D/0, E/0 with free x, y and binders x, y, z.
  static GeneratorConfig untyped(std::uint64_t seed, int depth);
  /// D, E : iota; C : iota -> box; free x, y : iota; `base iota = 1`.
  static GeneratorConfig typed(std::uint64_t seed, int depth);
};

/// A deterministic stream of coherent programs without allocated
/// abstractions. Equal configurations produce equal streams.
class Generator {
 public:
  explicit Generator(GeneratorConfig cfg);

  /// Throws std::runtime_error if `well_typed` is set and no typable program
  /// was found within `max_attempts` draws.
  Program next();
  Term term(int depth);

  std::size_t attempts() const { return attempts_; }
  const GeneratorConfig& config() const { return cfg_; }

 private:
  std::size_t pick(std::size_t n) { return static_cast<std::size_t>(rng_() % n); }
  Term draw(int depth);
  Term leaf();
  Program body(int depth);

  Term typed(int depth, const Type& target);
  std::optional<Term> typed_leaf(const Type& target);
  Term typed_binder(int depth, const Type& binder, const Type& target, bool abstraction);
  const Type& pool_type() { return cfg_.type_pool[pick(cfg_.type_pool.size())]; }

  GeneratorConfig cfg_;
  std::mt19937_64 rng_;
  std::vector<Var> scope_;
  std::vector<Type> scope_types_;
  std::size_t attempts_ = 0;
};

/// Contains a unification node anywhere, including under binders.
bool has_unification(const Term& t);
bool has_unification(const Program& p);

}  // namespace luni
