#pragma once

#include <cstddef>
#include <vector>

#include "luni/syntax.h"
#include "luni/unify.h"

namespace luni {

/// `t ⇒_G P`: the reduct and the unification goals it still owes.
struct ParResult {
  Program program;
  UnificationProblem goals;
};

enum class ParPolicy : std::uint8_t {
  /// Contract every root redex that the rules allow.
  Maximal,
  /// Congruence rules only: every term maps to itself.
  Reflexive,
};

ParResult par_term(const Term& t, ParPolicy policy, LocationSupply& supply);

/// One simultaneous step: each thread is reduced, then its goals are solved
/// and the unifier applied to its reduct, or the thread is dropped.
Program par_step(const Program& p, ParPolicy policy, LocationSupply& supply);
Program par_step(const Program& p, ParPolicy policy = ParPolicy::Maximal);

struct ParNormalizeResult {
  bool normal = false;
  Program program;
  std::size_t steps = 0;
};

/// Iterates maximal steps until the program is normal or `fuel` runs out.
ParNormalizeResult par_normalize(const Program& p, std::size_t fuel);

/// Every derivable `t ⇒_G P`, for small terms. Stops adding results after
/// `limit` entries.
std::vector<ParResult> par_term_all(const Term& t, LocationSupply& supply, std::size_t limit = 256);
/// Every simultaneous-step image of `p` (one per combination of thread
/// choices), at most `limit` of them.
std::vector<Program> par_step_all(const Program& p, LocationSupply& supply, std::size_t limit = 256);

}  // namespace luni
