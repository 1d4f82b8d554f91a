#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "luni/syntax.h"

namespace luni {

/// A thread with bound variables renamed `b0, b1, ...` in traversal order,
/// free variables renamed `v0, v1, ...` and locations renumbered from 0,
/// both by first occurrence in pre-order. Annotations are dropped.
struct CanonicalThread {
  Term term;
  std::string key;
};

CanonicalThread canonical_thread(const Term& t);

/// Sorted canonical keys of the threads; equal iff the programs are ≡.
std::vector<std::string> canonical_keys(const Program& p);
/// Single string form of canonical_keys, for hashing and visited sets.
std::string program_key(const Program& p);

/// Thread permutation plus per-thread injective renaming of free variables
/// and locations.
bool struct_equiv(const Program& p, const Program& q);

enum class StuckKind : std::uint8_t { Var, Cons, Guard, Unif, Lam };

std::string to_string(StuckKind k);

/// A derivation of `t ▽`. `premise` is the stuck subterm that justifies the
/// rule; stuck-var has none.
struct StuckDerivation {
  StuckKind kind;
  Term term;
  std::shared_ptr<const StuckDerivation> premise;
};

std::optional<StuckDerivation> is_stuck(const Term& t);
bool is_normal_term(const Term& t);
bool is_normal_program(const Program& p);

}  // namespace luni
