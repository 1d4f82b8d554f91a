#pragma once

#include <string>

#include "luni/syntax.h"
#include "luni/text.h"

namespace test {

inline luni::Program prog(const std::string& s) { return luni::parse_program(s); }
inline luni::Term term(const std::string& s) { return luni::parse_term(s); }
inline luni::Term var(const char* x) { return luni::Term::var(luni::Var(x)); }
inline luni::Term cons(const char* c) { return luni::Term::cons(luni::ConsName(c)); }

/// Free variables by a direct recursive walk, independent of the cached sets.
void naive_free_vars(const luni::Term& t, std::vector<luni::Var>& bound, std::vector<luni::Var>& out);
luni::VarSet naive_free_vars(const luni::Term& t);

}  // namespace test

#include <random>

#include "luni/unify.h"

namespace test {

/// Random values over variables x, y, z, constructors D/0, E/0, C/1, P/2
/// (occasionally under- or over-applied) and two allocated abstractions
/// with fixed bodies, so any sample is coherent.
class ValueSampler {
 public:
  explicit ValueSampler(std::uint64_t seed) : rng_(seed) {}
  luni::Term value(int depth);
  luni::UnificationProblem problem(std::size_t goals, int depth);

 private:
  std::size_t pick(std::size_t n) { return static_cast<std::size_t>(rng_() % n); }
  std::mt19937_64 rng_;
};

/// Closed values of depth at most 1 over D, E, C, P plus both sampled
/// abstractions, including partial and over-applied spines.
std::vector<luni::Term> small_universe();

/// Exhaustively searches assignments of the universe to the free variables
/// of `g` for a unifier.
bool brute_force_solvable(const luni::UnificationProblem& g, const std::vector<luni::Term>& universe);

}  // namespace test
