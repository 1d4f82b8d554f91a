#include "support.h"

#include <algorithm>

namespace test {

void naive_free_vars(const luni::Term& t, std::vector<luni::Var>& bound, std::vector<luni::Var>& out) {
  using luni::TermKind;
  switch (t.kind()) {
    case TermKind::Var:
      if (std::find(bound.begin(), bound.end(), t.var()) == bound.end()) out.push_back(t.var());
      return;
    case TermKind::Cons:
      return;
    case TermKind::Abs:
    case TermKind::AbsLoc:
      bound.push_back(t.var());
      for (const luni::Term& s : t.body()) naive_free_vars(s, bound, out);
      bound.pop_back();
      return;
    case TermKind::Fresh:
      bound.push_back(t.var());
      naive_free_vars(t.scope(), bound, out);
      bound.pop_back();
      return;
    default:
      naive_free_vars(t.left(), bound, out);
      naive_free_vars(t.right(), bound, out);
  }
}

luni::VarSet naive_free_vars(const luni::Term& t) {
  std::vector<luni::Var> bound, out;
  naive_free_vars(t, bound, out);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace test

namespace test {

using luni::Term;

luni::Term ValueSampler::value(int depth) {
  std::size_t choice = depth <= 0 ? pick(5) : pick(9);
  switch (choice) {
    case 0:
      return var("x");
    case 1:
      return var("y");
    case 2:
      return var("z");
    case 3:
      return cons(pick(2) ? "D" : "E");
    case 4:
      return pick(2) ? term("\\a@L0. a") : term("\\a@L1. C a");
    case 5:
    case 6:
      return Term::app(cons("C"), value(depth - 1));
    case 7: {
      Term p = Term::app(Term::app(cons("P"), value(depth - 1)), value(depth - 1));
      return pick(4) == 0 ? Term::app(p, value(depth - 1)) : p;
    }
    default:
      return pick(2) ? Term::app(cons("P"), value(depth - 1)) : value(depth - 1);
  }
}

luni::UnificationProblem ValueSampler::problem(std::size_t goals, int depth) {
  luni::UnificationProblem g;
  for (std::size_t i = 0; i < goals; ++i) g.add({value(depth), value(depth)});
  return g;
}

std::vector<luni::Term> small_universe() {
  std::vector<Term> base{cons("D"), cons("E")};
  std::vector<Term> out = base;
  for (const Term& a : base) out.push_back(Term::app(cons("C"), a));
  for (const Term& a : base)
    for (const Term& b : base) out.push_back(Term::app(Term::app(cons("P"), a), b));
  for (const Term& a : base) out.push_back(Term::app(cons("P"), a));
  out.push_back(cons("C"));
  out.push_back(cons("P"));
  out.push_back(term("\\a@L0. a"));
  out.push_back(term("\\a@L1. C a"));
  return out;
}

bool brute_force_solvable(const luni::UnificationProblem& g, const std::vector<luni::Term>& universe) {
  luni::VarSet vars = g.free_vars();
  std::vector<std::size_t> odo(vars.size(), 0);
  for (;;) {
    luni::Substitution s;
    for (std::size_t i = 0; i < vars.size(); ++i) s.bind(vars[i], universe[odo[i]]);
    bool ok = true;
    for (const luni::Goal& goal : g.goals())
      if (!luni::alpha_equal(luni::subst_apply(goal.lhs, s), luni::subst_apply(goal.rhs, s))) {
        ok = false;
        break;
      }
    if (ok) return true;
    std::size_t i = vars.size();
    for (;;) {
      if (i == 0) return false;
      --i;
      if (++odo[i] < universe.size()) break;
      odo[i] = 0;
    }
  }
}

}  // namespace test
