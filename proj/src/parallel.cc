#include "luni/parallel.h"

#include <variant>

#include "luni/equiv.h"

namespace luni {

namespace {

using Make = Term (*)(Term, Term);

/// (⊕ tᵢ) ⋆ (⊕ sⱼ) = ⊕ᵢ ⊕ⱼ (tᵢ ⋆ sⱼ)
Program lift(const Program& p, const Program& q, Make make) {
  std::vector<Term> out;
  out.reserve(p.size() * q.size());
  for (const Term& t : p)
    for (const Term& s : q) out.push_back(make(t, s));
  return Program(std::move(out));
}

Make maker(TermKind k) {
  switch (k) {
    case TermKind::App: return Term::app;
    case TermKind::Guard: return Term::guard;
    default: return Term::unif;
  }
}

ParResult congruence(const ParResult& l, const ParResult& r, TermKind kind) {
  ParResult out{lift(l.program, r.program, maker(kind)), l.goals};
  out.goals.add_all(r.goals);
  return out;
}

Program resolve(const ParResult& r) {
  UnifyOutcome outcome = mgu(r.goals);
  if (auto* solved = std::get_if<Solved>(&outcome)) return subst_apply(r.program, solved->sigma);
  return Program::fail();
}

Term instantiate_fresh(const Term& t) { return rename_var(t.scope(), t.var(), Var::fresh(t.var())); }

Term allocate(const Term& t, LocationSupply& supply) {
  return Term::abs_loc(supply.next(), t.var(), t.body(), t.annotation());
}

}  // namespace

ParResult par_term(const Term& t, ParPolicy policy, LocationSupply& supply) {
  if (policy == ParPolicy::Reflexive) return {Program{t}, {}};
  switch (t.kind()) {
    case TermKind::Var:
    case TermKind::Cons:
    case TermKind::AbsLoc:
      return {Program{t}, {}};
    case TermKind::Abs:
      return {Program{allocate(t, supply)}, {}};
    case TermKind::Fresh:
      return par_term(instantiate_fresh(t), policy, supply);
    case TermKind::App:
      if (t.left().is(TermKind::AbsLoc) && t.right().is_value())
        return {subst_single(t.left().body(), t.left().var(), t.right()), {}};
      break;
    case TermKind::Guard:
      if (t.left().is_value()) return par_term(t.right(), policy, supply);
      break;
    case TermKind::Unif:
      if (t.left().is_value() && t.right().is_value())
        return {Program{Term::cons(ConsName::ok())}, UnificationProblem{Goal{t.left(), t.right()}}};
      break;
  }
  ParResult l = par_term(t.left(), policy, supply);
  ParResult r = par_term(t.right(), policy, supply);
  return congruence(l, r, t.kind());
}

Program par_step(const Program& p, ParPolicy policy, LocationSupply& supply) {
  Program out;
  for (const Term& t : p) out.append(resolve(par_term(t, policy, supply)));
  return out;
}

Program par_step(const Program& p, ParPolicy policy) {
  LocationSupply supply = LocationSupply::after(p);
  return par_step(p, policy, supply);
}

ParNormalizeResult par_normalize(const Program& p, std::size_t fuel) {
  LocationSupply supply = LocationSupply::after(p);
  ParNormalizeResult out{false, p, 0};
  while (!(out.normal = is_normal_program(out.program)) && out.steps < fuel) {
    out.program = par_step(out.program, ParPolicy::Maximal, supply);
    ++out.steps;
  }
  return out;
}

std::vector<ParResult> par_term_all(const Term& t, LocationSupply& supply, std::size_t limit) {
  std::vector<ParResult> out{{Program{t}, {}}};
  auto add = [&](ParResult r) {
    if (out.size() < limit) out.push_back(std::move(r));
  };
  switch (t.kind()) {
    case TermKind::Var:
    case TermKind::Cons:
    case TermKind::AbsLoc:
      return out;
    case TermKind::Abs:
      add({Program{allocate(t, supply)}, {}});
      return out;
    case TermKind::Fresh:
      for (ParResult& r : par_term_all(instantiate_fresh(t), supply, limit)) add(std::move(r));
      return out;
    default:
      break;
  }
  out.clear();
  auto ls = par_term_all(t.left(), supply, limit);
  auto rs = par_term_all(t.right(), supply, limit);
  for (const ParResult& l : ls)
    for (const ParResult& r : rs) add(congruence(l, r, t.kind()));
  switch (t.kind()) {
    case TermKind::App:
      if (t.left().is(TermKind::AbsLoc) && t.right().is_value())
        add({subst_single(t.left().body(), t.left().var(), t.right()), {}});
      break;
    case TermKind::Guard:
      if (t.left().is_value())
        for (ParResult& r : par_term_all(t.right(), supply, limit)) add(std::move(r));
      break;
    case TermKind::Unif:
      if (t.left().is_value() && t.right().is_value())
        add({Program{Term::cons(ConsName::ok())}, UnificationProblem{Goal{t.left(), t.right()}}});
      break;
    default:
      break;
  }
  return out;
}

std::vector<Program> par_step_all(const Program& p, LocationSupply& supply, std::size_t limit) {
  std::vector<Program> images{Program::fail()};
  for (const Term& t : p) {
    std::vector<Program> choices;
    for (const ParResult& r : par_term_all(t, supply, limit)) choices.push_back(resolve(r));
    std::vector<Program> next;
    for (const Program& prefix : images) {
      for (const Program& c : choices) {
        if (next.size() >= limit) break;
        next.push_back(prefix + c);
      }
    }
    images = std::move(next);
  }
  return images;
}

}  // namespace luni
