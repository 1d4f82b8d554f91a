#include <doctest.h>

#include "luni/unify.h"
#include "support.h"

using namespace luni;
using test::cons;
using test::term;
using test::var;

namespace {

const Substitution* solved(const UnifyOutcome& o) {
  const Solved* s = std::get_if<Solved>(&o);
  return s ? &s->sigma : nullptr;
}

const Failed* failed(const UnifyOutcome& o) { return std::get_if<Failed>(&o); }

}  // namespace

TEST_CASE("clash kinds") {
  CHECK(clash(term("C D"), term("E D")) == ClashKind::Constructor);
  CHECK(clash(term("C D"), term("C D E")) == ClashKind::Arity);
  CHECK(clash(term("C D"), term("\\x@L0. x")) == ClashKind::Type);
  CHECK(clash(term("\\x@L0. x"), term("\\x@L1. x")) == ClashKind::Location);
  CHECK_FALSE(clash(term("\\x@L0. x"), term("\\y@L0. y")).has_value());
  CHECK_FALSE(clash(var("x"), term("C D")).has_value());
  CHECK_FALSE(clash(term("C x"), term("C D")).has_value());
}

TEST_CASE("single rewrite steps") {
  UnifyStep d = unify_step({{var("x"), var("x")}});
  CHECK(d.status == UnifyStep::Status::Stepped);
  CHECK(d.rule == UnifyRule::Delete);
  CHECK(d.next.empty());

  UnifyStep o = unify_step({{cons("C"), var("x")}});
  CHECK(o.rule == UnifyRule::Orient);
  CHECK(o.next == UnificationProblem{{var("x"), cons("C")}});

  UnifyStep oc = unify_step({{var("x"), term("C x")}});
  CHECK(oc.status == UnifyStep::Status::Bottom);
  CHECK(oc.failure == ClashKind::OccursCheck);

  UnifyStep nf = unify_step({{var("x"), term("C y")}});
  CHECK(nf.status == UnifyStep::Status::NormalForm);

  UnifyStep mc = unify_step({{term("C x y"), term("C D y")}});
  CHECK(mc.rule == UnifyRule::MatchCons);
  CHECK(mc.next == UnificationProblem{{var("x"), cons("D")}, {var("y"), var("y")}});

  UnifyStep el = unify_step({{var("x"), cons("D")}, {var("y"), term("C x")}});
  CHECK(el.rule == UnifyRule::Eliminate);
  CHECK(el.next == UnificationProblem{{var("x"), cons("D")}, {var("y"), term("C D")}});

  CHECK_THROWS_AS(unify_step({{term("\\x@L0. x"), term("\\x@L0. C")}}), CoherenceError);
}

TEST_CASE("most general unifiers") {
  auto f = mgu(term("C f"), term("C (\\x@L0. x)"));
  REQUIRE(solved(f));
  CHECK(*solved(f) == Substitution::single(Var("f"), term("\\x@L0. x")));

  auto lam = mgu(term("\\x@L0. x x"), term("\\y@L0. y y"));
  REQUIRE(solved(lam));
  CHECK(solved(lam)->empty());

  auto ar = mgu(term("C D"), term("C D E"));
  REQUIRE(failed(ar));
  CHECK(failed(ar)->kind == ClashKind::Arity);

  auto loc = mgu(term("\\x@L0. x"), term("\\x@L1. x"));
  REQUIRE(failed(loc));
  CHECK(failed(loc)->kind == ClashKind::Location);

  auto oc = mgu(var("x"), term("C x"));
  REQUIRE(failed(oc));
  CHECK(failed(oc)->kind == ClashKind::OccursCheck);

  auto chain = mgu({{var("x"), term("C y")}, {var("y"), cons("D")}});
  REQUIRE(solved(chain));
  Substitution expect;
  expect.bind(Var("x"), term("C D"));
  expect.bind(Var("y"), cons("D"));
  CHECK(*solved(chain) == expect);
}

TEST_CASE("unifier predicate and goal substitution") {
  CHECK_FALSE(is_unifier(Substitution{}, {{cons("C"), cons("D")}}));
  CHECK(is_unifier(Substitution::single(Var("x"), cons("C")), {{var("x"), cons("C")}}));
  Substitution s = Substitution::single(Var("x"), cons("C"));
  CHECK(goal_subst({}, s).empty());
  CHECK(goal_subst({{var("x"), cons("C")}}, s) == UnificationProblem{{cons("C"), cons("C")}});
  UnificationProblem two{{var("x"), cons("C")}, {var("y"), cons("C")}};
  CHECK(two.size() == 2);
  CHECK(goal_subst(two, Substitution::single(Var("x"), var("y"))).size() == 1);
  CHECK_THROWS_AS(UnificationProblem({{term("\\x. x"), cons("C")}}), std::invalid_argument);
}

TEST_CASE("metatheory on sampled goal sets") {
  test::ValueSampler sampler(2024);
  const std::vector<Term> universe = test::small_universe();
  for (int i = 0; i < 300; ++i) {
    UnificationProblem g = sampler.problem(1 + i % 3, 2);
    UnifyOutcome o = mgu(g);
    if (const Substitution* s = solved(o)) {
      CHECK(is_unifier(*s, g));
      CHECK(is_idempotent(*s));
      CHECK(compose(*s, *s) == *s);
      std::vector<Term> terms = goal_subst(g, *s).terms();
      for (const auto& [x, v] : s->bindings()) terms.push_back(v);
      CHECK_FALSE(check_coherence(terms).has_value());
      LocationSet in_g = g.locations();
      for (const auto& [x, v] : s->bindings())
        for (Location l : locations(v)) CHECK(std::binary_search(in_g.begin(), in_g.end(), l));
      // grounding the solution gives a witness in the universe whenever it is small
      Substitution ground;
      for (Var x : g.free_vars()) ground.bind(x, cons("D"));
      CHECK(is_unifier(compose(*s, ground), g));
    } else {
      CHECK_FALSE(test::brute_force_solvable(g, universe));
    }
  }
}

TEST_CASE("compositionality") {
  test::ValueSampler sampler(99);
  for (int i = 0; i < 200; ++i) {
    UnificationProblem g = sampler.problem(1 + i % 2, 2);
    UnificationProblem h = sampler.problem(1, 2);
    UnificationProblem both = g;
    both.add_all(h);
    UnifyOutcome whole = mgu(both);
    UnifyOutcome first = mgu(g);
    bool split = false;
    if (const Substitution* s1 = solved(first)) {
      UnifyOutcome second = mgu(goal_subst(h, *s1));
      if (const Substitution* s2 = solved(second)) {
        split = true;
        // both are most general unifiers of G ∪ H
        CHECK(is_unifier(compose(*s1, *s2), both));
        if (const Substitution* w = solved(whole)) CHECK(is_unifier(*w, both));
      }
    }
    CHECK(split == (solved(whole) != nullptr));
  }
}
