#include <doctest.h>

#include "luni/equiv.h"
#include "luni/eval.h"
#include "luni/generate.h"
#include "luni/parallel.h"
#include "support.h"

using namespace luni;
using test::prog;
using test::term;

TEST_CASE("simultaneous reduction of single terms") {
  LocationSupply supply(100);
  ParResult v = par_term(term("C (\\x@L0. x) y"), ParPolicy::Maximal, supply);
  CHECK(alpha_equal(v.program, prog("C (\\x@L0. x) y")));
  CHECK(v.goals.empty());

  ParResult u = par_term(term("C x =:= C D"), ParPolicy::Maximal, supply);
  CHECK(alpha_equal(u.program, prog("Ok")));
  CHECK(u.goals == UnificationProblem{{term("C x"), term("C D")}});

  ParResult b = par_term(term("(\\x@L0. x | C x) D"), ParPolicy::Maximal, supply);
  CHECK(alpha_equal(b.program, prog("D | C D")));
  CHECK(b.goals.empty());
}

TEST_CASE("simultaneous steps") {
  CHECK(par_step(Program::fail()).is_fail());
  Program normal = prog("(\\x@L0. x =:= x) | ((y C =:= D); E) | z (z C)");
  CHECK(struct_equiv(par_step(normal), normal));

  Program p = prog("(\\x. x | fresh y. ((x =:= C y); y)) (C D)");
  Program q = p;
  int n = 0;
  while (!is_normal_program(q) && n < 10) {
    q = par_step(q);
    ++n;
  }
  CHECK(n == 4);
  CHECK(struct_equiv(q, prog("C D | D")));

  CHECK(par_step(prog("(C =:= D) ; E | F")).size() == 1);
}

TEST_CASE("normalization agrees with sequential evaluation") {
  ParNormalizeResult n = par_normalize(prog("C x | D"), 10);
  CHECK(n.normal);
  CHECK(struct_equiv(n.program, prog("C x | D")));

  Program hm = prog("fresh a. F a (fresh b. F b (fresh c. (b =:= F a c); c))");
  ParNormalizeResult h = par_normalize(hm, 100);
  REQUIRE(h.normal);
  CHECK(struct_equiv(h.program, prog("F a (F (F a c) c)")));

  Generator gen(GeneratorConfig::untyped(13, 3));
  EvalOptions eo;
  eo.record_trace = false;
  for (int i = 0; i < 200; ++i) {
    Program s = gen.next();
    EvalResult e = evaluate(s, 300, Strategy::leftmost(), eo);
    ParNormalizeResult r = par_normalize(s, 300);
    if (e.normal() && r.normal) CHECK(struct_equiv(e.program, r.program));
  }
}

TEST_CASE("reflexivity and goal provenance") {
  Generator gen(GeneratorConfig::untyped(21, 3));
  for (int i = 0; i < 200; ++i) {
    Program p = gen.next();
    LocationSupply supply = LocationSupply::after(p);
    for (const Term& t : p) {
      ParResult r = par_term(t, ParPolicy::Reflexive, supply);
      CHECK(r.goals.empty());
      CHECK(alpha_equal(r.program, Program{t}));

      ParResult m = par_term(t, ParPolicy::Maximal, supply);
      std::vector<Redex> redexes = thread_redexes(t);
      // Fresh₂ renames its binder, so goals below it mention the new name;
      // literal provenance holds only when no fresh binder is contracted.
      bool renames = false;
      for (const Redex& x : redexes)
        if (x.rule == RuleTag::Fresh) renames = true;
      if (renames) continue;
      for (const Goal& g : m.goals.goals()) {
        bool found = false;
        for (const Redex& x : redexes)
          if (x.focus.is(TermKind::Unif) && alpha_equal(x.focus.left(), g.lhs) && alpha_equal(x.focus.right(), g.rhs))
            found = true;
        CHECK(found);
      }
    }
  }
}

TEST_CASE("simultaneous steps are simulated by ordinary steps") {
  Generator gen(GeneratorConfig::untyped(31, 2));
  for (int i = 0; i < 100; ++i) {
    Program p = gen.next();
    Program q = par_step(p);
    // bounded search for q among the programs reachable from p
    std::vector<Program> frontier{p};
    bool found = struct_equiv(p, q);
    for (int depth = 0; depth < 8 && !found && !frontier.empty(); ++depth) {
      std::vector<Program> next;
      for (const Program& x : frontier) {
        LocationSupply supply = LocationSupply::after(x);
        for (const Redex& r : all_redexes(x)) {
          Program y = fire(x, r, supply).after;
          if (struct_equiv(y, q)) found = true;
          if (next.size() < 2000) next.push_back(y);
        }
      }
      frontier = std::move(next);
    }
    CHECK(found);
  }
}

TEST_CASE("relational enumeration on tiny terms") {
  LocationSupply supply(0);
  std::vector<ParResult> all = par_term_all(term("(Ok ; C) (\\x. x)"), supply);
  // each of the two redexes may fire or not
  CHECK(all.size() == 4);
  std::vector<Program> images = par_step_all(prog("Ok ; C | Ok ; D"), supply);
  CHECK(images.size() == 4);
}
