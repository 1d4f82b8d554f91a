#include <doctest.h>

#include "luni/equiv.h"
#include "luni/eval.h"
#include "luni/generate.h"
#include "support.h"

using namespace luni;
using test::prog;
using test::term;

namespace {

std::vector<RuleTag> rules(const EvalResult& r) {
  std::vector<RuleTag> out;
  for (const TraceStep& s : r.trace) out.push_back(s.rule);
  return out;
}

/// Every (thread, position) whose subterm matches some rule's left-hand
/// side, by a direct scan that stops at binders.
std::size_t count_redex_positions(const Term& t) {
  std::size_t here = 0;
  switch (t.kind()) {
    case TermKind::Abs:
    case TermKind::Fresh:
      return 1;
    case TermKind::App:
      here = t.left().is(TermKind::AbsLoc) && t.right().is_value() ? 1 : 0;
      return here + count_redex_positions(t.left()) + count_redex_positions(t.right());
    case TermKind::Guard:
      here = t.left().is_value() ? 1 : 0;
      return here + count_redex_positions(t.left()) + count_redex_positions(t.right());
    case TermKind::Unif:
      here = t.left().is_value() && t.right().is_value() ? 1 : 0;
      return here + count_redex_positions(t.left()) + count_redex_positions(t.right());
    default:
      return 0;
  }
}

}  // namespace

TEST_CASE("golden trace") {
  Program p = prog("(\\x. x | fresh y. ((x =:= C y); y)) (C D)");
  EvalResult r = evaluate(p, 10);
  REQUIRE(r.normal());
  CHECK(r.steps == 5);
  CHECK(rules(r) == std::vector<RuleTag>{RuleTag::Alloc, RuleTag::Beta, RuleTag::Fresh, RuleTag::Unif, RuleTag::Guard});
  CHECK(struct_equiv(r.program, prog("C D | D")));
  CHECK(r.trace[1].after.size() == 2);
  CHECK(r.trace[2].thread == 1);
}

TEST_CASE("individual rules") {
  auto one = [](const char* src) { return step(prog(src)); };

  auto a = one("(\\x. x) C");
  REQUIRE(a);
  CHECK(a->second.rule == RuleTag::Alloc);
  CHECK(a->first[0].left().is(TermKind::AbsLoc));

  auto b = one("(\\x@L0. x | C x) D");
  REQUIRE(b);
  CHECK(b->second.rule == RuleTag::Beta);
  CHECK(alpha_equal(b->first, prog("D | C D")));

  auto vanish = one("E | (\\x@L0. fail) D");
  REQUIRE(vanish);
  CHECK(alpha_equal(vanish->first, prog("E")));

  auto g = one("Ok ; C");
  REQUIRE(g);
  CHECK(g->second.rule == RuleTag::Guard);
  CHECK(alpha_equal(g->first, prog("C")));

  auto f = one("C (fresh x. x)");
  REQUIRE(f);
  CHECK(f->second.rule == RuleTag::Fresh);
  REQUIRE(f->first[0].right().is(TermKind::Var));
  CHECK(f->first[0].right().var() != Var("x"));

  auto u = one("C x (x =:= D)");
  REQUIRE(u);
  CHECK(u->second.rule == RuleTag::Unif);
  CHECK(alpha_equal(u->first, prog("C D Ok")));

  auto fl = one("(\\x@L0. x) =:= \\x@L1. x");
  REQUIRE(fl);
  CHECK(fl->second.rule == RuleTag::Fail);
  CHECK(fl->first.is_fail());

  CHECK_FALSE(one("(\\x@L0. x =:= x) | ((y C =:= D); E) | z (z C)"));
  CHECK_FALSE(step(Program::fail()));
}

TEST_CASE("unification reaches the whole thread but not other threads") {
  auto u = step(prog("C x (x =:= D) | x"));
  REQUIRE(u);
  CHECK(alpha_equal(u->first, prog("C D Ok | x")));
}

TEST_CASE("strategies") {
  Program p = prog("(Ok ; C) | (Ok ; D)");
  auto l = find_redex(p, Strategy::leftmost());
  auto r = find_redex(p, Strategy::rightmost());
  REQUIRE(l);
  REQUIRE(r);
  CHECK(l->thread == 0);
  CHECK(r->thread == 1);
  CHECK(Strategy::parse("random:5")->seed == 5);
  CHECK(Strategy::parse("rightmost")->kind == Strategy::Kind::Rightmost);
  CHECK_FALSE(Strategy::parse("sideways"));

  Generator gen(GeneratorConfig::untyped(3, 3));
  EvalOptions eo;
  eo.record_trace = false;
  for (int i = 0; i < 100; ++i) {
    Program q = gen.next();
    EvalResult a = evaluate(q, 300, Strategy::leftmost(), eo);
    EvalResult b = evaluate(q, 300, Strategy::rightmost(), eo);
    EvalResult c = evaluate(q, 300, Strategy::random(i), eo);
    if (a.normal() && b.normal()) CHECK(struct_equiv(a.program, b.program));
    if (a.normal() && c.normal()) CHECK(struct_equiv(a.program, c.program));
  }
}

TEST_CASE("redex enumeration agrees with a direct scan") {
  Generator gen(GeneratorConfig::untyped(41, 3));
  for (int i = 0; i < 300; ++i) {
    Program p = gen.next();
    std::size_t expect = 0;
    for (const Term& t : p) expect += count_redex_positions(t);
    CHECK(all_redexes(p).size() == expect);
    CHECK(find_redex(p).has_value() == (expect > 0));
    for (const Redex& r : all_redexes(p)) CHECK(alpha_equal(plug(r.context, r.focus), p[r.thread]));
  }
}

TEST_CASE("coherence is preserved and checked") {
  Generator gen(GeneratorConfig::untyped(8, 3));
  EvalOptions eo;
  eo.check_every_step = true;
  for (int i = 0; i < 100; ++i) {
    EvalResult r = evaluate(gen.next(), 100, Strategy::leftmost(), eo);
    for (const TraceStep& s : r.trace) CHECK(coherent(s.after));
  }
  CHECK_THROWS_AS(Session(prog("(\\x@L0. x) =:= \\y@L0. C")), CoherenceError);
}

TEST_CASE("divergence runs out of fuel") {
  EvalResult r = evaluate(prog("(\\x. x x) (\\x. x x)"), 50);
  CHECK_FALSE(r.normal());
  CHECK(r.steps == 50);
}

TEST_CASE("reachable normal forms") {
  Program normal = prog("C x | D");
  Reachable n = reachable_normal_forms(normal, 10, 100);
  CHECK(n.status == Reachable::Status::Complete);
  REQUIRE(n.normal_forms.size() == 1);
  CHECK(struct_equiv(n.normal_forms[0], normal));

  Reachable t = reachable_normal_forms(prog("(\\x. x | fresh y. ((x =:= C y); y)) (C D)"), 50, 1000);
  CHECK(t.status == Reachable::Status::Complete);
  REQUIRE(t.normal_forms.size() == 1);
  CHECK(struct_equiv(t.normal_forms[0], prog("C D | D")));

  Reachable peak = reachable_normal_forms(prog("(x =:= C y) (y =:= D) x"), 20, 1000);
  CHECK(peak.status == Reachable::Status::Complete);
  REQUIRE(peak.normal_forms.size() == 1);
  CHECK(struct_equiv(peak.normal_forms[0], prog("Ok Ok (C D)")));

  Reachable omega = reachable_normal_forms(prog("(\\x. x x) (\\x. x x)"), 1000, 50);
  CHECK(omega.normal_forms.empty());
}
