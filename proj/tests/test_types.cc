#include <doctest.h>

#include "luni/generate.h"
#include "luni/text.h"
#include "luni/types.h"
#include "support.h"

using namespace luni;
using test::prog;
using test::term;

namespace {

Type iota() { return Type::base("iota"); }

ConsSignature nat_sig() {
  ConsSignature s;
  s.declare(ConsName("C"), Type::arrow(iota(), iota()));
  s.declare(ConsName("D"), iota());
  return s;
}

}  // namespace

TEST_CASE("type syntax helpers") {
  Type t = parse_type("iota -> iota -> box");
  CHECK(arity(t) == 2);
  CHECK(result_type(t) == Type::base("box"));
  CHECK(t.str() == "iota -> iota -> box");
  CHECK(parse_type("(a -> b) -> c").str() == "(a -> b) -> c");
  CHECK(nat_sig().ok_type() == Type::base("unit"));
}

TEST_CASE("typing rules") {
  ConsSignature s = nat_sig();
  TypingContext g;
  CHECK(has_type(g, s, Program::fail(), iota()));
  CHECK(has_type(g, s, Program::fail(), Type::arrow(iota(), iota())));
  CHECK(has_type(g, s, prog("C D =:= C D"), Type::base("unit")));
  CHECK_FALSE(has_type(g, s, prog("C D =:= C"), Type::base("unit")));
  CHECK(has_type(g, s, prog("(D =:= D) ; C D"), iota()));
  try {
    check(g, s, prog("D ; C D"), iota());
    FAIL("expected a type error");
  } catch (const TypeError& e) {
    CHECK(e.rule() == "t-guard");
  }
  CHECK(has_type(g, s, prog("D | C D"), iota()));
  CHECK_FALSE(has_type(g, s, prog("D | C"), iota()));
  CHECK(has_type(g, s, prog("fresh x. C x"), iota()));
  CHECK(has_type(g, s, prog("\\x@L0. C x"), Type::arrow(iota(), iota())));
  CHECK_THROWS_AS(check(g, s, prog("x"), iota()), TypeError);
  g.bind(Var("x"), iota());
  CHECK(has_type(g, s, prog("x"), iota()));
}

TEST_CASE("inference") {
  ConsSignature s = nat_sig();
  Inference id = infer({}, s, prog("\\x. x"));
  REQUIRE(id.type.is_arrow());
  CHECK(id.type.from() == id.type.to());
  CHECK(id.annotated[0].annotation().has_value());

  ConsSignature f;
  Type t = Type::base("T");
  f.declare(ConsName("F"), Type::arrow(t, Type::arrow(t, t)));
  TypingContext g;
  g.bind(Var("a"), t);
  g.bind(Var("c"), t);
  CHECK(infer(g, f, prog("F a (F (F a c) c)")).type == t);

  CHECK_THROWS_AS(infer({}, s, prog("\\x. x x")), TypeError);
  Inference free = infer({}, s, prog("C x"), true);
  REQUIRE(free.context.find(Var("x")));
  CHECK(*free.context.find(Var("x")) == iota());

  // stable under α-renaming
  CHECK(infer({}, s, prog("\\y. fresh z. C y")).type == infer({}, s, prog("\\q. fresh w. C q")).type);
}

TEST_CASE("structural properties") {
  ConsSignature s = nat_sig();
  TypingContext g;
  g.bind(Var("x"), iota());
  Program p = prog("C x");
  CHECK(has_type(g, s, p, iota()));
  TypingContext wide = g;
  wide.bind(Var("unused"), Type::base("box"));
  CHECK(has_type(wide, s, p, iota()));
  TypingContext narrow;
  narrow.bind(Var("x"), iota());
  CHECK(has_type(narrow, s, p, iota()));
  CHECK(has_type({}, s, subst_single(p, Var("x"), term("C D")), iota()));
  CHECK(has_type(g, s, p + prog("D"), iota()) == (has_type(g, s, p, iota()) && has_type(g, s, prog("D"), iota())));
  CHECK_FALSE(has_type(g, s, p + prog("C"), iota()));
}

TEST_CASE("subject reduction") {
  ConsSignature s = nat_sig();
  SubjectReductionReport r = subject_reduction_check({}, s, prog("(\\x. x | fresh y. ((x =:= C y); y)) (C D)"), 20);
  CHECK(r.pass);
  CHECK(r.normal);
  CHECK(r.type == iota());
  CHECK(r.steps == 5);

  SubjectReductionReport f = subject_reduction_check({}, s, prog("C (fresh x. x)"), 10);
  CHECK(f.pass);
  CHECK(f.steps == 1);

  Generator gen(GeneratorConfig::typed(5, 3));
  for (int i = 0; i < 100; ++i) {
    Program p = gen.next();
    SubjectReductionReport sr = subject_reduction_check(gen.config().gamma, gen.config().signature, p, 100);
    CHECK_MESSAGE(sr.pass, pretty(p));
  }
}
