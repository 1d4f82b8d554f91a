#include <doctest.h>

#include <sstream>

#include "luni/generate.h"
#include "luni/harness.h"
#include "luni/hm.h"
#include "luni/repl.h"
#include "luni/equiv.h"
#include "luni/text.h"
#include "support.h"

using namespace luni;
using test::prog;
using test::term;

TEST_CASE("generator determinism") {
  Generator a(GeneratorConfig::untyped(42, 4));
  Generator b(GeneratorConfig::untyped(42, 4));
  Generator c(GeneratorConfig::untyped(43, 4));
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    Program p = a.next();
    CHECK(pretty(p) == pretty(b.next()));
    if (pretty(p) != pretty(c.next())) differs = true;
    CHECK(coherent(p));
    CHECK(locations(p).empty());
  }
  CHECK(differs);
}

TEST_CASE("depth zero draws leaves only") {
  Generator g(GeneratorConfig::untyped(1, 0));
  for (int i = 0; i < 100; ++i)
    for (const Term& t : g.next()) CHECK((t.is(TermKind::Var) || t.is(TermKind::Cons)));
}

TEST_CASE("well-typed generation") {
  GeneratorConfig cfg = GeneratorConfig::typed(4, 4);
  Generator g(cfg);
  std::size_t with_unif = 0;
  const std::size_t n = 200;
  for (std::size_t i = 0; i < n; ++i) {
    Program p = g.next();
    CHECK_NOTHROW(infer(cfg.gamma, cfg.signature, p));
    if (has_unification(p)) ++with_unif;
  }
  CHECK(with_unif * 10 >= n * 3);
}

TEST_CASE("type inference by translation") {
  HmResult k = hm_infer(term("\\x. \\y. y x"));
  REQUIRE(k.type);
  CHECK(struct_equiv(Program{*k.type}, prog("F a (F (F a c) c)")));

  HmResult id = hm_infer(term("\\x. x"));
  REQUIRE(id.type);
  CHECK(struct_equiv(Program{*id.type}, prog("F a a")));

  HmResult self = hm_infer(term("\\x. x x"));
  CHECK_FALSE(self.type);
  CHECK(self.normal.is_fail());

  HmResult s = hm_infer(term("\\f. \\g. \\x. f x (g x)"));
  REQUIRE(s.type);
  CHECK(struct_equiv(Program{*s.type}, prog("F (F a (F b c)) (F (F a b) (F a c))")));

  CHECK(alpha_equal(hm_translate(term("\\x. \\y. y x")),
                    term("fresh a. F a (fresh b. F b (fresh c. (b =:= F a c); c))")));
  CHECK_THROWS_AS(hm_translate(term("C")), std::invalid_argument);
}

TEST_CASE("suite reports are reproducible") {
  SuiteOptions o;
  o.seed = 3;
  o.samples = 40;
  o.depth = 3;
  o.fuel = 100;
  o.max_states = 2000;
  SuiteReport a = confluence_suite(o);
  o.workers = 4;
  SuiteReport b = confluence_suite(o);
  CHECK(a.pass);
  CHECK(a.text == b.text);

  SuiteOptions s;
  s.seed = 3;
  s.samples = 20;
  s.depth = 3;
  s.fuel = 30;
  CHECK(soundness_suite(s).text == soundness_suite(s).text);
  CHECK(subject_reduction_suite(s).pass);
}

TEST_CASE("counterexamples are loadable") {
  ConsSignature sig;
  sig.declare(ConsName("C"), parse_type("iota -> box"));
  std::string src = counterexample_source(prog("C x | D"), sig, {{"iota", 1}}, {"first line", "second\nthird"});
  CHECK(src.starts_with("-- first line\n-- second\n-- third\n"));
  SourceFile f = parse_source(src);
  CHECK(alpha_equal(f.main, prog("C x | D")));
  CHECK(f.bases.size() == 1);
}

TEST_CASE("repl") {
  std::istringstream in(R"(cons C : iota -> box.
cons D : iota.
(\x. x | fresh y. ((x =:= C y); y)) (C D)
:type fresh y. C y
:denote fresh y. C y
:trace Ok ; D
:oops
fail
:quit
D
)");
  std::ostringstream out;
  std::size_t errors = run_repl(in, out);
  CHECK(errors == 1);
  CHECK(out.str() ==
        "C D | D\n"
        "box\n"
        "{C D}\n"
        "#0 [init]\nOk ; D\n#1 [guard] thread=0\nD\n"
        "error: unknown command :oops\n"
        "fail\n");
}
