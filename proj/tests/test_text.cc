#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "luni/eval.h"
#include "luni/generate.h"
#include "luni/text.h"
#include "support.h"

using namespace luni;
using test::prog;
using test::term;

TEST_CASE("grammar") {
  Program p = prog("(\\x. x | fresh y. ((x =:= C y); y)) (C D)");
  REQUIRE(p.size() == 1);
  CHECK(p[0].is(TermKind::App));
  CHECK(p[0].left().is(TermKind::Abs));
  CHECK(p[0].left().body().size() == 2);

  CHECK(prog("fail").is_fail());
  CHECK(prog("C | fail | D").size() == 2);

  Term seq = term("a ; b ; c");
  REQUIRE(seq.is(TermKind::Guard));
  CHECK(seq.right().is(TermKind::Guard));

  Term app = term("f a b");
  CHECK(app.left().is(TermKind::App));

  Term prec = term("a =:= b ; c");
  REQUIRE(prec.is(TermKind::Guard));
  CHECK(prec.left().is(TermKind::Unif));

  CHECK_THROWS_AS(term("a =:= b =:= c"), ParseError);
  CHECK_THROWS_AS(prog("(C | D) E"), ParseError);
  CHECK(term("\\x@L3. x").location().id == 3);
  CHECK(term("f \\x. x").right().is(TermKind::Abs));
}

TEST_CASE("parse errors carry positions") {
  try {
    parse_source("cons C : iota.\nC ) D");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
    CHECK(e.column() == 3);
  }
  CHECK_THROWS_AS(parse_source("cons C : iota."), ParseError);
}

TEST_CASE("declarations and definitions") {
  SourceFile f = parse_source(R"(
-- comment
cons C : iota -> iota.
cons D : iota.
base iota = 3.
def twice = \f. \x. f (f x).
twice (\y. C y) D
)");
  CHECK(f.signature.find(ConsName("C")) == parse_type("iota -> iota"));
  REQUIRE(f.bases.size() == 1);
  CHECK(f.bases[0].second == 3);
  REQUIRE(f.defs.size() == 1);
  CHECK(alpha_equal(f.main, prog("(\\f. \\x. f (f x)) (\\y. C y) D")));
  CHECK(parse_program("twice C", f).size() == 1);
  CHECK_THROWS_AS(parse_source("def k = \\x. y.\n\\y. k"), ParseError);
}

TEST_CASE("printing") {
  CHECK(pretty(prog("fail")) == "fail");
  CHECK(pretty(term("\\x@L3. x")) == "\\x@L3. x");
  CHECK(pretty(prog("C D | D")) == "C D | D");
  CHECK(pretty(term("a ; b ; c")) == "a ; b ; c");
  CHECK(pretty(term("(a ; b) ; c")) == "(a ; b) ; c");
  CHECK(pretty(term("f (g x)")) == "f (g x)");
  CHECK(pretty(term("(\\x. x | C) D")) == "(\\x. x | C) D");
  Substitution s;
  s.bind(Var("y"), term("C D"));
  s.bind(Var("x"), test::cons("E"));
  CHECK(pretty(s) == "{x := E, y := C D}");
}

TEST_CASE("round trip on generated programs") {
  Generator gen(GeneratorConfig::untyped(123, 4));
  for (int i = 0; i < 500; ++i) {
    Program p = gen.next();
    CHECK_MESSAGE(alpha_equal(parse_program(pretty(p)), p), pretty(p));
  }
  GeneratorConfig typed = GeneratorConfig::typed(3, 3);
  Generator tg(typed);
  for (int i = 0; i < 50; ++i) {
    Inference inf = infer(typed.gamma, typed.signature, tg.next());
    Program back = parse_program(pretty(inf.annotated));
    CHECK(alpha_equal(back, inf.annotated));
    CHECK(pretty(back) == pretty(inf.annotated));
  }
  // evaluation states include allocated abstractions
  Generator eg(GeneratorConfig::untyped(5, 3));
  for (int i = 0; i < 100; ++i) {
    EvalResult r = evaluate(eg.next(), 20);
    for (const TraceStep& s : r.trace) CHECK(alpha_equal(parse_program(pretty(s.after)), s.after));
  }
}

TEST_CASE("source files round trip") {
  SourceFile f = parse_source("cons C : iota -> iota.\nbase iota = 2.\nfresh x. C x =:= C D ; x\n");
  SourceFile g = parse_source(print_source(f));
  CHECK(print_source(g) == print_source(f));
  CHECK(alpha_equal(g.main, f.main));
}

TEST_CASE("trace replay") {
  Program p = prog("(\\x. x | fresh y. ((x =:= C y); y)) (C D)");
  EvalResult r = evaluate(p, 10);
  std::string text = format_trace(p, r.trace);
  CHECK(text.starts_with("#0 [init]\n"));
  CHECK(text.find("#5 [guard] thread=1\nC D | D\n") != std::string::npos);
  TraceCheck ok = validate_trace(text);
  CHECK(ok.ok);
  CHECK(ok.steps == 5);

  std::string bad = text;
  bad.replace(bad.find("[unif]"), 6, "[beta]");
  CHECK_FALSE(validate_trace(bad).ok);

  std::string wrong = text;
  wrong.replace(wrong.rfind("C D | D"), 7, "C D | E");
  CHECK_FALSE(validate_trace(wrong).ok);

  Generator gen(GeneratorConfig::untyped(61, 3));
  for (int i = 0; i < 100; ++i) {
    Program q = gen.next();
    EvalResult e = evaluate(q, 30, Strategy::random(i));
    TraceCheck c = validate_trace(format_trace(q, e.trace));
    CHECK_MESSAGE(c.ok, c.error);
  }
}

TEST_CASE("corpus files parse and round trip") {
  std::size_t seen = 0;
  for (const auto& entry : std::filesystem::directory_iterator(LUNI_CORPUS_DIR)) {
    if (entry.path().extension() != ".luni") continue;
    std::ifstream in(entry.path());
    std::stringstream ss;
    ss << in.rdbuf();
    SourceFile f = parse_source(ss.str());
    SourceFile g = parse_source(print_source(f));
    CHECK_MESSAGE(alpha_equal(g.main, f.main), entry.path().string());
    CHECK(print_source(g) == print_source(f));
    ++seen;
  }
  CHECK(seen >= 5);
}
