#include "luni/hm.h"

#include <stdexcept>
#include <string>

#include "luni/eval.h"

namespace luni {

ConsName arrow_cons() { return ConsName("F"); }

namespace {

Var type_var(Var x) { return Var("a_" + x.name()); }

struct Translator {
  std::size_t next = 0;

  Term go(const Term& t) {
    switch (t.kind()) {
      case TermKind::Var:
        return Term::var(type_var(t.var()));
      case TermKind::Abs: {
        if (t.body().size() != 1) throw std::invalid_argument("hm_translate: abstraction body must be one thread");
        Var a = type_var(t.var());
        Term body = go(t.body()[0]);
        std::vector<Term> args{Term::var(a), body};
        return Term::fresh(a, Term::spine(Term::cons(arrow_cons()), args));
      }
      case TermKind::App: {
        Term fun = go(t.left());
        Term arg = go(t.right());
        Var r("r" + std::to_string(++next));
        std::vector<Term> args{arg, Term::var(r)};
        Term goal = Term::unif(fun, Term::spine(Term::cons(arrow_cons()), args));
        return Term::fresh(r, Term::guard(goal, Term::var(r)));
      }
      default:
        throw std::invalid_argument("hm_translate: not a pure lambda term");
    }
  }
};

}  // namespace

Term hm_translate(const Term& lambda) {
  Translator tr;
  return tr.go(lambda);
}

HmResult hm_infer(const Term& lambda, std::size_t fuel) {
  EvalOptions opts;
  opts.record_trace = false;
  EvalResult r = evaluate(Program{hm_translate(lambda)}, fuel, Strategy::leftmost(), opts);
  HmResult out;
  out.normal = r.program;
  out.out_of_fuel = !r.normal();
  if (r.normal() && r.program.size() == 1 && r.program[0].is_value()) out.type = r.program[0];
  return out;
}

}  // namespace luni
