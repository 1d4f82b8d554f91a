#include "luni/types.h"

#include <fmt/format.h>

#include <map>

#include "luni/text.h"

namespace luni {

const Type* TypingContext::find(Var x) const {
  auto it = map_.find(x);
  return it == map_.end() ? nullptr : &it->second;
}

void ConsSignature::declare(ConsName c, Type a) {
  if (a.contains_meta()) throw std::invalid_argument("constructor type with a type variable");
  map_.insert_or_assign(c, std::move(a));
}

std::optional<Type> ConsSignature::find(ConsName c) const {
  auto it = map_.find(c);
  if (it != map_.end()) return it->second;
  if (c == ConsName::ok()) return Type::base("unit");
  return std::nullopt;
}

Type ConsSignature::ok_type() const { return *find(ConsName::ok()); }

std::size_t arity(const Type& a) {
  std::size_t n = 0;
  for (Type t = a; t.is_arrow(); t = t.to()) ++n;
  return n;
}

Type result_type(const Type& a) {
  Type t = a;
  while (t.is_arrow()) t = t.to();
  return t;
}

TypeError::TypeError(std::string rule, std::string message)
    : std::runtime_error(rule + ": " + message), rule_(std::move(rule)) {}

namespace {

std::string rigid_name(std::size_t i) {
  std::string name = "'";
  name += static_cast<char>('a' + i % 26);
  if (i >= 26) name += std::to_string(i / 26);
  return name;
}

class Inferencer {
 public:
  Inferencer(const TypingContext& gamma, const ConsSignature& sigma, bool allow_free)
      : gamma_(gamma), sigma_(sigma), allow_free_(allow_free) {}

  Type fresh_meta() { return Type::meta(next_meta_++); }

  Type resolve(Type a) const {
    while (a.is_meta()) {
      auto it = solution_.find(a.meta_id());
      if (it == solution_.end()) break;
      a = it->second;
    }
    return a;
  }

  Type zonk(const Type& a) const {
    Type r = resolve(a);
    if (r.is_arrow()) return Type::arrow(zonk(r.from()), zonk(r.to()));
    return r;
  }

  void unify(const Type& a, const Type& b, const char* rule, const Term& where) {
    if (!unify_types(a, b)) {
      throw TypeError(rule, fmt::format("cannot match {} with {} in `{}`", zonk(a).str(), zonk(b).str(),
                                        pretty(where)));
    }
  }

  std::pair<Type, Term> term(const Term& t) {
    switch (t.kind()) {
      case TermKind::Var:
        return {lookup(t), t};
      case TermKind::Cons: {
        auto a = sigma_.find(t.cons());
        if (!a) throw TypeError("t-cons", fmt::format("undeclared constructor `{}`", t.cons().name()));
        return {*a, t};
      }
      case TermKind::Abs:
      case TermKind::AbsLoc: {
        Type a = t.annotation() ? *t.annotation() : fresh_meta();
        scope_.emplace_back(t.var(), a);
        auto [b, body] = program(t.body());
        scope_.pop_back();
        Term out = t.is(TermKind::Abs) ? Term::abs(t.var(), std::move(body), a)
                                       : Term::abs_loc(t.location(), t.var(), std::move(body), a);
        return {Type::arrow(a, b), out};
      }
      case TermKind::Fresh: {
        Type a = t.annotation() ? *t.annotation() : fresh_meta();
        scope_.emplace_back(t.var(), a);
        auto [b, body] = term(t.scope());
        scope_.pop_back();
        return {b, Term::fresh(t.var(), std::move(body), a)};
      }
      case TermKind::App: {
        auto [f, l] = term(t.left());
        auto [x, r] = term(t.right());
        Type result = fresh_meta();
        unify(f, Type::arrow(x, result), "t-app", t);
        return {result, Term::app(std::move(l), std::move(r))};
      }
      case TermKind::Guard: {
        auto [g, l] = term(t.left());
        unify(g, sigma_.ok_type(), "t-guard", t.left());
        auto [b, r] = term(t.right());
        return {b, Term::guard(std::move(l), std::move(r))};
      }
      case TermKind::Unif: {
        auto [a, l] = term(t.left());
        auto [b, r] = term(t.right());
        unify(a, b, "t-unif", t);
        return {sigma_.ok_type(), Term::unif(std::move(l), std::move(r))};
      }
    }
    throw std::logic_error("unreachable");
  }

  std::pair<Type, Program> program(const Program& p) {
    Type a = fresh_meta();
    std::vector<Term> threads;
    for (const Term& t : p) {
      auto [b, u] = term(t);
      unify(b, a, "t-alt", t);
      threads.push_back(std::move(u));
    }
    return {a, Program(std::move(threads))};
  }

  /// Replaces solved metas everywhere and names the unsolved ones.
  Inference finish(const Type& a, const Program& p) {
    Inference out{rigid(a), {}, gamma_};
    std::vector<Term> threads;
    for (const Term& t : p) threads.push_back(finish(t));
    out.annotated = Program(std::move(threads));
    for (const auto& [x, b] : free_) out.context.bind(x, rigid(b));
    return out;
  }

 private:
  Type lookup(const Term& t) {
    for (auto it = scope_.rbegin(); it != scope_.rend(); ++it)
      if (it->first == t.var()) return it->second;
    if (const Type* a = gamma_.find(t.var())) return *a;
    if (auto it = free_.find(t.var()); it != free_.end()) return it->second;
    if (!allow_free_) throw TypeError("t-var", fmt::format("unbound variable `{}`", t.var().name()));
    Type a = fresh_meta();
    free_.emplace(t.var(), a);
    return a;
  }

  bool occurs(std::uint32_t m, const Type& a) const {
    Type r = resolve(a);
    if (r.is_meta()) return r.meta_id() == m;
    if (r.is_arrow()) return occurs(m, r.from()) || occurs(m, r.to());
    return false;
  }

  bool unify_types(const Type& a0, const Type& b0) {
    Type a = resolve(a0), b = resolve(b0);
    if (a.is_meta() && b.is_meta() && a.meta_id() == b.meta_id()) return true;
    if (a.is_meta()) {
      if (occurs(a.meta_id(), b)) return false;
      solution_.insert_or_assign(a.meta_id(), b);
      return true;
    }
    if (b.is_meta()) return unify_types(b, a);
    if (a.is_base() && b.is_base()) return a.name() == b.name();
    if (a.is_arrow() && b.is_arrow()) return unify_types(a.from(), b.from()) && unify_types(a.to(), b.to());
    return false;
  }

  Type rigid(const Type& a) {
    Type r = resolve(a);
    if (r.is_arrow()) return Type::arrow(rigid(r.from()), rigid(r.to()));
    if (!r.is_meta()) return r;
    auto it = rigid_.find(r.meta_id());
    if (it == rigid_.end()) it = rigid_.emplace(r.meta_id(), Type::base(rigid_name(rigid_.size()))).first;
    return it->second;
  }

  Term finish(const Term& t) {
    switch (t.kind()) {
      case TermKind::Abs:
      case TermKind::AbsLoc: {
        Type a = rigid(*t.annotation());
        std::vector<Term> threads;
        for (const Term& s : t.body()) threads.push_back(finish(s));
        return t.is(TermKind::Abs) ? Term::abs(t.var(), Program(std::move(threads)), a)
                                   : Term::abs_loc(t.location(), t.var(), Program(std::move(threads)), a);
      }
      case TermKind::Fresh: {
        Type a = rigid(*t.annotation());
        return Term::fresh(t.var(), finish(t.scope()), a);
      }
      case TermKind::App:
        return Term::app(finish(t.left()), finish(t.right()));
      case TermKind::Guard:
        return Term::guard(finish(t.left()), finish(t.right()));
      case TermKind::Unif:
        return Term::unif(finish(t.left()), finish(t.right()));
      default:
        return t;
    }
  }

  const TypingContext& gamma_;
  const ConsSignature& sigma_;
  bool allow_free_;
  std::uint32_t next_meta_ = 0;
  std::map<std::uint32_t, Type> solution_;
  std::vector<std::pair<Var, Type>> scope_;
  std::map<Var, Type> free_;
  std::map<std::uint32_t, Type> rigid_;
};

}  // namespace

Inference infer(const TypingContext& gamma, const ConsSignature& sigma, const Program& p, bool allow_free) {
  Inferencer inf(gamma, sigma, allow_free);
  auto [a, annotated] = inf.program(p);
  return inf.finish(a, annotated);
}

Inference infer(const TypingContext& gamma, const ConsSignature& sigma, const Term& t, bool allow_free) {
  Inferencer inf(gamma, sigma, allow_free);
  auto [a, annotated] = inf.term(t);
  return inf.finish(a, Program{annotated});
}

void check(const TypingContext& gamma, const ConsSignature& sigma, const Program& p, const Type& a) {
  Inferencer inf(gamma, sigma, false);
  auto [b, annotated] = inf.program(p);
  if (p.is_fail()) return;
  inf.unify(b, a, "t-alt", p[0]);
}

void check(const TypingContext& gamma, const ConsSignature& sigma, const Term& t, const Type& a) {
  Inferencer inf(gamma, sigma, false);
  auto [b, annotated] = inf.term(t);
  inf.unify(b, a, "expected type", t);
}

bool has_type(const TypingContext& gamma, const ConsSignature& sigma, const Program& p, const Type& a) {
  try {
    check(gamma, sigma, p, a);
    return true;
  } catch (const TypeError&) {
    return false;
  }
}

SubjectReductionReport subject_reduction_check(const TypingContext& gamma, const ConsSignature& sigma, const Program& p,
                                               std::size_t fuel, const Strategy& strategy) {
  Inference inf = infer(gamma, sigma, p, true);
  SubjectReductionReport report;
  report.type = inf.type;
  TypingContext context = inf.context;
  Session session(inf.annotated, strategy);
  report.lines.push_back(fmt::format("#0 [init] : {}", inf.type.str()));
  while (report.steps < fuel) {
    auto s = session.step();
    if (!s) {
      report.normal = true;
      break;
    }
    ++report.steps;
    if (s->rule == RuleTag::Fresh) context.bind(*s->fresh_var, *s->fresh_type);
    try {
      check(context, sigma, s->after, inf.type);
      report.lines.push_back(fmt::format("#{} [{}] thread={} : {}", report.steps, to_string(s->rule), s->thread,
                                         inf.type.str()));
    } catch (const TypeError& e) {
      report.pass = false;
      report.failed_step = report.steps;
      report.error = e.what();
      report.lines.push_back(fmt::format("#{} [{}] thread={} FAILED {}", report.steps, to_string(s->rule), s->thread,
                                         e.what()));
      break;
    }
  }
  if (!report.normal && report.pass && !session.find_redex()) report.normal = true;
  return report;
}

}  // namespace luni
