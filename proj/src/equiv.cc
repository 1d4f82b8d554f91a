#include "luni/equiv.h"

#include <fmt/format.h>

#include <algorithm>
#include <map>

namespace luni {

namespace {

class Canonicalizer {
 public:
  std::string key;

  Term visit(const Term& t) {
    switch (t.kind()) {
      case TermKind::Var:
        return Term::var(rename(t.var()));
      case TermKind::Cons:
        key += 'C';
        key += t.cons().name();
        key += ' ';
        return t;
      case TermKind::Abs:
      case TermKind::AbsLoc: {
        std::optional<Location> loc;
        if (t.is(TermKind::AbsLoc)) loc = relocate(t.location());
        Var b = bind(t.var());
        key += loc ? fmt::format("(L{} {} ", loc->id, b.name()) : fmt::format("(\\ {} ", b.name());
        std::vector<Term> threads;
        for (const Term& s : t.body()) {
          threads.push_back(visit(s));
          key += "| ";
        }
        unbind();
        key += ") ";
        return loc ? Term::abs_loc(*loc, b, Program(std::move(threads))) : Term::abs(b, Program(std::move(threads)));
      }
      case TermKind::Fresh: {
        Var b = bind(t.var());
        key += fmt::format("(N {} ", b.name());
        Term body = visit(t.scope());
        unbind();
        key += ") ";
        return Term::fresh(b, std::move(body));
      }
      case TermKind::App:
        return binary(t, "(@ ", Term::app);
      case TermKind::Guard:
        return binary(t, "(; ", Term::guard);
      case TermKind::Unif:
        return binary(t, "(= ", Term::unif);
    }
    return t;
  }

 private:
  Term binary(const Term& t, const char* tag, Term (*make)(Term, Term)) {
    key += tag;
    Term l = visit(t.left());
    Term r = visit(t.right());
    key += ") ";
    return make(std::move(l), std::move(r));
  }

  Var rename(Var x) {
    for (auto it = scope_.rbegin(); it != scope_.rend(); ++it) {
      if (it->first == x) {
        key += it->second.name();
        key += ' ';
        return it->second;
      }
    }
    auto [it, inserted] = free_.try_emplace(x, Var{});
    if (inserted) it->second = Var(fmt::format("v{}", free_.size() - 1));
    key += it->second.name();
    key += ' ';
    return it->second;
  }

  Var bind(Var x) {
    Var b(fmt::format("b{}", binders_++));
    scope_.emplace_back(x, b);
    return b;
  }

  void unbind() { scope_.pop_back(); }

  Location relocate(Location l) {
    auto [it, inserted] = locs_.try_emplace(l, Location{static_cast<std::uint32_t>(locs_.size())});
    return it->second;
  }

  std::vector<std::pair<Var, Var>> scope_;
  std::map<Var, Var> free_;
  std::map<Location, Location> locs_;
  std::uint32_t binders_ = 0;
};

}  // namespace

CanonicalThread canonical_thread(const Term& t) {
  Canonicalizer c;
  Term term = c.visit(t);
  return {std::move(term), std::move(c.key)};
}

std::vector<std::string> canonical_keys(const Program& p) {
  std::vector<std::string> keys;
  keys.reserve(p.size());
  for (const Term& t : p) keys.push_back(canonical_thread(t).key);
  std::sort(keys.begin(), keys.end());
  return keys;
}

std::string program_key(const Program& p) {
  std::string out;
  for (const std::string& k : canonical_keys(p)) {
    out += k;
    out += "||";
  }
  return out;
}

bool struct_equiv(const Program& p, const Program& q) {
  return p.size() == q.size() && canonical_keys(p) == canonical_keys(q);
}

std::string to_string(StuckKind k) {
  switch (k) {
    case StuckKind::Var: return "stuck-var";
    case StuckKind::Cons: return "stuck-cons";
    case StuckKind::Guard: return "stuck-guard";
    case StuckKind::Unif: return "stuck-unif";
    case StuckKind::Lam: return "stuck-lam";
  }
  return "?";
}

namespace {

bool all_normal(const std::vector<Term>& ts, std::size_t from = 0) {
  for (std::size_t i = from; i < ts.size(); ++i)
    if (!is_normal_term(ts[i])) return false;
  return true;
}

std::optional<StuckDerivation> derive(StuckKind kind, const Term& t, std::optional<StuckDerivation> premise) {
  StuckDerivation d{kind, t, nullptr};
  if (premise) d.premise = std::make_shared<const StuckDerivation>(std::move(*premise));
  return d;
}

}  // namespace

std::optional<StuckDerivation> is_stuck(const Term& t) {
  if (t.is_value()) return std::nullopt;
  Spine s = spine_of(t);
  switch (s.head.kind()) {
    case TermKind::Var:
      if (!s.args.empty() && all_normal(s.args)) return derive(StuckKind::Var, t, std::nullopt);
      return std::nullopt;
    case TermKind::Cons: {
      if (!all_normal(s.args)) return std::nullopt;
      for (const Term& a : s.args)
        if (auto d = is_stuck(a)) return derive(StuckKind::Cons, t, d);
      return std::nullopt;
    }
    case TermKind::Guard: {
      auto d = is_stuck(s.head.left());
      if (d && is_normal_term(s.head.right()) && all_normal(s.args)) return derive(StuckKind::Guard, t, d);
      return std::nullopt;
    }
    case TermKind::Unif: {
      if (!is_normal_term(s.head.left()) || !is_normal_term(s.head.right()) || !all_normal(s.args))
        return std::nullopt;
      auto d = is_stuck(s.head.left());
      if (!d) d = is_stuck(s.head.right());
      if (d) return derive(StuckKind::Unif, t, d);
      return std::nullopt;
    }
    case TermKind::AbsLoc: {
      if (s.args.empty()) return std::nullopt;
      auto d = is_stuck(s.args[0]);
      if (d && all_normal(s.args, 1)) return derive(StuckKind::Lam, t, d);
      return std::nullopt;
    }
    default:
      return std::nullopt;
  }
}

bool is_normal_term(const Term& t) { return t.is_value() || is_stuck(t).has_value(); }

bool is_normal_program(const Program& p) {
  return std::all_of(p.begin(), p.end(), [](const Term& t) { return is_normal_term(t); });
}

}  // namespace luni
