#include "luni/eval.h"

#include <fmt/format.h>

#include <charconv>
#include <deque>
#include <unordered_set>

#include "luni/equiv.h"

namespace luni {

std::string to_string(RuleTag r) {
  switch (r) {
    case RuleTag::Alloc: return "alloc";
    case RuleTag::Beta: return "beta";
    case RuleTag::Guard: return "guard";
    case RuleTag::Fresh: return "fresh";
    case RuleTag::Unif: return "unif";
    case RuleTag::Fail: return "fail";
  }
  return "?";
}

std::optional<RuleTag> parse_rule_tag(std::string_view s) {
  for (RuleTag r : {RuleTag::Alloc, RuleTag::Beta, RuleTag::Guard, RuleTag::Fresh, RuleTag::Unif, RuleTag::Fail})
    if (to_string(r) == s) return r;
  return std::nullopt;
}

namespace {

class RedexCollector {
 public:
  RedexCollector(std::size_t thread, bool mirrored) : thread_(thread), mirrored_(mirrored) {}

  std::vector<Redex> found;

  void visit(const Term& t) {
    using Slot = WeakContext::Slot;
    switch (t.kind()) {
      case TermKind::Abs:
        emit(t, RuleTag::Alloc);
        return;
      case TermKind::Fresh:
        emit(t, RuleTag::Fresh);
        return;
      case TermKind::App:
        children(t, Slot::AppFun, Slot::AppArg);
        if (t.left().is(TermKind::AbsLoc) && t.right().is_value()) emit(t, RuleTag::Beta);
        return;
      case TermKind::Guard:
        children(t, Slot::GuardFirst, Slot::GuardThen);
        if (t.left().is_value()) emit(t, RuleTag::Guard);
        return;
      case TermKind::Unif:
        children(t, Slot::UnifLeft, Slot::UnifRight);
        if (t.left().is_value() && t.right().is_value()) {
          UnifyOutcome outcome = mgu(t.left(), t.right());
          if (auto* solved = std::get_if<Solved>(&outcome)) {
            emit(t, RuleTag::Unif);
            found.back().unifier = std::move(solved->sigma);
          } else {
            emit(t, RuleTag::Fail);
          }
        }
        return;
      default:
        return;
    }
  }

 private:
  void children(const Term& t, WeakContext::Slot left, WeakContext::Slot right) {
    if (mirrored_) {
      descend(t.right(), right, t.left());
      descend(t.left(), left, t.right());
    } else {
      descend(t.left(), left, t.right());
      descend(t.right(), right, t.left());
    }
  }

  void descend(const Term& child, WeakContext::Slot slot, const Term& sibling) {
    context_.descend(slot, sibling);
    visit(child);
    context_.ascend();
  }

  void emit(const Term& focus, RuleTag rule) { found.push_back(Redex{thread_, context_, focus, rule, std::nullopt}); }

  std::size_t thread_;
  bool mirrored_;
  WeakContext context_;
};

std::vector<Redex> collect(const Term& t, std::size_t thread, bool mirrored) {
  RedexCollector c(thread, mirrored);
  c.visit(t);
  return std::move(c.found);
}

void check_or_throw(const Program& p) {
  if (auto v = check_coherence(p)) throw CoherenceError(*v);
}

}  // namespace

std::vector<Redex> thread_redexes(const Term& t, std::size_t thread) { return collect(t, thread, false); }

std::vector<Redex> all_redexes(const Program& p) {
  std::vector<Redex> out;
  for (std::size_t i = 0; i < p.size(); ++i) {
    auto rs = thread_redexes(p[i], i);
    out.insert(out.end(), std::make_move_iterator(rs.begin()), std::make_move_iterator(rs.end()));
  }
  return out;
}

std::optional<Strategy> Strategy::parse(std::string_view s) {
  if (s == "leftmost") return leftmost();
  if (s == "rightmost") return rightmost();
  if (s == "random") return random(0);
  if (s.starts_with("random:")) {
    std::uint64_t seed = 0;
    auto digits = s.substr(7);
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), seed);
    if (ec != std::errc{} || ptr != digits.data() + digits.size()) return std::nullopt;
    return random(seed);
  }
  return std::nullopt;
}

std::string Strategy::name() const {
  switch (kind) {
    case Kind::Leftmost: return "leftmost";
    case Kind::Rightmost: return "rightmost";
    case Kind::Random: return fmt::format("random:{}", seed);
  }
  return "?";
}

TraceStep fire(const Program& p, const Redex& r, LocationSupply& supply) {
  TraceStep s{r.rule, r.thread, p, {}, std::nullopt, std::nullopt, std::nullopt, std::nullopt};
  const Term& focus = r.focus;
  Program replacement;
  switch (r.rule) {
    case RuleTag::Alloc: {
      Location l = supply.next();
      s.location = l;
      replacement = Program{plug(r.context, Term::abs_loc(l, focus.var(), focus.body(), focus.annotation()))};
      break;
    }
    case RuleTag::Beta: {
      const Term& fun = focus.left();
      replacement = plug(r.context, subst_single(fun.body(), fun.var(), focus.right()));
      break;
    }
    case RuleTag::Guard:
      replacement = Program{plug(r.context, focus.right())};
      break;
    case RuleTag::Fresh: {
      Var y = Var::fresh(focus.var());
      s.fresh_var = y;
      s.fresh_type = focus.annotation();
      replacement = Program{plug(r.context, rename_var(focus.scope(), focus.var(), y))};
      break;
    }
    case RuleTag::Unif: {
      const Substitution& sigma = *r.unifier;
      s.unifier = sigma;
      replacement = Program{subst_apply(plug(r.context, Term::cons(ConsName::ok())), sigma)};
      break;
    }
    case RuleTag::Fail:
      break;
  }
  std::vector<Term> threads;
  threads.reserve(p.size() + replacement.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i == r.thread) {
      threads.insert(threads.end(), replacement.begin(), replacement.end());
    } else {
      threads.push_back(p[i]);
    }
  }
  s.after = Program(std::move(threads));
  return s;
}

Session::Session(Program initial, Strategy strategy, EvalOptions options)
    : current_(std::move(initial)), strategy_(strategy), options_(options), rng_(strategy.seed) {
  check_or_throw(current_);
  supply_.reserve_above(current_);
}

std::optional<Redex> Session::find_redex() const {
  switch (strategy_.kind) {
    case Strategy::Kind::Leftmost:
      for (std::size_t i = 0; i < current_.size(); ++i) {
        auto rs = collect(current_[i], i, false);
        if (!rs.empty()) return std::move(rs.front());
      }
      return std::nullopt;
    case Strategy::Kind::Rightmost:
      for (std::size_t i = current_.size(); i-- > 0;) {
        auto rs = collect(current_[i], i, true);
        if (!rs.empty()) return std::move(rs.front());
      }
      return std::nullopt;
    case Strategy::Kind::Random: {
      auto rs = all_redexes(current_);
      if (rs.empty()) return std::nullopt;
      return std::move(rs[rng_() % rs.size()]);
    }
  }
  return std::nullopt;
}

std::optional<TraceStep> Session::step() {
  auto r = find_redex();
  if (!r) return std::nullopt;
  TraceStep s = fire(current_, *r, supply_);
  if (options_.check_every_step) check_or_throw(s.after);
  current_ = s.after;
  return s;
}

std::optional<Redex> find_redex(const Program& p, const Strategy& strategy) {
  return Session(p, strategy, EvalOptions{false, false}).find_redex();
}

std::optional<std::pair<Program, TraceStep>> step(const Program& p, const Strategy& strategy) {
  Session session(p, strategy);
  auto s = session.step();
  if (!s) return std::nullopt;
  return std::make_pair(s->after, std::move(*s));
}

EvalResult evaluate(const Program& p, std::size_t fuel, const Strategy& strategy, EvalOptions options) {
  Session session(p, strategy, options);
  EvalResult result{EvalResult::Status::OutOfFuel, {}, {}, 0};
  for (;;) {
    if (result.steps == fuel) {
      if (!session.find_redex()) result.status = EvalResult::Status::Normal;
      break;
    }
    auto s = session.step();
    if (!s) {
      result.status = EvalResult::Status::Normal;
      break;
    }
    ++result.steps;
    if (options.record_trace) result.trace.push_back(std::move(*s));
  }
  result.program = session.current();
  return result;
}

std::string to_string(Reachable::Status s) {
  switch (s) {
    case Reachable::Status::Complete: return "complete";
    case Reachable::Status::StateBound: return "state-bound";
    case Reachable::Status::Fuel: return "fuel";
  }
  return "?";
}

Reachable reachable_normal_forms(const Program& p, std::size_t fuel, std::size_t max_states) {
  check_or_throw(p);
  Reachable out;
  LocationSupply supply = LocationSupply::after(p);
  std::unordered_set<std::string> visited{program_key(p)};
  std::unordered_set<std::string> normal_keys;
  std::deque<std::pair<Program, std::size_t>> queue{{p, 0}};
  while (!queue.empty()) {
    auto [current, depth] = std::move(queue.front());
    queue.pop_front();
    auto redexes = all_redexes(current);
    if (redexes.empty()) {
      if (normal_keys.insert(program_key(current)).second) out.normal_forms.push_back(current);
      continue;
    }
    if (depth >= fuel) {
      if (out.status == Reachable::Status::Complete) out.status = Reachable::Status::Fuel;
      continue;
    }
    for (const Redex& r : redexes) {
      Program next = fire(current, r, supply).after;
      std::string key = program_key(next);
      if (visited.contains(key)) continue;
      if (visited.size() >= max_states) {
        out.status = Reachable::Status::StateBound;
        continue;
      }
      visited.insert(std::move(key));
      queue.emplace_back(std::move(next), depth + 1);
    }
  }
  out.states = visited.size();
  return out;
}

}  // namespace luni
