#include "luni/unify.h"

#include <fmt/format.h>

#include <algorithm>

namespace luni {

bool operator==(const Goal& a, const Goal& b) {
  return alpha_equal(a.lhs, b.lhs) && alpha_equal(a.rhs, b.rhs);
}

UnificationProblem::UnificationProblem(std::initializer_list<Goal> goals) {
  for (const Goal& g : goals) add(g);
}

void UnificationProblem::add(Goal g) {
  if (!g.lhs.is_value() || !g.rhs.is_value())
    throw std::invalid_argument("unification goal between non-values");
  if (std::find(goals_.begin(), goals_.end(), g) != goals_.end()) return;
  goals_.push_back(std::move(g));
}

void UnificationProblem::add_all(const UnificationProblem& other) {
  for (const Goal& g : other.goals_) add(g);
}

VarSet UnificationProblem::free_vars() const { return luni::free_vars(Program(terms())); }

LocationSet UnificationProblem::locations() const { return luni::locations(Program(terms())); }

std::vector<Term> UnificationProblem::terms() const {
  std::vector<Term> out;
  out.reserve(2 * goals_.size());
  for (const Goal& g : goals_) {
    out.push_back(g.lhs);
    out.push_back(g.rhs);
  }
  return out;
}

bool operator==(const UnificationProblem& a, const UnificationProblem& b) {
  if (a.size() != b.size()) return false;
  for (const Goal& g : a.goals_)
    if (std::find(b.goals_.begin(), b.goals_.end(), g) == b.goals_.end()) return false;
  return true;
}

std::string to_string(ClashKind k) {
  switch (k) {
    case ClashKind::Constructor: return "constructor clash";
    case ClashKind::Arity: return "arity clash";
    case ClashKind::Type: return "type clash";
    case ClashKind::Location: return "location clash";
    case ClashKind::OccursCheck: return "occurs check";
  }
  return "?";
}

std::string to_string(UnifyRule r) {
  switch (r) {
    case UnifyRule::Delete: return "u-delete";
    case UnifyRule::Clash: return "u-clash";
    case UnifyRule::OccursCheck: return "u-occurs-check";
    case UnifyRule::Orient: return "u-orient";
    case UnifyRule::MatchLam: return "u-match-lam";
    case UnifyRule::MatchCons: return "u-match-cons";
    case UnifyRule::Eliminate: return "u-eliminate";
  }
  return "?";
}

std::optional<ClashKind> clash(const Term& v, const Term& w) {
  const bool vs = v.is_structure(), ws = w.is_structure();
  const bool vl = v.is(TermKind::AbsLoc), wl = w.is(TermKind::AbsLoc);
  if (vs && ws) {
    Spine a = spine_of(v), b = spine_of(w);
    if (a.head.cons() != b.head.cons()) return ClashKind::Constructor;
    if (a.args.size() != b.args.size()) return ClashKind::Arity;
    return std::nullopt;
  }
  if ((vs && wl) || (vl && ws)) return ClashKind::Type;
  if (vl && wl && v.location() != w.location()) return ClashKind::Location;
  return std::nullopt;
}

namespace {

bool mentions(const UnificationProblem& g, std::size_t skip, Var x) {
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (i == skip) continue;
    const Goal& goal = g.goals()[i];
    if (contains(goal.lhs.free_vars(), x) || contains(goal.rhs.free_vars(), x)) return true;
  }
  return false;
}

UnifyStep stepped(UnifyRule rule, UnificationProblem next) {
  UnifyStep s;
  s.status = UnifyStep::Status::Stepped;
  s.rule = rule;
  s.next = std::move(next);
  return s;
}

UnifyStep bottom(UnifyRule rule, ClashKind kind, const Goal& goal) {
  UnifyStep s;
  s.status = UnifyStep::Status::Bottom;
  s.rule = rule;
  s.failure = kind;
  s.witness = goal;
  return s;
}

/// Rebuilds the problem with goal `at` replaced by `replacement`, optionally
/// transforming every other goal.
template <typename F>
UnificationProblem rebuild(const UnificationProblem& g, std::size_t at, const std::vector<Goal>& replacement,
                           F&& other) {
  UnificationProblem out;
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (i == at) {
      for (const Goal& r : replacement) out.add(r);
    } else {
      out.add(other(g.goals()[i]));
    }
  }
  return out;
}

const auto keep = [](const Goal& g) { return g; };

}  // namespace

UnifyStep unify_step(const UnificationProblem& g) {
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Goal& goal = g.goals()[i];
    const Term& v = goal.lhs;
    const Term& w = goal.rhs;
    const bool vvar = v.is(TermKind::Var), wvar = w.is(TermKind::Var);

    if (vvar && wvar && v.var() == w.var()) return stepped(UnifyRule::Delete, rebuild(g, i, {}, keep));
    if (auto k = clash(v, w)) return bottom(UnifyRule::Clash, *k, goal);
    if (vvar && contains(w.free_vars(), v.var())) return bottom(UnifyRule::OccursCheck, ClashKind::OccursCheck, goal);
    if (!vvar && wvar) return stepped(UnifyRule::Orient, rebuild(g, i, {Goal{w, v}}, keep));
    if (v.is(TermKind::AbsLoc) && w.is(TermKind::AbsLoc)) {
      if (!alpha_equal(v, w)) {
        throw CoherenceError(CoherenceViolation{
            CoherenceViolation::Condition::LocationConflict, 0, v.location(),
            fmt::format("goal relates two different abstractions at L{}", v.location().id)});
      }
      return stepped(UnifyRule::MatchLam, rebuild(g, i, {}, keep));
    }
    if (v.is_structure() && w.is_structure()) {
      Spine a = spine_of(v), b = spine_of(w);
      std::vector<Goal> args;
      for (std::size_t k = 0; k < a.args.size(); ++k) args.push_back({a.args[k], b.args[k]});
      return stepped(UnifyRule::MatchCons, rebuild(g, i, args, keep));
    }
    if (vvar && mentions(g, i, v.var())) {
      Substitution s = Substitution::single(v.var(), w);
      return stepped(UnifyRule::Eliminate, rebuild(g, i, {goal}, [&](const Goal& other) {
                       return Goal{subst_apply(other.lhs, s), subst_apply(other.rhs, s)};
                     }));
    }
  }
  return UnifyStep{};
}

UnifyOutcome mgu(const UnificationProblem& g) {
  UnificationProblem current = g;
  for (;;) {
    UnifyStep s = unify_step(current);
    switch (s.status) {
      case UnifyStep::Status::Stepped:
        current = std::move(s.next);
        break;
      case UnifyStep::Status::Bottom:
        return Failed{*s.failure, *s.witness};
      case UnifyStep::Status::NormalForm: {
        Substitution sigma;
        for (const Goal& goal : current.goals()) sigma.bind(goal.lhs.var(), goal.rhs);
        return Solved{std::move(sigma)};
      }
    }
  }
}

UnifyOutcome mgu(const Term& lhs, const Term& rhs) { return mgu(UnificationProblem{Goal{lhs, rhs}}); }

bool is_unifier(const Substitution& sigma, const UnificationProblem& g) {
  for (const Goal& goal : g.goals())
    if (!alpha_equal(subst_apply(goal.lhs, sigma), subst_apply(goal.rhs, sigma))) return false;
  return true;
}

UnificationProblem goal_subst(const UnificationProblem& g, const Substitution& sigma) {
  UnificationProblem out;
  for (const Goal& goal : g.goals()) out.add({subst_apply(goal.lhs, sigma), subst_apply(goal.rhs, sigma)});
  return out;
}

bool is_solved_form(const UnificationProblem& g) {
  VarSet lhs;
  for (const Goal& goal : g.goals()) {
    if (!goal.lhs.is(TermKind::Var)) return false;
    lhs.push_back(goal.lhs.var());
  }
  std::sort(lhs.begin(), lhs.end());
  if (std::adjacent_find(lhs.begin(), lhs.end()) != lhs.end()) return false;
  for (const Goal& goal : g.goals())
    for (Var x : goal.rhs.free_vars())
      if (contains(lhs, x)) return false;
  return true;
}

}  // namespace luni
