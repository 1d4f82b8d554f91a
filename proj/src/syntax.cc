#include "luni/syntax.h"

#include <fmt/format.h>

#include <algorithm>
#include <cctype>
#include <deque>
#include <mutex>
#include <unordered_map>

namespace luni {

namespace {

class Interner {
 public:
  Interner() { intern_locked(""); }

  std::uint32_t intern(std::string_view s) {
    std::lock_guard lock(mu_);
    return intern_locked(s);
  }

  const std::string& name(std::uint32_t id) {
    std::lock_guard lock(mu_);
    return names_[id];
  }

  std::uint32_t fresh(std::uint32_t base) {
    std::lock_guard lock(mu_);
    std::string stem = names_[base];
    while (stem.size() > 1 && std::isdigit(static_cast<unsigned char>(stem.back()))) stem.pop_back();
    std::uint32_t& counter = suffix_[stem];
    for (;;) {
      std::string candidate = stem + std::to_string(++counter);
      if (!index_.contains(candidate)) return intern_locked(candidate);
    }
  }

 private:
  std::uint32_t intern_locked(std::string_view s) {
    if (auto it = index_.find(std::string(s)); it != index_.end()) return it->second;
    auto id = static_cast<std::uint32_t>(names_.size());
    names_.emplace_back(s);
    index_.emplace(names_.back(), id);
    return id;
  }

  std::mutex mu_;
  std::deque<std::string> names_;
  std::unordered_map<std::string, std::uint32_t> index_;
  std::unordered_map<std::string, std::uint32_t> suffix_;
};

Interner& var_names() {
  static Interner interner;
  return interner;
}

Interner& cons_names() {
  static Interner interner;
  return interner;
}

VarSet set_union(const VarSet& a, const VarSet& b) {
  if (a.empty()) return b;
  if (b.empty()) return a;
  VarSet out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

VarSet set_remove(VarSet s, Var x) {
  auto it = std::lower_bound(s.begin(), s.end(), x);
  if (it != s.end() && *it == x) s.erase(it);
  return s;
}

std::shared_ptr<Term::Node> make_node(TermKind kind) {
  auto n = std::make_shared<Term::Node>();
  n->kind = kind;
  return n;
}

void fill_binary(Term::Node& n, Term l, Term r) {
  n.fv = set_union(l.free_vars(), r.free_vars());
  n.has_locations = l.has_locations() || r.has_locations();
  n.size = 1 + l.size() + r.size();
  n.left = std::move(l);
  n.right = std::move(r);
}

void fill_program_stats(Term::Node& n) {
  VarSet fv;
  bool locs = false;
  std::size_t size = 1;
  for (const Term& t : n.body) {
    fv = set_union(fv, t.free_vars());
    locs = locs || t.has_locations();
    size += t.size();
  }
  n.fv = set_remove(std::move(fv), n.var);
  n.has_locations = locs;
  n.size = size;
}

}  // namespace

bool contains(const VarSet& set, Var x) { return std::binary_search(set.begin(), set.end(), x); }

Var::Var(std::string_view name) {
  if (name.empty()) throw std::invalid_argument("empty variable name");
  id_ = var_names().intern(name);
}

Var Var::fresh(Var base) {
  Var v;
  v.id_ = var_names().fresh(base.id_ == 0 ? var_names().intern("x") : base.id_);
  return v;
}

const std::string& Var::name() const { return var_names().name(id_); }

ConsName::ConsName(std::string_view name) {
  if (name.empty()) throw std::invalid_argument("empty constructor name");
  id_ = cons_names().intern(name);
}

ConsName ConsName::ok() {
  static const ConsName ok("Ok");
  return ok;
}

const std::string& ConsName::name() const { return cons_names().name(id_); }

Term Term::var(Var x) {
  auto n = make_node(TermKind::Var);
  n->var = x;
  n->fv = {x};
  n->is_value = true;
  return Term(std::move(n));
}

Term Term::cons(ConsName c) {
  auto n = make_node(TermKind::Cons);
  n->cons = c;
  n->is_value = true;
  n->is_structure = true;
  return Term(std::move(n));
}

Term Term::abs(Var x, Program body, std::optional<Type> annotation) {
  auto n = make_node(TermKind::Abs);
  n->var = x;
  n->annotation = std::move(annotation);
  n->body = std::move(body);
  fill_program_stats(*n);
  return Term(std::move(n));
}

Term Term::abs_loc(Location loc, Var x, Program body, std::optional<Type> annotation) {
  auto n = make_node(TermKind::AbsLoc);
  n->var = x;
  n->loc = loc;
  n->annotation = std::move(annotation);
  n->body = std::move(body);
  fill_program_stats(*n);
  n->has_locations = true;
  n->is_value = true;
  return Term(std::move(n));
}

Term Term::app(Term fun, Term arg) {
  auto n = make_node(TermKind::App);
  n->is_structure = fun.is_structure() && arg.is_value();
  n->is_value = n->is_structure;
  fill_binary(*n, std::move(fun), std::move(arg));
  return Term(std::move(n));
}

Term Term::fresh(Var x, Term body, std::optional<Type> annotation) {
  auto n = make_node(TermKind::Fresh);
  n->var = x;
  n->annotation = std::move(annotation);
  n->fv = set_remove(body.free_vars(), x);
  n->has_locations = body.has_locations();
  n->size = 1 + body.size();
  n->left = std::move(body);
  return Term(std::move(n));
}

Term Term::guard(Term first, Term then) {
  auto n = make_node(TermKind::Guard);
  fill_binary(*n, std::move(first), std::move(then));
  return Term(std::move(n));
}

Term Term::unif(Term lhs, Term rhs) {
  auto n = make_node(TermKind::Unif);
  fill_binary(*n, std::move(lhs), std::move(rhs));
  return Term(std::move(n));
}

Term Term::spine(Term head, std::span<const Term> args) {
  for (const Term& a : args) head = app(std::move(head), a);
  return head;
}

Term Term::with_annotation(std::optional<Type> annotation) const {
  switch (kind()) {
    case TermKind::Abs:
      return abs(var(), body(), std::move(annotation));
    case TermKind::AbsLoc:
      return abs_loc(location(), var(), body(), std::move(annotation));
    case TermKind::Fresh:
      return fresh(var(), scope(), std::move(annotation));
    default:
      throw std::logic_error("with_annotation on a non-binder");
  }
}

Program& Program::append(const Program& other) {
  threads_.insert(threads_.end(), other.threads_.begin(), other.threads_.end());
  return *this;
}

namespace {

class AlphaComparator {
 public:
  bool equal(const Term& a, const Term& b) {
    if (a.size() != b.size() || a.kind() != b.kind()) return false;
    if (a.same(b) && lhs_ == rhs_) return true;
    switch (a.kind()) {
      case TermKind::Var:
        return same_var(a.var(), b.var());
      case TermKind::Cons:
        return a.cons() == b.cons();
      case TermKind::AbsLoc:
        if (a.location() != b.location()) return false;
        [[fallthrough]];
      case TermKind::Abs: {
        push(a.var(), b.var());
        bool eq = equal(a.body(), b.body());
        pop();
        return eq;
      }
      case TermKind::Fresh: {
        push(a.var(), b.var());
        bool eq = equal(a.scope(), b.scope());
        pop();
        return eq;
      }
      case TermKind::App:
      case TermKind::Guard:
      case TermKind::Unif:
        return equal(a.left(), b.left()) && equal(a.right(), b.right());
    }
    return false;
  }

  bool equal(const Program& a, const Program& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
      if (!equal(a[i], b[i])) return false;
    return true;
  }

 private:
  static std::ptrdiff_t depth_of(const std::vector<Var>& stack, Var x) {
    for (std::size_t i = stack.size(); i-- > 0;)
      if (stack[i] == x) return static_cast<std::ptrdiff_t>(i);
    return -1;
  }

  bool same_var(Var x, Var y) const {
    auto i = depth_of(lhs_, x);
    auto j = depth_of(rhs_, y);
    if (i < 0 && j < 0) return x == y;
    return i == j;
  }

  void push(Var x, Var y) {
    lhs_.push_back(x);
    rhs_.push_back(y);
  }
  void pop() {
    lhs_.pop_back();
    rhs_.pop_back();
  }

  std::vector<Var> lhs_;
  std::vector<Var> rhs_;
};

}  // namespace

bool alpha_equal(const Term& a, const Term& b) { return AlphaComparator{}.equal(a, b); }
bool alpha_equal(const Program& a, const Program& b) { return AlphaComparator{}.equal(a, b); }

Spine spine_of(const Term& t) {
  Spine s{t, {}};
  while (s.head.is(TermKind::App)) {
    s.args.push_back(s.head.right());
    s.head = s.head.left();
  }
  std::reverse(s.args.begin(), s.args.end());
  return s;
}

VarSet free_vars(const Term& t) { return t.free_vars(); }

VarSet free_vars(const Program& p) {
  VarSet out;
  for (const Term& t : p) out = set_union(out, t.free_vars());
  return out;
}

namespace {

void collect_locations(const Term& t, LocationSet& out) {
  if (!t.has_locations()) return;
  switch (t.kind()) {
    case TermKind::AbsLoc:
      out.push_back(t.location());
      [[fallthrough]];
    case TermKind::Abs:
      for (const Term& s : t.body()) collect_locations(s, out);
      break;
    case TermKind::Fresh:
      collect_locations(t.scope(), out);
      break;
    case TermKind::App:
    case TermKind::Guard:
    case TermKind::Unif:
      collect_locations(t.left(), out);
      collect_locations(t.right(), out);
      break;
    default:
      break;
  }
}

void normalize(LocationSet& s) {
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
}

}  // namespace

LocationSet locations(const Term& t) {
  LocationSet out;
  collect_locations(t, out);
  normalize(out);
  return out;
}

LocationSet locations(const Program& p) {
  LocationSet out;
  for (const Term& t : p) collect_locations(t, out);
  normalize(out);
  return out;
}

bool is_value(const Term& t) { return t.is_value(); }

Substitution Substitution::single(Var x, Term v) {
  Substitution s;
  s.bind(x, std::move(v));
  return s;
}

void Substitution::bind(Var x, Term v) {
  if (!v.is_value())
    throw std::invalid_argument(fmt::format("substitution for `{}` is not a value", x.name()));
  if (v.is(TermKind::Var) && v.var() == x) {
    map_.erase(x);
    return;
  }
  map_.insert_or_assign(x, std::move(v));
}

const Term* Substitution::find(Var x) const {
  auto it = map_.find(x);
  return it == map_.end() ? nullptr : &it->second;
}

Term Substitution::operator()(Var x) const {
  if (const Term* v = find(x)) return *v;
  return Term::var(x);
}

VarSet Substitution::support() const {
  VarSet out;
  out.reserve(map_.size());
  for (const auto& [x, _] : map_) out.push_back(x);
  return out;
}

VarSet Substitution::range_vars() const {
  VarSet out;
  for (const auto& [_, v] : map_) out = set_union(out, v.free_vars());
  return out;
}

std::vector<std::pair<Var, Term>> Substitution::sorted_by_name() const {
  std::vector<std::pair<Var, Term>> out(map_.begin(), map_.end());
  std::sort(out.begin(), out.end(),
            [](const auto& a, const auto& b) { return a.first.name() < b.first.name(); });
  return out;
}

bool operator==(const Substitution& a, const Substitution& b) {
  if (a.map_.size() != b.map_.size()) return false;
  for (auto ia = a.map_.begin(), ib = b.map_.begin(); ia != a.map_.end(); ++ia, ++ib)
    if (ia->first != ib->first || !alpha_equal(ia->second, ib->second)) return false;
  return true;
}

namespace {

using VarMap = std::map<Var, Term>;

Term apply_map(const Term& t, const VarMap& m);

bool touches(const Term& t, const VarMap& m) {
  for (Var x : t.free_vars())
    if (m.contains(x)) return true;
  return false;
}

Program apply_map(const Program& p, const VarMap& m) {
  std::vector<Term> out;
  out.reserve(p.size());
  for (const Term& t : p) out.push_back(apply_map(t, m));
  return Program(std::move(out));
}

/// Restricts `m` to the free variables of a binder node, renaming the binder
/// when it would capture a variable of the substituted values.
std::pair<Var, VarMap> enter_binder(const Term& t, const VarMap& m) {
  VarMap inner;
  bool capture = false;
  for (Var y : t.free_vars()) {
    auto it = m.find(y);
    if (it == m.end()) continue;
    inner.emplace(y, it->second);
    capture = capture || contains(it->second.free_vars(), t.var());
  }
  Var binder = t.var();
  if (capture) {
    binder = Var::fresh(t.var());
    inner.insert_or_assign(t.var(), Term::var(binder));
  }
  return {binder, std::move(inner)};
}

Term apply_map(const Term& t, const VarMap& m) {
  if (!touches(t, m)) return t;
  switch (t.kind()) {
    case TermKind::Var:
      return m.at(t.var());
    case TermKind::Cons:
      return t;
    case TermKind::Abs: {
      auto [x, inner] = enter_binder(t, m);
      return Term::abs(x, apply_map(t.body(), inner), t.annotation());
    }
    case TermKind::AbsLoc: {
      auto [x, inner] = enter_binder(t, m);
      return Term::abs_loc(t.location(), x, apply_map(t.body(), inner), t.annotation());
    }
    case TermKind::Fresh: {
      auto [x, inner] = enter_binder(t, m);
      return Term::fresh(x, apply_map(t.scope(), inner), t.annotation());
    }
    case TermKind::App:
      return Term::app(apply_map(t.left(), m), apply_map(t.right(), m));
    case TermKind::Guard:
      return Term::guard(apply_map(t.left(), m), apply_map(t.right(), m));
    case TermKind::Unif:
      return Term::unif(apply_map(t.left(), m), apply_map(t.right(), m));
  }
  return t;
}

}  // namespace

Term subst_apply(const Term& t, const Substitution& sigma) {
  if (sigma.empty()) return t;
  return apply_map(t, sigma.bindings());
}

Program subst_apply(const Program& p, const Substitution& sigma) {
  if (sigma.empty()) return p;
  return apply_map(p, sigma.bindings());
}

Term subst_single(const Term& t, Var x, const Term& v) {
  return subst_apply(t, Substitution::single(x, v));
}

Program subst_single(const Program& p, Var x, const Term& v) {
  return subst_apply(p, Substitution::single(x, v));
}

Term rename_var(const Term& t, Var from, Var to) {
  if (from == to) return t;
  return apply_map(t, VarMap{{from, Term::var(to)}});
}

Substitution compose(const Substitution& rho, const Substitution& sigma) {
  Substitution out;
  for (const auto& [x, v] : rho.bindings()) out.bind(x, subst_apply(v, sigma));
  for (const auto& [x, v] : sigma.bindings())
    if (!rho.find(x)) out.bind(x, v);
  return out;
}

bool is_idempotent(const Substitution& sigma) { return compose(sigma, sigma) == sigma; }

Term subst_loc(const Term& t, Location from, Location to) {
  if (!t.has_locations() || from == to) return t;
  switch (t.kind()) {
    case TermKind::Abs:
      return Term::abs(t.var(), subst_loc(t.body(), from, to), t.annotation());
    case TermKind::AbsLoc:
      return Term::abs_loc(t.location() == from ? to : t.location(), t.var(),
                           subst_loc(t.body(), from, to), t.annotation());
    case TermKind::Fresh:
      return Term::fresh(t.var(), subst_loc(t.scope(), from, to), t.annotation());
    case TermKind::App:
      return Term::app(subst_loc(t.left(), from, to), subst_loc(t.right(), from, to));
    case TermKind::Guard:
      return Term::guard(subst_loc(t.left(), from, to), subst_loc(t.right(), from, to));
    case TermKind::Unif:
      return Term::unif(subst_loc(t.left(), from, to), subst_loc(t.right(), from, to));
    default:
      return t;
  }
}

Program subst_loc(const Program& p, Location from, Location to) {
  std::vector<Term> out;
  out.reserve(p.size());
  for (const Term& t : p) out.push_back(subst_loc(t, from, to));
  return Program(std::move(out));
}

Term plug(const WeakContext& w, const Term& t) {
  Term acc = t;
  const auto& frames = w.frames();
  for (auto it = frames.rbegin(); it != frames.rend(); ++it) {
    using Slot = WeakContext::Slot;
    switch (it->slot) {
      case Slot::AppFun:
        acc = Term::app(std::move(acc), it->sibling);
        break;
      case Slot::AppArg:
        acc = Term::app(it->sibling, std::move(acc));
        break;
      case Slot::GuardFirst:
        acc = Term::guard(std::move(acc), it->sibling);
        break;
      case Slot::GuardThen:
        acc = Term::guard(it->sibling, std::move(acc));
        break;
      case Slot::UnifLeft:
        acc = Term::unif(std::move(acc), it->sibling);
        break;
      case Slot::UnifRight:
        acc = Term::unif(it->sibling, std::move(acc));
        break;
    }
  }
  return acc;
}

Program plug(const WeakContext& w, const Program& p) {
  std::vector<Term> out;
  out.reserve(p.size());
  for (const Term& t : p) out.push_back(plug(w, t));
  return Program(std::move(out));
}

WeakContext subst_apply(const WeakContext& w, const Substitution& sigma) {
  WeakContext out;
  for (const auto& f : w.frames()) out.descend(f.slot, subst_apply(f.sibling, sigma));
  return out;
}

namespace {

class CoherenceChecker {
 public:
  std::optional<CoherenceViolation> violation;

  void visit(const Term& t) {
    if (violation || !t.has_locations()) return;
    switch (t.kind()) {
      case TermKind::AbsLoc: {
        for (Var x : t.free_vars()) {
          if (std::find(bound_.begin(), bound_.end(), x) != bound_.end()) {
            violation = CoherenceViolation{
                CoherenceViolation::Condition::CapturedVariable, 0, t.location(),
                fmt::format("allocated abstraction at L{} refers to bound variable `{}`",
                            t.location().id, x.name())};
            return;
          }
        }
        auto [it, inserted] = seen_.emplace(t.location(), t);
        if (!inserted && !alpha_equal(it->second, t)) {
          violation = CoherenceViolation{
              CoherenceViolation::Condition::LocationConflict, 0, t.location(),
              fmt::format("two different abstractions allocated at L{}", t.location().id)};
          return;
        }
        if (!inserted) return;  // identical body already checked
        [[fallthrough]];
      }
      case TermKind::Abs:
        bound_.push_back(t.var());
        for (const Term& s : t.body()) visit(s);
        bound_.pop_back();
        break;
      case TermKind::Fresh:
        bound_.push_back(t.var());
        visit(t.scope());
        bound_.pop_back();
        break;
      case TermKind::App:
      case TermKind::Guard:
      case TermKind::Unif:
        visit(t.left());
        visit(t.right());
        break;
      default:
        break;
    }
  }

 private:
  std::vector<Var> bound_;
  std::map<Location, Term> seen_;
};

}  // namespace

std::optional<CoherenceViolation> check_coherence(std::span<const Term> terms) {
  CoherenceChecker checker;
  for (const Term& t : terms) checker.visit(t);
  return checker.violation;
}

std::optional<CoherenceViolation> check_coherence(const Program& p) {
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (auto v = check_coherence(std::span<const Term>(&p[i], 1))) {
      v->thread = i;
      return v;
    }
  }
  return std::nullopt;
}

bool coherent(const Program& p) { return !check_coherence(p).has_value(); }

CoherenceError::CoherenceError(CoherenceViolation v)
    : std::runtime_error("incoherent program: " + v.detail), violation_(std::move(v)) {}

LocationSupply LocationSupply::after(const Program& p) {
  LocationSupply s;
  s.reserve_above(p);
  return s;
}

void LocationSupply::reserve_above(const Program& p) {
  for (Location l : locations(p)) next_ = std::max(next_, l.id + 1);
}

}  // namespace luni
