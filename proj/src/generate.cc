#include "luni/generate.h"

#include <algorithm>
#include <stdexcept>

namespace luni {

GeneratorConfig GeneratorConfig::untyped(std::uint64_t seed, int depth) {
  GeneratorConfig cfg;
  cfg.seed = seed;
  cfg.max_depth = depth;
  cfg.constructors = {{ConsName("C"), 1}, {ConsName("D"), 0}, {ConsName("E"), 0}};
  cfg.free_vars = {Var("x"), Var("y")};
  cfg.binder_names = {Var("x"), Var("y"), Var("z")};
  return cfg;
}

GeneratorConfig GeneratorConfig::typed(std::uint64_t seed, int depth) {
  GeneratorConfig cfg = untyped(seed, depth);
  Type iota = Type::base("iota");
  Type box = Type::base("box");
  cfg.constructors.push_back({ConsName::ok(), 0});
  cfg.signature.declare(ConsName("C"), Type::arrow(iota, box));
  cfg.signature.declare(ConsName("D"), iota);
  cfg.signature.declare(ConsName("E"), iota);
  cfg.gamma.bind(Var("x"), iota);
  cfg.gamma.bind(Var("y"), iota);
  cfg.type_pool = {iota, box, cfg.signature.ok_type()};
  cfg.well_typed = true;
  return cfg;
}

Generator::Generator(GeneratorConfig cfg) : cfg_(std::move(cfg)), rng_(cfg_.seed) {
  if (cfg_.binder_names.empty()) cfg_.binder_names = {Var("x")};
  if (cfg_.max_threads == 0) cfg_.max_threads = 1;
}

Term Generator::leaf() {
  std::size_t vars = scope_.size() + cfg_.free_vars.size();
  std::size_t total = vars + cfg_.constructors.size();
  if (total == 0) return Term::cons(ConsName::ok());
  // Variables and constructors are drawn with equal total weight.
  bool want_var = vars > 0 && (cfg_.constructors.empty() || pick(2) == 0);
  if (want_var) {
    std::size_t i = pick(vars);
    return Term::var(i < scope_.size() ? scope_[i] : cfg_.free_vars[i - scope_.size()]);
  }
  return Term::cons(cfg_.constructors[pick(cfg_.constructors.size())].first);
}

Program Generator::body(int depth) {
  std::size_t n = 1 + (cfg_.max_threads > 1 && pick(3) == 0 ? 1 : 0);
  std::vector<Term> threads;
  for (std::size_t i = 0; i < n; ++i) threads.push_back(draw(depth));
  return Program(std::move(threads));
}

Term Generator::draw(int depth) {
  if (depth <= 0) return leaf();
  const ProductionWeights& w = cfg_.weights;
  unsigned table[] = {w.var, w.cons, w.abs, w.app, w.fresh, w.guard, w.unif};
  unsigned total = 0;
  for (unsigned x : table) total += x;
  if (total == 0) return leaf();
  unsigned r = static_cast<unsigned>(pick(total));
  int choice = 0;
  while (r >= table[choice]) r -= table[choice++];

  switch (choice) {
    case 0:
      return leaf();
    case 1: {
      if (cfg_.constructors.empty()) return leaf();
      auto [c, n] = cfg_.constructors[pick(cfg_.constructors.size())];
      std::vector<Term> args;
      for (std::size_t i = 0; i < n; ++i) args.push_back(draw(depth - 1));
      return Term::spine(Term::cons(c), args);
    }
    case 2: {
      Var x = cfg_.binder_names[pick(cfg_.binder_names.size())];
      scope_.push_back(x);
      Program b = body(depth - 1);
      scope_.pop_back();
      return Term::abs(x, std::move(b));
    }
    case 3: {
      // Half of the applications get an abstraction head, so beta redexes
      // are common.
      Term fun = pick(2) == 0 ? [&] {
        Var x = cfg_.binder_names[pick(cfg_.binder_names.size())];
        scope_.push_back(x);
        Program b = body(depth - 1);
        scope_.pop_back();
        return Term::abs(x, std::move(b));
      }()
                              : draw(depth - 1);
      Term arg = draw(depth - 1);
      return Term::app(std::move(fun), std::move(arg));
    }
    case 4: {
      Var x = cfg_.binder_names[pick(cfg_.binder_names.size())];
      scope_.push_back(x);
      Term b = draw(depth - 1);
      scope_.pop_back();
      return Term::fresh(x, std::move(b));
    }
    case 5: {
      Term a = draw(depth - 1);
      Term b = draw(depth - 1);
      return Term::guard(std::move(a), std::move(b));
    }
    default: {
      Term a = draw(depth - 1);
      Term b = draw(depth - 1);
      return Term::unif(std::move(a), std::move(b));
    }
  }
}

Term Generator::term(int depth) {
  scope_.clear();
  return draw(depth);
}

std::optional<Term> Generator::typed_leaf(const Type& target) {
  std::vector<Term> options;
  for (std::size_t i = scope_.size(); i-- > 0;) {
    bool shadowed = false;
    for (std::size_t j = i + 1; j < scope_.size(); ++j)
      if (scope_[j] == scope_[i]) shadowed = true;
    if (!shadowed && scope_types_[i] == target) options.push_back(Term::var(scope_[i]));
  }
  for (Var x : cfg_.free_vars) {
    const Type* a = cfg_.gamma.find(x);
    if (a && *a == target && std::find(scope_.begin(), scope_.end(), x) == scope_.end())
      options.push_back(Term::var(x));
  }
  for (const auto& [c, n] : cfg_.constructors) {
    if (n != 0) continue;
    std::optional<Type> a = cfg_.signature.find(c);
    if (a && *a == target) options.push_back(Term::cons(c));
  }
  if (options.empty()) return std::nullopt;
  return options[pick(options.size())];
}

Term Generator::typed_binder(int depth, const Type& binder, const Type& target, bool abstraction) {
  Var x = cfg_.binder_names[pick(cfg_.binder_names.size())];
  scope_.push_back(x);
  scope_types_.push_back(binder);
  Term out = [&] {
    if (!abstraction) return Term::fresh(x, typed(depth, target));
    std::vector<Term> threads{typed(depth, target)};
    if (cfg_.max_threads > 1 && pick(3) == 0) threads.push_back(typed(depth, target));
    return Term::abs(x, Program(std::move(threads)));
  }();
  scope_.pop_back();
  scope_types_.pop_back();
  return out;
}

Term Generator::typed(int depth, const Type& target) {
  std::optional<Term> leaf_term = typed_leaf(target);
  if (depth <= 0) return leaf_term ? *leaf_term : leaf();

  std::vector<std::pair<ConsName, std::size_t>> builders;
  for (const auto& [c, n] : cfg_.constructors) {
    std::optional<Type> a = cfg_.signature.find(c);
    if (n > 0 && a && arity(*a) == n && result_type(*a) == target) builders.push_back({c, n});
  }
  const ProductionWeights& w = cfg_.weights;
  const bool is_ok = target == cfg_.signature.ok_type();
  unsigned table[] = {leaf_term ? w.var : 0u,
                      builders.empty() ? 0u : w.cons,
                      target.is_arrow() ? w.abs + w.var + w.cons : 0u,
                      depth >= 2 ? w.app : 0u,
                      w.fresh,
                      w.guard,
                      is_ok ? w.unif : 0u};
  unsigned total = 0;
  for (unsigned x : table) total += x;
  if (total == 0) return leaf_term ? *leaf_term : leaf();
  unsigned r = static_cast<unsigned>(pick(total));
  int choice = 0;
  while (r >= table[choice]) r -= table[choice++];

  switch (choice) {
    case 0:
      return *leaf_term;
    case 1: {
      auto [c, n] = builders[pick(builders.size())];
      std::vector<Term> args;
      Type a = *cfg_.signature.find(c);
      for (std::size_t i = 0; i < n; ++i, a = a.to()) args.push_back(typed(depth - 1, a.from()));
      return Term::spine(Term::cons(c), args);
    }
    case 2:
      return typed_binder(depth - 1, target.from(), target.to(), true);
    case 3: {
      Type a = pool_type();
      Term fun = typed_binder(depth - 2, a, target, true);
      return Term::app(std::move(fun), typed(depth - 1, a));
    }
    case 4:
      return typed_binder(depth - 1, pool_type(), target, false);
    case 5: {
      Term first = typed(depth - 1, cfg_.signature.ok_type());
      return Term::guard(std::move(first), typed(depth - 1, target));
    }
    default: {
      Type a = pool_type();
      Term lhs = typed(depth - 1, a);
      return Term::unif(std::move(lhs), typed(depth - 1, a));
    }
  }
}

Program Generator::next() {
  for (std::size_t attempt = 0; attempt < cfg_.max_attempts; ++attempt) {
    ++attempts_;
    std::size_t n = 1 + pick(cfg_.max_threads);
    std::vector<Term> threads;
    if (cfg_.well_typed && !cfg_.type_pool.empty()) {
      Type target = pool_type();
      for (std::size_t i = 0; i < n; ++i) {
        scope_.clear();
        scope_types_.clear();
        threads.push_back(typed(cfg_.max_depth, target));
      }
    } else {
      for (std::size_t i = 0; i < n; ++i) threads.push_back(term(cfg_.max_depth));
    }
    Program p(std::move(threads));
    if (!cfg_.well_typed) return p;
    try {
      infer(cfg_.gamma, cfg_.signature, p);
      return p;
    } catch (const TypeError&) {
    }
  }
  throw std::runtime_error("generator: no well-typed program within the attempt budget");
}

bool has_unification(const Term& t) {
  switch (t.kind()) {
    case TermKind::Var:
    case TermKind::Cons:
      return false;
    case TermKind::Abs:
    case TermKind::AbsLoc:
      return has_unification(t.body());
    case TermKind::Fresh:
      return has_unification(t.scope());
    case TermKind::Unif:
      return true;
    case TermKind::App:
    case TermKind::Guard:
      return has_unification(t.left()) || has_unification(t.right());
  }
  return false;
}

bool has_unification(const Program& p) {
  for (const Term& t : p)
    if (has_unification(t)) return true;
  return false;
}

}  // namespace luni
