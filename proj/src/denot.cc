#include "luni/denot.h"

#include <fmt/format.h>

#include <algorithm>

namespace luni {

struct SemValue::Node {
  Kind kind;
  std::string base;
  std::size_t index = 0;
  std::string label;
  std::optional<Type> domain;
  std::vector<std::set<SemValue>> images;
};

SemValue SemValue::atom(std::string base, std::size_t index, std::string label) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Atom;
  n->base = std::move(base);
  n->index = index;
  n->label = std::move(label);
  return SemValue(std::move(n));
}

SemValue SemValue::table(Type domain, std::vector<std::set<SemValue>> images) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Table;
  n->domain = std::move(domain);
  n->images = std::move(images);
  return SemValue(std::move(n));
}

SemValue::Kind SemValue::kind() const { return node_->kind; }
const std::string& SemValue::base() const { return node_->base; }
std::size_t SemValue::index() const { return node_->index; }
const std::string& SemValue::label() const { return node_->label; }
const Type& SemValue::domain() const { return *node_->domain; }
const std::vector<std::set<SemValue>>& SemValue::images() const { return node_->images; }

std::string to_string(const SemSet& s) {
  std::string out = "{";
  bool first = true;
  for (const SemValue& v : s) {
    if (!first) out += ", ";
    first = false;
    out += v.str();
  }
  return out + "}";
}

std::string SemValue::str() const {
  if (kind() == Kind::Atom) return label();
  std::string out = "[";
  for (std::size_t i = 0; i < images().size(); ++i) {
    if (i > 0) out += ", ";
    out += to_string(images()[i]);
  }
  return out + "]";
}

std::strong_ordering operator<=>(const SemValue& a, const SemValue& b) {
  if (a.node_ == b.node_) return std::strong_ordering::equal;
  if (auto c = a.kind() <=> b.kind(); c != 0) return c;
  if (a.kind() == SemValue::Kind::Atom) {
    if (auto c = a.base() <=> b.base(); c != 0) return c;
    return a.index() <=> b.index();
  }
  if (auto c = a.domain() <=> b.domain(); c != 0) return c;
  return std::lexicographical_compare_three_way(a.images().begin(), a.images().end(), b.images().begin(),
                                                b.images().end(), [](const SemSet& x, const SemSet& y) {
                                                  return std::lexicographical_compare_three_way(
                                                      x.begin(), x.end(), y.begin(), y.end());
                                                });
}

namespace {

std::vector<std::pair<ConsName, Type>> constructors_by_name(const ConsSignature& sigma) {
  std::vector<std::pair<ConsName, Type>> out(sigma.declared().begin(), sigma.declared().end());
  if (!sigma.declared().contains(ConsName::ok())) out.emplace_back(ConsName::ok(), sigma.ok_type());
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.first.name() < b.first.name(); });
  return out;
}

std::string wrap(const SemValue& v) {
  std::string s = v.str();
  return s.find(' ') == std::string::npos ? s : "(" + s + ")";
}

[[noreturn]] void too_large(const Type& a, std::size_t cap) {
  throw DenotError(DenotError::Kind::TooLarge, fmt::format("type {} has more than {} elements", a.str(), cap));
}

}  // namespace

Model::Model(ConsSignature signature, BaseInterp bases, std::size_t cap)
    : signature_(std::move(signature)), bases_(std::move(bases)), cap_(cap) {}

const Model::Enumeration& Model::enumeration(const Type& a) {
  if (auto it = cache_.find(a); it != cache_.end()) return it->second;
  Enumeration e = build(a);
  return cache_.emplace(a, std::move(e)).first->second;
}

const std::vector<SemValue>& Model::enumerate(const Type& a) { return enumeration(a).values; }

std::size_t Model::index_of(const Type& a, const SemValue& v) {
  const Enumeration& e = enumeration(a);
  auto it = e.index.find(v);
  if (it == e.index.end()) throw std::logic_error(fmt::format("{} is not an element of {}", v.str(), a.str()));
  return it->second;
}

Model::Enumeration Model::build(const Type& a) {
  Enumeration e;
  if (a.is_meta()) throw std::logic_error("cannot enumerate an unsolved type");
  if (a.is_arrow()) {
    const std::size_t m = enumerate(a.from()).size();
    const std::vector<SemValue> cod = enumerate(a.to());
    if (cod.size() >= 32) too_large(a, cap_);
    const std::size_t subsets = std::size_t{1} << cod.size();
    std::size_t count = 1;
    for (std::size_t i = 0; i < m; ++i) {
      count *= subsets;
      if (count > cap_) too_large(a, cap_);
    }
    for (std::size_t n = 0; n < count; ++n) {
      std::vector<SemSet> images(m);
      std::size_t digits = n;
      for (std::size_t i = m; i-- > 0;) {
        std::size_t mask = digits % subsets;
        digits /= subsets;
        for (std::size_t j = 0; j < cod.size(); ++j)
          if (mask & (std::size_t{1} << j)) images[i].insert(cod[j]);
      }
      e.values.push_back(SemValue::table(a.from(), std::move(images)));
    }
  } else {
    const std::string& base = a.name();
    if (building_.contains(base))
      throw DenotError(DenotError::Kind::NotDenotable,
                       fmt::format("base type {} is built from itself; its interpretation is infinite", base));
    building_.insert(base);
    struct Done {
      std::set<std::string>& set;
      const std::string& base;
      ~Done() { set.erase(base); }
    } done{building_, base};
    bool targeted = false;
    for (const auto& [c, ty] : constructors_by_name(signature_)) {
      if (result_type(ty) != a) continue;
      targeted = true;
      std::vector<Type> params;
      for (Type t = ty; t.is_arrow(); t = t.to()) params.push_back(t.from());
      std::vector<const std::vector<SemValue>*> domains;
      std::size_t count = 1;
      for (const Type& p : params) {
        domains.push_back(&enumerate(p));
        count *= domains.back()->size();
        if (count > cap_) too_large(a, cap_);
      }
      std::vector<std::size_t> odometer(params.size(), 0);
      for (std::size_t n = 0; n < count; ++n) {
        std::vector<SemValue> args;
        std::string label = c.name();
        for (std::size_t i = 0; i < params.size(); ++i) {
          args.push_back((*domains[i])[odometer[i]]);
          label += " " + wrap(args.back());
        }
        SemValue v = SemValue::atom(base, e.values.size(), std::move(label));
        images_.emplace(std::make_pair(c, std::move(args)), v);
        e.values.push_back(std::move(v));
        if (e.values.size() > cap_) too_large(a, cap_);
        for (std::size_t i = params.size(); i-- > 0;) {
          if (++odometer[i] < domains[i]->size()) break;
          odometer[i] = 0;
        }
      }
    }
    std::size_t declared = targeted ? 0 : 1;
    if (auto it = bases_.declared.find(base); it != bases_.declared.end()) declared = it->second;
    if (declared > cap_ || e.values.size() + declared > cap_) too_large(a, cap_);
    for (std::size_t i = 0; i < declared; ++i)
      e.values.push_back(SemValue::atom(base, e.values.size(), fmt::format("{}#{}", base, i)));
    if (e.values.size() > cap_) too_large(a, cap_);
    if (e.values.empty())
      throw DenotError(DenotError::Kind::NotDenotable, fmt::format("base type {} has no elements", base));
  }
  for (std::size_t i = 0; i < e.values.size(); ++i) e.index.emplace(e.values[i], i);
  return e;
}

SemValue Model::interp(ConsName c, const Type& rest, std::vector<SemValue>& args) {
  if (!rest.is_arrow()) return images_.at({c, args});
  std::vector<SemSet> images;
  for (const SemValue& a : enumerate(rest.from())) {
    args.push_back(a);
    images.push_back({interp(c, rest.to(), args)});
    args.pop_back();
  }
  return SemValue::table(rest.from(), std::move(images));
}

SemValue Model::cons_interp(ConsName c) {
  auto ty = signature_.find(c);
  if (!ty) throw DenotError(DenotError::Kind::NotDenotable, fmt::format("undeclared constructor {}", c.name()));
  enumerate(result_type(*ty));
  std::vector<SemValue> args;
  return interp(c, *ty, args);
}

SemValue Model::ok() { return cons_interp(ConsName::ok()); }

const SemSet& Model::apply(const SemValue& f, const SemValue& a) {
  return f.images().at(index_of(f.domain(), a));
}

bool Model::is_unitary(const SemValue& v, const Type& a) {
  if (!a.is_arrow()) return v.kind() == SemValue::Kind::Atom;
  if (v.kind() != SemValue::Kind::Table) return false;
  for (const SemSet& img : v.images())
    if (img.size() != 1 || !is_unitary(*img.begin(), a.to())) return false;
  return true;
}

namespace {

class Binding {
 public:
  Binding(Environment& rho, Var x) : rho_(rho), x_(x) {
    if (auto it = rho.find(x); it != rho.end()) saved_ = it->second;
  }
  ~Binding() {
    if (saved_) {
      rho_.insert_or_assign(x_, *saved_);
    } else {
      rho_.erase(x_);
    }
  }
  void set(const SemValue& v) { rho_.insert_or_assign(x_, v); }

 private:
  Environment& rho_;
  Var x_;
  std::optional<SemValue> saved_;
};

const Type& binder_type(const Term& t) {
  if (!t.annotation()) throw std::logic_error(fmt::format("binder `{}` has no type annotation", t.var().name()));
  return *t.annotation();
}

}  // namespace

SemSet Model::denote_in(const Term& t, Environment& rho) {
  switch (t.kind()) {
    case TermKind::Var: {
      auto it = rho.find(t.var());
      if (it == rho.end()) throw std::logic_error(fmt::format("no value for `{}`", t.var().name()));
      return {it->second};
    }
    case TermKind::Cons:
      return {cons_interp(t.cons())};
    case TermKind::Abs:
    case TermKind::AbsLoc: {
      const Type& a = binder_type(t);
      std::vector<SemSet> images;
      Binding b(rho, t.var());
      for (const SemValue& v : enumerate(a)) {
        b.set(v);
        images.push_back(denote_in(t.body(), rho));
      }
      return {SemValue::table(a, std::move(images))};
    }
    case TermKind::App: {
      SemSet fs = denote_in(t.left(), rho);
      SemSet xs = denote_in(t.right(), rho);
      SemSet out;
      for (const SemValue& f : fs)
        for (const SemValue& x : xs) {
          const SemSet& r = apply(f, x);
          out.insert(r.begin(), r.end());
        }
      return out;
    }
    case TermKind::Unif: {
      SemSet l = denote_in(t.left(), rho);
      SemSet r = denote_in(t.right(), rho);
      for (const SemValue& v : l)
        if (r.contains(v)) return {ok()};
      return {};
    }
    case TermKind::Guard: {
      if (denote_in(t.left(), rho).empty()) return {};
      return denote_in(t.right(), rho);
    }
    case TermKind::Fresh: {
      SemSet out;
      Binding b(rho, t.var());
      for (const SemValue& v : enumerate(binder_type(t))) {
        b.set(v);
        SemSet r = denote_in(t.scope(), rho);
        out.insert(r.begin(), r.end());
      }
      return out;
    }
  }
  return {};
}

SemSet Model::denote_in(const Program& p, Environment& rho) {
  SemSet out;
  for (const Term& t : p) {
    SemSet r = denote_in(t, rho);
    out.insert(r.begin(), r.end());
  }
  return out;
}

SemSet Model::denote(const Term& t, const Environment& rho) {
  Environment copy = rho;
  return denote_in(t, copy);
}

SemSet Model::denote(const Program& p, const Environment& rho) {
  Environment copy = rho;
  return denote_in(p, copy);
}

SemSet Model::denote_toplevel(const Program& p, const TypingContext& gamma) {
  SemSet out;
  for (const Term& t : p) {
    const VarSet& fv = t.free_vars();
    std::vector<const std::vector<SemValue>*> domains;
    std::size_t count = 1;
    for (Var x : fv) {
      const Type* a = gamma.find(x);
      if (!a) throw std::logic_error(fmt::format("no type for free variable `{}`", x.name()));
      domains.push_back(&enumerate(*a));
      count *= domains.back()->size();
      if (count > cap_)
        throw DenotError(DenotError::Kind::TooLarge, fmt::format("more than {} environments", cap_));
    }
    std::vector<std::size_t> odometer(fv.size(), 0);
    Environment rho;
    for (std::size_t n = 0; n < count; ++n) {
      for (std::size_t i = 0; i < fv.size(); ++i) rho.insert_or_assign(fv[i], (*domains[i])[odometer[i]]);
      SemSet r = denote_in(t, rho);
      out.insert(r.begin(), r.end());
      for (std::size_t i = fv.size(); i-- > 0;) {
        if (++odometer[i] < domains[i]->size()) break;
        odometer[i] = 0;
      }
    }
  }
  return out;
}

SoundnessReport soundness_check(Model& model, const TypingContext& gamma, const Program& p, std::size_t fuel,
                                const Strategy& strategy) {
  Inference inf = infer(gamma, model.signature(), p, true);
  TypingContext context = inf.context;
  SoundnessReport report;
  report.initial = model.denote_toplevel(inf.annotated, context);
  SemSet current = report.initial;
  report.lines.push_back(fmt::format("#0 [init] {}", to_string(current)));
  Session session(inf.annotated, strategy);
  while (report.steps < fuel) {
    auto s = session.step();
    if (!s) {
      report.normal = true;
      break;
    }
    ++report.steps;
    if (s->rule == RuleTag::Fresh) context.bind(*s->fresh_var, *s->fresh_type);
    SemSet next = model.denote_toplevel(s->after, context);
    const bool included = std::includes(current.begin(), current.end(), next.begin(), next.end());
    const bool equal = included && next.size() == current.size();
    const char* verdict = equal ? "equal" : included ? "strict" : "VIOLATION";
    report.lines.push_back(
        fmt::format("#{} [{}] thread={} {} {}", report.steps, to_string(s->rule), s->thread, verdict, to_string(next)));
    if (!included || (!equal && s->rule != RuleTag::Fail)) {
      report.pass = false;
      report.failed_step = report.steps;
      report.error = included ? fmt::format("step {} ({}) lost denotations", report.steps, to_string(s->rule))
                              : fmt::format("step {} ({}) gained denotations", report.steps, to_string(s->rule));
      current = std::move(next);
      break;
    }
    current = std::move(next);
  }
  if (!report.normal && report.pass && !session.find_redex()) report.normal = true;
  report.final = std::move(current);
  return report;
}

}  // namespace luni
