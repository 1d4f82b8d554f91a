#pragma once

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "luni/type.h"

namespace luni {

/// Interned variable name. Two Vars are equal iff their names are equal.
class Var {
 public:
  Var() = default;
  explicit Var(std::string_view name);

  /// A name derived from `base` that has never been interned before, so it
  /// cannot coincide with any variable that exists anywhere in the process.
  static Var fresh(Var base);

  const std::string& name() const;
  std::uint32_t id() const { return id_; }

  friend auto operator<=>(Var, Var) = default;

 private:
  std::uint32_t id_ = 0;
};

class ConsName {
 public:
  ConsName() = default;
  explicit ConsName(std::string_view name);
  static ConsName ok();

  const std::string& name() const;
  std::uint32_t id() const { return id_; }

  friend auto operator<=>(ConsName, ConsName) = default;

 private:
  std::uint32_t id_ = 0;
};

struct Location {
  std::uint32_t id = 0;
  friend auto operator<=>(Location, Location) = default;
};

/// Sorted, duplicate-free.
using VarSet = std::vector<Var>;
using LocationSet = std::vector<Location>;

bool contains(const VarSet& set, Var x);

enum class TermKind : std::uint8_t { Var, Cons, Abs, AbsLoc, App, Fresh, Guard, Unif };

class Program;

/// Immutable, shared term handle. Structural sharing makes copies cheap;
/// free variables and value-ness are cached at construction.
class Term {
 public:
  struct Node;

  static Term var(Var x);
  static Term cons(ConsName c);
  static Term abs(Var x, Program body, std::optional<Type> annotation = {});
  static Term abs_loc(Location loc, Var x, Program body, std::optional<Type> annotation = {});
  static Term app(Term fun, Term arg);
  static Term fresh(Var x, Term body, std::optional<Type> annotation = {});
  static Term guard(Term first, Term then);
  static Term unif(Term lhs, Term rhs);

  /// `c v1 ... vn`
  static Term spine(Term head, std::span<const Term> args);

  TermKind kind() const;
  bool is(TermKind k) const { return kind() == k; }

  /// The variable of a Var node, or the binder of Abs/AbsLoc/Fresh.
  Var var() const;
  ConsName cons() const;
  Location location() const;
  const std::optional<Type>& annotation() const;
  /// Body of Abs/AbsLoc.
  const Program& body() const;
  /// Body of Fresh.
  const Term& scope() const;
  /// Function/argument of App, first/then of Guard, lhs/rhs of Unif.
  const Term& left() const;
  const Term& right() const;

  const VarSet& free_vars() const;
  bool has_locations() const;
  bool is_value() const;
  /// `c v1 ... vn`
  bool is_structure() const;
  std::size_t size() const;

  /// Same node identity (not α-equality).
  bool same(const Term& other) const { return node_ == other.node_; }

  /// Same term with a different binder annotation (Abs/AbsLoc/Fresh only).
  Term with_annotation(std::optional<Type> annotation) const;

  const Node* node() const { return node_.get(); }

 private:
  explicit Term(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

/// α-equivalence. Binder annotations are ignored.
bool alpha_equal(const Term& a, const Term& b);
inline bool operator==(const Term& a, const Term& b) { return alpha_equal(a, b); }

/// An ordered list of threads; the empty list is `fail`.
class Program {
 public:
  Program() = default;
  Program(std::initializer_list<Term> threads) : threads_(threads) {}
  explicit Program(std::vector<Term> threads) : threads_(std::move(threads)) {}

  static Program fail() { return {}; }

  const std::vector<Term>& threads() const { return threads_; }
  std::size_t size() const { return threads_.size(); }
  bool is_fail() const { return threads_.empty(); }
  const Term& operator[](std::size_t i) const { return threads_[i]; }
  auto begin() const { return threads_.begin(); }
  auto end() const { return threads_.end(); }

  void push_back(Term t) { threads_.push_back(std::move(t)); }
  Program& append(const Program& other);

  /// P ⊕ Q
  friend Program operator+(Program p, const Program& q) { return std::move(p.append(q)); }

 private:
  std::vector<Term> threads_;
};

bool alpha_equal(const Program& a, const Program& b);
inline bool operator==(const Program& a, const Program& b) { return alpha_equal(a, b); }

struct Term::Node {
  TermKind kind;
  Var var;
  ConsName cons;
  Location loc;
  std::optional<Type> annotation;
  Program body;
  std::optional<Term> left;
  std::optional<Term> right;
  VarSet fv;
  bool has_locations = false;
  bool is_value = false;
  bool is_structure = false;
  std::size_t size = 1;
};

inline TermKind Term::kind() const { return node_->kind; }
inline const VarSet& Term::free_vars() const { return node_->fv; }
inline bool Term::has_locations() const { return node_->has_locations; }
inline bool Term::is_value() const { return node_->is_value; }
inline bool Term::is_structure() const { return node_->is_structure; }
inline std::size_t Term::size() const { return node_->size; }
inline const Term& Term::left() const { return *node_->left; }
inline const Term& Term::right() const { return *node_->right; }
inline const Term& Term::scope() const { return *node_->left; }
inline const Program& Term::body() const { return node_->body; }
inline Var Term::var() const { return node_->var; }
inline ConsName Term::cons() const { return node_->cons; }
inline Location Term::location() const { return node_->loc; }
inline const std::optional<Type>& Term::annotation() const { return node_->annotation; }

/// Head and arguments of an application spine `h a1 ... an`.
struct Spine {
  Term head;
  std::vector<Term> args;
};
Spine spine_of(const Term& t);

VarSet free_vars(const Term& t);
VarSet free_vars(const Program& p);
LocationSet locations(const Term& t);
LocationSet locations(const Program& p);
bool is_value(const Term& t);

/// Finite map from variables to values; identity outside its support.
class Substitution {
 public:
  Substitution() = default;
  static Substitution single(Var x, Term v);

  /// Throws std::invalid_argument unless `v` is a value. Binding x to x is
  /// a no-op (removes any existing binding).
  void bind(Var x, Term v);
  void erase(Var x) { map_.erase(x); }

  const Term* find(Var x) const;
  Term operator()(Var x) const;

  bool empty() const { return map_.empty(); }
  std::size_t size() const { return map_.size(); }
  const std::map<Var, Term>& bindings() const { return map_; }
  VarSet support() const;
  /// Free variables of the bound values.
  VarSet range_vars() const;
  /// Bindings ordered by variable name.
  std::vector<std::pair<Var, Term>> sorted_by_name() const;

  friend bool operator==(const Substitution& a, const Substitution& b);

 private:
  std::map<Var, Term> map_;
};

/// Capture-avoiding simultaneous substitution.
Term subst_apply(const Term& t, const Substitution& sigma);
Program subst_apply(const Program& p, const Substitution& sigma);
/// t{x := v}; throws std::invalid_argument if `v` is not a value.
Term subst_single(const Term& t, Var x, const Term& v);
Program subst_single(const Program& p, Var x, const Term& v);
/// (ρ·σ)(x) = ρ(x)σ
Substitution compose(const Substitution& rho, const Substitution& sigma);
bool is_idempotent(const Substitution& sigma);

/// Renames a (possibly free) variable to another variable; not restricted
/// to values, used for α-renaming and the fresh rule.
Term rename_var(const Term& t, Var from, Var to);

Term subst_loc(const Term& t, Location from, Location to);
Program subst_loc(const Program& p, Location from, Location to);

/// A term with one hole that never lies below Abs, AbsLoc or Fresh.
class WeakContext {
 public:
  enum class Slot : std::uint8_t { AppFun, AppArg, GuardFirst, GuardThen, UnifLeft, UnifRight };
  struct Frame {
    Slot slot;
    Term sibling;
  };

  WeakContext() = default;

  /// Extends the context one level down; `sibling` is the other operand.
  void descend(Slot slot, Term sibling) { frames_.push_back({slot, std::move(sibling)}); }
  void ascend() { frames_.pop_back(); }

  bool is_hole() const { return frames_.empty(); }
  /// Outermost frame first.
  const std::vector<Frame>& frames() const { return frames_; }

 private:
  std::vector<Frame> frames_;
};

Term plug(const WeakContext& w, const Term& t);
/// W⟨t1 ⊕ ... ⊕ tn⟩ = W⟨t1⟩ ⊕ ... ⊕ W⟨tn⟩, W⟨fail⟩ = fail
Program plug(const WeakContext& w, const Program& p);
/// Hole is fixed: □σ = □.
WeakContext subst_apply(const WeakContext& w, const Substitution& sigma);

/// Violation witness for the coherence invariant.
struct CoherenceViolation {
  enum class Condition : std::uint8_t {
    /// (1) an allocated abstraction refers to a variable bound by its context
    CapturedVariable,
    /// (2) two allocated abstractions share a location but differ
    LocationConflict,
  };
  Condition condition;
  std::size_t thread = 0;
  Location location;
  std::string detail;
};

/// Checks conditions (1) and (2) on the set of terms as a whole.
std::optional<CoherenceViolation> check_coherence(std::span<const Term> terms);
/// Each thread is checked as a singleton set.
std::optional<CoherenceViolation> check_coherence(const Program& p);
bool coherent(const Program& p);

class CoherenceError : public std::runtime_error {
 public:
  explicit CoherenceError(CoherenceViolation v);
  const CoherenceViolation& violation() const { return violation_; }

 private:
  CoherenceViolation violation_;
};

/// Monotone location counter for one evaluation session.
class LocationSupply {
 public:
  LocationSupply() = default;
  explicit LocationSupply(std::uint32_t next) : next_(next) {}
  /// Starts strictly above every location occurring in `p`.
  static LocationSupply after(const Program& p);

  Location next() { return Location{next_++}; }
  void reserve_above(const Program& p);

 private:
  std::uint32_t next_ = 0;
};

}  // namespace luni
