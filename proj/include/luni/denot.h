#pragma once

#include <compare>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "luni/eval.h"
#include "luni/syntax.h"
#include "luni/type.h"
#include "luni/types.h"

namespace luni {

/// An element of a type's interpretation: an atom of a base type, or a
/// function table mapping each element of the domain (in enumeration order)
/// to a set of results.
class SemValue {
 public:
  enum class Kind : std::uint8_t { Atom, Table };

  static SemValue atom(std::string base, std::size_t index, std::string label);
  static SemValue table(Type domain, std::vector<std::set<SemValue>> images);

  Kind kind() const;
  const std::string& base() const;
  std::size_t index() const;
  const std::string& label() const;
  const Type& domain() const;
  const std::vector<std::set<SemValue>>& images() const;

  std::string str() const;

  friend std::strong_ordering operator<=>(const SemValue& a, const SemValue& b);
  friend bool operator==(const SemValue& a, const SemValue& b) { return (a <=> b) == 0; }

 private:
  struct Node;
  explicit SemValue(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

using SemSet = std::set<SemValue>;
using Environment = std::map<Var, SemValue>;

std::string to_string(const SemSet& s);

/// Declared atom counts. A base type that is not declared gets one atom,
/// or none if some constructor builds it.
struct BaseInterp {
  std::map<std::string, std::size_t> declared;
};

class DenotError : public std::runtime_error {
 public:
  enum class Kind : std::uint8_t { TooLarge, NotDenotable };
  DenotError(Kind kind, const std::string& message) : std::runtime_error(message), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

inline constexpr std::size_t kDefaultCap = 4096;

/// Finite interpretation of types, constructors and terms. Enumerations are
/// cached. Base types are populated with one reserved atom per constructor
/// application first, then the declared atoms.
class Model {
 public:
  Model(ConsSignature signature, BaseInterp bases, std::size_t cap = kDefaultCap);

  /// Throws DenotError when the type has more than `cap` elements or a base
  /// type is built from itself.
  const std::vector<SemValue>& enumerate(const Type& a);
  std::size_t index_of(const Type& a, const SemValue& v);

  /// A unitary, injective interpretation of `c`.
  SemValue cons_interp(ConsName c);
  SemValue ok();

  /// f(a) for a table f.
  const SemSet& apply(const SemValue& f, const SemValue& a);

  /// Binders must be annotated; `rho` must cover the free variables.
  SemSet denote(const Term& t, const Environment& rho);
  SemSet denote(const Program& p, const Environment& rho);
  /// Union over every environment on the free variables, typed by Γ.
  SemSet denote_toplevel(const Program& p, const TypingContext& gamma);

  bool is_unitary(const SemValue& v, const Type& a);

  std::size_t cap() const { return cap_; }
  const ConsSignature& signature() const { return signature_; }

 private:
  struct Enumeration {
    std::vector<SemValue> values;
    std::map<SemValue, std::size_t> index;
  };
  const Enumeration& enumeration(const Type& a);
  Enumeration build(const Type& a);
  SemValue interp(ConsName c, const Type& rest, std::vector<SemValue>& args);
  SemSet denote_in(const Term& t, Environment& rho);
  SemSet denote_in(const Program& p, Environment& rho);

  ConsSignature signature_;
  BaseInterp bases_;
  std::size_t cap_;
  std::map<Type, Enumeration> cache_;
  std::set<std::string> building_;
  /// (constructor, argument values) → atom, per result base type.
  std::map<std::pair<ConsName, std::vector<SemValue>>, SemValue> images_;
};

struct SoundnessReport {
  bool pass = true;
  bool normal = false;
  std::vector<std::string> lines;
  SemSet initial;
  SemSet final;
  std::size_t steps = 0;
  std::optional<std::size_t> failed_step;
  std::string error;
};

/// Infers P's types, then evaluates it and compares toplevel denotations
/// before and after every step: ⊇ always, = unless the step is fail.
/// Throws DenotError if some program along the way is not denotable.
SoundnessReport soundness_check(Model& model, const TypingContext& gamma, const Program& p, std::size_t fuel,
                                const Strategy& strategy = {});

}  // namespace luni
