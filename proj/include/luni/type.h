#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <string>

namespace luni {

/// Simple types: base types, arrows, and inference-only metavariables.
///
/// Base type names beginning with a quote (`'a`) are rigid type variables
/// left over from inference; they behave exactly like any other base type.
class Type {
 public:
  enum class Kind : std::uint8_t { Base, Arrow, Meta };

  static Type base(std::string name);
  static Type arrow(Type from, Type to);
  static Type meta(std::uint32_t id);

  Kind kind() const;
  bool is_base() const { return kind() == Kind::Base; }
  bool is_arrow() const { return kind() == Kind::Arrow; }
  bool is_meta() const { return kind() == Kind::Meta; }

  const std::string& name() const;
  Type from() const;
  Type to() const;
  std::uint32_t meta_id() const;

  bool contains_meta() const;

  /// Right-associative arrows, minimal parentheses.
  std::string str() const;

  friend bool operator==(const Type& a, const Type& b);
  friend std::strong_ordering operator<=>(const Type& a, const Type& b);

 private:
  struct Node;
  explicit Type(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

struct Type::Node {
  Kind kind;
  std::string name;
  std::uint32_t meta = 0;
  std::shared_ptr<const Node> from;
  std::shared_ptr<const Node> to;
  bool has_meta = false;
};

inline Type::Kind Type::kind() const { return node_->kind; }
inline bool Type::contains_meta() const { return node_->has_meta; }

}  // namespace luni
