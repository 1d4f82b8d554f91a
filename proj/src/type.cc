#include "luni/type.h"

#include <stdexcept>

namespace luni {

Type Type::base(std::string name) {
  if (name.empty()) throw std::invalid_argument("empty base type name");
  auto n = std::make_shared<Node>();
  n->kind = Kind::Base;
  n->name = std::move(name);
  return Type(std::move(n));
}

Type Type::arrow(Type from, Type to) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Arrow;
  n->has_meta = from.contains_meta() || to.contains_meta();
  n->from = std::move(from.node_);
  n->to = std::move(to.node_);
  return Type(std::move(n));
}

Type Type::meta(std::uint32_t id) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Meta;
  n->meta = id;
  n->has_meta = true;
  return Type(std::move(n));
}

const std::string& Type::name() const {
  if (!is_base()) throw std::logic_error("Type::name on non-base type");
  return node_->name;
}

Type Type::from() const {
  if (!is_arrow()) throw std::logic_error("Type::from on non-arrow type");
  return Type(node_->from);
}

Type Type::to() const {
  if (!is_arrow()) throw std::logic_error("Type::to on non-arrow type");
  return Type(node_->to);
}

std::uint32_t Type::meta_id() const {
  if (!is_meta()) throw std::logic_error("Type::meta_id on non-meta type");
  return node_->meta;
}

std::string Type::str() const {
  switch (kind()) {
    case Kind::Base:
      return node_->name;
    case Kind::Meta:
      return "?" + std::to_string(node_->meta);
    case Kind::Arrow: {
      Type lhs = from();
      std::string l = lhs.str();
      if (lhs.is_arrow()) l = "(" + l + ")";
      return l + " -> " + to().str();
    }
  }
  return {};
}

std::strong_ordering operator<=>(const Type& a, const Type& b) {
  if (a.node_ == b.node_) return std::strong_ordering::equal;
  if (auto c = a.kind() <=> b.kind(); c != 0) return c;
  switch (a.kind()) {
    case Type::Kind::Base:
      return a.node_->name <=> b.node_->name;
    case Type::Kind::Meta:
      return a.node_->meta <=> b.node_->meta;
    case Type::Kind::Arrow:
      if (auto c = a.from() <=> b.from(); c != 0) return c;
      return a.to() <=> b.to();
  }
  return std::strong_ordering::equal;
}

bool operator==(const Type& a, const Type& b) { return (a <=> b) == 0; }

}  // namespace luni
