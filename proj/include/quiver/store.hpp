#pragma once

// In-memory typed property graph: node/edge types with optional supertypes,
// node/edge records in a shared id space, and per-node adjacency indexes with
// deterministic (ascending edge id) enumeration.
//
// Concurrency contract: one exclusive writer, or any number of readers on a
// store that is not being mutated. Queries never mutate the store.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "quiver/error.hpp"
#include "quiver/value.hpp"

namespace quiver {

using TypeId = std::uint32_t;

inline std::string to_lower_ascii(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

// A type or property name as it appeared in source. Unquoted names compare
// case-insensitively, double-quoted names compare exactly.
struct Name {
  std::string text;
  bool quoted = false;

  Name() = default;
  Name(std::string t, bool q = false) : text(std::move(t)), quoted(q) {}
  Name(const char* t) : text(t) {}

  bool matches(std::string_view candidate) const {
    if (quoted) return text == candidate;
    return to_lower_ascii(text) == to_lower_ascii(candidate);
  }
};

struct NodeType {
  TypeId id = 0;
  std::string name;
  std::optional<TypeId> supertype;
  // Advisory map of property name -> value kind, grown on write.
  std::map<std::string, ValueKind> known_properties;
};

struct EdgeType {
  TypeId id = 0;
  std::string name;
  std::optional<TypeId> supertype;
  TypeId first_seen_source = 0;
  TypeId first_seen_dest = 0;
  std::map<std::string, ValueKind> known_properties;
};

using PropertyMap = std::map<std::string, Value>;

struct Node {
  ElementId id = 0;
  TypeId type = 0;
  PropertyMap properties;
};

struct Edge {
  ElementId id = 0;
  TypeId type = 0;
  ElementId source = 0;  // leaving node
  ElementId dest = 0;    // arriving node
  PropertyMap properties;
};

enum class Direction { outgoing, incoming };

class GraphStore {
 public:
  // ---- type registry ----

  TypeId define_node_type(const Name& name, const std::optional<Name>& supertype = std::nullopt) {
    check_new_type_name(name, node_types_by_ci_, "node");
    std::optional<TypeId> super;
    if (supertype) super = resolve_supertype(name, *supertype, node_types_by_ci_, "node");
    NodeType t;
    t.id = static_cast<TypeId>(node_types_.size());
    t.name = name.text;
    t.supertype = super;
    node_types_.push_back(std::move(t));
    node_types_by_ci_[to_lower_ascii(name.text)] = node_types_.back().id;
    return node_types_.back().id;
  }

  TypeId define_edge_type(const Name& name, const Name& source_type, const Name& dest_type,
                          const std::optional<Name>& supertype = std::nullopt) {
    check_new_type_name(name, edge_types_by_ci_, "edge");
    std::optional<TypeId> super;
    if (supertype) super = resolve_supertype(name, *supertype, edge_types_by_ci_, "edge");
    const NodeType* src = find_node_type(source_type);
    if (!src) throw Error(ErrorCode::unknown_type, "unknown node type '" + source_type.text + "'");
    const NodeType* dst = find_node_type(dest_type);
    if (!dst) throw Error(ErrorCode::unknown_type, "unknown node type '" + dest_type.text + "'");
    EdgeType t;
    t.id = static_cast<TypeId>(edge_types_.size());
    t.name = name.text;
    t.supertype = super;
    t.first_seen_source = src->id;
    t.first_seen_dest = dst->id;
    edge_types_.push_back(std::move(t));
    edge_types_by_ci_[to_lower_ascii(name.text)] = edge_types_.back().id;
    return edge_types_.back().id;
  }

  const NodeType* find_node_type(const Name& name) const {
    return find_type(name, node_types_, node_types_by_ci_);
  }
  const EdgeType* find_edge_type(const Name& name) const {
    return find_type(name, edge_types_, edge_types_by_ci_);
  }

  const NodeType& node_type(TypeId id) const { return node_types_.at(id); }
  const EdgeType& edge_type(TypeId id) const { return edge_types_.at(id); }
  std::size_t node_type_count() const { return node_types_.size(); }
  std::size_t edge_type_count() const { return edge_types_.size(); }

  // Late supertype wiring, used by the bundle loader once all types exist.
  void set_node_supertype(const Name& child, const Name& parent) {
    set_supertype(node_types_, node_types_by_ci_, child, parent, "node");
  }
  void set_edge_supertype(const Name& child, const Name& parent) {
    set_supertype(edge_types_, edge_types_by_ci_, child, parent, "edge");
  }

  // True iff `label` names the concrete type or any ancestor of it.
  bool node_type_conforms(TypeId concrete, const Name& label) const {
    return conforms<NodeType>(node_types_, concrete, label);
  }
  bool edge_type_conforms(TypeId concrete, const Name& label) const {
    return conforms<EdgeType>(edge_types_, concrete, label);
  }

  // ---- elements ----

  ElementId insert_node(const Name& type_name, PropertyMap properties) {
    const NodeType* t = find_node_type(type_name);
    if (!t) throw Error(ErrorCode::unknown_type, "unknown node type '" + type_name.text + "'");
    return insert_node(t->id, std::move(properties));
  }

  ElementId insert_node(TypeId type, PropertyMap properties) {
    if (type >= node_types_.size()) throw Error(ErrorCode::unknown_type, "bad node type id");
    ElementId id = next_id_++;
    grow_known_properties(node_types_[type].known_properties, properties);
    nodes_.emplace(id, Node{id, type, std::move(properties)});
    adjacency_.emplace(id, Adjacency{});
    return id;
  }

  ElementId insert_edge(const Name& type_name, ElementId source, ElementId dest, PropertyMap properties) {
    const EdgeType* t = find_edge_type(type_name);
    if (!t) throw Error(ErrorCode::unknown_type, "unknown edge type '" + type_name.text + "'");
    return insert_edge(t->id, source, dest, std::move(properties));
  }

  ElementId insert_edge(TypeId type, ElementId source, ElementId dest, PropertyMap properties) {
    if (type >= edge_types_.size()) throw Error(ErrorCode::unknown_type, "bad edge type id");
    if (!nodes_.count(source)) throw Error(ErrorCode::unknown_node, "no node " + std::to_string(source));
    if (!nodes_.count(dest)) throw Error(ErrorCode::unknown_node, "no node " + std::to_string(dest));
    ElementId id = next_id_++;
    grow_known_properties(edge_types_[type].known_properties, properties);
    edges_.emplace(id, Edge{id, type, source, dest, std::move(properties)});
    // Ids are monotone, so appending keeps the per-type lists sorted.
    adjacency_[source].out[type].push_back(id);
    adjacency_[dest].in[type].push_back(id);
    return id;
  }

  const Node* find_node(ElementId id) const {
    auto it = nodes_.find(id);
    return it == nodes_.end() ? nullptr : &it->second;
  }
  const Edge* find_edge(ElementId id) const {
    auto it = edges_.find(id);
    return it == edges_.end() ? nullptr : &it->second;
  }

  const Node& node(ElementId id) const {
    const Node* n = find_node(id);
    if (!n) throw Error(ErrorCode::unknown_node, "no node " + std::to_string(id));
    return *n;
  }
  const Edge& edge(ElementId id) const {
    const Edge* e = find_edge(id);
    if (!e) throw Error(ErrorCode::unknown_node, "no edge " + std::to_string(id));
    return *e;
  }

  const std::map<ElementId, Node>& nodes() const { return nodes_; }
  const std::map<ElementId, Edge>& edges() const { return edges_; }

  // Edges at `node` in `direction` whose type conforms to `label` (no label:
  // all types), ascending by edge id.
  std::vector<ElementId> edges_from(ElementId node, Direction direction,
                                    const std::optional<Name>& label = std::nullopt) const {
    auto adj = adjacency_.find(node);
    if (adj == adjacency_.end()) throw Error(ErrorCode::unknown_node, "no node " + std::to_string(node));
    const auto& by_type = direction == Direction::outgoing ? adj->second.out : adj->second.in;
    std::vector<ElementId> out;
    for (const auto& [type, ids] : by_type) {
      if (label && !edge_type_conforms(type, *label)) continue;
      out.insert(out.end(), ids.begin(), ids.end());
    }
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  struct Adjacency {
    std::map<TypeId, std::vector<ElementId>> out;
    std::map<TypeId, std::vector<ElementId>> in;
  };

  template <typename T>
  static const T* find_type(const Name& name, const std::vector<T>& types,
                            const std::unordered_map<std::string, TypeId>& by_ci) {
    if (name.quoted) {
      for (const auto& t : types) {
        if (t.name == name.text) return &t;
      }
      return nullptr;
    }
    auto it = by_ci.find(to_lower_ascii(name.text));
    return it == by_ci.end() ? nullptr : &types[it->second];
  }

  template <typename T>
  bool conforms(const std::vector<T>& types, TypeId concrete, const Name& label) const {
    std::optional<TypeId> cur = concrete;
    while (cur) {
      if (label.matches(types[*cur].name)) return true;
      cur = types[*cur].supertype;
    }
    return false;
  }

  void check_new_type_name(const Name& name, const std::unordered_map<std::string, TypeId>& by_ci,
                           const char* what) const {
    if (name.text.empty()) throw Error(ErrorCode::unknown_type, "empty type name");
    if (by_ci.count(to_lower_ascii(name.text))) {
      throw Error(ErrorCode::duplicate_type,
                  std::string(what) + " type '" + name.text + "' already defined");
    }
  }

  template <typename Map>
  TypeId resolve_supertype(const Name& name, const Name& supertype, const Map& by_ci,
                           const char* what) const {
    if (!supertype.quoted && to_lower_ascii(supertype.text) == to_lower_ascii(name.text)) {
      throw Error(ErrorCode::supertype_cycle,
                  std::string(what) + " type '" + name.text + "' cannot be its own supertype");
    }
    auto it = by_ci.find(to_lower_ascii(supertype.text));
    if (it == by_ci.end()) {
      throw Error(ErrorCode::unknown_supertype, "unknown supertype '" + supertype.text + "'");
    }
    // Supertypes always predate their subtypes and never change, so chains
    // stay acyclic by construction.
    return it->second;
  }

  static void grow_known_properties(std::map<std::string, ValueKind>& known, const PropertyMap& props) {
    for (const auto& [k, v] : props) known.emplace(k, v.kind());
  }

  template <typename T>
  void set_supertype(std::vector<T>& types, const std::unordered_map<std::string, TypeId>& by_ci,
                     const Name& child, const Name& parent, const char* what) {
    const T* c = find_type(child, types, by_ci);
    const T* p = find_type(parent, types, by_ci);
    if (!c) throw Error(ErrorCode::unknown_type, std::string("unknown ") + what + " type '" + child.text + "'");
    if (!p) throw Error(ErrorCode::unknown_type, std::string("unknown ") + what + " type '" + parent.text + "'");
    // Walk up from the parent; reaching the child again would close a cycle.
    for (std::optional<TypeId> t = p->id; t; t = types[*t].supertype) {
      if (*t == c->id) {
        throw Error(ErrorCode::supertype_cycle,
                    "supertype cycle through '" + child.text + "'");
      }
    }
    types[c->id].supertype = p->id;
  }

  std::vector<NodeType> node_types_;
  std::vector<EdgeType> edge_types_;
  std::unordered_map<std::string, TypeId> node_types_by_ci_;
  std::unordered_map<std::string, TypeId> edge_types_by_ci_;
  std::map<ElementId, Node> nodes_;
  std::map<ElementId, Edge> edges_;
  std::unordered_map<ElementId, Adjacency> adjacency_;
  ElementId next_id_ = 1;
};

}  // namespace quiver
