#pragma once

// Expression evaluation over binding environments: value comparison
// semantics, ambient-property resolution for the pattern element under
// evaluation, and the host-function registry (pre-loaded with `cardinality`
// and `later`).

#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "quiver/ast.hpp"
#include "quiver/error.hpp"
#include "quiver/store.hpp"
#include "quiver/value.hpp"

namespace quiver {

// Ordered frames of identifier bindings; inner frames shadow outer ones.
class Environment {
 public:
  Environment() : frames_(1) {}

  const Value* find(const std::string& name) const {
    for (auto it = frames_.rbegin(); it != frames_.rend(); ++it) {
      auto hit = it->find(name);
      if (hit != it->end()) return &hit->second;
    }
    return nullptr;
  }

  void bind(std::string name, Value v) { frames_.back()[std::move(name)] = std::move(v); }
  void unbind(const std::string& name) { frames_.back().erase(name); }

  void push_frame() { frames_.emplace_back(); }
  void pop_frame() { frames_.pop_back(); }

  const std::map<std::string, Value>& top_frame() const { return frames_.back(); }

  std::map<std::string, Value> flattened() const {
    std::map<std::string, Value> out;
    for (const auto& frame : frames_) {
      for (const auto& [k, v] : frame) out[k] = v;
    }
    return out;
  }

 private:
  std::vector<std::map<std::string, Value>> frames_;
};

// Property lookup: quoted names match exactly, unquoted names match exactly
// first and then the first case-insensitive hit in map order.
inline const Value* lookup_property(const PropertyMap& props, const Name& name) {
  auto it = props.find(name.text);
  if (it != props.end()) return &it->second;
  if (name.quoted) return nullptr;
  std::string lower = to_lower_ascii(name.text);
  for (const auto& [k, v] : props) {
    if (to_lower_ascii(k) == lower) return &v;
  }
  return nullptr;
}

struct EvalContext;

struct HostFunction {
  int arity = 0;
  std::function<Value(std::span<const Value>, const EvalContext&)> fn;
};

// Immutable after engine start; names are case-insensitive.
class FunctionRegistry {
 public:
  void add(std::string_view name, int arity,
           std::function<Value(std::span<const Value>, const EvalContext&)> fn) {
    functions_[to_lower_ascii(name)] = HostFunction{arity, std::move(fn)};
  }

  const HostFunction* find(std::string_view name) const {
    auto it = functions_.find(to_lower_ascii(name));
    return it == functions_.end() ? nullptr : &it->second;
  }

  static FunctionRegistry standard();

 private:
  std::map<std::string, HostFunction> functions_;
};

struct EvalContext {
  const GraphStore* store = nullptr;
  const Environment* env = nullptr;
  const PropertyMap* ambient = nullptr;  // properties of the element being matched
  const FunctionRegistry* functions = nullptr;
};

inline bool is_aggregate_name(std::string_view name) {
  std::string lower = to_lower_ascii(name);
  return lower == "count" || lower == "sum" || lower == "min" || lower == "max" || lower == "avg";
}

namespace detail {

[[noreturn]] inline void type_error(const Expr& e, const std::string& message) {
  throw Error(ErrorCode::type_error, message, e.line, e.column);
}

inline const PropertyMap* element_properties(const GraphStore& store, const Value& v) {
  if (v.kind() == ValueKind::node_ref) {
    const Node* n = store.find_node(v.as_node().id);
    return n ? &n->properties : nullptr;
  }
  const Edge* e = store.find_edge(v.as_edge().id);
  return e ? &e->properties : nullptr;
}

inline Value numeric_binary(const Expr& e, BinaryOp op, const Value& a, const Value& b) {
  if (!a.is_numeric() || !b.is_numeric()) {
    type_error(e, std::string("operator '") + (op == BinaryOp::add      ? "+"
                                               : op == BinaryOp::subtract ? "-"
                                               : op == BinaryOp::multiply ? "*"
                                                                          : "/") +
                      "' needs numeric operands, got " + value_kind_name(a.kind()) + " and " +
                      value_kind_name(b.kind()));
  }
  bool both_int = a.kind() == ValueKind::integer && b.kind() == ValueKind::integer;
  if (both_int) {
    std::int64_t x = a.as_int(), y = b.as_int(), r = 0;
    switch (op) {
      case BinaryOp::add:
        if (__builtin_add_overflow(x, y, &r)) type_error(e, "integer overflow");
        return Value::integer(r);
      case BinaryOp::subtract:
        if (__builtin_sub_overflow(x, y, &r)) type_error(e, "integer overflow");
        return Value::integer(r);
      case BinaryOp::multiply:
        if (__builtin_mul_overflow(x, y, &r)) type_error(e, "integer overflow");
        return Value::integer(r);
      case BinaryOp::divide:
        if (y == 0) type_error(e, "division by zero");
        return Value::integer(x / y);
      default: break;
    }
  }
  Decimal x = a.numeric(), y = b.numeric();
  switch (op) {
    case BinaryOp::add: return Value::decimal(x.add(y));
    case BinaryOp::subtract: return Value::decimal(x.sub(y));
    case BinaryOp::multiply: return Value::decimal(x.mul(y));
    case BinaryOp::divide: return Value::decimal(x.div(y));
    default: break;
  }
  type_error(e, "bad arithmetic operator");
}

inline bool equality_comparable_kind(ValueKind k) {
  return k == ValueKind::node_ref || k == ValueKind::edge_ref || k == ValueKind::array ||
         k == ValueKind::path;
}

inline bool truthy(const Expr& e, const Value& v) {
  if (v.is_null()) return false;  // three-valued-logic shortcut
  if (v.kind() != ValueKind::boolean) {
    type_error(e, std::string("expected boolean, got ") + value_kind_name(v.kind()));
  }
  return v.as_bool();
}

}  // namespace detail

inline Value eval(const Expr& e, const EvalContext& ctx) {
  using detail::type_error;
  switch (e.kind) {
    case Expr::Kind::literal:
      return e.literal;

    case Expr::Kind::identifier: {
      if (ctx.env) {
        if (const Value* v = ctx.env->find(e.name.text)) return *v;
      }
      if (ctx.ambient) {
        // Inside a pattern item the element's own properties are in scope;
        // an absent property reads as null, like explicit property access.
        if (const Value* v = lookup_property(*ctx.ambient, e.name)) return *v;
        return Value::null();
      }
      throw Error(ErrorCode::unbound_identifier, "unbound identifier '" + e.name.text + "'", e.line,
                  e.column);
    }

    case Expr::Kind::property: {
      Value base = eval(*e.object, ctx);
      if (base.is_null()) return Value::null();
      if (base.kind() == ValueKind::node_ref || base.kind() == ValueKind::edge_ref) {
        const PropertyMap* props = detail::element_properties(*ctx.store, base);
        if (!props) return Value::null();
        const Value* v = lookup_property(*props, e.name);
        return v ? *v : Value::null();
      }
      if (base.kind() == ValueKind::path) {
        auto it = base.as_path()->alias_arrays.find(e.name.text);
        if (it == base.as_path()->alias_arrays.end()) return Value::null();
        return Value::array(it->second);
      }
      type_error(e, std::string("cannot read property of ") + value_kind_name(base.kind()));
    }

    case Expr::Kind::index: {
      Value base = eval(*e.object, ctx);
      Value idx = eval(*e.operand, ctx);
      if (base.is_null() || idx.is_null()) return Value::null();
      if (idx.kind() != ValueKind::integer) type_error(e, "array index must be an integer");
      std::int64_t i = idx.as_int();
      if (base.kind() == ValueKind::array) {
        const auto& a = base.as_array();
        if (i < 0 || static_cast<std::uint64_t>(i) >= a.size()) return Value::null();
        return a[static_cast<std::size_t>(i)];
      }
      if (base.kind() == ValueKind::path) {
        const auto& elems = base.as_path()->elements;
        if (i < 0 || static_cast<std::uint64_t>(i) >= elems.size()) return Value::null();
        const PathElement& el = elems[static_cast<std::size_t>(i)];
        return el.is_node ? Value::node(el.id) : Value::edge(el.id);
      }
      type_error(e, std::string("cannot index ") + value_kind_name(base.kind()));
    }

    case Expr::Kind::call: {
      if (is_aggregate_name(e.name.text)) {
        type_error(e, "aggregate function '" + e.name.text + "' is not allowed here");
      }
      if (e.star_argument) type_error(e, "'*' argument is only valid in count(*)");
      const HostFunction* fn = ctx.functions ? ctx.functions->find(e.name.text) : nullptr;
      if (!fn) type_error(e, "unknown function '" + e.name.text + "'");
      if (fn->arity != static_cast<int>(e.arguments.size())) {
        type_error(e, "function '" + e.name.text + "' takes " + std::to_string(fn->arity) +
                          " argument(s)");
      }
      std::vector<Value> args;
      args.reserve(e.arguments.size());
      for (const auto& a : e.arguments) args.push_back(eval(*a, ctx));
      return fn->fn(args, ctx);
    }

    case Expr::Kind::unary: {
      if (e.unary_op == UnaryOp::not_) {
        return Value::boolean(!detail::truthy(e, eval(*e.object, ctx)));
      }
      Value v = eval(*e.object, ctx);
      if (v.is_null()) return Value::null();
      if (v.kind() == ValueKind::integer) {
        if (v.as_int() == std::numeric_limits<std::int64_t>::min()) type_error(e, "integer overflow");
        return Value::integer(-v.as_int());
      }
      if (v.kind() == ValueKind::decimal) return Value::decimal(-v.as_decimal());
      type_error(e, std::string("cannot negate ") + value_kind_name(v.kind()));
    }

    case Expr::Kind::binary: {
      switch (e.binary_op) {
        case BinaryOp::and_: {
          // Short-circuit, left to right.
          if (!detail::truthy(e, eval(*e.object, ctx))) return Value::boolean(false);
          return Value::boolean(detail::truthy(e, eval(*e.operand, ctx)));
        }
        case BinaryOp::or_: {
          if (detail::truthy(e, eval(*e.object, ctx))) return Value::boolean(true);
          return Value::boolean(detail::truthy(e, eval(*e.operand, ctx)));
        }
        case BinaryOp::add:
        case BinaryOp::subtract:
        case BinaryOp::multiply:
        case BinaryOp::divide: {
          Value a = eval(*e.object, ctx);
          Value b = eval(*e.operand, ctx);
          if (a.is_null() || b.is_null()) return Value::null();
          return detail::numeric_binary(e, e.binary_op, a, b);
        }
        default: {
          Value a = eval(*e.object, ctx);
          Value b = eval(*e.operand, ctx);
          // Any comparison with null is false.
          if (a.is_null() || b.is_null()) return Value::boolean(false);
          if (e.binary_op == BinaryOp::eq || e.binary_op == BinaryOp::ne) {
            if (a.kind() == b.kind() && detail::equality_comparable_kind(a.kind())) {
              bool eq = value_equal(a, b);
              return Value::boolean(e.binary_op == BinaryOp::eq ? eq : !eq);
            }
          }
          auto c = compare(a, b);
          if (!c) {
            type_error(e, std::string("cannot compare ") + value_kind_name(a.kind()) + " with " +
                              value_kind_name(b.kind()));
          }
          bool r = false;
          switch (e.binary_op) {
            case BinaryOp::lt: r = *c == Ordering::less; break;
            case BinaryOp::le: r = *c != Ordering::greater; break;
            case BinaryOp::gt: r = *c == Ordering::greater; break;
            case BinaryOp::ge: r = *c != Ordering::less; break;
            case BinaryOp::eq: r = *c == Ordering::equal; break;
            case BinaryOp::ne: r = *c != Ordering::equal; break;
            default: break;
          }
          return Value::boolean(r);
        }
      }
    }
  }
  throw Error(ErrorCode::internal, "bad expression kind");
}

// `later(a, t)`: true when a is empty, otherwise true iff the timestamp of
// the last element of a is strictly earlier than t.
inline Value builtin_later(std::span<const Value> args, const EvalContext& ctx) {
  const Value& a = args[0];
  const Value& t = args[1];
  if (a.kind() != ValueKind::array) {
    throw Error(ErrorCode::type_error, "later() expects an array as its first argument");
  }
  if (a.as_array().empty()) return Value::boolean(true);
  const Value& last = a.as_array().back();
  Value ts;
  if (last.kind() == ValueKind::timestamp) {
    ts = last;
  } else if (last.kind() == ValueKind::edge_ref || last.kind() == ValueKind::node_ref) {
    const PropertyMap* props = detail::element_properties(*ctx.store, last);
    const Value* v = props ? lookup_property(*props, Name{"timestamp", false}) : nullptr;
    if (!v || v->kind() != ValueKind::timestamp) {
      throw Error(ErrorCode::type_error, "later(): last array element lacks a timestamp property");
    }
    ts = *v;
  } else {
    throw Error(ErrorCode::type_error, "later(): last array element lacks a timestamp property");
  }
  auto c = compare(ts, t);
  return Value::boolean(c.has_value() && *c == Ordering::less);
}

inline Value builtin_cardinality(std::span<const Value> args, const EvalContext&) {
  const Value& v = args[0];
  if (v.kind() == ValueKind::array) return Value::integer(static_cast<std::int64_t>(v.as_array().size()));
  if (v.kind() == ValueKind::path) {
    return Value::integer(static_cast<std::int64_t>(v.as_path()->elements.size()));
  }
  throw Error(ErrorCode::type_error, "cardinality() expects an array or a path");
}

inline FunctionRegistry FunctionRegistry::standard() {
  FunctionRegistry reg;
  reg.add("cardinality", 1, builtin_cardinality);
  reg.add("later", 2, builtin_later);
  return reg;
}

}  // namespace quiver
