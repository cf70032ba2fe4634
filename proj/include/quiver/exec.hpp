#pragma once

// Statement execution above the matcher: CREATE graph construction with
// schema-on-write type inference, and RETURN projection with aggregation and
// ordering.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "quiver/ast.hpp"
#include "quiver/error.hpp"
#include "quiver/expr.hpp"
#include "quiver/matcher.hpp"
#include "quiver/printer.hpp"
#include "quiver/store.hpp"

namespace quiver {

struct CreateSummary {
  std::uint64_t nodes_created = 0;
  std::uint64_t edges_created = 0;
  std::uint64_t types_created = 0;
};

struct ResultTable {
  std::vector<std::string> columns;
  std::vector<std::vector<Value>> rows;
};

namespace detail {

// Stages a whole CREATE statement (possibly once per binding row) and commits
// it in one go, so a failing statement leaves no partial elements behind.
class CreateStager {
 public:
  CreateStager(GraphStore& store, const FunctionRegistry& functions)
      : store_(store), functions_(functions) {}

  void stage(const CreateStatement& stmt, const Environment* env) {
    aliases_.clear();
    for (const auto& chain : stmt.patterns) stage_chain(chain, env);
  }

  CreateSummary commit() {
    CreateSummary summary;
    std::map<std::size_t, TypeId> node_type_ids;
    std::map<std::size_t, TypeId> edge_type_ids;
    for (std::size_t i = 0; i < pending_node_types_.size(); ++i) {
      node_type_ids[i] = store_.define_node_type(pending_node_types_[i]);
      ++summary.types_created;
    }
    auto node_type_id = [&](const TypeRef& ref) {
      return ref.index() == 0 ? std::get<TypeId>(ref) : node_type_ids.at(std::get<1>(ref).index);
    };
    for (std::size_t i = 0; i < pending_edge_types_.size(); ++i) {
      const auto& pet = pending_edge_types_[i];
      const std::string& src = store_.node_type(node_type_id(pet.source)).name;
      const std::string& dst = store_.node_type(node_type_id(pet.dest)).name;
      edge_type_ids[i] = store_.define_edge_type(pet.name, Name{src, true}, Name{dst, true});
      ++summary.types_created;
    }
    std::vector<ElementId> node_ids(pending_nodes_.size());
    for (std::size_t i = 0; i < pending_nodes_.size(); ++i) {
      const auto& pn = pending_nodes_[i];
      node_ids[i] = store_.insert_node(node_type_id(pn.type), pn.properties);
      ++summary.nodes_created;
    }
    for (const auto& pe : pending_edges_) {
      TypeId type = pe.type.index() == 0 ? std::get<TypeId>(pe.type)
                                         : edge_type_ids.at(std::get<1>(pe.type).index);
      ElementId src = pe.source.index() == 0 ? std::get<ElementId>(pe.source)
                                             : node_ids[std::get<1>(pe.source).index];
      ElementId dst = pe.dest.index() == 0 ? std::get<ElementId>(pe.dest)
                                           : node_ids[std::get<1>(pe.dest).index];
      store_.insert_edge(type, src, dst, pe.properties);
      ++summary.edges_created;
    }
    return summary;
  }

 private:
  struct PendingIndex {
    std::size_t index;
  };
  using TypeRef = std::variant<TypeId, PendingIndex>;
  using NodeHandle = std::variant<ElementId, PendingIndex>;  // live id or pending node index

  struct PendingEdgeType {
    Name name;
    TypeRef source;
    TypeRef dest;
  };
  struct PendingNode {
    TypeRef type;
    PropertyMap properties;
  };
  struct PendingEdge {
    TypeRef type;
    NodeHandle source;
    NodeHandle dest;
    PropertyMap properties;
  };

  void stage_chain(const PatternChain& chain, const Environment* env) {
    std::vector<NodeHandle> handles;
    handles.reserve(chain.nodes.size());
    for (const auto& node : chain.nodes) handles.push_back(stage_node(node.item, env));
    for (std::size_t i = 0; i < chain.elements.size(); ++i) {
      const EdgePattern& ep = chain.elements[i].edge();
      NodeHandle left = handles[i];
      NodeHandle right = handles[i + 1];
      stage_edge(ep.item, ep.right_to_left ? right : left, ep.right_to_left ? left : right, env);
    }
  }

  NodeHandle stage_node(const MatchItem& item, const Environment* env) {
    if (!item.label) {
      if (!item.alias) {
        throw Error(ErrorCode::unresolved_alias, "node pattern in CREATE needs a label or an alias");
      }
      if (item.has_property_map) {
        throw Error(ErrorCode::unresolved_alias,
                    "node reference '" + item.alias->text + "' cannot carry properties");
      }
      auto it = aliases_.find(item.alias->text);
      if (it != aliases_.end()) return it->second;
      if (env) {
        if (const Value* v = env->find(item.alias->text)) {
          if (v->kind() == ValueKind::node_ref && store_.find_node(v->as_node().id)) {
            return NodeHandle{v->as_node().id};
          }
        }
      }
      throw Error(ErrorCode::unresolved_alias, "unresolved alias '" + item.alias->text + "'");
    }
    if (item.alias && aliases_.count(item.alias->text)) {
      throw Error(ErrorCode::unresolved_alias, "alias '" + item.alias->text + "' already bound");
    }
    PendingNode pn;
    pn.type = resolve_node_type(*item.label);
    pn.properties = evaluate_properties(item.properties, env);
    pending_nodes_.push_back(std::move(pn));
    NodeHandle handle{PendingIndex{pending_nodes_.size() - 1}};
    if (item.alias) aliases_[item.alias->text] = handle;
    return handle;
  }

  void stage_edge(const MatchItem& item, NodeHandle source, NodeHandle dest, const Environment* env) {
    if (!item.label) {
      throw Error(ErrorCode::unresolved_alias, "edge pattern in CREATE needs a type label");
    }
    PendingEdge pe;
    pe.type = resolve_edge_type(*item.label, source, dest);
    pe.source = source;
    pe.dest = dest;
    pe.properties = evaluate_properties(item.properties, env);
    pending_edges_.push_back(std::move(pe));
  }

  PropertyMap evaluate_properties(const std::vector<PropertyEntry>& entries, const Environment* env) {
    PropertyMap props;
    EvalContext ctx{&store_, env, nullptr, &functions_};
    for (const auto& entry : entries) {
      Value v = eval(*entry.value, ctx);
      if (v.is_null()) continue;  // null properties are simply absent
      props[entry.key.text] = std::move(v);
    }
    return props;
  }

  TypeRef resolve_node_type(const Name& label) {
    if (const NodeType* t = store_.find_node_type(label)) return TypeRef{t->id};
    for (std::size_t i = 0; i < pending_node_types_.size(); ++i) {
      if (label.matches(pending_node_types_[i].text)) return TypeRef{PendingIndex{i}};
    }
    pending_node_types_.push_back(label);
    return TypeRef{PendingIndex{pending_node_types_.size() - 1}};
  }

  TypeRef resolve_edge_type(const Name& label, const NodeHandle& source, const NodeHandle& dest) {
    if (const EdgeType* t = store_.find_edge_type(label)) return TypeRef{t->id};
    for (std::size_t i = 0; i < pending_edge_types_.size(); ++i) {
      if (label.matches(pending_edge_types_[i].name.text)) return TypeRef{PendingIndex{i}};
    }
    pending_edge_types_.push_back(PendingEdgeType{label, node_type_of(source), node_type_of(dest)});
    return TypeRef{PendingIndex{pending_edge_types_.size() - 1}};
  }

  TypeRef node_type_of(const NodeHandle& handle) {
    if (handle.index() == 0) return TypeRef{store_.node(std::get<ElementId>(handle)).type};
    return pending_nodes_[std::get<1>(handle).index].type;
  }

  GraphStore& store_;
  const FunctionRegistry& functions_;
  std::map<std::string, NodeHandle> aliases_;
  std::vector<Name> pending_node_types_;
  std::vector<PendingEdgeType> pending_edge_types_;
  std::vector<PendingNode> pending_nodes_;
  std::vector<PendingEdge> pending_edges_;
};

inline bool contains_aggregate(const Expr& e) {
  if (e.kind == Expr::Kind::call && is_aggregate_name(e.name.text)) return true;
  if (e.object && contains_aggregate(*e.object)) return true;
  if (e.operand && contains_aggregate(*e.operand)) return true;
  for (const auto& a : e.arguments) {
    if (contains_aggregate(*a)) return true;
  }
  return false;
}

// Aggregate evaluation over the whole binding table (no grouping).
class AggregateEvaluator {
 public:
  AggregateEvaluator(const BindingTable& table, const GraphStore& store,
                     const FunctionRegistry& functions)
      : table_(table), store_(store), functions_(functions) {}

  Value evaluate(const Expr& e) {
    switch (e.kind) {
      case Expr::Kind::literal:
        return e.literal;
      case Expr::Kind::identifier:
        throw Error(ErrorCode::type_error,
                    "column reference '" + e.name.text +
                        "' must appear inside an aggregate when aggregates are used",
                    e.line, e.column);
      case Expr::Kind::call:
        if (is_aggregate_name(e.name.text)) return aggregate(e);
        [[fallthrough]];
      default:
        // Evaluate children (which may contain aggregates) first, then apply
        // the scalar operator on the results.
        return structural(e);
    }
  }

 private:
  Value structural(const Expr& e) {
    Expr copy;
    copy.kind = e.kind;
    copy.line = e.line;
    copy.column = e.column;
    copy.name = e.name;
    copy.binary_op = e.binary_op;
    copy.unary_op = e.unary_op;
    copy.star_argument = e.star_argument;
    // Evaluate children first, then delegate to the scalar evaluator with
    // literal children.
    auto lift = [&](const Expr& child) {
      auto lit = make_expr(Expr::Kind::literal);
      lit->literal = evaluate(child);
      lit->line = child.line;
      lit->column = child.column;
      return lit;
    };
    if (e.object) copy.object = lift(*e.object);
    if (e.operand) copy.operand = lift(*e.operand);
    for (const auto& a : e.arguments) copy.arguments.push_back(lift(*a));
    Environment empty;
    EvalContext ctx{&store_, &empty, nullptr, &functions_};
    return eval(copy, ctx);
  }

  Value aggregate(const Expr& e) {
    std::string fn = to_lower_ascii(e.name.text);
    if (fn == "count" && e.star_argument) {
      return Value::integer(static_cast<std::int64_t>(table_.rows.size()));
    }
    if (e.arguments.size() != 1) {
      throw Error(ErrorCode::type_error, "aggregate '" + fn + "' takes one argument", e.line, e.column);
    }
    std::vector<Value> values;
    values.reserve(table_.rows.size());
    for (std::size_t r = 0; r < table_.rows.size(); ++r) {
      Environment env;
      for (std::size_t c = 0; c < table_.columns.size(); ++c) {
        env.bind(table_.columns[c], table_.rows[r][c]);
      }
      EvalContext ctx{&store_, &env, nullptr, &functions_};
      Value v = eval(*e.arguments[0], ctx);
      if (!v.is_null()) values.push_back(std::move(v));
    }
    if (fn == "count") return Value::integer(static_cast<std::int64_t>(values.size()));
    if (values.empty()) return Value::null();
    if (fn == "min" || fn == "max") {
      Value best = values[0];
      for (std::size_t i = 1; i < values.size(); ++i) {
        auto c = compare(values[i], best);
        if (!c) {
          throw Error(ErrorCode::type_error, "cannot compare values in '" + fn + "'", e.line, e.column);
        }
        if ((fn == "min" && *c == Ordering::less) || (fn == "max" && *c == Ordering::greater)) {
          best = values[i];
        }
      }
      return best;
    }
    // sum / avg
    bool all_int = true;
    for (const auto& v : values) {
      if (!v.is_numeric()) {
        throw Error(ErrorCode::type_error, "'" + fn + "' expects numeric values", e.line, e.column);
      }
      if (v.kind() != ValueKind::integer) all_int = false;
    }
    Decimal total = Decimal::from_int(0);
    for (const auto& v : values) total = total.add(v.numeric());
    if (fn == "sum") {
      if (all_int && total.coefficient() >= std::numeric_limits<std::int64_t>::min() &&
          total.coefficient() <= std::numeric_limits<std::int64_t>::max()) {
        return Value::integer(static_cast<std::int64_t>(total.coefficient()));
      }
      return Value::decimal(total);
    }
    return Value::decimal(total.div(Decimal::from_int(static_cast<std::int64_t>(values.size()))));
  }

  const BindingTable& table_;
  const GraphStore& store_;
  const FunctionRegistry& functions_;
};

inline std::string to_upper_ascii(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'a' && c <= 'z') c = static_cast<char>(c - 'a' + 'A');
  }
  return out;
}

inline std::string projection_column_name(const Projection& p) {
  if (p.alias) return p.alias->text;
  if (p.expr->kind == Expr::Kind::identifier) return to_upper_ascii(p.expr->name.text);
  return pretty_print(*p.expr);
}

}  // namespace detail

inline CreateSummary execute_create(const CreateStatement& stmt, GraphStore& store,
                                    const FunctionRegistry& functions,
                                    const Environment* env = nullptr) {
  detail::CreateStager stager(store, functions);
  stager.stage(stmt, env);
  return stager.commit();
}

// Dependent CREATE of a MATCH: staged once per binding row, committed as one
// atomic batch.
inline CreateSummary execute_create_per_row(const CreateStatement& stmt, GraphStore& store,
                                            const FunctionRegistry& functions,
                                            const BindingTable& bindings) {
  detail::CreateStager stager(store, functions);
  for (const auto& row : bindings.rows) {
    Environment env;
    for (std::size_t c = 0; c < bindings.columns.size(); ++c) env.bind(bindings.columns[c], row[c]);
    stager.stage(stmt, &env);
  }
  return stager.commit();
}

inline ResultTable evaluate_return(const ReturnClause& ret, const BindingTable& bindings,
                                   const GraphStore& store, const FunctionRegistry& functions) {
  ResultTable out;
  out.columns.reserve(ret.projections.size());
  for (const auto& p : ret.projections) out.columns.push_back(detail::projection_column_name(p));

  bool any_aggregate = false;
  for (const auto& p : ret.projections) {
    if (detail::contains_aggregate(*p.expr)) any_aggregate = true;
  }

  if (any_aggregate) {
    // Aggregations collapse the whole binding table to one row; a projection
    // mixing aggregated and bare column references is an error.
    detail::AggregateEvaluator agg(bindings, store, functions);
    std::vector<Value> row;
    row.reserve(ret.projections.size());
    for (const auto& p : ret.projections) row.push_back(agg.evaluate(*p.expr));
    out.rows.push_back(std::move(row));
    return out;
  }

  struct SortableRow {
    std::vector<Value> cells;
    std::vector<Value> keys;
    std::size_t input_order = 0;
  };
  std::vector<SortableRow> rows;
  rows.reserve(bindings.rows.size());
  for (std::size_t r = 0; r < bindings.rows.size(); ++r) {
    Environment env;
    for (std::size_t c = 0; c < bindings.columns.size(); ++c) {
      env.bind(bindings.columns[c], bindings.rows[r][c]);
    }
    EvalContext ctx{&store, &env, nullptr, &functions};
    SortableRow row;
    row.input_order = r;
    for (const auto& p : ret.projections) row.cells.push_back(eval(*p.expr, ctx));
    if (!ret.order_by.empty()) {
      // ORDER BY may reference projection aliases; they shadow bindings.
      env.push_frame();
      for (std::size_t i = 0; i < ret.projections.size(); ++i) {
        if (ret.projections[i].alias) env.bind(ret.projections[i].alias->text, row.cells[i]);
      }
      for (const auto& key : ret.order_by) row.keys.push_back(eval(*key.expr, ctx));
    }
    rows.push_back(std::move(row));
  }

  if (!ret.order_by.empty()) {
    std::stable_sort(rows.begin(), rows.end(), [&](const SortableRow& a, const SortableRow& b) {
      for (std::size_t i = 0; i < ret.order_by.size(); ++i) {
        if (order_less(a.keys[i], b.keys[i], ret.order_by[i].descending)) return true;
        if (order_less(b.keys[i], a.keys[i], ret.order_by[i].descending)) return false;
      }
      return false;
    });
  }
  for (auto& row : rows) out.rows.push_back(std::move(row.cells));
  return out;
}

// ---------------------------------------------------------------------------
// Whole-statement execution
// ---------------------------------------------------------------------------

struct ExecutionResult {
  enum class Kind { binding_table, result_table, create_summary };
  Kind kind = Kind::create_summary;
  BindingTable bindings;
  ResultTable result;
  CreateSummary summary;
  MatchStats stats;
};

inline ExecutionResult execute_statement(const Statement& stmt, GraphStore& store,
                                         const FunctionRegistry& functions) {
  ExecutionResult res;
  if (!stmt.is_match()) {
    res.kind = ExecutionResult::Kind::create_summary;
    res.summary = execute_create(stmt.create(), store, functions);
    return res;
  }
  const MatchStatement& m = stmt.match();
  MatchEngine engine(store, functions);
  res.bindings = engine.execute(m);
  res.stats = engine.stats();
  if (m.return_clause) {
    res.kind = ExecutionResult::Kind::result_table;
    res.result = evaluate_return(*m.return_clause, res.bindings, store, functions);
  } else if (m.create_clause) {
    res.kind = ExecutionResult::Kind::create_summary;
    res.summary = execute_create_per_row(*m.create_clause, store, functions, res.bindings);
  } else {
    res.kind = ExecutionResult::Kind::binding_table;
  }
  return res;
}

}  // namespace quiver
