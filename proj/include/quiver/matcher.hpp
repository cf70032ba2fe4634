#pragma once

// The MATCH engine: incremental depth-first pattern traversal producing a
// binding table, quantified path patterns with array bindings, match modes,
// and deterministic order-directed truncation of edge expansion.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "quiver/ast.hpp"
#include "quiver/error.hpp"
#include "quiver/expr.hpp"
#include "quiver/store.hpp"
#include "quiver/value.hpp"

namespace quiver {

struct MatchStats {
  // Candidate edges examined after truncation, across all expansion steps.
  std::uint64_t edges_examined = 0;
  // Child states that passed all checks and entered the search.
  std::uint64_t states_generated = 0;
  // Largest number of child states produced by a single expansion step on
  // which at least one truncation spec applied.
  std::uint64_t max_truncated_step_children = 0;
};

struct BindingTable {
  std::vector<std::string> columns;
  std::vector<std::vector<Value>> rows;

  std::optional<std::size_t> column_index(std::string_view name) const {
    for (std::size_t i = 0; i < columns.size(); ++i) {
      if (columns[i] == name) return i;
    }
    return std::nullopt;
  }

  const Value& at(std::size_t row, std::string_view column) const {
    auto idx = column_index(column);
    if (!idx) throw Error(ErrorCode::internal, "no column " + std::string(column));
    return rows[row][*idx];
  }
};

// Collects identifiers in binding positions (aliases, map-value binders,
// path aliases) in pattern order; used to fix the binding-table column set.
namespace detail {

inline void collect_chain_binders(const PatternChain& chain, std::vector<std::string>& out,
                                  std::set<std::string>& seen);

inline void collect_item_binders(const MatchItem& item, std::vector<std::string>& out,
                                 std::set<std::string>& seen) {
  auto add = [&](const std::string& name) {
    if (seen.insert(name).second) out.push_back(name);
  };
  if (item.alias) add(item.alias->text);
  for (const auto& entry : item.properties) {
    if (entry.value->kind == Expr::Kind::identifier) add(entry.value->name.text);
  }
}

inline void collect_chain_binders(const PatternChain& chain, std::vector<std::string>& out,
                                  std::set<std::string>& seen) {
  collect_item_binders(chain.nodes[0].item, out, seen);
  for (std::size_t i = 0; i < chain.elements.size(); ++i) {
    const auto& elem = chain.elements[i];
    if (elem.is_edge()) {
      collect_item_binders(elem.edge().item, out, seen);
    } else {
      collect_chain_binders(elem.quantified().inner, out, seen);
    }
    collect_item_binders(chain.nodes[i + 1].item, out, seen);
  }
}

}  // namespace detail

class MatchEngine {
 public:
  MatchEngine(const GraphStore& store, const FunctionRegistry& functions)
      : store_(store), functions_(functions) {}

  // Runs the statement's pattern part: truncation plan, comma-joined match
  // parts, match modes, selection and the statement-level WHERE. The outer
  // environment seeds bindings (for dependent or joined execution).
  BindingTable execute(const MatchStatement& stmt, const Environment* outer = nullptr) {
    stats_ = MatchStats{};
    compile_truncation(stmt.truncation);

    std::set<std::string> seen;
    std::vector<std::string> columns;
    Environment seed;
    if (outer) {
      seed = *outer;
      for (const auto& [name, value] : outer->flattened()) seen.insert(name);
    }
    for (const auto& part : stmt.parts) {
      if (part.path_alias && seen.insert(part.path_alias->text).second) {
        columns.push_back(part.path_alias->text);
      }
      detail::collect_chain_binders(part.chain, columns, seen);
    }

    std::vector<Environment> current{seed};
    for (const auto& part : stmt.parts) {
      std::vector<Environment> next;
      for (const auto& env : current) {
        std::vector<Row> rows = match_part(part, env);
        apply_selection(rows, part.selection);
        for (auto& row : rows) next.push_back(std::move(row.env));
      }
      current = std::move(next);
    }

    BindingTable table;
    table.columns = columns;
    for (const auto& env : current) {
      if (stmt.where) {
        EvalContext ctx{&store_, &env, nullptr, &functions_};
        Value cond = eval(*stmt.where, ctx);
        if (cond.is_null()) continue;
        if (cond.kind() != ValueKind::boolean) {
          throw Error(ErrorCode::type_error, "WHERE expects a boolean", stmt.where->line,
                      stmt.where->column);
        }
        if (!cond.as_bool()) continue;
      }
      std::vector<Value> row;
      row.reserve(columns.size());
      for (const auto& col : columns) {
        const Value* v = env.find(col);
        if (!v) throw Error(ErrorCode::internal, "unbound column '" + col + "'");
        row.push_back(*v);
      }
      table.rows.push_back(std::move(row));
    }
    return table;
  }

  const MatchStats& stats() const { return stats_; }

 private:
  struct State {
    Environment env;
    std::vector<PathElement> path;
    std::vector<ElementId> path_nodes;
    std::vector<ElementId> path_edges;
    std::map<std::string, ValueArray> alias_arrays;
    // Index into path_edges where the outermost active quantified expansion
    // began; edges from there on may not be traversed again within it.
    std::optional<std::size_t> guard_start;
  };

  struct Row {
    Environment env;
    ElementId first_node = 0;
    ElementId last_node = 0;
    std::size_t cardinality = 0;
  };

  struct CompiledSpec {
    const TruncationSpec* ast = nullptr;
    std::optional<TypeId> type;  // resolved named spec
    bool unresolved = false;     // named but unknown: never applies
    int depth = 0;
  };

  using Cont = std::function<void(State)>;

  // ---- truncation ----

  void compile_truncation(const std::vector<TruncationSpec>& specs) {
    plan_.clear();
    bool have_unnamed = false;
    std::set<std::string> names;
    for (const auto& spec : specs) {
      CompiledSpec c;
      c.ast = &spec;
      if (!spec.edge_type) {
        if (have_unnamed) {
          throw Error(ErrorCode::duplicate_truncation, "more than one unnamed truncation spec");
        }
        have_unnamed = true;
      } else {
        if (!names.insert(to_lower_ascii(spec.edge_type->text)).second) {
          throw Error(ErrorCode::duplicate_truncation,
                      "duplicate truncation spec for '" + spec.edge_type->text + "'");
        }
        const EdgeType* t = store_.find_edge_type(*spec.edge_type);
        if (t) {
          c.type = t->id;
          for (std::optional<TypeId> s = t->supertype; s; s = store_.edge_type(*s).supertype) ++c.depth;
        } else {
          c.unresolved = true;
        }
      }
      plan_.push_back(c);
    }
    // Least specific first: the unnamed spec, then named specs from root
    // supertypes down; ties by name for determinism.
    std::stable_sort(plan_.begin(), plan_.end(), [](const CompiledSpec& a, const CompiledSpec& b) {
      bool a_named = a.ast->edge_type.has_value();
      bool b_named = b.ast->edge_type.has_value();
      if (a_named != b_named) return !a_named;
      if (a.depth != b.depth) return a.depth < b.depth;
      std::string an = a_named ? to_lower_ascii(a.ast->edge_type->text) : "";
      std::string bn = b_named ? to_lower_ascii(b.ast->edge_type->text) : "";
      return an < bn;
    });
  }

  bool spec_applies(const CompiledSpec& spec, TypeId edge_type) const {
    if (spec.unresolved) return false;
    if (!spec.type) return true;
    for (std::optional<TypeId> t = edge_type; t; t = store_.edge_type(*t).supertype) {
      if (*t == *spec.type) return true;
    }
    return false;
  }

  // Applies the compiled specs in order to a candidate list that is already
  // filtered by direction and label. Each spec sorts the candidates it
  // applies to by its keys (ties by ascending edge id) and keeps the first
  // `limit` of them in their slots; untouched candidates keep position.
  std::vector<ElementId> truncate_candidates(const std::vector<ElementId>& candidates, State& state,
                                             bool* any_applied) {
    if (plan_.empty()) return candidates;
    std::vector<ElementId> list = candidates;
    for (const auto& spec : plan_) {
      std::vector<ElementId> affected;
      for (ElementId id : list) {
        if (spec_applies(spec, store_.edge(id).type)) affected.push_back(id);
      }
      if (affected.empty()) continue;
      *any_applied = true;
      std::vector<std::pair<std::vector<Value>, ElementId>> keyed;
      keyed.reserve(affected.size());
      for (ElementId id : affected) {
        std::vector<Value> keys;
        keys.reserve(spec.ast->order.size());
        for (const auto& key : spec.ast->order) {
          keys.push_back(eval_in_state(*key.expr, state, &store_.edge(id).properties));
        }
        keyed.emplace_back(std::move(keys), id);
      }
      const auto& order = spec.ast->order;
      std::sort(keyed.begin(), keyed.end(), [&](const auto& a, const auto& b) {
        for (std::size_t i = 0; i < order.size(); ++i) {
          if (order_less(a.first[i], b.first[i], order[i].descending)) return true;
          if (order_less(b.first[i], a.first[i], order[i].descending)) return false;
        }
        return a.second < b.second;
      });
      std::size_t keep = std::min<std::size_t>(spec.ast->limit, keyed.size());
      std::vector<ElementId> next;
      next.reserve(list.size());
      std::size_t taken = 0;
      for (ElementId id : list) {
        if (spec_applies(spec, store_.edge(id).type)) {
          if (taken < keep) next.push_back(keyed[taken++].second);
        } else {
          next.push_back(id);
        }
      }
      list = std::move(next);
    }
    return list;
  }

  // ---- evaluation helpers ----

  Value make_path_value(const State& state) const {
    auto data = std::make_shared<PathData>();
    data->elements = state.path;
    data->alias_arrays = state.alias_arrays;
    return Value::path(std::move(data));
  }

  Value eval_in_state(const Expr& expr, State& state, const PropertyMap* ambient) {
    if (part_ && part_->path_alias) {
      state.env.bind(part_->path_alias->text, make_path_value(state));
    }
    EvalContext ctx{&store_, &state.env, ambient, &functions_};
    return eval(expr, ctx);
  }

  bool eval_condition(const Expr& expr, State& state, const PropertyMap* ambient) {
    Value v = eval_in_state(expr, state, ambient);
    if (v.is_null()) return false;
    if (v.kind() != ValueKind::boolean) {
      throw Error(ErrorCode::type_error, "WHERE expects a boolean", expr.line, expr.column);
    }
    return v.as_bool();
  }

  static bool match_equal(const Value& actual, const Value& expected) { return value_equal(actual, expected); }

  // Alias, property map and inline WHERE checks shared by node and edge
  // patterns; binds into `state.env` on success.
  bool match_element_item(const MatchItem& item, const Value& self, const PropertyMap& props,
                          State& state) {
    if (item.alias) {
      if (const Value* bound = state.env.find(item.alias->text)) {
        if (!value_equal(*bound, self)) return false;
      } else {
        state.env.bind(item.alias->text, self);
      }
    }
    for (const auto& entry : item.properties) {
      const Value* actual = lookup_property(props, entry.key);
      if (!actual) return false;
      if (entry.value->kind == Expr::Kind::identifier &&
          !state.env.find(entry.value->name.text)) {
        // An unbound identifier in a map position is a binder.
        state.env.bind(entry.value->name.text, *actual);
        continue;
      }
      Value expected = eval_in_state(*entry.value, state, nullptr);
      if (!match_equal(*actual, expected)) return false;
    }
    if (item.where && !eval_condition(*item.where, state, &props)) return false;
    return true;
  }

  bool match_node_item(const NodePattern& np, ElementId node_id, State& state) {
    const Node& node = store_.node(node_id);
    if (np.item.label && !store_.node_type_conforms(node.type, *np.item.label)) return false;
    return match_element_item(np.item, Value::node(node_id), node.properties, state);
  }

  static bool contains(const std::vector<ElementId>& v, ElementId id) {
    return std::find(v.begin(), v.end(), id) != v.end();
  }
  static bool contains_from(const std::vector<ElementId>& v, std::size_t start, ElementId id) {
    return std::find(v.begin() + static_cast<std::ptrdiff_t>(start), v.end(), id) != v.end();
  }

  // Node-repetition rules: ACYCLIC rejects any repeated node; SIMPLE allows a
  // repeat only to close the pattern back to its first node.
  bool node_admissible(ElementId dest, const State& state, bool is_final) const {
    switch (part_->repetition) {
      case Repetition::acyclic:
        return !contains(state.path_nodes, dest);
      case Repetition::simple:
        if (!contains(state.path_nodes, dest)) return true;
        return is_final && dest == state.path_nodes.front();
      default:
        return true;
    }
  }

  // ---- search ----

  void advance(const PatternChain& chain, std::size_t elem_idx, bool top_level, State state,
               const Cont& k) {
    if (elem_idx == chain.elements.size()) {
      k(std::move(state));
      return;
    }
    if (chain.elements[elem_idx].is_edge()) {
      expand_edge(chain, elem_idx, top_level, std::move(state), k);
    } else {
      expand_quantified(chain, elem_idx, top_level, std::move(state), k);
    }
  }

  void expand_edge(const PatternChain& chain, std::size_t elem_idx, bool top_level, State state,
                   const Cont& k) {
    const EdgePattern& ep = chain.elements[elem_idx].edge();
    ElementId cur = state.path_nodes.back();
    Direction dir = ep.right_to_left ? Direction::incoming : Direction::outgoing;
    std::vector<ElementId> candidates = store_.edges_from(cur, dir, ep.item.label);
    bool spec_applied = false;
    candidates = truncate_candidates(candidates, state, &spec_applied);
    stats_.edges_examined += candidates.size();
    std::uint64_t children = 0;
    bool is_final = top_level && elem_idx + 1 == chain.nodes.size() - 1;

    for (ElementId eid : candidates) {
      const Edge& edge = store_.edge(eid);
      if (part_->repetition == Repetition::trail && contains(state.path_edges, eid)) continue;
      if (state.guard_start && contains_from(state.path_edges, *state.guard_start, eid)) continue;
      State child = state;
      if (!match_element_item(ep.item, Value::edge(eid), edge.properties, child)) continue;
      ElementId dest = ep.right_to_left ? edge.source : edge.dest;
      if (!node_admissible(dest, child, is_final)) continue;
      if (!match_node_item(chain.nodes[elem_idx + 1], dest, child)) continue;
      child.path.push_back(PathElement{false, eid});
      child.path.push_back(PathElement{true, dest});
      child.path_edges.push_back(eid);
      child.path_nodes.push_back(dest);
      ++stats_.states_generated;
      ++children;
      advance(chain, elem_idx + 1, top_level, std::move(child), k);
    }
    if (spec_applied) {
      stats_.max_truncated_step_children = std::max(stats_.max_truncated_step_children, children);
    }
  }

  void expand_quantified(const PatternChain& chain, std::size_t elem_idx, bool top_level,
                         State state, const Cont& k) {
    const QuantifiedPattern& q = chain.elements[elem_idx].quantified();

    // Aliases this segment accumulates: binder names of the inner chain that
    // are not already bound on entry.
    std::vector<std::string> all;
    std::set<std::string> seen;
    detail::collect_chain_binders(q.inner, all, seen);
    std::vector<std::string> seg_aliases;
    for (const auto& name : all) {
      if (!state.env.find(name)) seg_aliases.push_back(name);
    }

    std::optional<std::size_t> saved_guard = state.guard_start;
    if (!state.guard_start) state.guard_start = state.path_edges.size();
    for (const auto& name : seg_aliases) state.alias_arrays[name] = ValueArray{};

    quantified_rep(chain, elem_idx, top_level, q, seg_aliases, saved_guard, 0, std::move(state), k);
  }

  void quantified_rep(const PatternChain& chain, std::size_t elem_idx, bool top_level,
                      const QuantifiedPattern& q, const std::vector<std::string>& seg_aliases,
                      std::optional<std::size_t> saved_guard, std::uint32_t count, State state,
                      const Cont& k) {
    if (count >= q.min) {
      emit_continuation(chain, elem_idx, top_level, q, seg_aliases, saved_guard, state, k);
    }
    if (q.max && count == *q.max) return;

    // One more repetition: the inner chain starts at the current node.
    State attempt = state;
    std::size_t before = attempt.path.size();
    if (!match_node_item(q.inner.nodes[0], attempt.path_nodes.back(), attempt)) return;
    advance(q.inner, 0, /*top_level=*/false, std::move(attempt), [&, this](State done) {
      bool progressed = done.path.size() > before;
      for (const auto& name : seg_aliases) {
        const Value* v = done.env.find(name);
        done.alias_arrays[name].push_back(v ? *v : Value::null());
        done.env.unbind(name);
      }
      if (!progressed) {
        // Zero-width repetition: emit once more if it completes the
        // quantifier, but do not iterate further.
        if (count + 1 >= q.min) {
          emit_continuation(chain, elem_idx, top_level, q, seg_aliases, saved_guard, done, k);
        }
        return;
      }
      quantified_rep(chain, elem_idx, top_level, q, seg_aliases, saved_guard, count + 1,
                     std::move(done), k);
    });
  }

  // Leaves the segment: bind accumulated arrays, restore the outer guard and
  // match the next node pattern against the current node (juxtaposition).
  void emit_continuation(const PatternChain& chain, std::size_t elem_idx, bool top_level,
                         const QuantifiedPattern&, const std::vector<std::string>& seg_aliases,
                         std::optional<std::size_t> saved_guard, const State& state, const Cont& k) {
    State cont = state;
    cont.guard_start = saved_guard;
    for (const auto& name : seg_aliases) cont.env.bind(name, Value::array(cont.alias_arrays[name]));
    if (!match_node_item(chain.nodes[elem_idx + 1], cont.path_nodes.back(), cont)) return;
    advance(chain, elem_idx + 1, top_level, std::move(cont), k);
  }

  std::vector<Row> match_part(const MatchPart& part, const Environment& seed) {
    part_ = &part;
    std::vector<Row> rows;
    Cont emit = [&](State s) {
      if (part.path_alias) s.env.bind(part.path_alias->text, make_path_value(s));
      Row row;
      row.first_node = s.path_nodes.front();
      row.last_node = s.path_nodes.back();
      row.cardinality = s.path.size();
      row.env = std::move(s.env);
      rows.push_back(std::move(row));
    };

    const NodePattern& first = part.chain.nodes[0];
    auto try_start = [&](ElementId node_id) {
      State state;
      state.env = seed;
      state.env.push_frame();
      if (!match_node_item(first, node_id, state)) return;
      state.path.push_back(PathElement{true, node_id});
      state.path_nodes.push_back(node_id);
      ++stats_.states_generated;
      advance(part.chain, 0, /*top_level=*/true, std::move(state), emit);
    };

    // A start alias already bound to a node pins the start; otherwise scan
    // all nodes in ascending id order.
    const Value* bound =
        first.item.alias ? seed.find(first.item.alias->text) : nullptr;
    if (bound) {
      if (bound->kind() == ValueKind::node_ref && store_.find_node(bound->as_node().id)) {
        try_start(bound->as_node().id);
      }
    } else {
      for (const auto& [id, node] : store_.nodes()) try_start(id);
    }
    part_ = nullptr;
    return rows;
  }

  void apply_selection(std::vector<Row>& rows, Selection selection) const {
    switch (selection) {
      case Selection::none:
      case Selection::all:
        return;
      case Selection::any:
        if (rows.size() > 1) rows.resize(1);
        return;
      case Selection::shortest: {
        std::map<std::pair<ElementId, ElementId>, std::size_t> best;
        for (const auto& row : rows) {
          auto key = std::make_pair(row.first_node, row.last_node);
          auto it = best.find(key);
          if (it == best.end() || row.cardinality < it->second) best[key] = row.cardinality;
        }
        std::vector<Row> kept;
        for (auto& row : rows) {
          if (best[{row.first_node, row.last_node}] == row.cardinality) kept.push_back(std::move(row));
        }
        rows = std::move(kept);
        return;
      }
    }
  }

  const GraphStore& store_;
  const FunctionRegistry& functions_;
  MatchStats stats_;
  std::vector<CompiledSpec> plan_;
  const MatchPart* part_ = nullptr;
};

}  // namespace quiver
