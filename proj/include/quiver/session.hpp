#pragma once

// Front-end session: parameter substitution, statement splitting, script and
// REPL execution against a loaded bundle (or an empty store).

#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "quiver/bundle.hpp"
#include "quiver/error.hpp"
#include "quiver/exec.hpp"
#include "quiver/parser.hpp"
#include "quiver/table.hpp"

namespace quiver {

inline bool valid_parameter_name(std::string_view name) {
  if (name.empty()) return false;
  auto alpha = [](char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; };
  if (!alpha(name[0])) return false;
  for (char c : name.substr(1)) {
    if (!alpha(c) && !(c >= '0' && c <= '9')) return false;
  }
  return true;
}

// Pure textual replacement of $name placeholders. Values are inserted
// verbatim (the caller supplies quoting), and nothing is substituted inside
// single-quoted string literals.
inline std::string substitute_parameters(std::string_view text,
                                         const std::map<std::string, std::string>& params) {
  std::string out;
  std::vector<std::string> missing;
  std::size_t i = 0;
  bool in_string = false;
  while (i < text.size()) {
    char c = text[i];
    if (in_string) {
      out += c;
      if (c == '\'') in_string = false;  // '' escapes re-enter immediately below
      ++i;
      continue;
    }
    if (c == '\'') {
      in_string = true;
      out += c;
      ++i;
      continue;
    }
    if (c == '$') {
      std::size_t start = i + 1;
      std::size_t end = start;
      auto ident = [](char ch, bool first) {
        bool alpha = (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') || ch == '_';
        return first ? alpha : (alpha || (ch >= '0' && ch <= '9'));
      };
      while (end < text.size() && ident(text[end], end == start)) ++end;
      if (end > start) {
        std::string name(text.substr(start, end - start));
        auto it = params.find(name);
        if (it == params.end()) {
          bool known = false;
          for (const auto& m : missing) known = known || m == name;
          if (!known) missing.push_back(name);
        } else {
          out += it->second;
        }
        i = end;
        continue;
      }
    }
    out += c;
    ++i;
  }
  if (!missing.empty()) {
    std::string list;
    for (std::size_t k = 0; k < missing.size(); ++k) {
      if (k) list += ", ";
      list += "$" + missing[k];
    }
    throw Error(ErrorCode::missing_parameter, "unbound parameter(s): " + list);
  }
  return out;
}

struct StatementText {
  std::string text;
  int start_line = 1;  // 1-based line of the first character in the source
};

// Splits a script into statements at semicolons and blank lines, outside
// string literals, quoted identifiers and comments.
inline std::vector<StatementText> split_statements(std::string_view source) {
  std::vector<StatementText> out;
  std::string current;
  int line = 1;
  int current_start = 1;
  bool has_content = false;
  int blank_newlines = 0;

  auto flush = [&]() {
    if (has_content) out.push_back(StatementText{current, current_start});
    current.clear();
    has_content = false;
  };

  std::size_t i = 0;
  char quote = '\0';
  while (i < source.size()) {
    char c = source[i];
    if (quote != '\0') {
      current += c;
      if (c == '\n') ++line;
      if (c == quote) quote = '\0';
      ++i;
      continue;
    }
    if (c == '\'' || c == '"') {
      if (!has_content) current_start = line;
      has_content = true;
      blank_newlines = 0;
      quote = c;
      current += c;
      ++i;
      continue;
    }
    if (c == '-' && i + 1 < source.size() && source[i + 1] == '-') {
      // Keep comments inside a statement (the lexer skips them), drop ones
      // between statements so line tracking stays exact.
      while (i < source.size() && source[i] != '\n') {
        if (has_content) current += source[i];
        ++i;
      }
      continue;
    }
    if (c == ';') {
      flush();
      ++i;
      continue;
    }
    if (c == '\n') {
      ++line;
      ++i;
      if (has_content) {
        ++blank_newlines;
        if (blank_newlines >= 2) {
          flush();
          blank_newlines = 0;
        } else {
          current += '\n';
        }
      }
      continue;
    }
    if (c != ' ' && c != '\t' && c != '\r') {
      if (!has_content) current_start = line;
      has_content = true;
      blank_newlines = 0;
    } else if (!has_content) {
      ++i;
      continue;
    }
    blank_newlines = c == ' ' || c == '\t' || c == '\r' ? blank_newlines : 0;
    current += c;
    ++i;
  }
  flush();
  return out;
}

struct SessionConfig {
  std::optional<std::filesystem::path> graph_path;
  std::map<std::string, std::string> parameters;
  bool stats = false;
  TableFormat format = TableFormat::aligned;
};

class Session {
 public:
  explicit Session(SessionConfig config)
      : config_(std::move(config)), functions_(FunctionRegistry::standard()) {
    for (const auto& [name, value] : config_.parameters) {
      if (!valid_parameter_name(name)) {
        throw Error(ErrorCode::missing_parameter, "bad parameter name '" + name + "'");
      }
    }
    if (config_.graph_path) {
      LoadedBundle bundle = load_bundle(*config_.graph_path);
      store_ = std::move(bundle.store);
    }
  }

  GraphStore& store() { return store_; }
  const SessionConfig& config() const { return config_; }

  // Executes one statement's text (already split). Returns false on error
  // after printing it.
  bool execute_statement_text(const std::string& text, int start_line, std::ostream& out) {
    try {
      std::string substituted = substitute_parameters(text, config_.parameters);
      Statement stmt = parse_statement(substituted);
      ExecutionResult result = execute_statement(stmt, store_, functions_);
      print_result(result, out);
      return true;
    } catch (const Error& e) {
      out << format_error(e, start_line) << "\n";
      return false;
    }
  }

  // Runs a whole script; stops at the first failing statement. Exit status
  // 0 on success, 1 on statement error.
  int run_script(const std::string& source, std::ostream& out) {
    for (const auto& stmt : split_statements(source)) {
      if (!execute_statement_text(stmt.text, stmt.start_line, out)) return 1;
    }
    return 0;
  }

  // Interactive loop: statements end at ';' or at a blank line. Errors are
  // reported and the session continues.
  int repl(std::istream& in, std::ostream& out) {
    std::string buffer;
    out << "gql> " << std::flush;
    std::string line;
    while (std::getline(in, line)) {
      bool blank = line.find_first_not_of(" \t\r") == std::string::npos;
      bool terminated = false;
      if (blank && !buffer.empty()) {
        terminated = true;
      } else if (!blank) {
        buffer += line;
        buffer += '\n';
        std::string trimmed = line;
        while (!trimmed.empty() && (trimmed.back() == ' ' || trimmed.back() == '\t' || trimmed.back() == '\r')) {
          trimmed.pop_back();
        }
        if (!trimmed.empty() && trimmed.back() == ';') terminated = true;
      }
      if (terminated) {
        for (const auto& stmt : split_statements(buffer)) {
          execute_statement_text(stmt.text, stmt.start_line, out);
        }
        buffer.clear();
      }
      out << (buffer.empty() ? "gql> " : "...> ") << std::flush;
    }
    if (!buffer.empty()) {
      for (const auto& stmt : split_statements(buffer)) {
        execute_statement_text(stmt.text, stmt.start_line, out);
      }
    }
    out << "\n";
    return 0;
  }

 private:
  static std::string format_error(const Error& e, int start_line) {
    std::string msg = "error: ";
    msg += e.what();
    if (e.line() > 1 && start_line > 1) {
      msg += " [script line " + std::to_string(start_line + e.line() - 1) + "]";
    } else if (e.line() > 0 && start_line > 1) {
      msg += " [script line " + std::to_string(start_line) + "]";
    }
    return msg;
  }

  void print_result(const ExecutionResult& result, std::ostream& out) {
    switch (result.kind) {
      case ExecutionResult::Kind::binding_table: {
        print_binding_table(result.bindings, out);
        break;
      }
      case ExecutionResult::Kind::result_table:
        out << render_table(result.result.columns, result.result.rows, config_.format);
        break;
      case ExecutionResult::Kind::create_summary:
        out << "-- created: nodes=" << result.summary.nodes_created
            << " edges=" << result.summary.edges_created
            << " types=" << result.summary.types_created << "\n";
        break;
    }
    if (config_.stats && result.kind != ExecutionResult::Kind::create_summary) {
      out << "-- stats: edges examined=" << result.stats.edges_examined
          << ", states generated=" << result.stats.states_generated << "\n";
    }
  }

  // Raw binding tables render value columns before element-reference and
  // path columns, with upper-cased headers.
  void print_binding_table(const BindingTable& table, std::ostream& out) {
    std::vector<std::size_t> order;
    std::vector<std::size_t> refs;
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
      bool is_ref = false;
      if (!table.rows.empty()) {
        ValueKind k = table.rows[0][c].kind();
        is_ref = k == ValueKind::node_ref || k == ValueKind::edge_ref || k == ValueKind::path;
      }
      (is_ref ? refs : order).push_back(c);
    }
    order.insert(order.end(), refs.begin(), refs.end());
    std::vector<std::string> columns;
    columns.reserve(order.size());
    for (std::size_t c : order) columns.push_back(detail::to_upper_ascii(table.columns[c]));
    std::vector<std::vector<Value>> rows;
    rows.reserve(table.rows.size());
    for (const auto& row : table.rows) {
      std::vector<Value> reordered;
      reordered.reserve(order.size());
      for (std::size_t c : order) reordered.push_back(row[c]);
      rows.push_back(std::move(reordered));
    }
    out << render_table(columns, rows, config_.format);
  }

  SessionConfig config_;
  GraphStore store_;
  FunctionRegistry functions_;
};

}  // namespace quiver
