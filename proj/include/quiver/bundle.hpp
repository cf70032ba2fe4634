#pragma once

// CSV graph bundles: a directory with one `<TypeName>.nodes.csv` per node
// type (header `id,<prop>:<kind>,...`), one `<TypeName>.edges.csv` per edge
// type (header `src,dst,<prop>:<kind>,...`) and an optional `schema.txt`
// with `child < parent` supertype lines. Kinds: int, decimal, bool, text,
// timestamp. Node ids must be unique across the whole bundle so that edge
// endpoints resolve unambiguously. An unquoted empty field means "property
// absent"; a quoted empty field is the empty text value.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "quiver/error.hpp"
#include "quiver/store.hpp"
#include "quiver/value.hpp"

namespace quiver {

struct LoadedBundle {
  GraphStore store;
  // external node id -> internal id; internal ids are assigned in file order
  std::map<std::int64_t, ElementId> node_ids;
};

namespace csv {

struct Field {
  std::string text;
  bool quoted = false;
};

// RFC-4180 style rows: quoted fields may contain commas, newlines and
// doubled quotes.
inline std::vector<std::vector<Field>> parse(const std::string& content, const std::string& file) {
  std::vector<std::vector<Field>> rows;
  std::vector<Field> row;
  Field field;
  std::size_t i = 0;
  int line = 1;
  bool in_quotes = false;
  bool row_started = false;

  auto end_field = [&]() {
    row.push_back(field);
    field = Field{};
  };
  auto end_row = [&]() {
    end_field();
    rows.push_back(row);
    row.clear();
    row_started = false;
  };

  while (i < content.size()) {
    char c = content[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < content.size() && content[i + 1] == '"') {
          field.text += '"';
          i += 2;
          continue;
        }
        in_quotes = false;
        ++i;
        continue;
      }
      if (c == '\n') ++line;
      field.text += c;
      ++i;
      continue;
    }
    switch (c) {
      case '"':
        if (!field.text.empty()) {
          throw Error(ErrorCode::malformed_header, file + ": stray quote in line " + std::to_string(line));
        }
        field.quoted = true;
        in_quotes = true;
        row_started = true;
        ++i;
        break;
      case ',':
        end_field();
        row_started = true;
        ++i;
        break;
      case '\r':
        ++i;
        break;
      case '\n':
        if (row_started || !field.text.empty() || !row.empty()) end_row();
        ++line;
        ++i;
        break;
      default:
        field.text += c;
        row_started = true;
        ++i;
        break;
    }
  }
  if (in_quotes) throw Error(ErrorCode::malformed_header, file + ": unterminated quoted field");
  if (row_started || !field.text.empty() || !row.empty()) end_row();
  return rows;
}

inline std::string escape(const std::string& text, bool force_quotes = false) {
  bool needs = force_quotes || text.find_first_of(",\"\n\r") != std::string::npos;
  if (!needs) return text;
  std::string out = "\"";
  for (char c : text) {
    out += c;
    if (c == '"') out += '"';
  }
  return out + "\"";
}

}  // namespace csv

namespace detail {

enum class ColumnKind { integer, decimal, boolean, text, timestamp };

inline ColumnKind parse_kind(const std::string& kind, const std::string& file) {
  std::string k = to_lower_ascii(kind);
  if (k == "int") return ColumnKind::integer;
  if (k == "decimal") return ColumnKind::decimal;
  if (k == "bool") return ColumnKind::boolean;
  if (k == "text") return ColumnKind::text;
  if (k == "timestamp") return ColumnKind::timestamp;
  throw Error(ErrorCode::bad_kind, file + ": unknown kind '" + kind + "'");
}

inline const char* kind_suffix(ValueKind k) {
  switch (k) {
    case ValueKind::integer: return "int";
    case ValueKind::decimal: return "decimal";
    case ValueKind::boolean: return "bool";
    case ValueKind::text: return "text";
    case ValueKind::timestamp: return "timestamp";
    default: return nullptr;  // not representable in a bundle
  }
}

struct Column {
  std::string name;
  ColumnKind kind;
};

inline std::optional<std::int64_t> parse_int(const std::string& text) {
  if (text.empty()) return std::nullopt;
  std::size_t i = 0;
  bool negative = text[0] == '-';
  if (negative || text[0] == '+') i = 1;
  if (i >= text.size()) return std::nullopt;
  __int128 v = 0;
  for (; i < text.size(); ++i) {
    char c = text[i];
    if (c < '0' || c > '9') return std::nullopt;
    v = v * 10 + (c - '0');
    if (v > static_cast<__int128>(std::numeric_limits<std::int64_t>::max()) + 1) return std::nullopt;
  }
  if (negative) v = -v;
  if (v < std::numeric_limits<std::int64_t>::min() || v > std::numeric_limits<std::int64_t>::max()) {
    return std::nullopt;
  }
  return static_cast<std::int64_t>(v);
}

inline Value parse_value(const csv::Field& field, ColumnKind kind, const std::string& file, int line) {
  switch (kind) {
    case ColumnKind::integer: {
      auto v = parse_int(field.text);
      if (!v) throw Error(ErrorCode::bad_kind, file + " line " + std::to_string(line) + ": bad int '" + field.text + "'");
      return Value::integer(*v);
    }
    case ColumnKind::decimal: {
      auto d = Decimal::parse(field.text);
      if (!d) throw Error(ErrorCode::bad_kind, file + " line " + std::to_string(line) + ": bad decimal '" + field.text + "'");
      return Value::decimal(*d);
    }
    case ColumnKind::boolean: {
      std::string t = to_lower_ascii(field.text);
      if (t == "true") return Value::boolean(true);
      if (t == "false") return Value::boolean(false);
      throw Error(ErrorCode::bad_kind, file + " line " + std::to_string(line) + ": bad bool '" + field.text + "'");
    }
    case ColumnKind::text:
      return Value::text(field.text);
    case ColumnKind::timestamp: {
      auto ts = Timestamp::parse(field.text);
      if (!ts) throw Error(ErrorCode::bad_kind, file + " line " + std::to_string(line) + ": bad timestamp '" + field.text + "'");
      return Value::timestamp(*ts);
    }
  }
  throw Error(ErrorCode::internal, "bad column kind");
}

inline std::string render_value(const Value& v) {
  switch (v.kind()) {
    case ValueKind::text: return csv::escape(v.as_text(), v.as_text().empty());
    case ValueKind::timestamp: return v.as_timestamp().to_iso_string();
    default: return csv::escape(to_text(v));
  }
}

inline std::vector<Column> parse_property_columns(const std::vector<csv::Field>& header,
                                                  std::size_t first, const std::string& file) {
  std::vector<Column> columns;
  for (std::size_t i = first; i < header.size(); ++i) {
    const std::string& h = header[i].text;
    auto colon = h.rfind(':');
    if (colon == std::string::npos || colon == 0 || colon + 1 == h.size()) {
      throw Error(ErrorCode::malformed_header, file + ": header field '" + h + "' is not name:kind");
    }
    columns.push_back(Column{h.substr(0, colon), parse_kind(h.substr(colon + 1), file)});
  }
  return columns;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::io_error, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace detail

inline LoadedBundle load_bundle(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) {
    throw Error(ErrorCode::io_error, "bundle directory not found: " + dir.string());
  }
  std::vector<std::string> node_files, edge_files;
  bool have_schema = false;
  for (const auto& entry : fs::directory_iterator(dir)) {
    std::string name = entry.path().filename().string();
    if (name.size() > 10 && name.substr(name.size() - 10) == ".nodes.csv") {
      node_files.push_back(name);
    } else if (name.size() > 10 && name.substr(name.size() - 10) == ".edges.csv") {
      edge_files.push_back(name);
    } else if (name == "schema.txt") {
      have_schema = true;
    }
  }
  if (node_files.empty()) {
    throw Error(ErrorCode::io_error, "bundle has no .nodes.csv files: " + dir.string());
  }
  std::sort(node_files.begin(), node_files.end());
  std::sort(edge_files.begin(), edge_files.end());

  LoadedBundle bundle;
  GraphStore& store = bundle.store;

  for (const auto& file : node_files) {
    std::string type_name = file.substr(0, file.size() - 10);
    auto rows = csv::parse(detail::read_file(dir / file), file);
    if (rows.empty() || rows[0].empty() || rows[0][0].text != "id") {
      throw Error(ErrorCode::malformed_header, file + ": first header field must be 'id'");
    }
    auto columns = detail::parse_property_columns(rows[0], 1, file);
    TypeId type = store.define_node_type(Name{type_name, false});
    std::set<std::int64_t> ids_in_file;
    for (std::size_t r = 1; r < rows.size(); ++r) {
      int line = static_cast<int>(r + 1);
      const auto& row = rows[r];
      if (row.size() != columns.size() + 1) {
        throw Error(ErrorCode::malformed_header,
                    file + " line " + std::to_string(line) + ": wrong field count");
      }
      auto ext = detail::parse_int(row[0].text);
      if (!ext) {
        throw Error(ErrorCode::bad_kind, file + " line " + std::to_string(line) + ": bad id '" + row[0].text + "'");
      }
      if (!ids_in_file.insert(*ext).second) {
        throw Error(ErrorCode::bad_kind,
                    file + " line " + std::to_string(line) + ": duplicate id " + std::to_string(*ext));
      }
      if (bundle.node_ids.count(*ext)) {
        throw Error(ErrorCode::bad_kind, file + " line " + std::to_string(line) + ": id " +
                                             std::to_string(*ext) + " already used by another node file");
      }
      PropertyMap props;
      for (std::size_t c = 0; c < columns.size(); ++c) {
        const auto& field = row[c + 1];
        if (field.text.empty() && !field.quoted) continue;  // absent
        props[columns[c].name] = detail::parse_value(field, columns[c].kind, file, line);
      }
      bundle.node_ids[*ext] = store.insert_node(type, std::move(props));
    }
  }

  for (const auto& file : edge_files) {
    std::string type_name = file.substr(0, file.size() - 10);
    auto rows = csv::parse(detail::read_file(dir / file), file);
    if (rows.empty() || rows[0].size() < 2 || rows[0][0].text != "src" || rows[0][1].text != "dst") {
      throw Error(ErrorCode::malformed_header, file + ": header must start with 'src,dst'");
    }
    auto columns = detail::parse_property_columns(rows[0], 2, file);
    std::optional<TypeId> type;  // defined on first row, from its endpoints
    for (std::size_t r = 1; r < rows.size(); ++r) {
      int line = static_cast<int>(r + 1);
      const auto& row = rows[r];
      if (row.size() != columns.size() + 2) {
        throw Error(ErrorCode::malformed_header,
                    file + " line " + std::to_string(line) + ": wrong field count");
      }
      auto resolve = [&](const std::string& text) -> ElementId {
        auto ext = detail::parse_int(text);
        if (!ext || !bundle.node_ids.count(*ext)) {
          throw Error(ErrorCode::dangling_edge,
                      file + " line " + std::to_string(line) + ": unknown node id '" + text + "'");
        }
        return bundle.node_ids[*ext];
      };
      ElementId src = resolve(row[0].text);
      ElementId dst = resolve(row[1].text);
      if (!type) {
        const std::string& src_type = store.node_type(store.node(src).type).name;
        const std::string& dst_type = store.node_type(store.node(dst).type).name;
        type = store.define_edge_type(Name{type_name, false}, Name{src_type, true}, Name{dst_type, true});
      }
      PropertyMap props;
      for (std::size_t c = 0; c < columns.size(); ++c) {
        const auto& field = row[c + 2];
        if (field.text.empty() && !field.quoted) continue;
        props[columns[c].name] = detail::parse_value(field, columns[c].kind, file, line);
      }
      store.insert_edge(*type, src, dst, std::move(props));
    }
  }

  if (have_schema) {
    std::istringstream in(detail::read_file(dir / "schema.txt"));
    std::string line;
    while (std::getline(in, line)) {
      std::string trimmed;
      for (char c : line) {
        if (c != '\r') trimmed += c;
      }
      if (trimmed.empty()) continue;
      auto lt = trimmed.find('<');
      if (lt == std::string::npos) {
        throw Error(ErrorCode::malformed_header, "schema.txt: expected 'child < parent', got '" + trimmed + "'");
      }
      auto strip = [](std::string s) {
        while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.erase(s.begin());
        while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.pop_back();
        return s;
      };
      Name child{strip(trimmed.substr(0, lt)), false};
      Name parent{strip(trimmed.substr(lt + 1)), false};
      if (store.find_node_type(child)) {
        store.set_node_supertype(child, parent);
      } else {
        store.set_edge_supertype(child, parent);
      }
    }
  }
  return bundle;
}

// Writes the store back out as a bundle; external ids are the internal ids.
inline void export_bundle(const GraphStore& store, const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);

  auto property_columns = [](const std::map<std::string, ValueKind>& known) {
    std::vector<std::pair<std::string, const char*>> cols;
    for (const auto& [name, kind] : known) {
      if (const char* suffix = detail::kind_suffix(kind)) cols.emplace_back(name, suffix);
    }
    return cols;
  };
  auto write_props = [](std::ofstream& out, const PropertyMap& props,
                        const std::vector<std::pair<std::string, const char*>>& cols) {
    for (const auto& [name, kind] : cols) {
      out << ",";
      auto it = props.find(name);
      if (it != props.end()) out << detail::render_value(it->second);
    }
  };

  for (TypeId t = 0; t < store.node_type_count(); ++t) {
    const NodeType& type = store.node_type(t);
    auto cols = property_columns(type.known_properties);
    std::ofstream out(dir / (type.name + ".nodes.csv"), std::ios::binary);
    out << "id";
    for (const auto& [name, kind] : cols) out << "," << csv::escape(name + ":" + kind);
    out << "\n";
    for (const auto& [id, node] : store.nodes()) {
      if (node.type != t) continue;
      out << id;
      write_props(out, node.properties, cols);
      out << "\n";
    }
  }
  for (TypeId t = 0; t < store.edge_type_count(); ++t) {
    const EdgeType& type = store.edge_type(t);
    auto cols = property_columns(type.known_properties);
    std::ofstream out(dir / (type.name + ".edges.csv"), std::ios::binary);
    out << "src,dst";
    for (const auto& [name, kind] : cols) out << "," << csv::escape(name + ":" + kind);
    out << "\n";
    for (const auto& [id, edge] : store.edges()) {
      if (edge.type != t) continue;
      out << edge.source << "," << edge.dest;
      write_props(out, edge.properties, cols);
      out << "\n";
    }
  }

  std::string schema;
  for (TypeId t = 0; t < store.node_type_count(); ++t) {
    const NodeType& type = store.node_type(t);
    if (type.supertype) schema += type.name + " < " + store.node_type(*type.supertype).name + "\n";
  }
  for (TypeId t = 0; t < store.edge_type_count(); ++t) {
    const EdgeType& type = store.edge_type(t);
    if (type.supertype) schema += type.name + " < " + store.edge_type(*type.supertype).name + "\n";
  }
  if (!schema.empty()) {
    std::ofstream out(dir / "schema.txt", std::ios::binary);
    out << schema;
  }
}

}  // namespace quiver
