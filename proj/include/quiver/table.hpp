#pragma once

// Tabular result rendering: aligned columns (timestamps day-first, null as
// '-') or tab-separated (ISO timestamps, null empty).

#include <string>
#include <vector>

#include "quiver/value.hpp"

namespace quiver {

enum class TableFormat { aligned, tsv };

namespace detail {

inline std::string cell_text(const Value& v, TableFormat format) {
  if (v.is_null()) return format == TableFormat::aligned ? "-" : "";
  if (v.kind() == ValueKind::timestamp && format == TableFormat::aligned) {
    return v.as_timestamp().to_display_string();
  }
  return to_text(v);
}

}  // namespace detail

inline std::string render_table(const std::vector<std::string>& columns,
                                const std::vector<std::vector<Value>>& rows, TableFormat format) {
  std::string out;
  if (format == TableFormat::tsv) {
    for (std::size_t c = 0; c < columns.size(); ++c) {
      if (c) out += '\t';
      out += columns[c];
    }
    out += '\n';
    for (const auto& row : rows) {
      for (std::size_t c = 0; c < row.size(); ++c) {
        if (c) out += '\t';
        out += detail::cell_text(row[c], format);
      }
      out += '\n';
    }
    return out;
  }

  std::vector<std::vector<std::string>> cells;
  cells.reserve(rows.size());
  std::vector<std::size_t> widths(columns.size());
  for (std::size_t c = 0; c < columns.size(); ++c) widths[c] = columns[c].size();
  for (const auto& row : rows) {
    std::vector<std::string> line;
    line.reserve(row.size());
    for (std::size_t c = 0; c < row.size(); ++c) {
      line.push_back(detail::cell_text(row[c], format));
      widths[c] = std::max(widths[c], line.back().size());
    }
    cells.push_back(std::move(line));
  }
  auto emit = [&](const std::vector<std::string>& line) {
    for (std::size_t c = 0; c < line.size(); ++c) {
      if (c) out += "  ";
      out += line[c];
      if (c + 1 < line.size()) out.append(widths[c] - line[c].size(), ' ');
    }
    out += '\n';
  };
  emit(columns);
  for (const auto& line : cells) emit(line);
  return out;
}

}  // namespace quiver
