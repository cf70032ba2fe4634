#pragma once

// Value model shared by the store, the expression evaluator and the match
// engine: exact decimals, UTC timestamps, arrays, graph element references
// and path values.

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "quiver/error.hpp"

namespace quiver {

using ElementId = std::uint64_t;

// ---------------------------------------------------------------------------
// Decimal: exact base-10 scaled integer, coefficient * 10^-scale.
// The 128-bit coefficient keeps well over 18 significant digits exact.
// The scale is preserved as written so values print back verbatim.
// ---------------------------------------------------------------------------

class Decimal {
 public:
  using Coeff = __int128;

  static constexpr int kMaxScale = 30;
  static constexpr int kMaxDigits = 37;

  Decimal() = default;
  Decimal(Coeff coefficient, int scale) : coeff_(coefficient), scale_(scale) {
    if (scale < 0 || scale > kMaxScale) throw Error(ErrorCode::type_error, "decimal scale out of range");
  }

  static Decimal from_int(std::int64_t v) { return Decimal(static_cast<Coeff>(v), 0); }

  // Parses "123", "-12.50". Scale is the number of fraction digits written.
  static std::optional<Decimal> parse(std::string_view text) {
    bool negative = false;
    std::size_t i = 0;
    if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
      negative = text[i] == '-';
      ++i;
    }
    Coeff coeff = 0;
    int digits = 0, scale = 0;
    bool seen_point = false, seen_digit = false;
    for (; i < text.size(); ++i) {
      char c = text[i];
      if (c == '.') {
        if (seen_point) return std::nullopt;
        seen_point = true;
        continue;
      }
      if (c < '0' || c > '9') return std::nullopt;
      seen_digit = true;
      if (digits >= kMaxDigits) return std::nullopt;
      coeff = coeff * 10 + (c - '0');
      if (coeff != 0) ++digits;
      if (seen_point) {
        if (++scale > kMaxScale) return std::nullopt;
      }
    }
    if (!seen_digit) return std::nullopt;
    return Decimal(negative ? -coeff : coeff, scale);
  }

  Coeff coefficient() const { return coeff_; }
  int scale() const { return scale_; }

  bool is_zero() const { return coeff_ == 0; }

  std::string to_string() const {
    Coeff c = coeff_;
    bool negative = c < 0;
    if (negative) c = -c;
    std::string digits;
    if (c == 0) digits = "0";
    while (c > 0) {
      digits.insert(digits.begin(), static_cast<char>('0' + static_cast<int>(c % 10)));
      c /= 10;
    }
    if (scale_ > 0) {
      while (static_cast<int>(digits.size()) <= scale_) digits.insert(digits.begin(), '0');
      digits.insert(digits.end() - scale_, '.');
    }
    return negative ? "-" + digits : digits;
  }

  int compare(const Decimal& other) const {
    // Align scales without losing precision.
    Coeff a = coeff_, b = other.coeff_;
    int sa = scale_, sb = other.scale_;
    while (sa < sb) {
      a = checked_mul10(a);
      ++sa;
    }
    while (sb < sa) {
      b = checked_mul10(b);
      ++sb;
    }
    return a < b ? -1 : a > b ? 1 : 0;
  }

  Decimal operator-() const { return Decimal(-coeff_, scale_); }

  Decimal add(const Decimal& other) const {
    auto [a, b, s] = aligned(other);
    return Decimal(checked_add(a, b), s);
  }
  Decimal sub(const Decimal& other) const {
    auto [a, b, s] = aligned(other);
    return Decimal(checked_add(a, -b), s);
  }
  Decimal mul(const Decimal& other) const {
    int s = scale_ + other.scale_;
    if (s > kMaxScale) throw Error(ErrorCode::type_error, "decimal overflow in multiplication");
    Coeff r = checked_mul(coeff_, other.coeff_);
    return Decimal(r, s);
  }

  // Exact when the quotient terminates within kMaxScale fraction digits,
  // otherwise rounded half to even at kMaxScale.
  Decimal div(const Decimal& other) const {
    if (other.coeff_ == 0) throw Error(ErrorCode::type_error, "division by zero");
    Coeff num = coeff_, den = other.coeff_;
    bool negative = (num < 0) != (den < 0);
    if (num < 0) num = -num;
    if (den < 0) den = -den;
    // Result scale starts at scale difference (>= 0) and grows on demand.
    int result_scale = scale_ - other.scale_;
    while (result_scale < 0) {
      num = checked_mul10(num);
      ++result_scale;
    }
    Coeff q = num / den;
    Coeff rem = num % den;
    while (rem != 0 && result_scale < kMaxScale) {
      num = checked_mul10(rem);
      q = checked_mul10(q) + num / den;
      rem = num % den;
      ++result_scale;
    }
    if (rem != 0) {
      Coeff twice = checked_mul(rem, 2);
      if (twice > den || (twice == den && (q % 2) != 0)) ++q;
    }
    return Decimal(negative ? -q : q, result_scale);
  }

  // Drops trailing fraction zeros; used for canonical text keys.
  Decimal normalized() const {
    Coeff c = coeff_;
    int s = scale_;
    while (s > 0 && c % 10 == 0) {
      c /= 10;
      --s;
    }
    return Decimal(c, s);
  }

  double to_double() const {
    double d = static_cast<double>(coeff_);
    for (int i = 0; i < scale_; ++i) d /= 10.0;
    return d;
  }

 private:
  static Coeff checked_mul10(Coeff v) { return checked_mul(v, 10); }

  static Coeff checked_mul(Coeff a, Coeff b) {
    Coeff r;
    if (__builtin_mul_overflow(a, b, &r)) throw Error(ErrorCode::type_error, "decimal overflow");
    return r;
  }

  static Coeff checked_add(Coeff a, Coeff b) {
    Coeff r;
    if (__builtin_add_overflow(a, b, &r)) throw Error(ErrorCode::type_error, "decimal overflow");
    return r;
  }

  std::tuple<Coeff, Coeff, int> aligned(const Decimal& other) const {
    Coeff a = coeff_, b = other.coeff_;
    int sa = scale_, sb = other.scale_;
    while (sa < sb) {
      a = checked_mul10(a);
      ++sa;
    }
    while (sb < sa) {
      b = checked_mul10(b);
      ++sb;
    }
    return {a, b, sa};
  }

  Coeff coeff_ = 0;
  int scale_ = 0;
};

// ---------------------------------------------------------------------------
// Timestamp: UTC, second precision.
// ---------------------------------------------------------------------------

class Timestamp {
 public:
  Timestamp() = default;
  explicit Timestamp(std::int64_t seconds_utc) : seconds_(seconds_utc) {}

  std::int64_t seconds() const { return seconds_; }

  // Accepts "YYYY-MM-DD" and "YYYY-MM-DD HH:MM:SS".
  static std::optional<Timestamp> parse(std::string_view text) {
    auto digit = [](char c) { return c >= '0' && c <= '9'; };
    auto num = [&](std::string_view s) -> std::optional<int> {
      if (s.empty()) return std::nullopt;
      int v = 0;
      for (char c : s) {
        if (!digit(c)) return std::nullopt;
        v = v * 10 + (c - '0');
      }
      return v;
    };
    if (text.size() != 10 && text.size() != 19) return std::nullopt;
    if (text[4] != '-' || text[7] != '-') return std::nullopt;
    auto year = num(text.substr(0, 4));
    auto month = num(text.substr(5, 2));
    auto day = num(text.substr(8, 2));
    if (!year || !month || !day) return std::nullopt;
    int hh = 0, mm = 0, ss = 0;
    if (text.size() == 19) {
      if (text[10] != ' ' || text[13] != ':' || text[16] != ':') return std::nullopt;
      auto h = num(text.substr(11, 2)), m = num(text.substr(14, 2)), s = num(text.substr(17, 2));
      if (!h || !m || !s) return std::nullopt;
      hh = *h;
      mm = *m;
      ss = *s;
    }
    if (*month < 1 || *month > 12) return std::nullopt;
    if (*day < 1 || *day > days_in_month(*year, *month)) return std::nullopt;
    if (hh > 23 || mm > 59 || ss > 59) return std::nullopt;
    std::int64_t days = days_from_civil(*year, *month, *day);
    return Timestamp(days * 86400 + hh * 3600 + mm * 60 + ss);
  }

  std::string to_iso_string() const {
    auto [y, mo, d, h, mi, s] = civil();
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d %02d:%02d:%02d", y, mo, d, h, mi, s);
    return buf;
  }

  // Day-first rendering used by the aligned table format.
  std::string to_display_string() const {
    auto [y, mo, d, h, mi, s] = civil();
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%02d/%02d/%04d %02d:%02d:%02d", d, mo, y, h, mi, s);
    return buf;
  }

 private:
  struct Civil {
    int year, month, day, hour, minute, second;
  };

  Civil civil() const {
    std::int64_t z = seconds_ / 86400;
    std::int64_t rem = seconds_ % 86400;
    if (rem < 0) {
      rem += 86400;
      --z;
    }
    auto [y, m, d] = civil_from_days(z);
    return Civil{y, m, d, static_cast<int>(rem / 3600), static_cast<int>(rem % 3600 / 60),
                 static_cast<int>(rem % 60)};
  }

  static bool leap(int y) { return y % 4 == 0 && (y % 100 != 0 || y % 400 == 0); }

  static int days_in_month(int y, int m) {
    static constexpr int lengths[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    return m == 2 && leap(y) ? 29 : lengths[m - 1];
  }

  static std::int64_t days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    unsigned yoe = static_cast<unsigned>(y - era * 400);
    unsigned doy = (153u * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
  }

  static std::tuple<int, int, int> civil_from_days(std::int64_t z) {
    z += 719468;
    std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    unsigned doe = static_cast<unsigned>(z - era * 146097);
    unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
    unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    unsigned mp = (5 * doy + 2) / 153;
    unsigned d = doy - (153 * mp + 2) / 5 + 1;
    unsigned m = mp + (mp < 10 ? 3 : -9);
    y += m <= 2;
    return {static_cast<int>(y), static_cast<int>(m), static_cast<int>(d)};
  }

  std::int64_t seconds_ = 0;
};

// ---------------------------------------------------------------------------
// Value
// ---------------------------------------------------------------------------

enum class ValueKind {
  null_value,
  boolean,
  integer,
  decimal,
  text,
  timestamp,
  array,
  node_ref,
  edge_ref,
  path,
};

inline const char* value_kind_name(ValueKind k) {
  switch (k) {
    case ValueKind::null_value: return "null";
    case ValueKind::boolean: return "boolean";
    case ValueKind::integer: return "integer";
    case ValueKind::decimal: return "decimal";
    case ValueKind::text: return "text";
    case ValueKind::timestamp: return "timestamp";
    case ValueKind::array: return "array";
    case ValueKind::node_ref: return "node";
    case ValueKind::edge_ref: return "edge";
    case ValueKind::path: return "path";
  }
  return "?";
}

struct NodeRef {
  ElementId id = 0;
};
struct EdgeRef {
  ElementId id = 0;
};

class Value;
using ValueArray = std::vector<Value>;

// One element of a traversed path: a node or an edge.
struct PathElement {
  bool is_node = true;
  ElementId id = 0;
};

// Immutable snapshot of a traversed path. `alias_arrays` holds, per alias
// bound inside quantified segments, the array accumulated so far.
struct PathData {
  std::vector<PathElement> elements;
  std::map<std::string, ValueArray> alias_arrays;
};

using PathRef = std::shared_ptr<const PathData>;

class Value {
 public:
  Value() : v_(std::monostate{}) {}

  static Value null() { return Value(); }
  static Value boolean(bool b) { return Value(Variant(b)); }
  static Value integer(std::int64_t i) { return Value(Variant(i)); }
  static Value decimal(Decimal d) { return Value(Variant(std::move(d))); }
  static Value text(std::string s) { return Value(Variant(std::move(s))); }
  static Value timestamp(Timestamp t) { return Value(Variant(t)); }
  static Value array(ValueArray a) { return Value(Variant(std::move(a))); }
  static Value node(ElementId id) { return Value(Variant(NodeRef{id})); }
  static Value edge(ElementId id) { return Value(Variant(EdgeRef{id})); }
  static Value path(PathRef p) { return Value(Variant(std::move(p))); }

  ValueKind kind() const { return static_cast<ValueKind>(v_.index()); }

  bool is_null() const { return kind() == ValueKind::null_value; }
  bool is_numeric() const { return kind() == ValueKind::integer || kind() == ValueKind::decimal; }

  bool as_bool() const { return std::get<bool>(v_); }
  std::int64_t as_int() const { return std::get<std::int64_t>(v_); }
  const Decimal& as_decimal() const { return std::get<Decimal>(v_); }
  const std::string& as_text() const { return std::get<std::string>(v_); }
  Timestamp as_timestamp() const { return std::get<Timestamp>(v_); }
  const ValueArray& as_array() const { return std::get<ValueArray>(v_); }
  NodeRef as_node() const { return std::get<NodeRef>(v_); }
  EdgeRef as_edge() const { return std::get<EdgeRef>(v_); }
  const PathRef& as_path() const { return std::get<PathRef>(v_); }

  // Numeric promotion used by arithmetic and comparison.
  Decimal numeric() const {
    if (kind() == ValueKind::integer) return Decimal::from_int(as_int());
    return as_decimal();
  }

 private:
  using Variant = std::variant<std::monostate, bool, std::int64_t, Decimal, std::string, Timestamp,
                               ValueArray, NodeRef, EdgeRef, PathRef>;
  explicit Value(Variant v) : v_(std::move(v)) {}
  Variant v_;
};

enum class Ordering { less, equal, greater };

// Total order within each comparable kind; cross-kind and null compare as
// incomparable (nullopt). Integer and decimal share the numeric kind.
inline std::optional<Ordering> compare(const Value& a, const Value& b) {
  auto of_int = [](int c) { return c < 0 ? Ordering::less : c > 0 ? Ordering::greater : Ordering::equal; };
  if (a.is_null() || b.is_null()) return std::nullopt;
  if (a.is_numeric() && b.is_numeric()) return of_int(a.numeric().compare(b.numeric()));
  if (a.kind() != b.kind()) return std::nullopt;
  switch (a.kind()) {
    case ValueKind::boolean:
      return of_int(static_cast<int>(a.as_bool()) - static_cast<int>(b.as_bool()));
    case ValueKind::text:
      return of_int(a.as_text().compare(b.as_text()));
    case ValueKind::timestamp: {
      auto x = a.as_timestamp().seconds(), y = b.as_timestamp().seconds();
      return of_int(x < y ? -1 : x > y ? 1 : 0);
    }
    default:
      return std::nullopt;
  }
}

// Structural equality, including arrays, references and paths. Numeric values
// of different representations are equal when they denote the same number.
inline bool value_equal(const Value& a, const Value& b) {
  if (a.is_numeric() && b.is_numeric()) return a.numeric().compare(b.numeric()) == 0;
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case ValueKind::null_value: return true;
    case ValueKind::boolean: return a.as_bool() == b.as_bool();
    case ValueKind::text: return a.as_text() == b.as_text();
    case ValueKind::timestamp: return a.as_timestamp().seconds() == b.as_timestamp().seconds();
    case ValueKind::node_ref: return a.as_node().id == b.as_node().id;
    case ValueKind::edge_ref: return a.as_edge().id == b.as_edge().id;
    case ValueKind::array: {
      const auto& x = a.as_array();
      const auto& y = b.as_array();
      if (x.size() != y.size()) return false;
      for (std::size_t i = 0; i < x.size(); ++i) {
        if (!value_equal(x[i], y[i])) return false;
      }
      return true;
    }
    case ValueKind::path: {
      const auto& x = a.as_path();
      const auto& y = b.as_path();
      if (x->elements.size() != y->elements.size()) return false;
      for (std::size_t i = 0; i < x->elements.size(); ++i) {
        if (x->elements[i].is_node != y->elements[i].is_node) return false;
        if (x->elements[i].id != y->elements[i].id) return false;
      }
      return true;
    }
    default: return false;
  }
}

// Canonical text, used for rendering cells and for multiset comparisons in
// tests. Deterministic for any value.
inline std::string to_text(const Value& v) {
  switch (v.kind()) {
    case ValueKind::null_value: return "null";
    case ValueKind::boolean: return v.as_bool() ? "true" : "false";
    case ValueKind::integer: return std::to_string(v.as_int());
    case ValueKind::decimal: return v.as_decimal().to_string();
    case ValueKind::text: return v.as_text();
    case ValueKind::timestamp: return v.as_timestamp().to_iso_string();
    case ValueKind::node_ref: return "node(" + std::to_string(v.as_node().id) + ")";
    case ValueKind::edge_ref: return "edge(" + std::to_string(v.as_edge().id) + ")";
    case ValueKind::array: {
      std::string out = "[";
      const auto& a = v.as_array();
      for (std::size_t i = 0; i < a.size(); ++i) {
        if (i) out += ", ";
        out += to_text(a[i]);
      }
      return out + "]";
    }
    case ValueKind::path: {
      std::string out;
      for (const auto& e : v.as_path()->elements) {
        out += e.is_node ? "(" + std::to_string(e.id) + ")" : "-[" + std::to_string(e.id) + "]-";
      }
      return out.empty() ? "()" : out;
    }
  }
  return "?";
}

// Rank used when ordering heterogeneous keys: comparable kinds sort first,
// element references and containers after them, null last.
inline int order_rank(const Value& v) {
  switch (v.kind()) {
    case ValueKind::integer:
    case ValueKind::decimal: return 0;
    case ValueKind::text: return 1;
    case ValueKind::timestamp: return 2;
    case ValueKind::boolean: return 3;
    case ValueKind::node_ref:
    case ValueKind::edge_ref:
    case ValueKind::array:
    case ValueKind::path: return 4;
    case ValueKind::null_value: return 5;
  }
  return 5;
}

// Strict-weak ordering for ORDER BY and truncation keys. `descending`
// reverses comparisons inside a rank; incomparable values always sort after
// comparable ones regardless of direction.
inline bool order_less(const Value& a, const Value& b, bool descending) {
  int ra = order_rank(a), rb = order_rank(b);
  if (ra != rb) return ra < rb;
  auto c = compare(a, b);
  if (!c) return false;  // tie within an incomparable rank
  if (*c == Ordering::equal) return false;
  bool less = *c == Ordering::less;
  return descending ? !less : less;
}

}  // namespace quiver
