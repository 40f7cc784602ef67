#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "touchauth/common.hpp"

namespace touchauth {

enum class Game { PUBG, DIEPIO, SLITHER, MINECRAFT };

inline std::string game_name(Game g) {
  switch (g) {
    case Game::PUBG: return "Pubg";
    case Game::DIEPIO: return "Diep.io";
    case Game::SLITHER: return "Slither";
    case Game::MINECRAFT: return "Minecraft";
  }
  throw std::logic_error("bad Game value");
}

inline std::optional<Game> parse_game(std::string_view s) {
  std::string k;
  for (char c : s) {
    if (c == '.' || c == '_' || c == '-') continue;
    k += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  if (k == "pubg") return Game::PUBG;
  if (k == "diepio") return Game::DIEPIO;
  if (k == "slither") return Game::SLITHER;
  if (k == "minecraft") return Game::MINECRAFT;
  return std::nullopt;
}

// One line of the 8-field raw log.
struct TouchEvent {
  double timestamp = 0;
  double x = 0;
  double y = 0;
  std::string button_touch;  // raw token, usually DOWN/HELD/UP
  double width_major = 0;
  double orientation = 0;
  double pressure = 0;
  int finger = 0;  // 0 or 1
};

struct FingerStream {
  int finger = 0;
  std::vector<TouchEvent> events;  // strictly increasing timestamps after cleaning
};

struct UserLog {
  std::string user_id;
  Game game = Game::PUBG;
  std::vector<FingerStream> streams;  // at most one per finger id
};

enum class Column { Timestamp, X, Y, ButtonTouch, WidthMajor, Orientation, Pressure, Finger };

inline const char* column_name(Column c) {
  switch (c) {
    case Column::Timestamp: return "timestamp";
    case Column::X: return "x";
    case Column::Y: return "y";
    case Column::ButtonTouch: return "button_touch";
    case Column::WidthMajor: return "width_major";
    case Column::Orientation: return "orientation";
    case Column::Pressure: return "pressure";
    case Column::Finger: return "finger";
  }
  return "?";
}

using ColumnOrder = std::array<Column, 8>;

// Headerless default; matches the order concrete values appear in captured logs.
inline constexpr ColumnOrder kDefaultColumnOrder = {
    Column::Timestamp, Column::X,           Column::Y,        Column::ButtonTouch,
    Column::WidthMajor, Column::Orientation, Column::Pressure, Column::Finger};

enum class DiagnosticSeverity { Warning, Error };

struct LineDiagnostic {
  std::size_t line = 0;  // 1-based
  DiagnosticSeverity severity = DiagnosticSeverity::Error;
  std::string reason;
};

struct ParseResult {
  std::vector<TouchEvent> events;
  std::vector<LineDiagnostic> diagnostics;
};

namespace detail {

// Split at every single ' ' or '\t', keeping empty tokens so a missing
// field between two delimiters is detectable.
inline std::vector<std::string> split_keep_empty(std::string_view line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ' ' || c == '\t') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

inline std::vector<std::string> drop_empty(const std::vector<std::string>& toks) {
  std::vector<std::string> out;
  for (const auto& t : toks)
    if (!t.empty()) out.push_back(t);
  return out;
}

inline std::string normalize_key(std::string_view s) {
  std::string k;
  for (char c : s) {
    if (c == ' ' || c == '_' || c == '\t') continue;
    k += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return k;
}

inline std::optional<Column> column_from_key(const std::string& key) {
  if (key == "timestamp" || key == "time" || key == "t") return Column::Timestamp;
  if (key == "x") return Column::X;
  if (key == "y") return Column::Y;
  if (key == "buttontouch") return Column::ButtonTouch;
  if (key == "widthmajor") return Column::WidthMajor;
  if (key == "orientation") return Column::Orientation;
  if (key == "pressure") return Column::Pressure;
  if (key == "finger") return Column::Finger;
  return std::nullopt;
}

inline bool looks_numeric(const std::string& tok) {
  double d;
  return parse_double(tok, d);
}

// Header column names may span two whitespace-separated words
// ("Button Touch", "Width Major"); match greedily.
inline ColumnOrder parse_header(const std::vector<std::string>& toks) {
  std::vector<Column> cols;
  std::size_t i = 0;
  while (i < toks.size()) {
    if (i + 1 < toks.size()) {
      auto two = column_from_key(normalize_key(toks[i] + toks[i + 1]));
      if (two) {
        cols.push_back(*two);
        i += 2;
        continue;
      }
    }
    auto one = column_from_key(normalize_key(toks[i]));
    if (!one) throw ConfigError("unknown header column: '" + toks[i] + "'");
    cols.push_back(*one);
    ++i;
  }
  if (cols.size() != 8) throw ConfigError("header names " + std::to_string(cols.size()) + " columns, expected 8");
  ColumnOrder order{};
  std::array<bool, 8> seen{};
  for (std::size_t j = 0; j < 8; ++j) {
    auto idx = static_cast<std::size_t>(cols[j]);
    if (seen[idx]) throw ConfigError(std::string("duplicate header column: ") + column_name(cols[j]));
    seen[idx] = true;
    order[j] = cols[j];
  }
  return order;
}

}  // namespace detail

// Parses raw log text. A header row, when present, overrides field_order.
// Malformed lines become diagnostics, never silent drops.
inline ParseResult parse_log(std::istream& in, const ColumnOrder& field_order = kDefaultColumnOrder) {
  if (!in) throw DataError("unreadable input");
  ParseResult result;
  ColumnOrder order = field_order;
  std::string line;
  std::size_t line_no = 0;
  bool seen_data = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto raw = detail::split_keep_empty(line);
    auto toks = detail::drop_empty(raw);
    if (toks.empty()) continue;
    if (!seen_data && !detail::looks_numeric(toks[0])) {
      // First non-numeric row is the header.
      order = detail::parse_header(toks);
      seen_data = true;
      continue;
    }
    seen_data = true;

    // Prefer the collapsed tokens; fall back to empty-preserving split so a
    // doubled delimiter reports which field was null.
    const std::vector<std::string>* fields = nullptr;
    if (toks.size() == 8) {
      fields = &toks;
    } else if (raw.size() == 8) {
      fields = &raw;
    } else {
      result.diagnostics.push_back(
          {line_no, DiagnosticSeverity::Error,
           "field count " + std::to_string(toks.size()) + ", expected 8"});
      continue;
    }

    TouchEvent ev;
    bool ok = true;
    for (std::size_t j = 0; j < 8 && ok; ++j) {
      const std::string& tok = (*fields)[j];
      const Column col = order[j];
      if (tok.empty()) {
        result.diagnostics.push_back(
            {line_no, DiagnosticSeverity::Error, std::string("null field: ") + column_name(col)});
        ok = false;
        break;
      }
      if (col == Column::ButtonTouch) {
        ev.button_touch = tok;
        continue;
      }
      double v;
      if (!parse_double(tok, v) || !std::isfinite(v)) {
        result.diagnostics.push_back(
            {line_no, DiagnosticSeverity::Error,
             std::string("bad value for ") + column_name(col) + ": '" + tok + "'"});
        ok = false;
        break;
      }
      switch (col) {
        case Column::Timestamp: ev.timestamp = v; break;
        case Column::X: ev.x = v; break;
        case Column::Y: ev.y = v; break;
        case Column::WidthMajor: ev.width_major = v; break;
        case Column::Orientation: ev.orientation = v; break;
        case Column::Pressure: ev.pressure = v; break;
        case Column::Finger:
          if (v != 0.0 && v != 1.0) {
            result.diagnostics.push_back(
                {line_no, DiagnosticSeverity::Error, "invalid finger: '" + tok + "'"});
            ok = false;
          } else {
            ev.finger = static_cast<int>(v);
          }
          break;
        default: break;
      }
    }
    if (!ok) continue;
    if (ev.timestamp < 0) {
      result.diagnostics.push_back({line_no, DiagnosticSeverity::Error, "negative timestamp"});
      continue;
    }
    if (ev.button_touch != "DOWN" && ev.button_touch != "HELD" && ev.button_touch != "UP") {
      result.diagnostics.push_back(
          {line_no, DiagnosticSeverity::Warning,
           "unrecognized button_touch token '" + ev.button_touch + "'"});
    }
    result.events.push_back(std::move(ev));
  }
  return result;
}

inline ParseResult parse_log_text(const std::string& text,
                                  const ColumnOrder& field_order = kDefaultColumnOrder) {
  std::istringstream in(text);
  return parse_log(in, field_order);
}

struct CleanResult {
  std::vector<FingerStream> streams;  // indexed position-independently; finger ids 0/1
  std::size_t dropped = 0;            // duplicate/non-increasing timestamps removed
  std::vector<std::string> warnings;
};

// Partition by finger, sort each stream by timestamp, and collapse
// non-increasing timestamps keep-first so every stream is strictly increasing.
inline CleanResult clean_stream(const std::vector<TouchEvent>& events) {
  CleanResult result;
  for (int finger = 0; finger <= 1; ++finger) {
    FingerStream stream;
    stream.finger = finger;
    for (const auto& e : events)
      if (e.finger == finger) stream.events.push_back(e);
    if (stream.events.empty()) continue;
    std::stable_sort(stream.events.begin(), stream.events.end(),
                     [](const TouchEvent& a, const TouchEvent& b) { return a.timestamp < b.timestamp; });
    std::vector<TouchEvent> kept;
    kept.reserve(stream.events.size());
    for (auto& e : stream.events) {
      if (!kept.empty() && e.timestamp <= kept.back().timestamp) {
        ++result.dropped;
        continue;
      }
      kept.push_back(std::move(e));
    }
    stream.events = std::move(kept);
    if (stream.events.size() < 14) {
      result.warnings.push_back("finger " + std::to_string(finger) + " stream has only " +
                                std::to_string(stream.events.size()) +
                                " events; too short for a full gesture");
    }
    result.streams.push_back(std::move(stream));
  }
  return result;
}

// Deterministic Fisher-Yates permutation.
template <typename T>
std::vector<T> shuffle_rows(std::vector<T> rows, std::uint64_t seed) {
  Rng rng(seed);
  rng.shuffle(rows);
  return rows;
}

inline void write_event_line(std::ostream& out, const TouchEvent& e) {
  out << format_double(e.timestamp) << '\t' << format_double(e.x) << '\t' << format_double(e.y)
      << '\t' << e.button_touch << '\t' << format_double(e.width_major) << '\t'
      << format_double(e.orientation) << '\t' << format_double(e.pressure) << '\t' << e.finger
      << '\n';
}

// Serializes to the same 8-field text format, full precision.
inline void write_log(std::ostream& out, const std::vector<TouchEvent>& events,
                      bool header = true) {
  if (header)
    out << "Timestamp\tX\tY\tButton Touch\tWidth Major\tOrientation\tPressure\tFinger\n";
  for (const auto& e : events) write_event_line(out, e);
}

inline void write_diagnostics_csv(std::ostream& out, const std::vector<LineDiagnostic>& diags) {
  out << "line,severity,reason\n";
  for (const auto& d : diags) {
    std::string reason = d.reason;
    // CSV-quote if needed
    if (reason.find(',') != std::string::npos || reason.find('"') != std::string::npos) {
      std::string quoted = "\"";
      for (char c : reason) {
        if (c == '"') quoted += '"';
        quoted += c;
      }
      quoted += '"';
      reason = quoted;
    }
    out << d.line << ',' << (d.severity == DiagnosticSeverity::Error ? "error" : "warning") << ','
        << reason << '\n';
  }
}

}  // namespace touchauth
