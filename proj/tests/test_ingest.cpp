#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <sstream>

#include "oracles.hpp"
#include "touchauth/ingest.hpp"

using namespace touchauth;

namespace {

const std::string kSampleLog =
    "Timestamp\tX\tY\tButton Touch\tWidth Major\tOrientation\tPressure\tFinger\n"
    "0\t984\t467\tHELD\t19\t13\t20\t0\n"
    "0.00818\t986\t468\tHELD\t18\t21\t23\t0\n"
    "0.01702\t988\t469\tHELD\t18\t14\t21\t0\n"
    "0.024978\t991\t470\tHELD\t19\t15\t22\t1\n"
    "0.033448\t992\t471\tHELD\t19\t12\t22\t0\n"
    "0.0416\t994\t473\tHELD\t18\t16\t20\t1\n"
    "0.050166\t992\t475\tHELD\t19\t18\t19\t0\n"
    "0.05832\t991\t476\tHELD\t18\t20\t21\t1\n"
    "0.067227\t992\t478\tHELD\t18\t17\t20\t0\n"
    "0.083833\t995\t480\tHELD\t19\t16\t22\t0\n";

}  // namespace

TEST_CASE("parse_log reads space-delimited rows in default column order") {
  auto r = parse_log_text("0 984 467 HELD 19 13 20 0\n");
  REQUIRE(r.diagnostics.empty());
  REQUIRE(r.events.size() == 1);
  const auto& e = r.events[0];
  CHECK(e.timestamp == 0.0);
  CHECK(e.x == 984.0);
  CHECK(e.y == 467.0);
  CHECK(e.button_touch == "HELD");
  CHECK(e.width_major == 19.0);
  CHECK(e.orientation == 13.0);
  CHECK(e.pressure == 20.0);
  CHECK(e.finger == 0);

  auto r2 = parse_log_text("0.0416 994 473 HELD 18 16 20 1\n");
  REQUIRE(r2.events.size() == 1);
  CHECK(r2.events[0].timestamp == 0.0416);
  CHECK(r2.events[0].x == 994.0);
  CHECK(r2.events[0].finger == 1);
}

TEST_CASE("parse_log is header-driven when a header row exists") {
  // swapped pressure/orientation relative to the default
  const std::string text =
      "Timestamp X Y Button Touch Width Major Pressure Orientation Finger\n"
      "0.5 100 200 HELD 19 77 13 1\n";
  auto r = parse_log_text(text);
  REQUIRE(r.diagnostics.empty());
  REQUIRE(r.events.size() == 1);
  CHECK(r.events[0].pressure == 77.0);
  CHECK(r.events[0].orientation == 13.0);
}

TEST_CASE("parse_log rejects unknown header columns") {
  CHECK_THROWS_AS(parse_log_text("Timestamp X Y Button Touch Width Major Foo Pressure Finger\n"),
                  ConfigError);
}

TEST_CASE("null field produces a diagnostic, line skipped") {
  // doubled delimiter -> empty pressure field under the default order
  auto r = parse_log_text("0.05 991 476 HELD 18 21  0\n");
  CHECK(r.events.empty());
  REQUIRE(r.diagnostics.size() == 1);
  CHECK(r.diagnostics[0].line == 1);
  CHECK(r.diagnostics[0].reason == "null field: pressure");
}

TEST_CASE("malformed lines become diagnostics with line numbers") {
  const std::string text =
      "0 984 467 HELD 19 13 20 0\n"
      "1 2 3\n"
      "0.1 984 467 HELD 19 13 xx 0\n"
      "0.2 984 467 HELD 19 13 20 7\n"
      "-1 984 467 HELD 19 13 20 0\n"
      "0.3 984 467 HELD 19 13 20 1\n";
  auto r = parse_log_text(text);
  CHECK(r.events.size() == 2);
  REQUIRE(r.diagnostics.size() == 4);
  CHECK(r.diagnostics[0].line == 2);
  CHECK(r.diagnostics[0].reason == "field count 3, expected 8");
  CHECK(r.diagnostics[1].line == 3);
  CHECK(r.diagnostics[1].reason == "bad value for pressure: 'xx'");
  CHECK(r.diagnostics[2].line == 4);
  CHECK(r.diagnostics[2].reason == "invalid finger: '7'");
  CHECK(r.diagnostics[3].line == 5);
  CHECK(r.diagnostics[3].reason == "negative timestamp");
}

TEST_CASE("unrecognized button token is kept but flagged") {
  auto r = parse_log_text("0 984 467 MOVE 19 13 20 0\n");
  REQUIRE(r.events.size() == 1);
  CHECK(r.events[0].button_touch == "MOVE");
  REQUIRE(r.diagnostics.size() == 1);
  CHECK(r.diagnostics[0].severity == DiagnosticSeverity::Warning);
}

TEST_CASE("parse then re-serialize round-trips numeric values exactly") {
  auto first = parse_log_text(kSampleLog);
  REQUIRE(first.diagnostics.empty());
  std::ostringstream out;
  write_log(out, first.events);
  auto second = parse_log_text(out.str());
  REQUIRE(second.diagnostics.empty());
  REQUIRE(second.events.size() == first.events.size());
  for (std::size_t i = 0; i < first.events.size(); ++i) {
    CHECK(second.events[i].timestamp == first.events[i].timestamp);
    CHECK(second.events[i].x == first.events[i].x);
    CHECK(second.events[i].y == first.events[i].y);
    CHECK(second.events[i].width_major == first.events[i].width_major);
    CHECK(second.events[i].orientation == first.events[i].orientation);
    CHECK(second.events[i].pressure == first.events[i].pressure);
    CHECK(second.events[i].finger == first.events[i].finger);
  }
}

TEST_CASE("clean_stream partitions by finger and sorts by timestamp") {
  std::vector<TouchEvent> events(3);
  events[0].finger = 0;
  events[0].timestamp = 0;
  events[1].finger = 1;
  events[1].timestamp = 0.025;
  events[2].finger = 0;
  events[2].timestamp = 0.008;
  auto r = clean_stream(events);
  REQUIRE(r.streams.size() == 2);
  REQUIRE(r.streams[0].events.size() == 2);
  CHECK(r.streams[0].events[0].timestamp == 0.0);
  CHECK(r.streams[0].events[1].timestamp == 0.008);
  REQUIRE(r.streams[1].events.size() == 1);
  CHECK(r.streams[1].events[0].timestamp == 0.025);
}

TEST_CASE("clean_stream drops duplicate timestamps keep-first") {
  std::vector<TouchEvent> events(2);
  events[0].finger = 0;
  events[0].timestamp = 0.05;
  events[0].pressure = 1;
  events[1].finger = 0;
  events[1].timestamp = 0.05;
  events[1].pressure = 2;
  auto r = clean_stream(events);
  CHECK(r.dropped == 1);
  REQUIRE(r.streams.size() == 1);
  REQUIRE(r.streams[0].events.size() == 1);
  CHECK(r.streams[0].events[0].pressure == 1.0);  // first one kept
}

TEST_CASE("sample log splits into 7 finger-0 and 3 finger-1 events") {
  auto parsed = parse_log_text(kSampleLog);
  auto r = clean_stream(parsed.events);
  REQUIRE(r.streams.size() == 2);
  CHECK(r.streams[0].events.size() == 7);
  CHECK(r.streams[1].events.size() == 3);
}

TEST_CASE("clean_stream of empty input is a valid empty result") {
  auto r = clean_stream({});
  CHECK(r.streams.empty());
  CHECK(r.dropped == 0);
}

TEST_CASE("short streams trigger a warning") {
  std::vector<TouchEvent> events(5);
  for (std::size_t i = 0; i < events.size(); ++i) {
    events[i].finger = 0;
    events[i].timestamp = 0.01 * static_cast<double>(i);
  }
  auto r = clean_stream(events);
  REQUIRE(r.warnings.size() == 1);
}

TEST_CASE("clean_stream conserves events: kept + dropped == in") {
  Rng rng(99);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<TouchEvent> events;
    const std::size_t n = 1 + rng.below(200);
    for (std::size_t i = 0; i < n; ++i) {
      TouchEvent e;
      e.finger = static_cast<int>(rng.below(2));
      // coarse grid to force duplicates
      e.timestamp = 0.01 * static_cast<double>(rng.below(50));
      events.push_back(e);
    }
    auto r = clean_stream(events);
    std::size_t kept = 0;
    for (const auto& s : r.streams) {
      kept += s.events.size();
      for (std::size_t i = 1; i < s.events.size(); ++i)
        REQUIRE(s.events[i].timestamp > s.events[i - 1].timestamp);
    }
    REQUIRE(kept + r.dropped == n);
  }
}

TEST_CASE("shuffle_rows is deterministic and permutes") {
  std::vector<int> rows{1, 2, 3, 4, 5, 6, 7, 8};
  auto a = shuffle_rows(rows, 7);
  auto b = shuffle_rows(rows, 7);
  CHECK(a == b);
  auto sorted = a;
  std::sort(sorted.begin(), sorted.end());
  CHECK(sorted == rows);

  CHECK(shuffle_rows(std::vector<int>{42}, 123) == std::vector<int>{42});

  std::vector<int> big(1000);
  std::iota(big.begin(), big.end(), 1);
  CHECK(shuffle_rows(big, 1) != shuffle_rows(big, 2));
}

TEST_CASE("shuffle_rows permutation preserves multiset") {
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<int> rows;
    const std::size_t n = rng.below(100);
    for (std::size_t i = 0; i < n; ++i) rows.push_back(static_cast<int>(rng.below(10)));
    auto shuffled = shuffle_rows(rows, rng.next_u64());
    std::map<int, int> before, after;
    for (int v : rows) ++before[v];
    for (int v : shuffled) ++after[v];
    REQUIRE(before == after);
  }
}

TEST_CASE("diagnostics CSV has line and reason columns") {
  std::vector<LineDiagnostic> diags{{3, DiagnosticSeverity::Error, "null field: pressure"}};
  std::ostringstream out;
  write_diagnostics_csv(out, diags);
  CHECK(out.str() == "line,severity,reason\n3,error,null field: pressure\n");
}
