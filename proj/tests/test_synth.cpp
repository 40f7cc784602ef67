#include <catch2/catch_amalgamated.hpp>

#include <map>

#include "touchauth/pipeline.hpp"
#include "touchauth/synth.hpp"

using namespace touchauth;

namespace {

BehaviorProfile profile(const std::string& id, std::uint64_t seed) {
  BehaviorProfile p;
  p.user_id = id;
  p.seed = seed;
  return p;
}

}  // namespace

TEST_CASE("generated logs are byte-identical per (profile, count, salt)") {
  auto p = profile("det", 91);
  CHECK(generate_log(p, 100) == generate_log(p, 100));
  CHECK(generate_log(p, 100, 5) == generate_log(p, 100, 5));
  CHECK(generate_log(p, 100) != generate_log(p, 100, 5));
  auto q = p;
  q.seed = 92;
  CHECK(generate_log(p, 100) != generate_log(q, 100));
}

TEST_CASE("generated logs parse with zero diagnostics and clean losslessly") {
  auto text = generate_log(profile("clean", 3), 500);
  auto parsed = parse_log_text(text);
  CHECK(parsed.diagnostics.empty());
  REQUIRE(parsed.events.size() == 500);
  auto cleaned = clean_stream(parsed.events);
  CHECK(cleaned.dropped == 0);
  REQUIRE(cleaned.streams.size() == 2);
  // finger 0 takes the extra event on odd counts
  auto odd = clean_stream(parse_log_text(generate_log(profile("odd", 3), 501)).events);
  std::map<int, std::size_t> counts;
  for (const auto& s : odd.streams) counts[s.finger] = s.events.size();
  CHECK(counts[0] == 251);
  CHECK(counts[1] == 250);
}

TEST_CASE("per-finger timestamps are strictly increasing") {
  auto parsed = parse_log_text(generate_log(profile("mono", 17), 400));
  auto cleaned = clean_stream(parsed.events);
  for (const auto& s : cleaned.streams)
    for (std::size_t i = 1; i < s.events.size(); ++i)
      REQUIRE(s.events[i].timestamp > s.events[i - 1].timestamp);
}

TEST_CASE("zero turn rate keeps each finger on a straight line") {
  auto p = profile("line", 8);
  p.turn_rate = 0;
  p.speed_scale = 50;  // small steps so the walk never hits a screen edge
  auto cleaned = clean_stream(parse_log_text(generate_log(p, 200)).events);
  for (const auto& s : cleaned.streams) {
    auto samples = compute_kinematics(s);
    REQUIRE(samples.size() > 1);
    // coordinates are rounded to 3 decimals, which perturbs the tangent slightly
    for (const auto& k : samples)
      REQUIRE_THAT(k.path_tangent, Catch::Matchers::WithinAbs(samples[0].path_tangent, 5e-3));
  }
}

TEST_CASE("speed_scale separates mean observed speeds") {
  auto slow = profile("slow", 5);
  slow.speed_scale = 100;
  auto fast = profile("fast", 5);
  fast.speed_scale = 800;
  auto mean_speed = [](const BehaviorProfile& p) {
    auto cleaned = clean_stream(parse_log_text(generate_log(p, 1000)).events);
    double sum = 0;
    std::size_t n = 0;
    for (const auto& s : cleaned.streams)
      for (const auto& k : compute_kinematics(s)) {
        sum += k.speed;
        ++n;
      }
    return sum / static_cast<double>(n);
  };
  CHECK(mean_speed(fast) > 3.0 * mean_speed(slow));
}

TEST_CASE("event intervals track mean_interval") {
  auto p = profile("pace", 12);
  p.mean_interval = 0.05;
  auto cleaned = clean_stream(parse_log_text(generate_log(p, 2000)).events);
  double sum = 0;
  std::size_t n = 0;
  for (const auto& s : cleaned.streams)
    for (std::size_t i = 1; i < s.events.size(); ++i) {
      sum += s.events[i].timestamp - s.events[i - 1].timestamp;
      ++n;
    }
  REQUIRE(n >= 1000);
  CHECK_THAT(sum / static_cast<double>(n), Catch::Matchers::WithinRel(0.05, 0.05));
}

TEST_CASE("button tokens bracket each finger stream") {
  auto cleaned = clean_stream(parse_log_text(generate_log(profile("btn", 2), 100)).events);
  for (const auto& s : cleaned.streams) {
    REQUIRE(s.events.front().button_touch == "DOWN");
    REQUIRE(s.events.back().button_touch == "UP");
    for (std::size_t i = 1; i + 1 < s.events.size(); ++i)
      REQUIRE(s.events[i].button_touch == "HELD");
  }
}

TEST_CASE("coordinates stay inside the screen box") {
  auto parsed = parse_log_text(generate_log(profile("box", 77), 3000));
  for (const auto& e : parsed.events) {
    REQUIRE(e.x >= 0.0);
    REQUIRE(e.x <= 2880.0);
    REQUIRE(e.y >= 0.0);
    REQUIRE(e.y <= 1440.0);
    REQUIRE(e.pressure >= 1.0);
    REQUIRE(e.width_major >= 1.0);
  }
}

TEST_CASE("generate_log rejects invalid requests") {
  CHECK_THROWS_AS(generate_log(profile("tiny", 1), 13), ConfigError);
  auto bad = profile("", 1);
  CHECK_THROWS_AS(generate_log(bad, 100), ConfigError);
  auto neg = profile("neg", 1);
  neg.mean_interval = -1;
  CHECK_THROWS_AS(generate_log(neg, 100), ConfigError);
  auto jit = profile("jit", 1);
  jit.interval_jitter = 1.0;
  CHECK_THROWS_AS(generate_log(jit, 100), ConfigError);
}

TEST_CASE("cohort generation fans out users x games") {
  std::vector<BehaviorProfile> profiles{profile("a", 1), profile("b", 2), profile("c", 3)};
  auto logs = generate_cohort(profiles, 50, {Game::PUBG, Game::SLITHER});
  REQUIRE(logs.size() == 6);
  CHECK(logs[0].filename == "a_Pubg.txt");
  CHECK(logs[1].filename == "a_Slither.txt");
  // same profile, different game: distinct draws
  CHECK(logs[0].text != logs[1].text);
  for (const auto& l : logs) {
    auto [user, game] = parse_log_filename(l.filename);
    CHECK(user == l.user_id);
    CHECK(game == l.game);
  }
}

TEST_CASE("cohort rejects duplicates and undersized rosters") {
  CHECK_THROWS_AS(generate_cohort({profile("a", 1)}, 50, {Game::PUBG}), ConfigError);
  CHECK_THROWS_AS(generate_cohort({profile("a", 1), profile("a", 2)}, 50, {Game::PUBG}),
                  ConfigError);
  CHECK_THROWS_AS(generate_cohort({profile("a", 1), profile("b", 2)}, 50, {}), ConfigError);
}

TEST_CASE("profile JSON round trip") {
  auto p = profile("json", 9);
  p.speed_scale = 555;
  p.turn_rate = 0.4;
  auto q = profile_from_json(profile_to_json(p));
  CHECK(q.user_id == p.user_id);
  CHECK(q.speed_scale == p.speed_scale);
  CHECK(q.turn_rate == p.turn_rate);
  CHECK(q.seed == p.seed);
  CHECK_THROWS_AS(profiles_from_json(nlohmann::json::object()), ConfigError);
}
