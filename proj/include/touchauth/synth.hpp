#pragma once

#include <cmath>
#include <cstdint>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "touchauth/ingest.hpp"

namespace touchauth {

// Parameterized per-user behavior for synthetic log generation.
struct BehaviorProfile {
  std::string user_id;
  double mean_interval = 0.02;      // seconds between events, per finger
  double interval_jitter = 0.25;    // fraction of mean_interval
  double speed_scale = 300.0;       // px/s
  double turn_rate = 0.2;           // heading change per event, radians
  double pressure_mean = 20.0;
  double pressure_std = 2.0;
  double width_major_mean = 18.0;
  double width_major_std = 1.0;
  double phase_offset = 0.01;       // finger 1 starts this many seconds later
  std::uint64_t seed = 0;

  void validate() const {
    if (user_id.empty()) throw ConfigError("profile user_id must be non-empty");
    if (mean_interval <= 0 || speed_scale <= 0 || pressure_mean <= 0 || width_major_mean <= 0)
      throw ConfigError("profile scales must be positive for '" + user_id + "'");
    if (interval_jitter < 0 || interval_jitter >= 1)
      throw ConfigError("interval_jitter must be in [0, 1) for '" + user_id + "'");
    if (pressure_std < 0 || width_major_std < 0 || turn_rate < 0 || phase_offset < 0)
      throw ConfigError("profile spreads must be non-negative for '" + user_id + "'");
  }
};

inline BehaviorProfile profile_from_json(const nlohmann::json& j) {
  BehaviorProfile p;
  p.user_id = j.at("user_id").get<std::string>();
  p.mean_interval = j.value("mean_interval", p.mean_interval);
  p.interval_jitter = j.value("interval_jitter", p.interval_jitter);
  p.speed_scale = j.value("speed_scale", p.speed_scale);
  p.turn_rate = j.value("turn_rate", p.turn_rate);
  p.pressure_mean = j.value("pressure_mean", p.pressure_mean);
  p.pressure_std = j.value("pressure_std", p.pressure_std);
  p.width_major_mean = j.value("width_major_mean", p.width_major_mean);
  p.width_major_std = j.value("width_major_std", p.width_major_std);
  p.phase_offset = j.value("phase_offset", p.phase_offset);
  p.seed = j.value("seed", std::uint64_t{0});
  p.validate();
  return p;
}

inline nlohmann::json profile_to_json(const BehaviorProfile& p) {
  return nlohmann::json{{"user_id", p.user_id},
                        {"mean_interval", p.mean_interval},
                        {"interval_jitter", p.interval_jitter},
                        {"speed_scale", p.speed_scale},
                        {"turn_rate", p.turn_rate},
                        {"pressure_mean", p.pressure_mean},
                        {"pressure_std", p.pressure_std},
                        {"width_major_mean", p.width_major_mean},
                        {"width_major_std", p.width_major_std},
                        {"phase_offset", p.phase_offset},
                        {"seed", p.seed}};
}

inline std::vector<BehaviorProfile> profiles_from_json(const nlohmann::json& j) {
  std::vector<BehaviorProfile> out;
  if (!j.is_array()) throw ConfigError("profile file must contain a JSON array");
  for (const auto& e : j) out.push_back(profile_from_json(e));
  return out;
}

inline constexpr int kMinSynthEvents = 14;  // enough for one gesture after warm-up

namespace detail {

// LG V30+ landscape screen box.
inline constexpr double kScreenW = 2880.0;
inline constexpr double kScreenH = 1440.0;

struct FingerWalk {
  double t, x, y, heading;
};

}  // namespace detail

// Bounded random walk with heading persistence, emitted as raw 8-field
// log text. Deterministic per (profile, n_events, stream_salt).
inline std::string generate_log(const BehaviorProfile& profile, int n_events,
                                std::uint64_t stream_salt = 0) {
  profile.validate();
  if (n_events < kMinSynthEvents)
    throw ConfigError("n_events must be >= " + std::to_string(kMinSynthEvents));

  Rng rng(profile.seed ^ fnv1a64(profile.user_id) ^ stream_salt);

  // finger 0 gets the extra event when n is odd
  const int counts[2] = {(n_events + 1) / 2, n_events / 2};
  std::vector<TouchEvent> events;
  events.reserve(static_cast<std::size_t>(n_events));
  for (int finger = 0; finger <= 1; ++finger) {
    detail::FingerWalk w;
    w.t = finger == 1 ? profile.phase_offset : 0.0;
    w.x = rng.uniform(0.25 * detail::kScreenW, 0.75 * detail::kScreenW);
    w.y = rng.uniform(0.25 * detail::kScreenH, 0.75 * detail::kScreenH);
    w.heading = rng.uniform(-M_PI, M_PI);
    for (int k = 0; k < counts[finger]; ++k) {
      double dt = profile.mean_interval *
                  (1.0 + profile.interval_jitter * rng.uniform(-1.0, 1.0));
      dt = std::max(dt, 1e-4);
      if (k > 0) {
        w.t += dt;
        w.heading += profile.turn_rate * rng.normal();
        const double step = profile.speed_scale * dt;
        w.x += step * std::cos(w.heading);
        w.y += step * std::sin(w.heading);
        // reflect off the screen edges
        if (w.x < 0 || w.x > detail::kScreenW) {
          w.x = std::clamp(w.x, 0.0, detail::kScreenW);
          w.heading = M_PI - w.heading;
        }
        if (w.y < 0 || w.y > detail::kScreenH) {
          w.y = std::clamp(w.y, 0.0, detail::kScreenH);
          w.heading = -w.heading;
        }
      }
      TouchEvent ev;
      ev.timestamp = w.t;
      ev.x = std::round(w.x * 1000.0) / 1000.0;
      ev.y = std::round(w.y * 1000.0) / 1000.0;
      ev.button_touch = k == 0 ? "DOWN" : (k + 1 == counts[finger] ? "UP" : "HELD");
      ev.width_major = std::max(1.0, std::round(rng.normal(profile.width_major_mean,
                                                           profile.width_major_std) * 100.0) / 100.0);
      ev.orientation = std::round(rng.uniform(0.0, 32.0));
      ev.pressure = std::max(1.0, std::round(rng.normal(profile.pressure_mean,
                                                        profile.pressure_std) * 100.0) / 100.0);
      ev.finger = finger;
      events.push_back(std::move(ev));
    }
  }
  std::stable_sort(events.begin(), events.end(),
                   [](const TouchEvent& a, const TouchEvent& b) { return a.timestamp < b.timestamp; });
  std::ostringstream out;
  write_log(out, events);
  return out.str();
}

struct SynthLog {
  std::string user_id;
  Game game;
  std::string filename;  // "<user_id>_<game>.txt"
  std::string text;
};

inline std::vector<SynthLog> generate_cohort(const std::vector<BehaviorProfile>& profiles,
                                             int n_events, const std::vector<Game>& games) {
  if (profiles.size() < 2) throw ConfigError("cohort needs at least 2 profiles");
  if (games.empty()) throw ConfigError("cohort needs at least one game tag");
  std::set<std::string> ids;
  for (const auto& p : profiles) {
    if (!ids.insert(p.user_id).second)
      throw ConfigError("duplicate profile user_id '" + p.user_id + "'");
  }
  std::vector<SynthLog> out;
  for (const auto& p : profiles) {
    for (Game g : games) {
      SynthLog log;
      log.user_id = p.user_id;
      log.game = g;
      log.filename = p.user_id + "_" + game_name(g) + ".txt";
      // salt per game so each log is a distinct draw from the same behavior
      log.text = generate_log(p, n_events, fnv1a64(game_name(g)));
      out.push_back(std::move(log));
    }
  }
  return out;
}

}  // namespace touchauth
