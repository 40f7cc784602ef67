#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "touchauth/kinematics.hpp"

namespace touchauth {

inline constexpr int kDefaultWindowSize = 10;
inline constexpr int kGestureDim = 4 * kFeatureCount;  // 44

inline constexpr std::array<const char*, 4> kStatNames = {"avg", "min", "max", "std"};

struct GestureWindow {
  std::vector<KinematicSample> samples;  // exactly the window size
  std::string user_id;
  Game game = Game::PUBG;
};

// 44 aggregate features: [avg, min, max, std] per feature, features in
// kFeatureNames order.
struct GestureVector {
  std::array<double, kGestureDim> values{};
  std::string user_id;
  Game game = Game::PUBG;
};

inline std::vector<std::string> gesture_feature_names() {
  std::vector<std::string> names;
  names.reserve(kGestureDim);
  for (int f = 0; f < kFeatureCount; ++f)
    for (const char* stat : kStatNames) names.push_back(std::string(kFeatureNames[f]) + "_" + stat);
  return names;
}

// Merge both fingers' samples into one sequence ordered by timestamp
// (finger 0 first on ties).
inline std::vector<KinematicSample> combine_samples(std::vector<KinematicSample> a,
                                                    std::vector<KinematicSample> b) {
  std::vector<KinematicSample> out;
  out.reserve(a.size() + b.size());
  std::merge(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out),
             [](const KinematicSample& l, const KinematicSample& r) {
               return l.timestamp != r.timestamp ? l.timestamp < r.timestamp : l.finger < r.finger;
             });
  return out;
}

// Non-overlapping consecutive blocks; the trailing partial block is discarded.
inline std::vector<GestureWindow> window_gestures(const std::vector<KinematicSample>& samples,
                                                  int window = kDefaultWindowSize) {
  if (window < 2) throw ConfigError("window size must be >= 2");
  std::vector<GestureWindow> out;
  const std::size_t count = samples.size() / static_cast<std::size_t>(window);
  out.reserve(count);
  for (std::size_t w = 0; w < count; ++w) {
    GestureWindow gw;
    gw.samples.assign(samples.begin() + static_cast<std::ptrdiff_t>(w * window),
                      samples.begin() + static_cast<std::ptrdiff_t>((w + 1) * window));
    out.push_back(std::move(gw));
  }
  return out;
}

// avg/min/max/population-std per feature over the window.
inline GestureVector aggregate(const GestureWindow& window) {
  if (window.samples.empty()) throw ContractViolation("aggregate: empty window");
  GestureVector gv;
  gv.user_id = window.user_id;
  gv.game = window.game;
  const double n = static_cast<double>(window.samples.size());
  for (int f = 0; f < kFeatureCount; ++f) {
    double sum = 0, mn = feature_value(window.samples[0], f), mx = mn;
    for (const auto& s : window.samples) {
      const double v = feature_value(s, f);
      if (!std::isfinite(v)) throw ContractViolation("aggregate: non-finite sample value");
      sum += v;
      mn = std::min(mn, v);
      mx = std::max(mx, v);
    }
    const double mean = sum / n;
    double ss = 0;
    for (const auto& s : window.samples) {
      const double d = feature_value(s, f) - mean;
      ss += d * d;
    }
    gv.values[4 * f + 0] = mean;
    gv.values[4 * f + 1] = mn;
    gv.values[4 * f + 2] = mx;
    gv.values[4 * f + 3] = std::sqrt(ss / n);
  }
  return gv;
}

inline void write_gestures_csv(std::ostream& out, const std::vector<GestureVector>& rows) {
  out << "user_id,game";
  for (const auto& name : gesture_feature_names()) out << ',' << name;
  out << '\n';
  for (const auto& gv : rows) {
    out << gv.user_id << ',' << game_name(gv.game);
    for (double v : gv.values) out << ',' << format_double(v);
    out << '\n';
  }
}

inline std::vector<GestureVector> read_gestures_csv(std::istream& in) {
  std::vector<GestureVector> rows;
  std::string line;
  if (!std::getline(in, line)) throw DataError("empty gesture CSV");
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    GestureVector gv;
    if (!std::getline(ss, cell, ',')) throw DataError("gesture CSV: bad row");
    gv.user_id = cell;
    if (!std::getline(ss, cell, ',')) throw DataError("gesture CSV: bad row");
    auto g = parse_game(cell);
    if (!g) throw DataError("gesture CSV line " + std::to_string(line_no) + ": unknown game '" + cell + "'");
    gv.game = *g;
    for (int j = 0; j < kGestureDim; ++j) {
      if (!std::getline(ss, cell, ','))
        throw DataError("gesture CSV line " + std::to_string(line_no) + ": expected 44 feature columns");
      if (!parse_double(trim(cell), gv.values[static_cast<std::size_t>(j)]))
        throw DataError("gesture CSV line " + std::to_string(line_no) + ": bad number '" + cell + "'");
    }
    rows.push_back(std::move(gv));
  }
  return rows;
}

}  // namespace touchauth
