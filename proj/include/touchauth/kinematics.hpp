#pragma once

#include <array>
#include <cmath>
#include <ostream>
#include <vector>

#include "touchauth/common.hpp"
#include "touchauth/ingest.hpp"

namespace touchauth {

// The 11 per-event derived features, one sample per event past warm-up.
struct KinematicSample {
  double timestamp = 0;
  int finger = 0;
  double x_speed = 0;           // px/s
  double y_speed = 0;           // px/s
  double speed = 0;             // px/s
  double x_accel = 0;           // px/s^2
  double y_accel = 0;           // px/s^2
  double accel = 0;             // px/s^2
  double jerk = 0;              // px/s^3
  double path_tangent = 0;      // radians in (-pi, pi]
  double angular_velocity = 0;  // rad/s
  double touch_major = 0;       // device units
  double touch_minor = 0;       // device units
};

inline constexpr int kFeatureCount = 11;

inline constexpr std::array<const char*, kFeatureCount> kFeatureNames = {
    "x_speed", "y_speed", "speed",        "x_accel",          "y_accel", "accel",
    "jerk",    "path_tangent", "angular_velocity", "touch_major", "touch_minor"};

inline double feature_value(const KinematicSample& s, int idx) {
  switch (idx) {
    case 0: return s.x_speed;
    case 1: return s.y_speed;
    case 2: return s.speed;
    case 3: return s.x_accel;
    case 4: return s.y_accel;
    case 5: return s.accel;
    case 6: return s.jerk;
    case 7: return s.path_tangent;
    case 8: return s.angular_velocity;
    case 9: return s.touch_major;
    case 10: return s.touch_minor;
  }
  throw std::out_of_range("feature index");
}

// Wrap an angle difference into (-pi, pi].
inline double wrap_angle(double a) {
  a = std::remainder(a, 2.0 * M_PI);  // now in [-pi, pi]
  if (a <= -M_PI) a = M_PI;
  return a;
}

// Finite-difference features over one finger's stream. The first three
// events only seed the derivative chain (speed needs 2 events, accel 3,
// jerk 4), so output starts at index 3: length n-3 for n >= 4, else empty.
inline std::vector<KinematicSample> compute_kinematics(const FingerStream& stream) {
  const auto& ev = stream.events;
  const std::size_t n = ev.size();
  for (std::size_t i = 1; i < n; ++i) {
    if (ev[i].timestamp <= ev[i - 1].timestamp)
      throw ContractViolation("compute_kinematics: timestamps not strictly increasing");
  }
  std::vector<KinematicSample> out;
  if (n < 4) return out;

  std::vector<double> xs(n, 0), ys(n, 0), sp(n, 0), xa(n, 0), ya(n, 0), ac(n, 0), jk(n, 0),
      pt(n, 0), av(n, 0);
  for (std::size_t i = 1; i < n; ++i) {
    const double dt = ev[i].timestamp - ev[i - 1].timestamp;
    xs[i] = (ev[i].x - ev[i - 1].x) / dt;
    ys[i] = (ev[i].y - ev[i - 1].y) / dt;
    sp[i] = std::sqrt(xs[i] * xs[i] + ys[i] * ys[i]);
    pt[i] = std::atan2(ev[i].y - ev[i - 1].y, ev[i].x - ev[i - 1].x);
    if (pt[i] == -M_PI) pt[i] = M_PI;
  }
  for (std::size_t i = 2; i < n; ++i) {
    const double dt = ev[i].timestamp - ev[i - 1].timestamp;
    xa[i] = (xs[i] - xs[i - 1]) / dt;
    ya[i] = (ys[i] - ys[i - 1]) / dt;
    ac[i] = (sp[i] - sp[i - 1]) / dt;
    av[i] = wrap_angle(pt[i] - pt[i - 1]) / dt;
  }
  for (std::size_t i = 3; i < n; ++i) {
    const double dt = ev[i].timestamp - ev[i - 1].timestamp;
    jk[i] = (ac[i] - ac[i - 1]) / dt;
  }

  out.reserve(n - 3);
  for (std::size_t i = 3; i < n; ++i) {
    KinematicSample s;
    s.timestamp = ev[i].timestamp;
    s.finger = stream.finger;
    s.x_speed = xs[i];
    s.y_speed = ys[i];
    s.speed = sp[i];
    s.x_accel = xa[i];
    s.y_accel = ya[i];
    s.accel = ac[i];
    s.jerk = jk[i];
    s.path_tangent = pt[i];
    s.angular_velocity = av[i];
    s.touch_major = ev[i].width_major;
    s.touch_minor = ev[i].width_major;
    out.push_back(s);
  }
  return out;
}

// Debug/oracle dump, fixed 13-column header.
inline void write_kinematics_csv(std::ostream& out, const std::vector<KinematicSample>& samples) {
  out << "timestamp,finger";
  for (const char* name : kFeatureNames) out << ',' << name;
  out << '\n';
  for (const auto& s : samples) {
    out << format_double(s.timestamp) << ',' << s.finger;
    for (int j = 0; j < kFeatureCount; ++j) out << ',' << format_double(feature_value(s, j));
    out << '\n';
  }
}

}  // namespace touchauth
