// Independent reference implementations used only by tests. Each oracle is
// written from the definitions directly, with no code shared with the
// library paths it checks.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "touchauth/common.hpp"
#include "touchauth/ingest.hpp"

namespace oracle {

// ---- kinematics: brute-force finite differences ----
// Each quantity is recomputed from raw positions/timestamps at every index,
// never reusing intermediate arrays.

inline double o_x_speed(const std::vector<touchauth::TouchEvent>& e, std::size_t i) {
  return (e[i].x - e[i - 1].x) / (e[i].timestamp - e[i - 1].timestamp);
}
inline double o_y_speed(const std::vector<touchauth::TouchEvent>& e, std::size_t i) {
  return (e[i].y - e[i - 1].y) / (e[i].timestamp - e[i - 1].timestamp);
}
inline double o_speed(const std::vector<touchauth::TouchEvent>& e, std::size_t i) {
  return std::hypot(o_x_speed(e, i), o_y_speed(e, i));
}
inline double o_x_accel(const std::vector<touchauth::TouchEvent>& e, std::size_t i) {
  return (o_x_speed(e, i) - o_x_speed(e, i - 1)) / (e[i].timestamp - e[i - 1].timestamp);
}
inline double o_y_accel(const std::vector<touchauth::TouchEvent>& e, std::size_t i) {
  return (o_y_speed(e, i) - o_y_speed(e, i - 1)) / (e[i].timestamp - e[i - 1].timestamp);
}
inline double o_accel(const std::vector<touchauth::TouchEvent>& e, std::size_t i) {
  return (o_speed(e, i) - o_speed(e, i - 1)) / (e[i].timestamp - e[i - 1].timestamp);
}
inline double o_jerk(const std::vector<touchauth::TouchEvent>& e, std::size_t i) {
  return (o_accel(e, i) - o_accel(e, i - 1)) / (e[i].timestamp - e[i - 1].timestamp);
}
inline double o_path_tangent(const std::vector<touchauth::TouchEvent>& e, std::size_t i) {
  double a = std::atan2(e[i].y - e[i - 1].y, e[i].x - e[i - 1].x);
  if (a == -M_PI) a = M_PI;
  return a;
}
// Wrap by explicitly minimizing |d + 2*pi*k| over integer shifts.
inline double o_wrap(double d) {
  double best = d;
  for (int k = -3; k <= 3; ++k) {
    const double cand = d + 2.0 * M_PI * k;
    if (std::abs(cand) < std::abs(best)) best = cand;
  }
  // boundary convention: -pi maps to +pi
  if (best == -M_PI) best = M_PI;
  return best;
}
inline double o_angular_velocity(const std::vector<touchauth::TouchEvent>& e, std::size_t i) {
  return o_wrap(o_path_tangent(e, i) - o_path_tangent(e, i - 1)) /
         (e[i].timestamp - e[i - 1].timestamp);
}

// ---- aggregation: two-pass reference over a plain value vector ----
struct AggStats {
  double avg, min, max, stddev;
};
inline AggStats o_aggregate(const std::vector<double>& v) {
  AggStats s{};
  double sum = 0;
  for (double x : v) sum += x;
  s.avg = sum / static_cast<double>(v.size());
  s.min = *std::min_element(v.begin(), v.end());
  s.max = *std::max_element(v.begin(), v.end());
  double ss = 0;
  for (double x : v) ss += (x - s.avg) * (x - s.avg);
  s.stddev = std::sqrt(ss / static_cast<double>(v.size()));
  return s;
}

// ---- metrics: exact rational arithmetic ----
struct Frac {
  long long num = 0;
  long long den = 1;  // den == 0 marks a degenerate (zero-denominator) ratio
  bool degenerate() const { return den == 0; }
  double value() const { return degenerate() ? 0.0 : static_cast<double>(num) / static_cast<double>(den); }
};
inline Frac frac(long long n, long long d) { return Frac{n, d}; }

struct RationalMetrics {
  Frac accuracy, fpr, fnr, f1;
  bool degenerate = false;
};

inline RationalMetrics o_metrics(long long tp, long long fp, long long tn, long long fn) {
  RationalMetrics m;
  m.accuracy = frac(tp + tn, tp + fp + tn + fn);
  m.fpr = fp + tn == 0 ? frac(0, 0) : frac(fp, fp + tn);
  m.fnr = fn + tp == 0 ? frac(0, 0) : frac(fn, fn + tp);
  // f1 = 2*p*r/(p+r) = 2*tp / (2*tp + fp + fn), defined only when both
  // precision and recall have nonzero denominators and p + r > 0
  if (tp + fp == 0 || tp + fn == 0) {
    m.f1 = frac(0, 0);
  } else if (tp == 0) {
    m.f1 = frac(0, 0);  // p + r == 0
  } else {
    m.f1 = frac(2 * tp, 2 * tp + fp + fn);
  }
  m.degenerate = m.fpr.degenerate() || m.fnr.degenerate() || m.f1.degenerate();
  return m;
}

// ---- gradient: central finite differences over any scalar function ----
template <typename LossFn>
std::vector<double> o_numeric_gradient(LossFn loss, std::vector<double> params, double h = 1e-5) {
  std::vector<double> grad(params.size());
  for (std::size_t k = 0; k < params.size(); ++k) {
    const double saved = params[k];
    params[k] = saved + h;
    const double up = loss(params);
    params[k] = saved - h;
    const double down = loss(params);
    params[k] = saved;
    grad[k] = (up - down) / (2.0 * h);
  }
  return grad;
}

// ---- GBT: exhaustive decision stump search ----
// Recomputes the left/right gradient sums from scratch for every candidate
// (feature, threshold), using the same second-order loss-reduction measure.
struct StumpSplit {
  int feature = -1;
  double threshold = 0;
  double gain = 0;
};

inline StumpSplit o_best_stump(const std::vector<std::vector<double>>& X,
                               const std::vector<double>& grad, const std::vector<double>& hess,
                               int min_samples_leaf) {
  StumpSplit best;
  const std::size_t n = X.size();
  const int d = static_cast<int>(X[0].size());
  for (int f = 0; f < d; ++f) {
    std::vector<double> values;
    for (const auto& row : X) values.push_back(row[static_cast<std::size_t>(f)]);
    std::vector<double> uniq = values;
    std::sort(uniq.begin(), uniq.end());
    uniq.erase(std::unique(uniq.begin(), uniq.end()), uniq.end());
    for (std::size_t u = 0; u + 1 < uniq.size(); ++u) {
      const double thr = 0.5 * (uniq[u] + uniq[u + 1]);
      double gl = 0, hl = 0, gr = 0, hr = 0;
      std::size_t nl = 0;
      for (std::size_t i = 0; i < n; ++i) {
        if (values[i] < thr) {
          gl += grad[i];
          hl += hess[i];
          ++nl;
        } else {
          gr += grad[i];
          hr += hess[i];
        }
      }
      if (nl < static_cast<std::size_t>(min_samples_leaf) ||
          n - nl < static_cast<std::size_t>(min_samples_leaf))
        continue;
      if (hl < 1e-12 || hr < 1e-12) continue;
      const double gain =
          gl * gl / hl + gr * gr / hr - (gl + gr) * (gl + gr) / (hl + hr);
      if (gain > best.gain) {
        best.feature = f;
        best.threshold = thr;
        best.gain = gain;
      }
    }
  }
  return best;
}

// ---- shared test-data helpers ----

// Random single-finger stream with strictly increasing timestamps.
inline touchauth::FingerStream random_stream(touchauth::Rng& rng, std::size_t length) {
  touchauth::FingerStream s;
  s.finger = static_cast<int>(rng.below(2));
  double t = rng.uniform(0.0, 1.0);
  for (std::size_t i = 0; i < length; ++i) {
    touchauth::TouchEvent e;
    t += rng.uniform(0.001, 0.05);
    e.timestamp = t;
    e.x = rng.uniform(0.0, 2880.0);
    e.y = rng.uniform(0.0, 1440.0);
    e.button_touch = "HELD";
    e.width_major = rng.uniform(10.0, 25.0);
    e.orientation = rng.uniform(0.0, 32.0);
    e.pressure = rng.uniform(15.0, 30.0);
    e.finger = s.finger;
    s.events.push_back(e);
  }
  return s;
}

inline bool rel_close(double a, double b, double tol) {
  const double scale = std::max({std::abs(a), std::abs(b), 1.0});
  return std::abs(a - b) <= tol * scale;
}

}  // namespace oracle
