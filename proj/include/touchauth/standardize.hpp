#pragma once

#include <array>
#include <cmath>
#include <vector>

#include "touchauth/dataset.hpp"

namespace touchauth {

// Per-feature zero-mean unit-scale transform, fit on training rows only.
// Zero-variance columns get scale 1 so they map to 0.
struct Standardizer {
  std::vector<double> mean;
  std::vector<double> scale;

  std::vector<double> apply(const std::array<double, kGestureDim>& v) const {
    if (mean.size() != kGestureDim) throw ContractViolation("standardizer not fitted");
    std::vector<double> out(kGestureDim);
    for (std::size_t j = 0; j < kGestureDim; ++j) out[j] = (v[j] - mean[j]) / scale[j];
    return out;
  }
};

inline Standardizer fit_standardizer(const std::vector<LabeledRow>& rows) {
  if (rows.size() < 2) throw DataError("fit_standardizer needs at least 2 rows");
  Standardizer s;
  s.mean.assign(kGestureDim, 0.0);
  s.scale.assign(kGestureDim, 1.0);
  const double n = static_cast<double>(rows.size());
  for (const auto& r : rows)
    for (std::size_t j = 0; j < kGestureDim; ++j) s.mean[j] += r.vec.values[j];
  for (auto& m : s.mean) m /= n;
  for (std::size_t j = 0; j < kGestureDim; ++j) {
    double ss = 0;
    for (const auto& r : rows) {
      const double d = r.vec.values[j] - s.mean[j];
      ss += d * d;
    }
    const double sd = std::sqrt(ss / n);  // population std
    s.scale[j] = sd > 0 ? sd : 1.0;
  }
  return s;
}

}  // namespace touchauth
