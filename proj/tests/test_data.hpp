// Shared synthetic classifier fixtures.
#pragma once

#include "touchauth/dataset.hpp"

namespace testdata {

// Two Gaussian blobs at +-center in every dimension; linearly separable
// for center well above the unit noise.
inline touchauth::LabeledDataset blob_dataset(std::size_t rows_per_class, double center,
                                              std::uint64_t seed) {
  touchauth::Rng rng(seed);
  touchauth::LabeledDataset ds;
  ds.split = "train";
  ds.seed = seed;
  for (int label = 0; label <= 1; ++label) {
    for (std::size_t i = 0; i < rows_per_class; ++i) {
      touchauth::LabeledRow r;
      r.label = label;
      r.vec.user_id = label == 0 ? "auth" : "imp";
      const double mu = label == 0 ? -center : center;
      for (int j = 0; j < touchauth::kGestureDim; ++j)
        r.vec.values[static_cast<std::size_t>(j)] = rng.normal(mu, 1.0);
      ds.rows.push_back(std::move(r));
    }
  }
  rng.shuffle(ds.rows);
  return ds;
}

}  // namespace testdata
