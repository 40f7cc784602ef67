#pragma once

#include <cmath>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "touchauth/windowing.hpp"

namespace touchauth {

// 0 = authentic (the target user), 1 = imposter.
struct LabeledRow {
  GestureVector vec;
  int label = 0;
};

struct LabeledDataset {
  std::vector<LabeledRow> rows;
  std::string target_user;
  std::string split;  // "train" or "test"
  std::uint64_t seed = 0;
};

inline constexpr std::size_t kMinEnrollmentVectors = 10;

// Balanced pool: all target vectors labeled 0, imposters sampled without
// replacement from the pooled other users. If the imposter pool is smaller,
// the authentic side is downsampled instead.
inline std::vector<LabeledRow> build_dataset(const std::string& target,
                                             const std::vector<GestureVector>& vectors,
                                             std::uint64_t seed) {
  std::vector<GestureVector> authentic, imposter;
  for (const auto& v : vectors) {
    if (v.user_id == target)
      authentic.push_back(v);
    else
      imposter.push_back(v);
  }
  if (authentic.empty()) throw DataError("target user '" + target + "' absent from vector set");
  if (authentic.size() < kMinEnrollmentVectors)
    throw DataError("insufficient enrollment data for '" + target + "': " +
                    std::to_string(authentic.size()) + " vectors");
  if (imposter.empty()) throw DataError("no imposter users present");

  Rng rng(seed);
  if (imposter.size() >= authentic.size()) {
    rng.shuffle(imposter);
    imposter.resize(authentic.size());
  } else {
    rng.shuffle(authentic);
    authentic.resize(imposter.size());
  }
  std::vector<LabeledRow> pool;
  pool.reserve(authentic.size() + imposter.size());
  for (auto& v : authentic) pool.push_back({std::move(v), 0});
  for (auto& v : imposter) pool.push_back({std::move(v), 1});
  return pool;
}

struct SplitResult {
  LabeledDataset train;
  LabeledDataset test;
};

// Stratified split: each class shuffled and cut at round(fraction * n),
// then both partitions reshuffled.
inline SplitResult split(const std::vector<LabeledRow>& pool, double train_fraction,
                         std::uint64_t seed, const std::string& target_user = "") {
  if (!(train_fraction > 0.0 && train_fraction < 1.0))
    throw ConfigError("train_fraction must be in (0, 1)");
  if (pool.size() < 5) throw DataError("pool too small to split: " + std::to_string(pool.size()));

  Rng rng(seed);
  SplitResult result;
  result.train = {{}, target_user, "train", seed};
  result.test = {{}, target_user, "test", seed};
  for (int label = 0; label <= 1; ++label) {
    std::vector<LabeledRow> cls;
    for (const auto& r : pool)
      if (r.label == label) cls.push_back(r);
    rng.shuffle(cls);
    const auto cut = static_cast<std::size_t>(
        std::llround(train_fraction * static_cast<double>(cls.size())));
    if (cut == 0 || cut == cls.size())
      throw DataError("class " + std::to_string(label) +
                      " too small for a non-empty partition on each side");
    for (std::size_t i = 0; i < cls.size(); ++i)
      (i < cut ? result.train.rows : result.test.rows).push_back(std::move(cls[i]));
  }
  rng.shuffle(result.train.rows);
  rng.shuffle(result.test.rows);
  return result;
}

inline void write_labeled_csv(std::ostream& out, const std::vector<LabeledRow>& rows) {
  out << "user_id,game";
  for (const auto& name : gesture_feature_names()) out << ',' << name;
  out << ",label\n";
  for (const auto& r : rows) {
    out << r.vec.user_id << ',' << game_name(r.vec.game);
    for (double v : r.vec.values) out << ',' << format_double(v);
    out << ',' << r.label << '\n';
  }
}

inline std::vector<LabeledRow> read_labeled_csv(std::istream& in) {
  std::vector<LabeledRow> rows;
  std::string line;
  if (!std::getline(in, line)) throw DataError("empty labeled CSV");
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    LabeledRow r;
    if (!std::getline(ss, cell, ',')) throw DataError("labeled CSV: bad row");
    r.vec.user_id = cell;
    if (!std::getline(ss, cell, ',')) throw DataError("labeled CSV: bad row");
    auto g = parse_game(cell);
    if (!g) throw DataError("labeled CSV line " + std::to_string(line_no) + ": unknown game");
    r.vec.game = *g;
    for (int j = 0; j < kGestureDim; ++j) {
      if (!std::getline(ss, cell, ','))
        throw DataError("labeled CSV line " + std::to_string(line_no) + ": missing features");
      if (!parse_double(trim(cell), r.vec.values[static_cast<std::size_t>(j)]))
        throw DataError("labeled CSV line " + std::to_string(line_no) + ": bad number");
    }
    if (!std::getline(ss, cell, ','))
      throw DataError("labeled CSV line " + std::to_string(line_no) + ": missing label");
    const std::string lab = trim(cell);
    if (lab != "0" && lab != "1")
      throw DataError("labeled CSV line " + std::to_string(line_no) + ": label must be 0 or 1");
    r.label = lab == "1" ? 1 : 0;
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace touchauth
