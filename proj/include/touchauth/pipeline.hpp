#pragma once

#include <atomic>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "touchauth/dataset.hpp"
#include "touchauth/evaluation.hpp"
#include "touchauth/kinematics.hpp"
#include "touchauth/model.hpp"
#include "touchauth/synth.hpp"
#include "touchauth/windowing.hpp"

namespace touchauth {

inline constexpr const char* kToolVersion = "0.1.0";

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open file: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write file: " + path.string());
  out << content;
}

// "<user_id>_<game>.txt" -> (user_id, game); user ids may contain '_',
// so the game token is everything after the last underscore.
inline std::pair<std::string, Game> parse_log_filename(const std::string& filename) {
  std::string stem = filename;
  if (auto dot = stem.rfind(".txt"); dot != std::string::npos) stem = stem.substr(0, dot);
  const auto us = stem.rfind('_');
  if (us == std::string::npos || us == 0)
    throw ConfigError("log filename must be <user_id>_<game>.txt: " + filename);
  const auto game = parse_game(stem.substr(us + 1));
  if (!game) throw ConfigError("unknown game in log filename: " + filename);
  return {stem.substr(0, us), *game};
}

struct RawLogInput {
  std::string user_id;
  Game game = Game::PUBG;
  std::string name;  // filename or synthetic tag, used in manifests
  std::string text;
};

struct PipelineConfig {
  std::uint64_t seed = 42;
  int window = kDefaultWindowSize;
  std::optional<std::uint64_t> shuffle_rows_seed;  // pre-windowing row randomization
  double train_fraction = 0.8;
  double threshold = 0.5;
  std::vector<ModelVariant> models{ModelVariant::Mlp, ModelVariant::Gbt, ModelVariant::Svc};
  int jobs = 1;

  // exactly one source
  std::optional<std::string> logs_dir;
  std::vector<BehaviorProfile> profiles;
  int events_per_log = 3000;
  std::vector<Game> games{Game::PUBG};

  TrainConfig train;
};

// Applies "mlp"/"gbt"/"svc" sections onto a TrainConfig.
inline void apply_train_config_json(const nlohmann::json& j, TrainConfig& c) {
  try {
    if (j.contains("mlp")) {
      const auto& m = j.at("mlp");
      c.mlp.hidden_layers = m.value("hidden_layers", c.mlp.hidden_layers);
      c.mlp.epochs = m.value("epochs", c.mlp.epochs);
      c.mlp.batch_size = m.value("batch_size", c.mlp.batch_size);
      c.mlp.learning_rate = m.value("learning_rate", c.mlp.learning_rate);
    }
    if (j.contains("gbt")) {
      const auto& g = j.at("gbt");
      c.gbt.trees = g.value("trees", c.gbt.trees);
      c.gbt.max_depth = g.value("max_depth", c.gbt.max_depth);
      c.gbt.learning_rate = g.value("learning_rate", c.gbt.learning_rate);
      c.gbt.min_samples_leaf = g.value("min_samples_leaf", c.gbt.min_samples_leaf);
    }
    if (j.contains("svc")) {
      const auto& s = j.at("svc");
      if (s.contains("kernel")) {
        const std::string k = s.at("kernel").get<std::string>();
        if (k == "rbf")
          c.svc.kernel = SvcKernel::Rbf;
        else if (k == "linear")
          c.svc.kernel = SvcKernel::Linear;
        else
          throw ConfigError("unknown SVC kernel '" + k + "'");
      }
      c.svc.gamma = s.value("gamma", c.svc.gamma);
      c.svc.C = s.value("C", c.svc.C);
      c.svc.tolerance = s.value("tolerance", c.svc.tolerance);
      c.svc.max_iterations = s.value("max_iterations", c.svc.max_iterations);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad model config: ") + e.what());
  }
}

inline PipelineConfig pipeline_config_from_json(const nlohmann::json& j,
                                                const std::filesystem::path& base_dir = ".") {
  PipelineConfig c;
  try {
    c.seed = j.value("seed", c.seed);
    c.window = j.value("window", c.window);
    if (j.contains("shuffle_rows") && !j.at("shuffle_rows").is_null())
      c.shuffle_rows_seed = j.at("shuffle_rows").get<std::uint64_t>();
    c.train_fraction = j.value("train_fraction", c.train_fraction);
    c.threshold = j.value("threshold", c.threshold);
    c.jobs = j.value("jobs", c.jobs);
    if (j.contains("models")) {
      c.models.clear();
      for (const auto& m : j.at("models")) {
        auto v = parse_variant(m.get<std::string>());
        if (!v) throw ConfigError("unknown model name '" + m.get<std::string>() + "'");
        c.models.push_back(*v);
      }
    }
    if (j.contains("logs_dir")) {
      c.logs_dir = (base_dir / j.at("logs_dir").get<std::string>()).string();
    }
    if (j.contains("synth")) {
      const auto& s = j.at("synth");
      const auto& pj = s.at("profiles");
      if (pj.is_string()) {
        nlohmann::json pf = nlohmann::json::parse(read_file(base_dir / pj.get<std::string>()));
        c.profiles = profiles_from_json(pf);
      } else {
        c.profiles = profiles_from_json(pj);
      }
      c.events_per_log = s.value("events_per_log", c.events_per_log);
      if (s.contains("games")) {
        c.games.clear();
        for (const auto& g : s.at("games")) {
          auto gv = parse_game(g.get<std::string>());
          if (!gv) throw ConfigError("unknown game '" + g.get<std::string>() + "'");
          c.games.push_back(*gv);
        }
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad pipeline config: ") + e.what());
  }
  apply_train_config_json(j, c.train);
  if (!c.logs_dir && c.profiles.empty())
    throw ConfigError("pipeline config must name either logs_dir or synth profiles");
  if (c.logs_dir && !c.profiles.empty())
    throw ConfigError("pipeline config must name exactly one of logs_dir / synth");
  if (c.models.empty()) throw ConfigError("pipeline config lists no models");
  c.train.seed = c.seed;
  return c;
}

inline std::vector<RawLogInput> collect_logs(const PipelineConfig& config) {
  std::vector<RawLogInput> logs;
  if (config.logs_dir) {
    std::vector<std::filesystem::path> paths;
    for (const auto& entry : std::filesystem::directory_iterator(*config.logs_dir))
      if (entry.is_regular_file() && entry.path().extension() == ".txt")
        paths.push_back(entry.path());
    std::sort(paths.begin(), paths.end());
    if (paths.empty()) throw DataError("no .txt logs in " + *config.logs_dir);
    for (const auto& p : paths) {
      auto [user, game] = parse_log_filename(p.filename().string());
      logs.push_back({user, game, p.filename().string(), read_file(p)});
    }
  } else {
    for (auto& s : generate_cohort(config.profiles, config.events_per_log, config.games))
      logs.push_back({s.user_id, s.game, s.filename, std::move(s.text)});
  }
  return logs;
}

// Raw log text -> gesture vectors for one user/game session.
inline std::vector<GestureVector> featurize_log(const RawLogInput& log, int window,
                                                std::optional<std::uint64_t> shuffle_seed,
                                                std::vector<LineDiagnostic>* diagnostics = nullptr) {
  auto parsed = parse_log_text(log.text);
  if (diagnostics)
    diagnostics->insert(diagnostics->end(), parsed.diagnostics.begin(), parsed.diagnostics.end());
  auto cleaned = clean_stream(parsed.events);
  std::vector<KinematicSample> combined;
  for (const auto& stream : cleaned.streams)
    combined = combine_samples(std::move(combined), compute_kinematics(stream));
  if (shuffle_seed) combined = shuffle_rows(std::move(combined), *shuffle_seed);
  auto windows = window_gestures(combined, window);
  std::vector<GestureVector> vectors;
  vectors.reserve(windows.size());
  for (auto& w : windows) {
    w.user_id = log.user_id;
    w.game = log.game;
    vectors.push_back(aggregate(w));
  }
  return vectors;
}

struct PipelineResult {
  std::vector<ReportRow> rows;
  std::string report_csv;
  nlohmann::json manifest;
};

// Per-task seed, stable across job counts and task ordering.
inline std::uint64_t task_seed(std::uint64_t base, const std::string& user, Game game) {
  return base ^ fnv1a64(user + "|" + game_name(game));
}

inline PipelineResult run_pipeline(const PipelineConfig& config) {
  const auto logs = collect_logs(config);

  nlohmann::json manifest;
  manifest["tool_version"] = kToolVersion;
  manifest["seed"] = config.seed;
  manifest["window"] = config.window;
  manifest["shuffle_rows"] =
      config.shuffle_rows_seed ? nlohmann::json(*config.shuffle_rows_seed) : nlohmann::json(nullptr);
  manifest["train_fraction"] = config.train_fraction;
  manifest["threshold"] = config.threshold;
  manifest["source"] = config.logs_dir ? "logs_dir" : "synth";
  {
    nlohmann::json inputs = nlohmann::json::object();
    for (const auto& log : logs) {
      char hex[17];
      std::snprintf(hex, sizeof hex, "%016llx",
                    static_cast<unsigned long long>(fnv1a64(log.text)));
      inputs[log.name] = hex;
    }
    manifest["input_digests"] = std::move(inputs);
  }
  {
    nlohmann::json models = nlohmann::json::object();
    for (auto v : config.models) models[variant_key(v)] = train_config_json(v, config.train);
    manifest["models"] = std::move(models);
  }

  // Featurize per (user, game) log.
  std::map<std::pair<Game, std::string>, std::vector<GestureVector>> by_log;
  std::map<Game, std::vector<GestureVector>> by_game;
  for (const auto& log : logs) {
    auto vectors = featurize_log(log, config.window, config.shuffle_rows_seed);
    auto& dst = by_game[log.game];
    dst.insert(dst.end(), vectors.begin(), vectors.end());
    by_log[{log.game, log.user_id}] = std::move(vectors);
  }
  {
    nlohmann::json counts = nlohmann::json::object();
    for (const auto& [key, vecs] : by_log)
      counts[key.second + "_" + game_name(key.first)] = vecs.size();
    manifest["gesture_counts"] = std::move(counts);
  }

  struct Task {
    std::string user;
    Game game;
    ModelVariant model;
  };
  std::vector<Task> tasks;
  for (const auto& [key, vecs] : by_log)
    for (auto model : config.models) tasks.push_back({key.second, key.first, model});

  std::vector<ReportRow> rows(tasks.size());
  std::vector<std::string> errors(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= tasks.size()) return;
      const auto& t = tasks[i];
      try {
        const std::uint64_t seed = task_seed(config.seed, t.user, t.game);
        auto pool = build_dataset(t.user, by_game.at(t.game), seed);
        auto parts = split(pool, config.train_fraction, seed + 1, t.user);
        TrainConfig tc = config.train;
        tc.seed = seed + 2;
        auto model = train_model(t.model, parts.train, tc);
        std::vector<int> pred, truth;
        pred.reserve(parts.test.rows.size());
        for (const auto& r : parts.test.rows) {
          pred.push_back(classify(model, r.vec, config.threshold));
          truth.push_back(r.label);
        }
        rows[i] = make_report_row(t.user, t.game, t.model, metrics(confusion(pred, truth)));
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  const int jobs = std::max(1, config.jobs);
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    for (int k = 0; k < jobs; ++k) threads.emplace_back(worker);
    for (auto& th : threads) th.join();
  }
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    if (!errors[i].empty())
      throw DataError("task " + tasks[i].user + "/" + game_name(tasks[i].game) + "/" +
                      variant_report_name(tasks[i].model) + " failed: " + errors[i]);
  }

  PipelineResult result;
  result.rows = std::move(rows);
  std::ostringstream csv;
  write_report_csv(csv, result.rows);
  result.report_csv = csv.str();
  result.manifest = std::move(manifest);
  return result;
}

// Writes report.csv + manifest.json; cleans up on failure so downstream
// stages never see half-written output.
inline void run_pipeline_to_dir(const PipelineConfig& config,
                                const std::filesystem::path& out_dir) {
  std::filesystem::create_directories(out_dir);
  const auto report_path = out_dir / "report.csv";
  const auto manifest_path = out_dir / "manifest.json";
  try {
    auto result = run_pipeline(config);
    write_file(report_path, result.report_csv);
    write_file(manifest_path, result.manifest.dump(2) + "\n");
  } catch (...) {
    std::error_code ec;
    std::filesystem::remove(report_path, ec);
    std::filesystem::remove(manifest_path, ec);
    throw;
  }
}

}  // namespace touchauth
