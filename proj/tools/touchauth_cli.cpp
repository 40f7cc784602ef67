// Command-line driver: wires ingestion, feature extraction, dataset
// assembly, training, and evaluation into reproducible pipelines.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "touchauth/pipeline.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

std::string digest_hex(const std::string& data) {
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx",
                static_cast<unsigned long long>(touchauth::fnv1a64(data)));
  return hex;
}

json base_manifest() {
  json m;
  m["tool_version"] = touchauth::kToolVersion;
  return m;
}

void write_manifest(const fs::path& dir, const json& m) {
  touchauth::write_file(dir / "manifest.json", m.dump(2) + "\n");
}

int cmd_ingest(const std::vector<std::string>& paths, const std::string& out_dir) {
  for (const auto& p : paths)
    if (!fs::exists(p)) throw touchauth::ConfigError("no such file: " + p);
  fs::create_directories(out_dir);
  json manifest = base_manifest();
  json inputs = json::object();
  for (const auto& p : paths) {
    const std::string text = touchauth::read_file(p);
    inputs[fs::path(p).filename().string()] = digest_hex(text);
    auto parsed = touchauth::parse_log_text(text);
    auto cleaned = touchauth::clean_stream(parsed.events);
    for (const auto& w : cleaned.warnings)
      std::cerr << "warning: " << p << ": " << w << "\n";
    if (cleaned.dropped > 0)
      std::cerr << "warning: " << p << ": dropped " << cleaned.dropped
                << " duplicate-timestamp events\n";

    std::vector<touchauth::TouchEvent> events;
    for (const auto& s : cleaned.streams)
      events.insert(events.end(), s.events.begin(), s.events.end());
    const std::string stem = fs::path(p).stem().string();
    std::ostringstream clean_out;
    touchauth::write_log(clean_out, events);
    touchauth::write_file(fs::path(out_dir) / (stem + ".clean.txt"), clean_out.str());
    std::ostringstream diag_out;
    touchauth::write_diagnostics_csv(diag_out, parsed.diagnostics);
    touchauth::write_file(fs::path(out_dir) / (stem + ".diagnostics.csv"), diag_out.str());
  }
  manifest["command"] = "ingest";
  manifest["input_digests"] = std::move(inputs);
  write_manifest(out_dir, manifest);
  return kExitOk;
}

int cmd_featurize(const std::vector<std::string>& paths, const std::string& out_file, int window,
                  std::optional<std::uint64_t> shuffle_seed) {
  std::vector<touchauth::GestureVector> all;
  json inputs = json::object();
  for (const auto& p : paths) {
    const std::string name = fs::path(p).filename().string();
    auto [user, game] = touchauth::parse_log_filename(name);
    touchauth::RawLogInput log{user, game, name, touchauth::read_file(p)};
    inputs[name] = digest_hex(log.text);
    auto vectors = touchauth::featurize_log(log, window, shuffle_seed);
    if (vectors.empty()) std::cerr << "warning: " << p << ": no complete gesture windows\n";
    all.insert(all.end(), vectors.begin(), vectors.end());
  }
  std::ostringstream out;
  touchauth::write_gestures_csv(out, all);
  touchauth::write_file(out_file, out.str());

  json manifest = base_manifest();
  manifest["command"] = "featurize";
  manifest["window"] = window;
  manifest["shuffle_rows"] = shuffle_seed ? json(*shuffle_seed) : json(nullptr);
  manifest["input_digests"] = std::move(inputs);
  manifest["gesture_count"] = all.size();
  touchauth::write_file(fs::path(out_file).string() + ".manifest.json", manifest.dump(2) + "\n");
  return kExitOk;
}

int cmd_dataset(const std::string& vectors_file, const std::string& target, std::uint64_t seed,
                double train_fraction, const std::string& out_dir) {
  std::ifstream in(vectors_file);
  if (!in) throw touchauth::DataError("cannot open " + vectors_file);
  auto vectors = touchauth::read_gestures_csv(in);
  auto pool = touchauth::build_dataset(target, vectors, seed);
  auto parts = touchauth::split(pool, train_fraction, seed + 1, target);

  fs::create_directories(out_dir);
  std::ostringstream train_out, test_out;
  touchauth::write_labeled_csv(train_out, parts.train.rows);
  touchauth::write_labeled_csv(test_out, parts.test.rows);
  touchauth::write_file(fs::path(out_dir) / "train.csv", train_out.str());
  touchauth::write_file(fs::path(out_dir) / "test.csv", test_out.str());

  json manifest = base_manifest();
  manifest["command"] = "dataset";
  manifest["target_user"] = target;
  manifest["seed"] = seed;
  manifest["train_fraction"] = train_fraction;
  manifest["pool_size"] = pool.size();
  manifest["train_rows"] = parts.train.rows.size();
  manifest["test_rows"] = parts.test.rows.size();
  manifest["input_digests"] = {{fs::path(vectors_file).filename().string(),
                                digest_hex(touchauth::read_file(vectors_file))}};
  write_manifest(out_dir, manifest);
  return kExitOk;
}

int cmd_train(const std::string& train_file, const std::string& model_name, std::uint64_t seed,
              const std::string& config_file, const std::string& out_file) {
  auto variant = touchauth::parse_variant(model_name);
  if (!variant) throw touchauth::ConfigError("unknown model name '" + model_name + "'");
  std::ifstream in(train_file);
  if (!in) throw touchauth::DataError("cannot open " + train_file);
  touchauth::LabeledDataset train;
  train.rows = touchauth::read_labeled_csv(in);
  train.split = "train";
  train.seed = seed;

  touchauth::TrainConfig tc;
  if (!config_file.empty()) {
    json j;
    try {
      j = json::parse(touchauth::read_file(config_file));
    } catch (const json::exception& e) {
      throw touchauth::ConfigError(std::string("bad config JSON: ") + e.what());
    }
    touchauth::apply_train_config_json(j, tc);
  }
  tc.seed = seed;
  auto model = touchauth::train_model(*variant, train, tc);
  for (const auto& w : model.warnings) std::cerr << "warning: " << w << "\n";
  std::ostringstream out;
  touchauth::save_model(out, model);
  touchauth::write_file(out_file, out.str());
  return kExitOk;
}

int cmd_evaluate(const std::string& model_file, const std::string& test_file, double threshold,
                 const std::string& out_file) {
  std::ifstream min(model_file);
  if (!min) throw touchauth::DataError("cannot open " + model_file);
  auto model = touchauth::load_model(min);
  std::ifstream tin(test_file);
  if (!tin) throw touchauth::DataError("cannot open " + test_file);
  auto rows = touchauth::read_labeled_csv(tin);
  if (rows.empty()) throw touchauth::DataError("empty test set");

  std::vector<int> pred, truth;
  for (const auto& r : rows) {
    pred.push_back(touchauth::classify(model, r.vec, threshold));
    truth.push_back(r.label);
  }
  const auto m = touchauth::metrics(touchauth::confusion(pred, truth));
  auto row = touchauth::make_report_row(rows[0].vec.user_id, rows[0].vec.game, model.variant, m);
  std::ostringstream out;
  touchauth::write_report_csv(out, {row});
  if (out_file.empty())
    std::cout << out.str();
  else
    touchauth::write_file(out_file, out.str());
  return kExitOk;
}

std::vector<touchauth::ReportRow> read_report_rows(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw touchauth::DataError("cannot open " + path);
  std::vector<touchauth::ReportRow> rows;
  std::string line;
  if (!std::getline(in, line)) throw touchauth::DataError("empty report CSV");
  while (std::getline(in, line)) {
    if (touchauth::trim(line).empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    touchauth::ReportRow r;
    std::getline(ss, r.user, ',');
    if (r.user == "Avg" || r.user == "Std") continue;  // re-aggregate from per-user rows
    std::getline(ss, r.game, ',');
    std::getline(ss, r.model, ',');
    auto num = [&ss, &cell, &path]() {
      if (!std::getline(ss, cell, ',')) throw touchauth::DataError("short report row in " + path);
      double v;
      if (!touchauth::parse_double(touchauth::trim(cell), v))
        throw touchauth::DataError("bad number '" + cell + "' in " + path);
      return v;
    };
    r.accuracy = num();
    r.f1 = num();
    r.fnr = num();
    r.fpr = num();
    rows.push_back(std::move(r));
  }
  return rows;
}

int cmd_report(const std::string& rows_file, const std::string& group_by,
               const std::string& out_file) {
  touchauth::GroupBy gb;
  if (group_by == "model")
    gb = touchauth::GroupBy::Model;
  else if (group_by == "game")
    gb = touchauth::GroupBy::Game;
  else if (group_by == "model_game")
    gb = touchauth::GroupBy::ModelAndGame;
  else
    throw touchauth::ConfigError("group-by must be model, game, or model_game");

  auto rows = read_report_rows(rows_file);
  auto groups = touchauth::aggregate_report(rows, gb);
  std::ostringstream out;
  out << "Group,Count,Accuracy,F1 Score,FNR,FPR,Accuracy Std,F1 Std,FNR Std,FPR Std\n";
  for (const auto& g : groups) {
    out << g.key << ',' << g.count << ',' << touchauth::format_percent(g.mean.accuracy) << ','
        << touchauth::format_percent(g.mean.f1) << ',' << touchauth::format_percent(g.mean.fnr)
        << ',' << touchauth::format_percent(g.mean.fpr) << ','
        << touchauth::format_percent(g.stddev.accuracy) << ','
        << touchauth::format_percent(g.stddev.f1) << ',' << touchauth::format_percent(g.stddev.fnr)
        << ',' << touchauth::format_percent(g.stddev.fpr) << '\n';
  }
  if (out_file.empty())
    std::cout << out.str();
  else
    touchauth::write_file(out_file, out.str());
  return kExitOk;
}

int cmd_synth(const std::string& profiles_file, int events, const std::string& out_dir,
              const std::vector<std::string>& game_names) {
  json pj;
  try {
    pj = json::parse(touchauth::read_file(profiles_file));
  } catch (const json::exception& e) {
    throw touchauth::ConfigError(std::string("bad profiles JSON: ") + e.what());
  }
  auto profiles = touchauth::profiles_from_json(pj);
  std::vector<touchauth::Game> games;
  for (const auto& g : game_names) {
    auto gv = touchauth::parse_game(g);
    if (!gv) throw touchauth::ConfigError("unknown game '" + g + "'");
    games.push_back(*gv);
  }
  auto logs = touchauth::generate_cohort(profiles, events, games);
  fs::create_directories(out_dir);
  json manifest = base_manifest();
  manifest["command"] = "synth";
  manifest["events_per_log"] = events;
  json outputs = json::object();
  for (const auto& log : logs) {
    touchauth::write_file(fs::path(out_dir) / log.filename, log.text);
    outputs[log.filename] = digest_hex(log.text);
  }
  manifest["output_digests"] = std::move(outputs);
  write_manifest(out_dir, manifest);
  return kExitOk;
}

int cmd_pipeline(const std::string& config_file, const std::string& out_dir, int jobs,
                 std::optional<std::uint64_t> seed) {
  json j;
  try {
    j = json::parse(touchauth::read_file(config_file));
  } catch (const json::exception& e) {
    throw touchauth::ConfigError(std::string("bad config JSON: ") + e.what());
  }
  auto config = touchauth::pipeline_config_from_json(j, fs::path(config_file).parent_path());
  if (jobs > 0) config.jobs = jobs;
  if (seed) {
    config.seed = *seed;
    config.train.seed = *seed;
  }
  touchauth::run_pipeline_to_dir(config, out_dir);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"touchauth: multi-finger touch-dynamics authentication toolkit"};
  app.require_subcommand(1);

  std::vector<std::string> paths;
  std::string out_dir = "out", out_file, vectors_file, target, train_file, model_name,
              config_file, model_file, test_file, rows_file, profiles_file;
  std::string group_by = "model_game";
  int window = touchauth::kDefaultWindowSize;
  int events = 3000;
  int jobs = 0;
  double train_fraction = 0.8;
  double threshold = 0.5;
  std::uint64_t seed = 42;
  bool seed_given = false;
  std::optional<std::uint64_t> shuffle_seed;
  std::uint64_t shuffle_seed_value = 0;
  bool shuffle_given = false;
  std::vector<std::string> game_names{"pubg"};

  auto* ingest = app.add_subcommand("ingest", "Parse and clean raw event logs");
  ingest->add_option("paths", paths, "Raw log files")->required();
  ingest->add_option("--out-dir", out_dir, "Output directory");

  auto* featurize = app.add_subcommand("featurize", "Logs -> 44-feature gesture vectors CSV");
  featurize->add_option("paths", paths, "Raw log files named <user>_<game>.txt")->required();
  featurize->add_option("--out", out_file, "Output gesture CSV")->required();
  featurize->add_option("--window", window, "Events per gesture window");
  featurize->add_option("--shuffle-rows", shuffle_seed_value, "Shuffle samples before windowing")
      ->trigger_on_parse()
      ->each([&](const std::string&) { shuffle_given = true; });

  auto* dataset = app.add_subcommand("dataset", "Balanced train/test split for one target user");
  dataset->add_option("--vectors", vectors_file, "Gesture CSV")->required();
  dataset->add_option("--target", target, "Target (authentic) user id")->required();
  dataset->add_option("--seed", seed, "Sampling seed");
  dataset->add_option("--train-fraction", train_fraction, "Training fraction");
  dataset->add_option("--out-dir", out_dir, "Output directory");

  auto* train = app.add_subcommand("train", "Train one classifier on a labeled CSV");
  train->add_option("--train", train_file, "Training CSV")->required();
  train->add_option("--model", model_name, "mlp | gbt | svc")->required();
  train->add_option("--seed", seed, "Training seed");
  train->add_option("--config", config_file, "JSON config with model overrides");
  train->add_option("--out", out_file, "Output model JSON")->required();

  auto* evaluate = app.add_subcommand("evaluate", "Score a model against a labeled test CSV");
  evaluate->add_option("--model", model_file, "Model JSON")->required();
  evaluate->add_option("--test", test_file, "Test CSV")->required();
  evaluate->add_option("--threshold", threshold, "Imposter decision threshold");
  evaluate->add_option("--out", out_file, "Output report CSV (stdout if omitted)");

  auto* report = app.add_subcommand("report", "Aggregate per-user report rows");
  report->add_option("--rows", rows_file, "Per-user report CSV")->required();
  report->add_option("--group-by", group_by, "model | game | model_game");
  report->add_option("--out", out_file, "Output CSV (stdout if omitted)");

  auto* synth = app.add_subcommand("synth", "Generate synthetic raw logs from profiles");
  synth->add_option("--profiles", profiles_file, "Profiles JSON")->required();
  synth->add_option("--events", events, "Events per log");
  synth->add_option("--games", game_names, "Game tags");
  synth->add_option("--out-dir", out_dir, "Output directory");

  auto* pipeline = app.add_subcommand("pipeline", "Full ingest->train->report run from a config");
  pipeline->add_option("--config", config_file, "Pipeline config JSON")->required();
  pipeline->add_option("--out-dir", out_dir, "Output directory");
  pipeline->add_option("--jobs", jobs, "Parallel train/evaluate workers");
  pipeline->add_option("--seed", seed, "Override config seed")
      ->trigger_on_parse()
      ->each([&](const std::string&) { seed_given = true; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  if (shuffle_given) shuffle_seed = shuffle_seed_value;

  try {
    if (*ingest) return cmd_ingest(paths, out_dir);
    if (*featurize) return cmd_featurize(paths, out_file, window, shuffle_seed);
    if (*dataset) return cmd_dataset(vectors_file, target, seed, train_fraction, out_dir);
    if (*train) return cmd_train(train_file, model_name, seed, config_file, out_file);
    if (*evaluate) return cmd_evaluate(model_file, test_file, threshold, out_file);
    if (*report) return cmd_report(rows_file, group_by, out_file);
    if (*synth) return cmd_synth(profiles_file, events, out_dir, game_names);
    if (*pipeline)
      return cmd_pipeline(config_file, out_dir, jobs,
                          seed_given ? std::optional<std::uint64_t>(seed) : std::nullopt);
  } catch (const touchauth::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}
