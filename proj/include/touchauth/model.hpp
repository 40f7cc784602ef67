#pragma once

#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "touchauth/gbt.hpp"
#include "touchauth/mlp.hpp"
#include "touchauth/standardize.hpp"
#include "touchauth/svc.hpp"

namespace touchauth {

enum class ModelVariant { Mlp, Gbt, Svc };

inline std::string variant_key(ModelVariant v) {
  switch (v) {
    case ModelVariant::Mlp: return "mlp";
    case ModelVariant::Gbt: return "gbt";
    case ModelVariant::Svc: return "svc";
  }
  throw std::logic_error("bad variant");
}

// Column value used in Fig-2 style reports.
inline std::string variant_report_name(ModelVariant v) {
  switch (v) {
    case ModelVariant::Mlp: return "NN";
    case ModelVariant::Gbt: return "XGB";
    case ModelVariant::Svc: return "SVC";
  }
  throw std::logic_error("bad variant");
}

inline std::optional<ModelVariant> parse_variant(std::string_view s) {
  std::string k;
  for (char c : s) k += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (k == "mlp" || k == "nn") return ModelVariant::Mlp;
  if (k == "gbt" || k == "xgb" || k == "xgboost") return ModelVariant::Gbt;
  if (k == "svc" || k == "svm") return ModelVariant::Svc;
  return std::nullopt;
}

struct TrainConfig {
  MlpConfig mlp;
  GbtConfig gbt;
  SvcConfig svc;
  std::uint64_t seed = 0;
};

struct TrainedModel {
  ModelVariant variant = ModelVariant::Mlp;
  Standardizer standardizer;
  MlpNetwork mlp;
  GbtModel gbt;
  SvcModel svc;
  nlohmann::json config_snapshot;
  std::uint64_t seed = 0;
  std::vector<std::string> warnings;
  std::vector<double> training_loss;  // per epoch (MLP) / per round (GBT)
};

inline nlohmann::json train_config_json(ModelVariant v, const TrainConfig& c) {
  nlohmann::json j;
  j["seed"] = c.seed;
  switch (v) {
    case ModelVariant::Mlp:
      j["hidden_layers"] = c.mlp.hidden_layers;
      j["epochs"] = c.mlp.epochs;
      j["batch_size"] = c.mlp.batch_size;
      j["learning_rate"] = c.mlp.learning_rate;
      break;
    case ModelVariant::Gbt:
      j["trees"] = c.gbt.trees;
      j["max_depth"] = c.gbt.max_depth;
      j["learning_rate"] = c.gbt.learning_rate;
      j["min_samples_leaf"] = c.gbt.min_samples_leaf;
      break;
    case ModelVariant::Svc:
      j["kernel"] = c.svc.kernel == SvcKernel::Rbf ? "rbf" : "linear";
      j["gamma"] = c.svc.gamma;
      j["C"] = c.svc.C;
      j["tolerance"] = c.svc.tolerance;
      j["max_iterations"] = c.svc.max_iterations;
      break;
  }
  return j;
}

inline TrainedModel train_model(ModelVariant variant, const LabeledDataset& train,
                                TrainConfig config) {
  TrainedModel model;
  model.variant = variant;
  model.seed = config.seed;
  model.standardizer = fit_standardizer(train.rows);

  std::vector<std::vector<double>> X;
  std::vector<int> y;
  X.reserve(train.rows.size());
  for (const auto& r : train.rows) {
    X.push_back(model.standardizer.apply(r.vec.values));
    y.push_back(r.label);
  }

  switch (variant) {
    case ModelVariant::Mlp: {
      config.mlp.seed = config.seed;
      auto result = train_mlp_network(X, y, config.mlp);
      model.mlp = std::move(result.network);
      model.training_loss = std::move(result.epoch_loss);
      break;
    }
    case ModelVariant::Gbt: {
      auto gbt = train_gbt_model(X, y, config.gbt);
      model.training_loss = gbt.round_loss;
      model.gbt = std::move(gbt);
      break;
    }
    case ModelVariant::Svc: {
      auto state = train_svc_model(X, y, config.svc);
      if (!state.model.converged)
        model.warnings.push_back("SVC did not converge within max_iterations; best-effort model");
      model.svc = std::move(state.model);
      break;
    }
  }
  model.config_snapshot = train_config_json(variant, config);
  return model;
}

inline double predict_score(const TrainedModel& model, const std::array<double, kGestureDim>& v) {
  for (double x : v)
    if (!std::isfinite(x)) throw DataError("predict_score: non-finite feature value");
  const std::vector<double> z = model.standardizer.apply(v);
  switch (model.variant) {
    case ModelVariant::Mlp: return model.mlp.predict(z);
    case ModelVariant::Gbt: return model.gbt.score(z);
    case ModelVariant::Svc: return model.svc.score(z);
  }
  throw std::logic_error("bad variant");
}

inline double predict_score(const TrainedModel& model, const GestureVector& gv) {
  return predict_score(model, gv.values);
}

// 1 = imposter when score >= threshold.
inline int classify(const TrainedModel& model, const std::array<double, kGestureDim>& v,
                    double threshold = 0.5) {
  if (!(threshold > 0.0 && threshold < 1.0)) throw ConfigError("threshold must be in (0, 1)");
  return predict_score(model, v) >= threshold ? 1 : 0;
}

inline int classify(const TrainedModel& model, const GestureVector& gv, double threshold = 0.5) {
  return classify(model, gv.values, threshold);
}

// ---- JSON model serialization (versioned) ----

inline constexpr int kModelFormatVersion = 1;

inline nlohmann::json model_to_json(const TrainedModel& m) {
  nlohmann::json j;
  j["format_version"] = kModelFormatVersion;
  j["variant"] = variant_key(m.variant);
  j["standardizer"] = {{"mean", m.standardizer.mean}, {"scale", m.standardizer.scale}};
  j["config"] = m.config_snapshot;
  j["seed"] = m.seed;
  j["warnings"] = m.warnings;
  switch (m.variant) {
    case ModelVariant::Mlp: {
      nlohmann::json p;
      p["dims"] = m.mlp.dims();
      p["weights"] = m.mlp.weights();
      p["biases"] = m.mlp.biases();
      j["parameters"] = std::move(p);
      break;
    }
    case ModelVariant::Gbt: {
      nlohmann::json p;
      p["base_score"] = m.gbt.base_score;
      p["learning_rate"] = m.gbt.learning_rate;
      nlohmann::json trees = nlohmann::json::array();
      for (const auto& t : m.gbt.trees) {
        nlohmann::json nodes = nlohmann::json::array();
        for (const auto& nd : t.nodes)
          nodes.push_back({{"f", nd.feature},
                           {"t", nd.threshold},
                           {"l", nd.left},
                           {"r", nd.right},
                           {"v", nd.value}});
        trees.push_back(std::move(nodes));
      }
      p["trees"] = std::move(trees);
      j["parameters"] = std::move(p);
      break;
    }
    case ModelVariant::Svc: {
      nlohmann::json p;
      p["kernel"] = m.svc.kernel == SvcKernel::Rbf ? "rbf" : "linear";
      p["gamma"] = m.svc.gamma;
      p["C"] = m.svc.C;
      p["bias"] = m.svc.bias;
      p["support_vectors"] = m.svc.support_vectors;
      p["dual_coef"] = m.svc.dual_coef;
      p["converged"] = m.svc.converged;
      j["parameters"] = std::move(p);
      break;
    }
  }
  return j;
}

inline TrainedModel model_from_json(const nlohmann::json& j) {
  if (!j.contains("format_version") || j.at("format_version").get<int>() != kModelFormatVersion)
    throw DataError("unsupported model format version");
  TrainedModel m;
  auto variant = parse_variant(j.at("variant").get<std::string>());
  if (!variant) throw DataError("unknown model variant");
  m.variant = *variant;
  m.standardizer.mean = j.at("standardizer").at("mean").get<std::vector<double>>();
  m.standardizer.scale = j.at("standardizer").at("scale").get<std::vector<double>>();
  m.config_snapshot = j.value("config", nlohmann::json::object());
  m.seed = j.value("seed", std::uint64_t{0});
  m.warnings = j.value("warnings", std::vector<std::string>{});
  const auto& p = j.at("parameters");
  switch (m.variant) {
    case ModelVariant::Mlp:
      m.mlp.set_structure(p.at("dims").get<std::vector<int>>(),
                          p.at("weights").get<std::vector<std::vector<double>>>(),
                          p.at("biases").get<std::vector<std::vector<double>>>());
      break;
    case ModelVariant::Gbt: {
      m.gbt.base_score = p.at("base_score").get<double>();
      m.gbt.learning_rate = p.at("learning_rate").get<double>();
      for (const auto& tj : p.at("trees")) {
        RegressionTree t;
        for (const auto& nj : tj) {
          TreeNode nd;
          nd.feature = nj.at("f").get<int>();
          nd.threshold = nj.at("t").get<double>();
          nd.left = nj.at("l").get<int>();
          nd.right = nj.at("r").get<int>();
          nd.value = nj.at("v").get<double>();
          t.nodes.push_back(nd);
        }
        m.gbt.trees.push_back(std::move(t));
      }
      break;
    }
    case ModelVariant::Svc:
      m.svc.kernel = p.at("kernel").get<std::string>() == "linear" ? SvcKernel::Linear : SvcKernel::Rbf;
      m.svc.gamma = p.at("gamma").get<double>();
      m.svc.C = p.at("C").get<double>();
      m.svc.bias = p.at("bias").get<double>();
      m.svc.support_vectors = p.at("support_vectors").get<std::vector<std::vector<double>>>();
      m.svc.dual_coef = p.at("dual_coef").get<std::vector<double>>();
      m.svc.converged = p.value("converged", true);
      break;
  }
  return m;
}

inline void save_model(std::ostream& out, const TrainedModel& m) {
  out << model_to_json(m).dump(2) << '\n';
}

inline TrainedModel load_model(std::istream& in) {
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("bad model JSON: ") + e.what());
  }
  return model_from_json(j);
}

}  // namespace touchauth
