#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "touchauth/common.hpp"

namespace touchauth {

struct MlpConfig {
  std::vector<int> hidden_layers{64, 32};
  int epochs = 50;
  int batch_size = 32;
  double learning_rate = 1e-3;  // Adam step size
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_epsilon = 1e-8;
  std::uint64_t seed = 0;
};

inline double logistic(double z) {
  if (z >= 0) {
    const double e = std::exp(-z);
    return 1.0 / (1.0 + e);
  }
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// Feed-forward network: ReLU hidden layers, single logistic output,
// binary cross-entropy loss.
class MlpNetwork {
 public:
  MlpNetwork() = default;

  MlpNetwork(int input_dim, const std::vector<int>& hidden, std::uint64_t seed) {
    dims_.push_back(input_dim);
    for (int h : hidden) {
      if (h <= 0) throw ConfigError("hidden layer width must be positive");
      dims_.push_back(h);
    }
    dims_.push_back(1);
    Rng rng(seed);
    for (std::size_t l = 0; l + 1 < dims_.size(); ++l) {
      const int in = dims_[l], out = dims_[l + 1];
      // Glorot-style scaled uniform
      const double limit = std::sqrt(6.0 / (in + out));
      std::vector<double> w(static_cast<std::size_t>(in) * out);
      for (auto& v : w) v = rng.uniform(-limit, limit);
      weights_.push_back(std::move(w));
      biases_.emplace_back(static_cast<std::size_t>(out), 0.0);
    }
  }

  int input_dim() const { return dims_.empty() ? 0 : dims_.front(); }
  const std::vector<int>& dims() const { return dims_; }
  std::size_t layer_count() const { return weights_.size(); }

  double predict(const std::vector<double>& x) const {
    std::vector<double> a = x;
    for (std::size_t l = 0; l < weights_.size(); ++l) {
      std::vector<double> z = affine(l, a);
      if (l + 1 < weights_.size()) {
        for (auto& v : z) v = v > 0 ? v : 0.0;  // ReLU
      }
      a = std::move(z);
    }
    return logistic(a[0]);
  }

  // Mean binary cross-entropy over a batch.
  double loss(const std::vector<std::vector<double>>& X, const std::vector<int>& y) const {
    double total = 0;
    for (std::size_t i = 0; i < X.size(); ++i) {
      const double p = clamp_prob(predict(X[i]));
      total += y[i] == 1 ? -std::log(p) : -std::log(1.0 - p);
    }
    return total / static_cast<double>(X.size());
  }

  // Backprop gradient of the mean BCE loss; returns the loss.
  double loss_and_gradient(const std::vector<std::vector<double>>& X, const std::vector<int>& y,
                           std::vector<std::vector<double>>& grad_w,
                           std::vector<std::vector<double>>& grad_b) const {
    const std::size_t L = weights_.size();
    grad_w.assign(L, {});
    grad_b.assign(L, {});
    for (std::size_t l = 0; l < L; ++l) {
      grad_w[l].assign(weights_[l].size(), 0.0);
      grad_b[l].assign(biases_[l].size(), 0.0);
    }
    const double inv_n = 1.0 / static_cast<double>(X.size());
    double total = 0;
    for (std::size_t i = 0; i < X.size(); ++i) {
      // forward, keeping activations
      std::vector<std::vector<double>> acts;  // acts[l] = input to layer l
      acts.push_back(X[i]);
      for (std::size_t l = 0; l < L; ++l) {
        std::vector<double> z = affine(l, acts.back());
        if (l + 1 < L)
          for (auto& v : z) v = v > 0 ? v : 0.0;
        acts.push_back(std::move(z));
      }
      const double p = clamp_prob(logistic(acts.back()[0]));
      total += y[i] == 1 ? -std::log(p) : -std::log(1.0 - p);

      // backward; dBCE/dz at the logistic output is (p - y)
      std::vector<double> delta{(p - static_cast<double>(y[i])) * inv_n};
      for (std::size_t l = L; l-- > 0;) {
        const int in = dims_[l], out = dims_[l + 1];
        const auto& a = acts[l];
        for (int r = 0; r < out; ++r) {
          grad_b[l][r] += delta[r];
          for (int c = 0; c < in; ++c)
            grad_w[l][static_cast<std::size_t>(r) * in + c] += delta[r] * a[c];
        }
        if (l == 0) break;
        std::vector<double> prev(static_cast<std::size_t>(in), 0.0);
        for (int c = 0; c < in; ++c) {
          double s = 0;
          for (int r = 0; r < out; ++r)
            s += weights_[l][static_cast<std::size_t>(r) * in + c] * delta[r];
          // ReLU mask of layer l's input (which is layer l-1's output)
          prev[c] = a[c] > 0 ? s : 0.0;
        }
        delta = std::move(prev);
      }
    }
    return total * inv_n;
  }

  // Flat parameter access, used by the finite-difference gradient check.
  std::vector<double> parameters() const {
    std::vector<double> flat;
    for (std::size_t l = 0; l < weights_.size(); ++l) {
      flat.insert(flat.end(), weights_[l].begin(), weights_[l].end());
      flat.insert(flat.end(), biases_[l].begin(), biases_[l].end());
    }
    return flat;
  }

  void set_parameters(const std::vector<double>& flat) {
    std::size_t k = 0;
    for (std::size_t l = 0; l < weights_.size(); ++l) {
      for (auto& v : weights_[l]) v = flat.at(k++);
      for (auto& v : biases_[l]) v = flat.at(k++);
    }
    if (k != flat.size()) throw std::invalid_argument("parameter vector size mismatch");
  }

  std::vector<std::vector<double>>& weights() { return weights_; }
  std::vector<std::vector<double>>& biases() { return biases_; }
  const std::vector<std::vector<double>>& weights() const { return weights_; }
  const std::vector<std::vector<double>>& biases() const { return biases_; }

  void set_structure(std::vector<int> dims, std::vector<std::vector<double>> w,
                     std::vector<std::vector<double>> b) {
    dims_ = std::move(dims);
    weights_ = std::move(w);
    biases_ = std::move(b);
  }

 private:
  static double clamp_prob(double p) {
    constexpr double eps = 1e-12;
    return p < eps ? eps : (p > 1.0 - eps ? 1.0 - eps : p);
  }

  std::vector<double> affine(std::size_t l, const std::vector<double>& a) const {
    const int in = dims_[l], out = dims_[l + 1];
    std::vector<double> z(static_cast<std::size_t>(out));
    for (int r = 0; r < out; ++r) {
      double s = biases_[l][static_cast<std::size_t>(r)];
      const double* wr = &weights_[l][static_cast<std::size_t>(r) * in];
      for (int c = 0; c < in; ++c) s += wr[c] * a[c];
      z[static_cast<std::size_t>(r)] = s;
    }
    return z;
  }

  std::vector<int> dims_;
  std::vector<std::vector<double>> weights_;  // [l]: dims[l+1] x dims[l], row-major
  std::vector<std::vector<double>> biases_;
};

struct MlpTrainResult {
  MlpNetwork network;
  std::vector<double> epoch_loss;  // mean training loss after each epoch
};

// Mini-batch Adam on BCE. Deterministic for a fixed (data, config) pair.
inline MlpTrainResult train_mlp_network(const std::vector<std::vector<double>>& X,
                                        const std::vector<int>& y, const MlpConfig& config) {
  if (X.empty()) throw DataError("train_mlp: empty training set");
  bool has0 = false, has1 = false;
  for (int v : y) (v == 1 ? has1 : has0) = true;
  if (!has0 || !has1) throw DataError("train_mlp: training data contains a single class");
  if (config.epochs <= 0 || config.batch_size <= 0 || config.learning_rate <= 0)
    throw ConfigError("MLP config values must be positive");

  MlpTrainResult result;
  result.network = MlpNetwork(static_cast<int>(X[0].size()), config.hidden_layers, config.seed);
  MlpNetwork& net = result.network;

  const std::size_t L = net.layer_count();
  std::vector<std::vector<double>> mw(L), vw(L), mb(L), vb(L);
  for (std::size_t l = 0; l < L; ++l) {
    mw[l].assign(net.weights()[l].size(), 0.0);
    vw[l].assign(net.weights()[l].size(), 0.0);
    mb[l].assign(net.biases()[l].size(), 0.0);
    vb[l].assign(net.biases()[l].size(), 0.0);
  }

  Rng rng(config.seed ^ 0x9e3779b97f4a7c15ull);
  std::vector<std::size_t> order(X.size());
  std::iota(order.begin(), order.end(), 0);

  std::vector<std::vector<double>> gw, gb;
  long step = 0;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    rng.shuffle(order);
    for (std::size_t start = 0; start < order.size();
         start += static_cast<std::size_t>(config.batch_size)) {
      const std::size_t end =
          std::min(order.size(), start + static_cast<std::size_t>(config.batch_size));
      std::vector<std::vector<double>> bx;
      std::vector<int> by;
      bx.reserve(end - start);
      for (std::size_t i = start; i < end; ++i) {
        bx.push_back(X[order[i]]);
        by.push_back(y[order[i]]);
      }
      const double batch_loss = net.loss_and_gradient(bx, by, gw, gb);
      if (!std::isfinite(batch_loss)) throw TrainingError("MLP training diverged (non-finite loss)");
      ++step;
      const double bc1 = 1.0 - std::pow(config.adam_beta1, step);
      const double bc2 = 1.0 - std::pow(config.adam_beta2, step);
      for (std::size_t l = 0; l < L; ++l) {
        auto adam = [&](std::vector<double>& param, std::vector<double>& m, std::vector<double>& v,
                        const std::vector<double>& g) {
          for (std::size_t k = 0; k < param.size(); ++k) {
            m[k] = config.adam_beta1 * m[k] + (1 - config.adam_beta1) * g[k];
            v[k] = config.adam_beta2 * v[k] + (1 - config.adam_beta2) * g[k] * g[k];
            param[k] -= config.learning_rate * (m[k] / bc1) / (std::sqrt(v[k] / bc2) + config.adam_epsilon);
          }
        };
        adam(net.weights()[l], mw[l], vw[l], gw[l]);
        adam(net.biases()[l], mb[l], vb[l], gb[l]);
      }
    }
    const double epoch_loss = net.loss(X, y);
    if (!std::isfinite(epoch_loss)) throw TrainingError("MLP training diverged (non-finite loss)");
    result.epoch_loss.push_back(epoch_loss);
  }
  return result;
}

}  // namespace touchauth
