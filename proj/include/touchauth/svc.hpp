#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "touchauth/mlp.hpp"  // logistic()

namespace touchauth {

enum class SvcKernel { Rbf, Linear };

struct SvcConfig {
  SvcKernel kernel = SvcKernel::Rbf;
  double gamma = 0;  // <= 0 means auto: 1 / (dim * mean feature variance)
  double C = 1.0;
  double tolerance = 1e-3;
  int max_iterations = 10000;
};

struct SvcModel {
  SvcKernel kernel = SvcKernel::Rbf;
  double gamma = 1.0;
  double C = 1.0;
  std::vector<std::vector<double>> support_vectors;
  std::vector<double> dual_coef;  // alpha_i * y_i per support vector
  double bias = 0;
  bool converged = true;

  double kernel_value(const std::vector<double>& a, const std::vector<double>& b) const {
    double acc = 0;
    if (kernel == SvcKernel::Linear) {
      for (std::size_t j = 0; j < a.size(); ++j) acc += a[j] * b[j];
      return acc;
    }
    for (std::size_t j = 0; j < a.size(); ++j) {
      const double d = a[j] - b[j];
      acc += d * d;
    }
    return std::exp(-gamma * acc);
  }

  double decision(const std::vector<double>& x) const {
    double f = bias;
    for (std::size_t i = 0; i < support_vectors.size(); ++i)
      f += dual_coef[i] * kernel_value(support_vectors[i], x);
    return f;
  }

  double score(const std::vector<double>& x) const { return logistic(decision(x)); }
};

// Training-time state exposed so feasibility (box constraints, margin
// conditions) can be checked over the full training set.
struct SvcTrainState {
  SvcModel model;
  std::vector<double> alpha;  // all training rows, in input order
  std::vector<int> sign_labels;  // +1 authentic-side mapping of {0,1} -> {-1,+1}
};

namespace detail {

// Platt's SMO with an error cache and deterministic working-set choices.
class SmoSolver {
 public:
  SmoSolver(const std::vector<std::vector<double>>& X, const std::vector<int>& sign_y,
            const SvcConfig& config, double gamma)
      : X_(X), y_(sign_y), C_(config.C), tol_(config.tolerance), gamma_(gamma),
        kernel_(config.kernel), n_(X.size()), alpha_(X.size(), 0.0), error_(X.size(), 0.0),
        bias_(0) {
    K_.assign(n_, std::vector<double>(n_));
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = i; j < n_; ++j) K_[i][j] = K_[j][i] = kernel_value(i, j);
    for (std::size_t i = 0; i < n_; ++i) error_[i] = -static_cast<double>(y_[i]);
  }

  // max_iterations caps the number of alpha-pair updates.
  bool solve(int max_iterations) {
    int num_changed = 0;
    bool examine_all = true;
    steps_ = 0;
    while (num_changed > 0 || examine_all) {
      num_changed = 0;
      for (std::size_t i = 0; i < n_; ++i) {
        if (examine_all || (alpha_[i] > 0 && alpha_[i] < C_)) num_changed += examine(i);
        if (steps_ >= max_iterations) return false;
      }
      if (examine_all)
        examine_all = false;
      else if (num_changed == 0)
        examine_all = true;
    }
    // Converged: the loop only exits after a full sweep changed nothing.
    return true;
  }

  const std::vector<double>& alpha() const { return alpha_; }
  double bias() const { return bias_; }

 private:
  double kernel_value(std::size_t i, std::size_t j) const {
    double acc = 0;
    if (kernel_ == SvcKernel::Linear) {
      for (std::size_t k = 0; k < X_[i].size(); ++k) acc += X_[i][k] * X_[j][k];
      return acc;
    }
    for (std::size_t k = 0; k < X_[i].size(); ++k) {
      const double d = X_[i][k] - X_[j][k];
      acc += d * d;
    }
    return std::exp(-gamma_ * acc);
  }

  int examine(std::size_t i2) {
    const double y2 = y_[i2], a2 = alpha_[i2], e2 = error_[i2];
    const double r2 = e2 * y2;
    if (!((r2 < -tol_ && a2 < C_) || (r2 > tol_ && a2 > 0))) return 0;

    // 1st heuristic: max |E1 - E2| among non-bound points.
    std::size_t best = n_;
    double best_gap = -1;
    for (std::size_t i = 0; i < n_; ++i) {
      if (i == i2 || alpha_[i] <= 0 || alpha_[i] >= C_) continue;
      const double gap = std::abs(error_[i] - e2);
      if (gap > best_gap) {
        best_gap = gap;
        best = i;
      }
    }
    if (best < n_ && take_step(best, i2)) return 1;
    for (std::size_t i = 0; i < n_; ++i) {
      if (i == i2 || alpha_[i] <= 0 || alpha_[i] >= C_) continue;
      if (take_step(i, i2)) return 1;
    }
    for (std::size_t i = 0; i < n_; ++i) {
      if (i == i2) continue;
      if (take_step(i, i2)) return 1;
    }
    return 0;
  }

  bool take_step(std::size_t i1, std::size_t i2) {
    const double y1 = y_[i1], y2 = y_[i2];
    const double a1 = alpha_[i1], a2 = alpha_[i2];
    const double e1 = error_[i1], e2 = error_[i2];
    const double s = y1 * y2;
    double lo, hi;
    if (y1 != y2) {
      lo = std::max(0.0, a2 - a1);
      hi = std::min(C_, C_ + a2 - a1);
    } else {
      lo = std::max(0.0, a1 + a2 - C_);
      hi = std::min(C_, a1 + a2);
    }
    if (lo >= hi) return false;
    const double eta = K_[i1][i1] + K_[i2][i2] - 2.0 * K_[i1][i2];
    if (eta <= 0) return false;  // degenerate direction, skip
    double a2_new = a2 + y2 * (e1 - e2) / eta;
    a2_new = std::clamp(a2_new, lo, hi);
    if (std::abs(a2_new - a2) < 1e-12 * (a2_new + a2 + 1e-12)) return false;
    const double a1_new = a1 + s * (a2 - a2_new);

    const double d1 = y1 * (a1_new - a1), d2 = y2 * (a2_new - a2);
    const double b1 = bias_ - e1 - d1 * K_[i1][i1] - d2 * K_[i1][i2];
    const double b2 = bias_ - e2 - d1 * K_[i1][i2] - d2 * K_[i2][i2];
    double b_new;
    if (a1_new > 0 && a1_new < C_)
      b_new = b1;
    else if (a2_new > 0 && a2_new < C_)
      b_new = b2;
    else
      b_new = 0.5 * (b1 + b2);

    const double db = b_new - bias_;
    for (std::size_t k = 0; k < n_; ++k)
      error_[k] += d1 * K_[i1][k] + d2 * K_[i2][k] + db;
    alpha_[i1] = a1_new;
    alpha_[i2] = a2_new;
    bias_ = b_new;
    ++steps_;
    return true;
  }

  const std::vector<std::vector<double>>& X_;
  const std::vector<int>& y_;
  const double C_, tol_, gamma_;
  const SvcKernel kernel_;
  const std::size_t n_;
  std::vector<std::vector<double>> K_;
  std::vector<double> alpha_, error_;
  double bias_;
  int steps_ = 0;
};

}  // namespace detail

inline double svc_auto_gamma(const std::vector<std::vector<double>>& X) {
  if (X.empty()) throw DataError("svc_auto_gamma: empty data");
  const std::size_t d = X[0].size();
  const double n = static_cast<double>(X.size());
  double total_var = 0;
  for (std::size_t j = 0; j < d; ++j) {
    double mean = 0;
    for (const auto& row : X) mean += row[j];
    mean /= n;
    double ss = 0;
    for (const auto& row : X) {
      const double dv = row[j] - mean;
      ss += dv * dv;
    }
    total_var += ss / n;
  }
  const double mean_var = total_var / static_cast<double>(d);
  if (mean_var <= 0) return 1.0 / static_cast<double>(d);
  return 1.0 / (static_cast<double>(d) * mean_var);
}

// Kernel SVM trained with SMO; labels are {0,1} and mapped to {-1,+1}
// internally (imposter 1 -> +1).
inline SvcTrainState train_svc_model(const std::vector<std::vector<double>>& X,
                                     const std::vector<int>& y, const SvcConfig& config) {
  if (X.empty()) throw DataError("train_svc: empty training set");
  bool has0 = false, has1 = false;
  for (int v : y) (v == 1 ? has1 : has0) = true;
  if (!has0 || !has1) throw DataError("train_svc: training data contains a single class");
  if (config.C <= 0 || config.tolerance <= 0 || config.max_iterations <= 0)
    throw ConfigError("bad SVC config");

  SvcTrainState state;
  state.sign_labels.reserve(y.size());
  for (int v : y) state.sign_labels.push_back(v == 1 ? 1 : -1);

  const double gamma = config.gamma > 0 ? config.gamma : svc_auto_gamma(X);
  detail::SmoSolver solver(X, state.sign_labels, config, gamma);
  const bool converged = solver.solve(config.max_iterations);

  state.alpha = solver.alpha();
  state.model.kernel = config.kernel;
  state.model.gamma = gamma;
  state.model.C = config.C;
  state.model.bias = solver.bias();
  state.model.converged = converged;
  for (std::size_t i = 0; i < X.size(); ++i) {
    if (state.alpha[i] > 1e-12) {
      state.model.support_vectors.push_back(X[i]);
      state.model.dual_coef.push_back(state.alpha[i] * state.sign_labels[i]);
    }
  }
  return state;
}

}  // namespace touchauth
