#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "error.hpp"
#include "label.hpp"
#include "random.hpp"
#include "textfeat.hpp"

namespace codemix {

struct SvmConfig {
  double c = 1.0;
  // Stop once the largest |projected gradient| seen during an epoch is
  // below this.
  double tolerance = 1e-4;
  std::size_t max_epochs = 1000;
  std::uint64_t seed = 1;
  Label positive_label = Label::OFF;
  // Appends a constant feature of value bias_scale; its weight is
  // regularized like any other.
  bool fit_bias = false;
  double bias_scale = 1.0;
  // Per-label multiplier on C, indexed by label_index().
  std::array<double, kNumLabels> label_cost{1.0, 1.0};

  double upper_bound(Label label) const noexcept { return c * label_cost[label_index(label)]; }

  void validate() const {
    if (!(c > 0.0) || !std::isfinite(c)) throw ConfigError("C must be positive");
    if (!(tolerance > 0.0)) throw ConfigError("tolerance must be positive");
    if (max_epochs < 1) throw ConfigError("max_epochs must be at least 1");
    if (fit_bias && !(bias_scale > 0.0)) throw ConfigError("bias scale must be positive");
    for (double cost : label_cost) {
      if (!(cost > 0.0) || !std::isfinite(cost)) throw ConfigError("label cost multipliers must be positive");
    }
  }
};

// y[i] is +1 for the positive label, -1 otherwise.
struct TrainingSet {
  std::vector<SparseVector> x;
  std::vector<int> y;

  std::size_t dim() const noexcept { return x.empty() ? 0 : x.front().dim; }

  void validate() const {
    if (x.size() != y.size()) throw DataError("feature and label counts differ");
    if (x.size() < 2) throw DataError("training needs at least two examples");
    bool has_pos = false, has_neg = false;
    for (std::size_t i = 0; i < y.size(); ++i) {
      if (y[i] == 1) has_pos = true;
      else if (y[i] == -1) has_neg = true;
      else throw DataError("training targets must be +1 or -1");
      if (x[i].dim != dim()) throw DataError("dimension mismatch in training vectors");
    }
    if (!has_pos || !has_neg) throw DataError("training data must contain both labels");
  }
};

inline TrainingSet make_training_set(std::vector<SparseVector> x, std::span<const Label> labels,
                                     Label positive_label = Label::OFF) {
  TrainingSet data;
  data.x = std::move(x);
  data.y.reserve(labels.size());
  for (Label l : labels) data.y.push_back(l == positive_label ? 1 : -1);
  return data;
}

struct TrainingDiagnostics {
  std::size_t epochs = 0;
  double dual_objective = 0.0;
  double max_projected_gradient = 0.0;
  bool converged = false;
};

// Snapshot handed to an observer after every epoch.
struct EpochState {
  std::size_t epoch;
  double dual_objective;
  double max_projected_gradient;
  std::span<const double> alpha;
  std::span<const double> upper_bound;
  std::span<const double> weights;
  double bias_weight;
};

using EpochObserver = std::function<void(const EpochState&)>;

class LinearSvmModel {
 public:
  LinearSvmModel() = default;
  LinearSvmModel(std::vector<double> weights, double bias, Label positive_label,
                 TrainingDiagnostics diagnostics = {})
      : weights_(std::move(weights)), bias_(bias), positive_label_(positive_label),
        diagnostics_(diagnostics) {}

  const std::vector<double>& weights() const noexcept { return weights_; }
  double bias() const noexcept { return bias_; }
  Label positive_label() const noexcept { return positive_label_; }
  Label negative_label() const noexcept { return other(positive_label_); }
  std::size_t dim() const noexcept { return weights_.size(); }
  const TrainingDiagnostics& diagnostics() const noexcept { return diagnostics_; }

  double decision_value(const SparseVector& x) const {
    if (x.dim != weights_.size()) {
      throw DataError("feature dimension " + std::to_string(x.dim) + " does not match model dimension " +
                      std::to_string(weights_.size()));
    }
    return x.dot(weights_) + bias_;
  }

  // Positive decision values map to the positive label; zero goes negative.
  Label predict(const SparseVector& x) const {
    return decision_value(x) > 0.0 ? positive_label_ : negative_label();
  }

 private:
  std::vector<double> weights_;
  double bias_ = 0.0;
  Label positive_label_ = Label::OFF;
  TrainingDiagnostics diagnostics_;
};

inline double decision_value(const LinearSvmModel& model, const SparseVector& x) {
  return model.decision_value(x);
}

inline Label predict(const LinearSvmModel& model, const SparseVector& x) { return model.predict(x); }

// L2-regularized L1-loss SVM trained by dual coordinate descent:
//
//   max_a  sum_i a_i - 1/2 ||sum_i a_i y_i x_i||^2   s.t. 0 <= a_i <= U_i
//
// where U_i is C times the label cost of example i. Each epoch visits the
// examples in a fresh seeded permutation and solves the one-variable
// subproblem exactly (clipped Newton step). No shrinking.
inline LinearSvmModel train_svm(const TrainingSet& data, const SvmConfig& config,
                                const EpochObserver& observer = {}) {
  config.validate();
  data.validate();

  const std::size_t n = data.x.size();
  const std::size_t dim = data.dim();
  const double bias_scale = config.fit_bias ? config.bias_scale : 0.0;

  std::vector<double> w(dim, 0.0);
  double w_bias = 0.0;
  std::vector<double> alpha(n, 0.0);
  std::vector<double> upper(n);
  std::vector<double> qd(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Label label = data.y[i] > 0 ? config.positive_label : other(config.positive_label);
    upper[i] = config.upper_bound(label);
    qd[i] = data.x[i].squared_norm() + bias_scale * bias_scale;
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Xoshiro256 rng(config.seed);

  TrainingDiagnostics diag;
  for (std::size_t epoch = 1; epoch <= config.max_epochs; ++epoch) {
    shuffle(std::span<std::size_t>(order), rng);
    double max_pg = 0.0;
    for (std::size_t i : order) {
      const auto& xi = data.x[i];
      const double yi = data.y[i];
      const double grad = yi * (xi.dot(w) + w_bias * bias_scale) - 1.0;

      double pg = grad;
      if (alpha[i] == 0.0) pg = std::min(grad, 0.0);
      else if (alpha[i] == upper[i]) pg = std::max(grad, 0.0);
      max_pg = std::max(max_pg, std::abs(pg));
      if (std::abs(pg) <= 1e-12) continue;

      const double old = alpha[i];
      // A zero row leaves w untouched, so the dual is linear in a_i with
      // slope -grad = 1 and the optimum sits on the upper bound.
      alpha[i] = qd[i] > 0.0 ? std::clamp(old - grad / qd[i], 0.0, upper[i])
                             : (grad < 0.0 ? upper[i] : 0.0);
      const double step = (alpha[i] - old) * yi;
      for (const auto& e : xi.entries) w[e.index] += step * e.value;
      w_bias += step * bias_scale;
    }

    double w_sq = w_bias * w_bias;
    for (double v : w) w_sq += v * v;
    const double alpha_sum = std::accumulate(alpha.begin(), alpha.end(), 0.0);
    diag.epochs = epoch;
    diag.dual_objective = alpha_sum - 0.5 * w_sq;
    diag.max_projected_gradient = max_pg;

    if (observer) {
      observer(EpochState{epoch, diag.dual_objective, max_pg, alpha, upper, w, w_bias});
    }
    if (max_pg < config.tolerance) {
      diag.converged = true;
      break;
    }
  }
  return LinearSvmModel(std::move(w), w_bias * bias_scale, config.positive_label, diag);
}

}  // namespace codemix
