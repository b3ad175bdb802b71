#pragma once

// L2-regularized hinge-loss linear SVM trained by dual coordinate descent.
//
// The bias is learned as the weight of an implicit constant feature equal to
// one, so it is regularized together with the weights:
//
//   min  1/2 (|w|^2 + b^2) + sum_i C_i max(0, 1 - y_i (w.x_i + b))
//
// whose dual is the box-constrained QP
//
//   max  sum_i a_i - 1/2 |sum_i a_i y_i (x_i, 1)|^2,   0 <= a_i <= C_i.
//
// Each coordinate step maximizes the dual exactly along one a_i, so the dual
// objective never decreases.

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "pukit/common.hpp"
#include "pukit/features.hpp"

namespace pukit {

enum class ClassWeight {
  none,      // C_i = C
  balanced,  // C_i = C * n / (2 * n_{y_i})
};

inline std::string_view to_string(ClassWeight w) {
  return w == ClassWeight::balanced ? "balanced" : "none";
}

struct SvmHyperparams {
  double C = 0.1;
  double tol = 1e-4;
  std::size_t max_iter = 2000;
  std::uint64_t seed = 0;
  ClassWeight class_weight = ClassWeight::balanced;

  friend bool operator==(const SvmHyperparams&, const SvmHyperparams&) = default;
};

struct LinearModel {
  std::vector<double> weights;
  double bias = 0.0;
  // Probability of the positive class is 1 / (1 + exp(platt_A * score + platt_B)).
  double platt_A = -1.0;
  double platt_B = 0.0;
  SvmHyperparams hyperparams;
  FeaturizerConfig featurizer;
  bool converged = false;
  std::size_t epochs = 0;
};

/// Per-epoch diagnostics of a solver run.
struct SvmTrace {
  std::vector<double> dual_objective;  // after each epoch
  double final_violation = 0.0;        // max |projected gradient| at the returned solution
};

/// w.x + b
inline double decision_value(const LinearModel& m, std::span<const double> x) {
  if (x.size() != m.weights.size()) {
    throw Error("feature dimension " + std::to_string(x.size()) + " does not match model dimension " +
                std::to_string(m.weights.size()));
  }
  double s = m.bias;
  for (std::size_t j = 0; j < x.size(); ++j) s += m.weights[j] * x[j];
  return s;
}

namespace detail {

struct SparseRow {
  std::vector<std::uint32_t> index;
  std::vector<double> value;
  double sq_norm = 1.0;  // includes the constant bias feature
};

inline std::vector<SparseRow> sparsify(const Matrix& X) {
  std::vector<SparseRow> rows(X.rows());
  for (std::size_t i = 0; i < X.rows(); ++i) {
    const auto r = X.row(i);
    for (std::size_t j = 0; j < r.size(); ++j) {
      if (r[j] != 0.0) {
        rows[i].index.push_back(static_cast<std::uint32_t>(j));
        rows[i].value.push_back(r[j]);
        rows[i].sq_norm += r[j] * r[j];
      }
    }
  }
  return rows;
}

inline double projected_gradient(double g, double alpha, double upper) {
  if (alpha <= 0.0) return std::min(g, 0.0);
  if (alpha >= upper) return std::max(g, 0.0);
  return g;
}

}  // namespace detail

/// Trains on rows of `X` with labels in {-1, +1}. Stops when the largest
/// projected-gradient violation falls below `hp.tol` or after `hp.max_iter`
/// epochs; in the latter case the model comes back with `converged == false`.
inline LinearModel train_linear_svm(const Matrix& X, std::span<const int> labels,
                                    const SvmHyperparams& hp, SvmTrace* trace = nullptr) {
  const std::size_t n = X.rows();
  const std::size_t d = X.cols();
  if (labels.size() != n) throw Error("train_linear_svm: label count does not match rows");
  if (n < 2) throw Error("train_linear_svm: need at least two rows");
  if (!(hp.C > 0.0) || !(hp.tol > 0.0) || hp.max_iter == 0) {
    throw Error("train_linear_svm: C, tol and max_iter must be positive");
  }
  if (!all_finite(X.data())) throw Error("train_linear_svm: non-finite features");

  std::size_t n_pos = 0;
  for (const int y : labels) {
    if (y != 1 && y != -1) throw Error("train_linear_svm: labels must be -1 or +1");
    n_pos += (y == 1);
  }
  const std::size_t n_neg = n - n_pos;
  if (n_pos == 0 || n_neg == 0) throw Error("train_linear_svm: both classes must be present");

  double upper_pos = hp.C;
  double upper_neg = hp.C;
  if (hp.class_weight == ClassWeight::balanced) {
    upper_pos = hp.C * static_cast<double>(n) / (2.0 * static_cast<double>(n_pos));
    upper_neg = hp.C * static_cast<double>(n) / (2.0 * static_cast<double>(n_neg));
  }

  const std::vector<detail::SparseRow> rows = detail::sparsify(X);
  std::vector<double> alpha(n, 0.0);
  std::vector<double> w(d, 0.0);
  double b = 0.0;

  const auto margin_gradient = [&](std::size_t i) {
    const auto& r = rows[i];
    double s = b;
    for (std::size_t k = 0; k < r.index.size(); ++k) s += w[r.index[k]] * r.value[k];
    return labels[i] * s - 1.0;
  };
  const auto upper_of = [&](std::size_t i) { return labels[i] == 1 ? upper_pos : upper_neg; };
  const auto dual_objective = [&] {
    double sum_alpha = 0.0;
    for (const double a : alpha) sum_alpha += a;
    double sq = b * b;
    for (const double v : w) sq += v * v;
    return sum_alpha - 0.5 * sq;
  };
  const auto max_violation = [&] {
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      worst = std::max(worst, std::abs(detail::projected_gradient(margin_gradient(i), alpha[i],
                                                                  upper_of(i))));
    }
    return worst;
  };

  Rng rng(hp.seed);
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;

  LinearModel model;
  model.hyperparams = hp;
  [[maybe_unused]] double previous = 0.0;

  for (std::size_t epoch = 1; epoch <= hp.max_iter; ++epoch) {
    rng.shuffle(std::span<std::size_t>(order));
    double sweep_violation = 0.0;
    for (const std::size_t i : order) {
      const double g = margin_gradient(i);
      const double upper = upper_of(i);
      const double pg = detail::projected_gradient(g, alpha[i], upper);
      sweep_violation = std::max(sweep_violation, std::abs(pg));
      if (pg == 0.0) continue;
      const double old = alpha[i];
      alpha[i] = std::clamp(old - g / rows[i].sq_norm, 0.0, upper);
      const double delta = (alpha[i] - old) * labels[i];
      if (delta == 0.0) continue;
      const auto& r = rows[i];
      for (std::size_t k = 0; k < r.index.size(); ++k) w[r.index[k]] += delta * r.value[k];
      b += delta;
    }

    const double objective = dual_objective();
    assert(epoch == 1 || objective >= previous - 1e-9 * std::max(1.0, std::abs(previous)));
    previous = objective;
    if (trace) trace->dual_objective.push_back(objective);
    model.epochs = epoch;

    if (sweep_violation < hp.tol && max_violation() < hp.tol) {
      model.converged = true;
      break;
    }
  }

  if (trace) trace->final_violation = max_violation();
  model.weights = std::move(w);
  model.bias = b;
  return model;
}

}  // namespace pukit
