#pragma once

// Platt scaling: fit P(y = 1 | score) = 1 / (1 + exp(A * score + B)) by
// maximum likelihood with Platt's smoothed targets, using Newton's method with
// a backtracking line search (Lin, Lin & Weng's stable formulation).

#include <array>
#include <cmath>
#include <span>
#include <vector>

#include "pukit/common.hpp"

namespace pukit {

struct PlattParams {
  double A = 0.0;
  double B = 0.0;
};

/// Numerically stable sigmoid 1 / (1 + exp(A * score + B)).
inline double platt_probability(const PlattParams& p, double score) {
  const double f = p.A * score + p.B;
  if (f >= 0.0) {
    const double e = std::exp(-f);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(f));
}

/// Negative log-likelihood of the sigmoid over fixed scores and soft targets.
class PlattObjective {
 public:
  PlattObjective(std::span<const double> scores, std::span<const int> labels) : scores_(scores) {
    if (scores.size() != labels.size()) throw Error("platt: score and label counts differ");
    std::size_t n_pos = 0;
    for (const int y : labels) {
      if (y != 1 && y != -1) throw Error("platt: labels must be -1 or +1");
      n_pos += (y == 1);
    }
    n_pos_ = n_pos;
    n_neg_ = labels.size() - n_pos;
    const double hi = (static_cast<double>(n_pos_) + 1.0) / (static_cast<double>(n_pos_) + 2.0);
    const double lo = 1.0 / (static_cast<double>(n_neg_) + 2.0);
    targets_.reserve(labels.size());
    for (const int y : labels) targets_.push_back(y == 1 ? hi : lo);
  }

  std::size_t positives() const { return n_pos_; }
  std::size_t negatives() const { return n_neg_; }
  std::span<const double> targets() const { return targets_; }

  double value(double A, double B) const {
    double f = 0.0;
    for (std::size_t i = 0; i < scores_.size(); ++i) {
      const double z = A * scores_[i] + B;
      const double t = targets_[i];
      f += z >= 0.0 ? t * z + std::log1p(std::exp(-z)) : (t - 1.0) * z + std::log1p(std::exp(z));
    }
    return f;
  }

  /// d/dA, d/dB of value().
  std::array<double, 2> gradient(double A, double B) const {
    double gA = 0.0;
    double gB = 0.0;
    for (std::size_t i = 0; i < scores_.size(); ++i) {
      const double d = targets_[i] - platt_probability({A, B}, scores_[i]);
      gA += scores_[i] * d;
      gB += d;
    }
    return {gA, gB};
  }

 private:
  std::span<const double> scores_;
  std::vector<double> targets_;
  std::size_t n_pos_ = 0;
  std::size_t n_neg_ = 0;
};

inline PlattParams platt_fit(std::span<const double> scores, std::span<const int> labels) {
  constexpr int kMaxIter = 100;
  constexpr double kMinStep = 1e-10;
  constexpr double kSigma = 1e-12;  // keeps the Hessian positive definite
  constexpr double kEps = 1e-5;

  if (scores.size() < 4) throw Error("platt_fit: need at least four scores");
  if (!all_finite(scores)) throw Error("platt_fit: non-finite score");
  const PlattObjective objective(scores, labels);
  if (objective.positives() == 0 || objective.negatives() == 0) {
    throw Error("platt_fit: both classes must be present");
  }
  const auto targets = objective.targets();

  PlattParams p;
  p.A = 0.0;
  p.B = std::log((static_cast<double>(objective.negatives()) + 1.0) /
                 (static_cast<double>(objective.positives()) + 1.0));
  double fval = objective.value(p.A, p.B);

  for (int iter = 0; iter < kMaxIter; ++iter) {
    double h11 = kSigma;
    double h22 = kSigma;
    double h21 = 0.0;
    double g1 = 0.0;
    double g2 = 0.0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
      const double prob = platt_probability(p, scores[i]);
      const double pq = prob * (1.0 - prob);
      h11 += scores[i] * scores[i] * pq;
      h22 += pq;
      h21 += scores[i] * pq;
      const double d = targets[i] - prob;
      g1 += scores[i] * d;
      g2 += d;
    }
    if (std::abs(g1) < kEps && std::abs(g2) < kEps) return p;

    const double det = h11 * h22 - h21 * h21;
    const double dA = -(h22 * g1 - h21 * g2) / det;
    const double dB = -(-h21 * g1 + h11 * g2) / det;
    const double gd = g1 * dA + g2 * dB;

    double step = 1.0;
    bool decreased = false;
    while (step >= kMinStep) {
      const PlattParams next{p.A + step * dA, p.B + step * dB};
      const double next_f = objective.value(next.A, next.B);
      if (next_f < fval + 1e-4 * step * gd) {
        p = next;
        fval = next_f;
        decreased = true;
        break;
      }
      step /= 2.0;
    }
    if (!decreased) {
      // No decrease is representable any more; fine if the per-sample gradient is tiny.
      const double floor = 1e-6 * static_cast<double>(scores.size());
      if (std::abs(g1) < floor && std::abs(g2) < floor) return p;
      throw Error("platt_fit: line search failed to decrease the negative log-likelihood");
    }
  }
  throw Error("platt_fit: no convergence after 100 Newton steps");
}

}  // namespace pukit
