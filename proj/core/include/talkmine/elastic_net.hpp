#pragma once

// Elastic-net penalized logistic regression by cyclic coordinate descent.
//
// Minimizes
//
//   F(w, b) = (1/W) sum_i u_i [log(1 + exp(eta_i)) - y_i eta_i]
//             + lambda * (mix * |w|_1 + (1 - mix) / 2 * |w|_2^2),
//   eta_i = x_i . w + b,   W = sum_i u_i,
//
// with an unpenalized intercept b. Each coordinate takes the soft-threshold
// step for a local quadratic model; when the Newton curvature fails to
// decrease F the step falls back to the global curvature bound
// (1/4W) sum u_i x_ij^2, which always does. F is therefore non-increasing
// across sweeps.

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "talkmine/preprocess.hpp"

namespace talkmine {

/// sign(z) * max(|z| - gamma, 0).
double soft_threshold(double z, double gamma);

/// Closed-form minimizer of the one-dimensional penalized quadratic:
/// soft_threshold(z, lambda * mix) / (curvature + lambda * (1 - mix)).
double coordinate_update(double z, double curvature, double lambda, double mix);

double logistic(double eta);

/// Column-compressed design matrix.
struct DesignMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<std::size_t> col_ptr{0};
  std::vector<std::size_t> row_idx;
  std::vector<double> values;

  /// Selects rows of a sparse row matrix (in the given order).
  static DesignMatrix from_rows(const WeightedMatrix& m, std::span<const std::size_t> rows);
  static DesignMatrix from_dense(const std::vector<std::vector<double>>& rows);
};

struct Coefficients {
  std::vector<double> weights;
  double intercept = 0.0;

  bool operator==(const Coefficients&) const = default;
};

struct SolverOptions {
  /// Converged once a full sweep moves no coefficient by this much.
  double tolerance = 1e-7;
  std::size_t max_sweeps = 20000;
};

struct FitResult {
  Coefficients coef;
  std::size_t sweeps = 0;
  bool converged = false;
  /// Largest coefficient change in the final sweep.
  double max_update = 0.0;
  /// F at the starting point followed by F after each sweep.
  std::vector<double> objective_trace;
};

class LogisticElasticNet {
 public:
  /// labels are 0/1; weights default to 1.
  LogisticElasticNet(DesignMatrix x, std::vector<double> labels, std::vector<double> weights = {});

  std::size_t num_features() const { return x_.cols; }
  std::size_t num_samples() const { return x_.rows; }

  /// Intercept of the weights-zero model: logit of the weighted label mean.
  double null_intercept() const;
  /// Smallest lambda for which all weights are zero at the optimum:
  /// max_j |grad_j at the null model| / max(mix, 1e-3).
  double lambda_max(double mix) const;

  double objective(const Coefficients& c, double lambda, double mix) const;
  /// Loss plus the ridge term (the differentiable part of F).
  double smooth_objective(const Coefficients& c, double lambda, double mix) const;
  /// Gradient of smooth_objective; last entry is d/db.
  std::vector<double> smooth_gradient(const Coefficients& c, double lambda, double mix) const;

  /// Runs sweeps from `start` (null model when empty).
  FitResult fit(double lambda, double mix, const Coefficients& start = {}, const SolverOptions& options = {}) const;

  /// Per-row probabilities.
  std::vector<double> predict(const Coefficients& c) const;

 private:
  std::vector<double> linear_predictor(const Coefficients& c) const;

  DesignMatrix x_;
  std::vector<double> y_;
  std::vector<double> u_;
  double total_weight_ = 0.0;
  std::vector<double> bound_;  // (1/4W) sum u_i x_ij^2 per column
};

/// count values from hi down to hi * min_ratio, evenly spaced in log scale.
std::vector<double> log_spaced_grid(double hi, std::size_t count, double min_ratio);

}  // namespace talkmine
