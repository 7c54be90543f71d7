#include "talkmine/elastic_net.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace talkmine {

double soft_threshold(double z, double gamma) {
  if (z > gamma) return z - gamma;
  if (z < -gamma) return z + gamma;
  return 0.0;
}

double coordinate_update(double z, double curvature, double lambda, double mix) {
  return soft_threshold(z, lambda * mix) / (curvature + lambda * (1.0 - mix));
}

double logistic(double eta) {
  if (eta >= 0) return 1.0 / (1.0 + std::exp(-eta));
  const double e = std::exp(eta);
  return e / (1.0 + e);
}

namespace {

// log(1 + exp(t)) without overflow.
double softplus(double t) { return std::max(t, 0.0) + std::log1p(std::exp(-std::abs(t))); }

}  // namespace

DesignMatrix DesignMatrix::from_rows(const WeightedMatrix& m, std::span<const std::size_t> rows) {
  DesignMatrix d;
  d.rows = rows.size();
  d.cols = m.num_cols;
  std::vector<std::size_t> counts(m.num_cols, 0);
  for (auto r : rows) {
    for (auto c : m.row_cols(r)) ++counts[c];
  }
  d.col_ptr.assign(m.num_cols + 1, 0);
  for (std::size_t c = 0; c < m.num_cols; ++c) d.col_ptr[c + 1] = d.col_ptr[c] + counts[c];
  d.row_idx.resize(d.col_ptr.back());
  d.values.resize(d.col_ptr.back());
  std::vector<std::size_t> next(d.col_ptr.begin(), d.col_ptr.end() - 1);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto cols = m.row_cols(rows[i]);
    const auto vals = m.row_vals(rows[i]);
    for (std::size_t k = 0; k < cols.size(); ++k) {
      const auto pos = next[cols[k]]++;
      d.row_idx[pos] = i;
      d.values[pos] = vals[k];
    }
  }
  return d;
}

DesignMatrix DesignMatrix::from_dense(const std::vector<std::vector<double>>& rows) {
  WeightedMatrix m;
  m.num_cols = rows.empty() ? 0 : rows.front().size();
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (row[c] != 0.0) {
        m.col.push_back(c);
        m.val.push_back(row[c]);
      }
    }
    m.row_ptr.push_back(m.col.size());
  }
  std::vector<std::size_t> all(rows.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  return from_rows(m, all);
}

LogisticElasticNet::LogisticElasticNet(DesignMatrix x, std::vector<double> labels, std::vector<double> weights)
    : x_(std::move(x)), y_(std::move(labels)), u_(std::move(weights)) {
  if (y_.size() != x_.rows) throw std::invalid_argument("label count does not match design rows");
  if (u_.empty()) u_.assign(x_.rows, 1.0);
  if (u_.size() != x_.rows) throw std::invalid_argument("weight count does not match design rows");
  for (double v : y_) {
    if (v != 0.0 && v != 1.0) throw std::invalid_argument("labels must be 0 or 1");
  }
  for (double v : u_) total_weight_ += v;
  if (!(total_weight_ > 0)) throw std::invalid_argument("total observation weight must be positive");
  bound_.assign(x_.cols, 0.0);
  for (std::size_t j = 0; j < x_.cols; ++j) {
    double s = 0.0;
    for (std::size_t k = x_.col_ptr[j]; k < x_.col_ptr[j + 1]; ++k) {
      s += u_[x_.row_idx[k]] * x_.values[k] * x_.values[k];
    }
    bound_[j] = 0.25 * s / total_weight_;
  }
}

double LogisticElasticNet::null_intercept() const {
  double pos = 0.0;
  for (std::size_t i = 0; i < y_.size(); ++i) pos += u_[i] * y_[i];
  const double mean = pos / total_weight_;
  if (mean <= 0.0 || mean >= 1.0) return 0.0;
  return std::log(mean / (1.0 - mean));
}

double LogisticElasticNet::lambda_max(double mix) const {
  const double p = logistic(null_intercept());
  double best = 0.0;
  for (std::size_t j = 0; j < x_.cols; ++j) {
    double g = 0.0;
    for (std::size_t k = x_.col_ptr[j]; k < x_.col_ptr[j + 1]; ++k) {
      const auto i = x_.row_idx[k];
      g += u_[i] * x_.values[k] * (p - y_[i]);
    }
    best = std::max(best, std::abs(g / total_weight_));
  }
  // The relative margin keeps lambda * mix >= max |grad| despite rounding.
  return best / std::max(mix, 1e-3) * (1.0 + 1e-12);
}

std::vector<double> LogisticElasticNet::linear_predictor(const Coefficients& c) const {
  std::vector<double> eta(x_.rows, c.intercept);
  for (std::size_t j = 0; j < x_.cols; ++j) {
    const double w = c.weights.empty() ? 0.0 : c.weights[j];
    if (w == 0.0) continue;
    for (std::size_t k = x_.col_ptr[j]; k < x_.col_ptr[j + 1]; ++k) eta[x_.row_idx[k]] += x_.values[k] * w;
  }
  return eta;
}

double LogisticElasticNet::smooth_objective(const Coefficients& c, double lambda, double mix) const {
  const auto eta = linear_predictor(c);
  double loss = 0.0;
  for (std::size_t i = 0; i < eta.size(); ++i) loss += u_[i] * (softplus(eta[i]) - y_[i] * eta[i]);
  double ridge = 0.0;
  for (double w : c.weights) ridge += w * w;
  return loss / total_weight_ + lambda * (1.0 - mix) / 2.0 * ridge;
}

double LogisticElasticNet::objective(const Coefficients& c, double lambda, double mix) const {
  double l1 = 0.0;
  for (double w : c.weights) l1 += std::abs(w);
  return smooth_objective(c, lambda, mix) + lambda * mix * l1;
}

std::vector<double> LogisticElasticNet::smooth_gradient(const Coefficients& c, double lambda, double mix) const {
  const auto eta = linear_predictor(c);
  std::vector<double> residual(eta.size());
  double gb = 0.0;
  for (std::size_t i = 0; i < eta.size(); ++i) {
    residual[i] = u_[i] * (logistic(eta[i]) - y_[i]);
    gb += residual[i];
  }
  std::vector<double> grad(x_.cols + 1, 0.0);
  for (std::size_t j = 0; j < x_.cols; ++j) {
    double g = 0.0;
    for (std::size_t k = x_.col_ptr[j]; k < x_.col_ptr[j + 1]; ++k) g += x_.values[k] * residual[x_.row_idx[k]];
    const double w = c.weights.empty() ? 0.0 : c.weights[j];
    grad[j] = g / total_weight_ + lambda * (1.0 - mix) * w;
  }
  grad[x_.cols] = gb / total_weight_;
  return grad;
}

std::vector<double> LogisticElasticNet::predict(const Coefficients& c) const {
  auto eta = linear_predictor(c);
  for (auto& e : eta) e = logistic(e);
  return eta;
}

FitResult LogisticElasticNet::fit(double lambda, double mix, const Coefficients& start,
                                  const SolverOptions& options) const {
  if (lambda < 0 || mix < 0 || mix > 1) throw std::invalid_argument("lambda must be >= 0 and mix in [0, 1]");
  FitResult result;
  auto& coef = result.coef;
  if (start.weights.empty()) {
    coef.weights.assign(x_.cols, 0.0);
    coef.intercept = null_intercept();
  } else {
    if (start.weights.size() != x_.cols) throw std::invalid_argument("warm start has the wrong dimension");
    coef = start;
  }

  const double W = total_weight_;
  auto eta = linear_predictor(coef);
  std::vector<double> p(eta.size());
  for (std::size_t i = 0; i < eta.size(); ++i) p[i] = logistic(eta[i]);

  const double l1 = lambda * mix;
  const double l2 = lambda * (1.0 - mix);
  auto penalty = [&](double w) { return l1 * std::abs(w) + 0.5 * l2 * w * w; };

  result.objective_trace.push_back(objective(coef, lambda, mix));

  // Change in F from moving coefficient j (column entries [lo, hi)) by delta.
  auto column_delta = [&](std::size_t lo, std::size_t hi, double delta, double w_old) {
    double d = 0.0;
    for (std::size_t k = lo; k < hi; ++k) {
      const auto i = x_.row_idx[k];
      const double step = delta * x_.values[k];
      d += u_[i] * (softplus(eta[i] + step) - softplus(eta[i]) - y_[i] * step);
    }
    return d / W + penalty(w_old + delta) - penalty(w_old);
  };

  for (std::size_t sweep = 0; sweep < options.max_sweeps; ++sweep) {
    double max_update = 0.0;

    for (std::size_t j = 0; j < x_.cols; ++j) {
      const std::size_t lo = x_.col_ptr[j];
      const std::size_t hi = x_.col_ptr[j + 1];
      if (lo == hi) continue;
      double g = 0.0;
      double h = 0.0;
      for (std::size_t k = lo; k < hi; ++k) {
        const auto i = x_.row_idx[k];
        const double xv = x_.values[k];
        g += u_[i] * xv * (p[i] - y_[i]);
        h += u_[i] * p[i] * (1.0 - p[i]) * xv * xv;
      }
      g /= W;
      h /= W;
      const double w_old = coef.weights[j];

      double delta = 0.0;
      if (h > 1e-12) {
        const double candidate = coordinate_update(h * w_old - g, h, lambda, mix) - w_old;
        if (candidate != 0.0 && column_delta(lo, hi, candidate, w_old) <= 0.0) delta = candidate;
      }
      if (delta == 0.0) {
        const double candidate = coordinate_update(bound_[j] * w_old - g, bound_[j], lambda, mix) - w_old;
        if (candidate != 0.0 && column_delta(lo, hi, candidate, w_old) <= 0.0) delta = candidate;
      }
      if (delta == 0.0) continue;

      coef.weights[j] = w_old + delta;
      max_update = std::max(max_update, std::abs(delta));
      for (std::size_t k = lo; k < hi; ++k) {
        const auto i = x_.row_idx[k];
        eta[i] += delta * x_.values[k];
        p[i] = logistic(eta[i]);
      }
    }

    // Intercept.
    {
      double g = 0.0;
      double h = 0.0;
      for (std::size_t i = 0; i < eta.size(); ++i) {
        g += u_[i] * (p[i] - y_[i]);
        h += u_[i] * p[i] * (1.0 - p[i]);
      }
      g /= W;
      h /= W;
      auto loss_delta = [&](double delta) {
        double d = 0.0;
        for (std::size_t i = 0; i < eta.size(); ++i) {
          d += u_[i] * (softplus(eta[i] + delta) - softplus(eta[i]) - y_[i] * delta);
        }
        return d / W;
      };
      double delta = 0.0;
      if (h > 1e-12) {
        const double candidate = -g / h;
        if (candidate != 0.0 && loss_delta(candidate) <= 0.0) delta = candidate;
      }
      if (delta == 0.0 && g != 0.0) {
        const double candidate = -g / 0.25;
        if (loss_delta(candidate) <= 0.0) delta = candidate;
      }
      if (delta != 0.0) {
        coef.intercept += delta;
        max_update = std::max(max_update, std::abs(delta));
        for (std::size_t i = 0; i < eta.size(); ++i) {
          eta[i] += delta;
          p[i] = logistic(eta[i]);
        }
      }
    }

    result.sweeps = sweep + 1;
    result.max_update = max_update;
    result.objective_trace.push_back(objective(coef, lambda, mix));
    if (max_update < options.tolerance) {
      result.converged = true;
      break;
    }
  }
  return result;
}

std::vector<double> log_spaced_grid(double hi, std::size_t count, double min_ratio) {
  if (count == 0) return {};
  if (!(hi > 0)) return std::vector<double>(count, 0.0);
  if (count == 1) return {hi};
  std::vector<double> grid(count);
  const double log_hi = std::log(hi);
  const double log_lo = std::log(hi * min_ratio);
  for (std::size_t i = 0; i < count; ++i) {
    grid[i] = std::exp(log_hi + (log_lo - log_hi) * static_cast<double>(i) / static_cast<double>(count - 1));
  }
  grid.front() = hi;
  return grid;
}

}  // namespace talkmine
