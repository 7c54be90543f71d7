#pragma once

// Synthetic data for tests: an LDA generative sampler with known topics,
// random count matrices and random scored sentences.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "talkmine/analysis.hpp"
#include "talkmine/preprocess.hpp"
#include "talkmine/rng.hpp"
#include "talkmine/topics.hpp"

namespace talkmine::testing {

inline double standard_normal(Rng& rng) {
  // Box-Muller; 1 - u keeps the log argument away from zero.
  const double u1 = 1.0 - rng.uniform01();
  const double u2 = rng.uniform01();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

// Marsaglia-Tsang, with the shape < 1 boost.
inline double gamma_draw(Rng& rng, double shape) {
  if (shape < 1.0) {
    const double u = 1.0 - rng.uniform01();
    return gamma_draw(rng, shape + 1.0) * std::pow(u, 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x;
    double v;
    do {
      x = standard_normal(rng);
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = 1.0 - rng.uniform01();
    if (std::log(u) < 0.5 * x * x + d - d * v + d * std::log(v)) return d * v;
  }
}

inline std::vector<double> dirichlet(Rng& rng, std::size_t n, double concentration) {
  std::vector<double> g(n);
  double sum = 0.0;
  for (auto& x : g) {
    x = gamma_draw(rng, concentration);
    sum += x;
  }
  if (sum == 0.0) {
    g[rng.uniform_index(n)] = 1.0;
    return g;
  }
  for (auto& x : g) x /= sum;
  return g;
}

inline std::size_t categorical(Rng& rng, const std::vector<double>& p) {
  const double u = rng.uniform01();
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    acc += p[i];
    if (u < acc) return i;
  }
  return p.size() - 1;
}

struct SyntheticLda {
  DocTermMatrix dtm;
  std::vector<std::string> terms;
  /// K x V, each topic supported on its own block of V / K words.
  std::vector<std::vector<double>> phi;
};

inline SyntheticLda make_disjoint_lda(std::size_t docs, std::size_t vocab, std::size_t topics, double alpha,
                                      std::size_t min_len, std::size_t max_len, std::uint64_t seed) {
  Rng rng(seed);
  SyntheticLda s;
  const std::size_t block = vocab / topics;
  for (std::size_t k = 0; k < topics; ++k) {
    std::vector<double> row(vocab, 0.0);
    const auto w = dirichlet(rng, block, 1.0);
    for (std::size_t j = 0; j < block; ++j) row[k * block + j] = w[j];
    s.phi.push_back(std::move(row));
  }
  std::vector<std::vector<std::uint32_t>> counts(docs, std::vector<std::uint32_t>(vocab, 0));
  for (std::size_t d = 0; d < docs; ++d) {
    const auto theta = dirichlet(rng, topics, alpha);
    const std::size_t len = min_len + rng.uniform_index(max_len - min_len + 1);
    for (std::size_t i = 0; i < len; ++i) ++counts[d][categorical(rng, s.phi[categorical(rng, theta)])];
  }
  s.dtm = DocTermMatrix::from_dense(counts, vocab);
  for (std::size_t v = 0; v < vocab; ++v) s.terms.push_back("w" + std::to_string(v));
  return s;
}

inline double total_variation(std::span<const double> p, std::span<const double> q) {
  double d = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) d += std::abs(p[i] - q[i]);
  return 0.5 * d;
}

/// Greedy one-to-one alignment of estimated to true topics by smallest
/// total-variation distance; returns the distance of each matched pair.
inline std::vector<double> aligned_distances(const std::vector<std::vector<double>>& truth,
                                             const TopicModel& model) {
  const std::size_t K = truth.size();
  std::vector<bool> used_true(K, false);
  std::vector<bool> used_est(model.num_topics(), false);
  std::vector<double> out;
  for (std::size_t round = 0; round < K; ++round) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t bt = 0;
    std::size_t be = 0;
    for (std::size_t t = 0; t < K; ++t) {
      if (used_true[t]) continue;
      for (std::size_t e = 0; e < model.num_topics(); ++e) {
        if (used_est[e]) continue;
        const double d = total_variation(truth[t], model.phi_row(e));
        if (d < best) {
          best = d;
          bt = t;
          be = e;
        }
      }
    }
    used_true[bt] = true;
    used_est[be] = true;
    out.push_back(best);
  }
  return out;
}

/// Random count matrix; roughly `density` of the entries are non-zero.
inline DocTermMatrix random_counts(Rng& rng, std::size_t rows, std::size_t cols, double density) {
  std::vector<std::vector<std::uint32_t>> dense(rows, std::vector<std::uint32_t>(cols, 0));
  for (auto& r : dense) {
    for (auto& v : r) {
      if (rng.uniform01() < density) v = 1 + static_cast<std::uint32_t>(rng.uniform_index(9));
    }
  }
  return DocTermMatrix::from_dense(dense, cols);
}

inline std::vector<ScoredSentence> random_scores(Rng& rng, std::size_t n) {
  static const char* communities[] = {"HP", "EV"};
  static const char* sessions[] = {"S1", "S2", "S3"};
  const DiscussionTopic topics[] = {DiscussionTopic::T1, DiscussionTopic::T2, DiscussionTopic::T3,
                                    DiscussionTopic::T4, DiscussionTopic::untagged};
  std::vector<ScoredSentence> out;
  for (std::size_t i = 0; i < n; ++i) {
    ScoredSentence s;
    s.community_label = communities[rng.uniform_index(2)];
    s.ref.session_id = sessions[rng.uniform_index(3)];
    s.ref.utterance_index = rng.uniform_index(12);
    s.ref.sentence_index = i;
    s.speaker_id = s.ref.session_id + "-P" + std::to_string(s.ref.utterance_index % 5);
    s.discussion_topic = topics[rng.uniform_index(5)];
    s.probability = rng.uniform01();
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace talkmine::testing
