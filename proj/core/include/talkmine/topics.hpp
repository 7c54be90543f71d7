#pragma once

// Latent Dirichlet allocation fitted by collapsed Gibbs sampling.
//
// Each document mixes K topics with weights theta_d ~ Dir(alpha); each topic
// is a word distribution phi_k ~ Dir(beta). The sampler integrates theta and
// phi out and resamples one token assignment at a time from
//
//   p(z = k | rest) ∝ (n_dk + alpha) * (n_kv + beta) / (n_k + V * beta)
//
// where the counts exclude the token being resampled. Point estimates come
// from the final sweep's counts:
//
//   theta_dk = (n_dk + alpha) / (N_d + K * alpha)
//   phi_kv   = (n_kv + beta)  / (n_k + V * beta)

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "talkmine/corpus.hpp"
#include "talkmine/preprocess.hpp"
#include "talkmine/rng.hpp"

namespace talkmine {

struct LdaConfig {
  std::size_t num_topics = 5;
  double alpha = 0.1;
  double beta = 0.01;
  std::size_t iterations = 2000;
  std::size_t burn_in = 500;
  std::uint64_t seed = 0;
  /// Sweeps used when folding held-out documents in (perplexity).
  std::size_t fold_in_iterations = 100;

  /// Throws ConfigError unless K >= 1, alpha > 0, beta > 0 and
  /// iterations > burn_in.
  void validate() const;

  bool operator==(const LdaConfig&) const = default;
};

/// Sampler state; exposed so invariants can be checked between sweeps.
class GibbsSampler {
 public:
  /// Random initial assignments drawn from the sampler's own stream.
  GibbsSampler(const DocTermMatrix& dtm, const LdaConfig& config);
  /// Fixed initial assignments (one vector per document, token order as in
  /// tokens()). The RNG is still seeded from config.seed.
  GibbsSampler(const DocTermMatrix& dtm, const LdaConfig& config,
               std::vector<std::vector<std::uint32_t>> initial_assignments);

  /// One full pass over every token.
  void sweep();

  /// Unnormalized conditional for token `pos` of document `doc`, with that
  /// token's own assignment removed from the counts.
  std::vector<double> conditional(std::size_t doc, std::size_t pos) const;

  std::size_t num_topics() const { return num_topics_; }
  std::size_t num_docs() const { return words_.size(); }
  std::size_t num_terms() const { return num_terms_; }

  /// Word ids per document, expanded from the counts in column order.
  const std::vector<std::vector<std::uint32_t>>& tokens() const { return words_; }
  const std::vector<std::vector<std::uint32_t>>& assignments() const { return z_; }
  /// n_dk, row-major D x K.
  const std::vector<std::uint32_t>& doc_topic() const { return doc_topic_; }
  /// n_kv, row-major K x V.
  const std::vector<std::uint32_t>& topic_word() const { return topic_word_; }
  /// n_k.
  const std::vector<std::uint32_t>& topic_totals() const { return topic_totals_; }

 private:
  void init_counts();

  LdaConfig config_;
  std::size_t num_topics_;
  std::size_t num_terms_;
  std::vector<std::vector<std::uint32_t>> words_;
  std::vector<std::vector<std::uint32_t>> z_;
  std::vector<std::uint32_t> doc_topic_;
  std::vector<std::uint32_t> topic_word_;
  std::vector<std::uint32_t> topic_totals_;
  std::vector<double> scratch_;
  Rng rng_;
};

struct TopicModel {
  LdaConfig config;
  std::vector<std::string> doc_ids;
  std::vector<std::string> terms;
  std::uint64_t vocabulary_hash = 0;
  /// Row-major D x K.
  std::vector<double> theta;
  /// Row-major K x V.
  std::vector<double> phi;
  /// Word ids and their topic assignments, per document.
  std::vector<std::vector<std::uint32_t>> words;
  std::vector<std::vector<std::uint32_t>> z;
  std::vector<std::uint32_t> doc_topic;
  std::vector<std::uint32_t> topic_word;
  std::vector<std::uint32_t> topic_totals;

  std::size_t num_topics() const { return config.num_topics; }
  std::size_t num_docs() const { return doc_ids.size(); }
  std::size_t num_terms() const { return terms.size(); }
  std::span<const double> theta_row(std::size_t d) const {
    return {theta.data() + d * num_topics(), num_topics()};
  }
  std::span<const double> phi_row(std::size_t k) const { return {phi.data() + k * num_terms(), num_terms()}; }

  bool operator==(const TopicModel&) const = default;
};

/// Called after every sweep with the 1-based sweep number.
using SweepObserver = std::function<void(const GibbsSampler&, std::size_t)>;

/// Fits LDA on a count matrix. `terms` names the matrix columns. Empty
/// matrices throw DataError; documents without tokens keep a uniform theta
/// and are reported with a warning, as is V < K.
TopicModel fit_lda(const DocTermMatrix& dtm, std::span<const std::string> terms, const LdaConfig& config,
                   const SweepObserver& observer = {});

/// Smoothed estimates from a sampler state.
TopicModel estimate_model(const GibbsSampler& sampler, const DocTermMatrix& dtm,
                          std::span<const std::string> terms, const LdaConfig& config);

struct TopicSummary {
  std::size_t topic_id = 0;
  std::vector<std::pair<std::string, double>> top_terms;
  std::optional<std::string> label;
};

/// The n most probable terms of one topic, ties broken lexicographically.
/// Throws std::out_of_range for a bad topic id.
TopicSummary top_words(const TopicModel& model, std::size_t topic_id, std::size_t n);

/// theta row of one document; throws std::out_of_range for unknown ids.
std::vector<double> doc_topics(const TopicModel& model, std::string_view doc_id);

struct ThemePassage {
  std::string doc_id;
  std::vector<std::string> sentences;
  std::vector<SentenceRef> sentence_refs;
  /// Topic terms found in the passage's qualifying sentences, sorted.
  std::vector<std::string> matched_terms;

  bool operator==(const ThemePassage&) const = default;
};

/// Runs of sentences containing at least one topic term (compared after
/// normalization), each widened by `window` sentences of context on either
/// side within its document; overlapping widened runs are merged.
std::vector<ThemePassage> locate_theme_passages(const Corpus& corpus, const std::set<std::string>& topic_terms,
                                                std::size_t window, const NormalizationRules& rules = {});

/// exp(-sum log p(token) / N) on held-out documents, theta folded in by
/// Gibbs sampling with phi frozen. Throws DataError for a vocabulary
/// mismatch or an empty held-out set.
double perplexity(const TopicModel& model, const DocTermMatrix& held_out);

/// JSON with config, vocabulary hash, theta/phi (row-major), z and token ids.
std::string model_to_json(const TopicModel& model);
TopicModel model_from_json(std::string_view text);

}  // namespace talkmine
