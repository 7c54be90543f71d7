#pragma once

// Sentiment scoring: a phrase lexicon from co-occurrence with seed words,
// weak sentence labels from that lexicon, an elastic-net logistic classifier
// over TF-IDF features, and probability-of-positiveness scoring.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "talkmine/corpus.hpp"
#include "talkmine/elastic_net.hpp"
#include "talkmine/modes.hpp"
#include "talkmine/preprocess.hpp"

namespace talkmine {

struct SeedWordSets {
  std::set<std::string> positive{"good", "wonderful", "spectacular"};
  std::set<std::string> negative{"bad", "horrible", "awful"};

  /// Throws ConfigError unless both sets are non-empty and disjoint.
  void validate() const;
};

/// Signed, clamped hit-count ratio. Both counts get add-one smoothing, then
///   pos < neg  ->  -(neg / pos)
///   pos > neg  ->   pos / neg
///   otherwise  ->   0
/// and the result is clamped to [-10, 10]. (Despite the traditional name,
/// no logarithm is taken.)
double log_odds(std::uint64_t hit_positive_count, std::uint64_t hit_negative_count);

struct LexiconEntry {
  std::uint64_t hit_positive = 0;
  std::uint64_t hit_negative = 0;
  double ratio = 0.0;
  /// ratio / 10, in [-1, 1].
  double score = 0.0;

  bool operator==(const LexiconEntry&) const = default;
};

struct SentimentLexicon {
  std::map<std::string, LexiconEntry, std::less<>> entries;

  bool empty() const { return entries.empty(); }
  std::optional<double> score(std::string_view phrase) const;

  bool operator==(const SentimentLexicon&) const = default;
};

/// For every distinct phrase, counts its occurrences in the reference token
/// streams that have a positive (resp. negative) seed word within `window`
/// tokens before or after the phrase. Reference tokens must be lowercased
/// surface tokens (see surface_tokens). Throws DataError for an empty
/// reference corpus and std::invalid_argument for window == 0.
SentimentLexicon build_lexicon(std::span<const CandidatePhrase> phrases, const TokenDocs& reference,
                               const SeedWordSets& seeds, std::size_t window = 10);

/// TSV "phrase<TAB>hit_pos<TAB>hit_neg<TAB>ratio<TAB>score", sorted by phrase.
std::string lexicon_to_tsv(const SentimentLexicon& lexicon);
SentimentLexicon lexicon_from_tsv(std::string_view text);

enum class Polarity { negative, positive };

std::string_view to_string(Polarity p);

struct LabeledItem {
  SentenceRef ref;
  Polarity label = Polarity::negative;
  double weight = 1.0;
  /// Row of this sentence in the sentence list / feature matrix.
  std::size_t row = 0;

  bool operator==(const LabeledItem&) const = default;
};

struct LabeledSet {
  std::vector<LabeledItem> items;

  std::size_t size() const { return items.size(); }
  std::size_t count(Polarity p) const;
};

/// Mean lexicon score of the sentence's extracted phrases that the lexicon
/// knows; nullopt when there are none.
std::optional<double> phrase_score(std::string_view sentence, const SentimentLexicon& lexicon);

/// positive if the mean phrase score exceeds tau, negative if it is below
/// -tau, otherwise the sentence is left out. Throws DataError for an empty
/// lexicon.
LabeledSet weak_label(std::span<const SentenceRecord> sentences, const SentimentLexicon& lexicon, double tau = 0.2);

/// Hand labels: TSV "session_id<TAB>utterance_index<TAB>sentence_index<TAB>positive|negative".
std::vector<std::pair<SentenceRef, Polarity>> parse_label_file(std::string_view text);

/// Hand labels replace (or add to) weak labels for the sentences they name.
/// Unknown sentence references are skipped with a warning.
LabeledSet apply_label_overrides(LabeledSet weak, std::span<const SentenceRecord> sentences,
                                 std::span<const std::pair<SentenceRef, Polarity>> overrides);

/// Deterministic k-fold partition of 0..n-1: a seeded shuffle dealt out
/// round-robin, so fold sizes differ by at most one. Indices within a fold
/// are ascending. Throws DataError when n < folds or folds < 2.
std::vector<std::vector<std::size_t>> partition_folds(std::size_t n, std::size_t folds, std::uint64_t seed);

/// As partition_folds, but positives are dealt before negatives so each
/// fold gets a proportional share of both classes.
std::vector<std::vector<std::size_t>> stratified_folds(std::span<const Polarity> labels, std::size_t folds,
                                                       std::uint64_t seed);

struct TrainingOptions {
  /// Decreasing lambda values; empty means log_spaced_grid(lambda_max,
  /// lambda_count, lambda_min_ratio).
  std::vector<double> lambda_grid;
  std::size_t lambda_count = 50;
  double lambda_min_ratio = 1e-4;
  double mix = 0.5;
  std::size_t folds = 10;
  std::uint64_t seed = 0;
  SolverOptions solver;
};

struct FoldMetrics {
  std::size_t fold = 0;
  std::size_t size = 0;
  double deviance = 0.0;
  double accuracy = 0.0;

  bool operator==(const FoldMetrics&) const = default;
};

struct CvReport {
  std::vector<double> lambdas;
  /// Mean held-out deviance per lambda.
  std::vector<double> mean_deviance;
  std::size_t best_index = 0;
  /// Per-fold metrics at the chosen lambda.
  std::vector<FoldMetrics> folds;

  bool operator==(const CvReport&) const = default;
};

/// Stratified k-fold cross-validation over the lambda path. Throws
/// DataError for single-class input or fewer items than folds.
CvReport cross_validate(const LabeledSet& labeled, const WeightedMatrix& features, const TrainingOptions& options);

struct Thresholds {
  double negative_below = 0.35;
  double positive_above = 0.65;

  bool operator==(const Thresholds&) const = default;
};

enum class SentimentClass { negative, neutral, positive };

std::string_view to_string(SentimentClass c);

/// negative iff p < negative_below, positive iff p > positive_above; both
/// endpoints are neutral.
SentimentClass classify(double probability, const Thresholds& thresholds = {});

struct SentimentClassifier {
  std::vector<std::string> terms;
  std::uint64_t vocabulary_hash = 0;
  /// idf of the sentence collection the features were built from.
  std::vector<double> idf;
  std::vector<double> weights;
  double intercept = 0.0;
  double lambda = 0.0;
  double mix = 0.5;
  bool converged = false;
  CvReport cv;

  bool operator==(const SentimentClassifier&) const = default;
};

/// Cross-validates lambda, then refits on every labeled item along the
/// path down to the chosen value. Feature columns must be named by
/// `vocabulary`; `idf` is carried into the classifier for later scoring.
SentimentClassifier train_classifier(const LabeledSet& labeled, const WeightedMatrix& features,
                                     const Vocabulary& vocabulary, std::span<const double> idf,
                                     const TrainingOptions& options);

struct SentenceScore {
  SentenceRef ref;
  double probability_of_positiveness = 0.5;
  SentimentClass sentiment = SentimentClass::neutral;

  bool operator==(const SentenceScore&) const = default;
};

/// logistic(w . x + b) for a dense feature vector; std::invalid_argument on
/// a dimension mismatch.
SentenceScore score_sentence(const SentimentClassifier& classifier, std::span<const double> features,
                             const SentenceRef& ref = {}, const Thresholds& thresholds = {});

/// Tokenizes, normalizes and TF-IDF weights raw text with the classifier's
/// own vocabulary and idf, then scores it.
SentenceScore score_text(const SentimentClassifier& classifier, std::string_view text,
                         const NormalizationRules& rules, const SentenceRef& ref = {},
                         const Thresholds& thresholds = {});

std::string classifier_to_json(const SentimentClassifier& classifier);
SentimentClassifier classifier_from_json(std::string_view text);

struct ModeMention {
  std::string mode;
  /// Lexicon phrase behind the score; empty when the classifier fallback
  /// (2p - 1) was used.
  std::string phrase;
  double score = 0.0;
  SentenceRef ref;
  std::string community_label;

  bool operator==(const ModeMention&) const = default;
};

/// Every sentence mentioning a mode contributes the lexicon scores of its
/// phrases to each mode it mentions; a sentence without lexicon phrases
/// contributes 2p - 1 from `fallback_probabilities` (parallel to
/// `sentences`) when given, else nothing.
std::vector<ModeMention> mode_phrase_scores(std::span<const SentenceRecord> sentences,
                                            const SentimentLexicon& lexicon, const ModeCategoryDictionary& modes,
                                            const NormalizationRules& rules,
                                            std::span<const double> fallback_probabilities = {});

}  // namespace talkmine
