#pragma once

// Aggregation of sentence probabilities into per-speaker, per-topic and
// per-mode reports, plus their CSV / plot-data renderings.
//
// All sums run left to right over values sorted ascending, so every report
// is bit-identical under any permutation of its input.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "talkmine/corpus.hpp"
#include "talkmine/sentiment.hpp"

namespace talkmine {

struct ScoredSentence {
  SentenceRef ref;
  std::string community_label;
  std::string speaker_id;
  DiscussionTopic discussion_topic = DiscussionTopic::untagged;
  double probability = 0.5;

  bool operator==(const ScoredSentence&) const = default;
};

/// Mean of `values` summed in ascending order; nullopt when empty.
std::optional<double> ordered_mean(std::vector<double> values);
/// Sample (n - 1) standard deviation; nullopt for fewer than two values.
std::optional<double> sample_std_dev(std::vector<double> values);

struct SpeakerReport {
  std::string community_label;
  /// Topic the report is restricted to; nullopt covers all topics.
  std::optional<DiscussionTopic> discussion_topic;
  std::string session_id;
  std::string speaker_id;
  /// Mean probability of each utterance, in turn order.
  std::vector<double> utterance_means;
  /// Mean over the speaker's scored sentences.
  double mean = 0.0;
  std::size_t count = 0;

  bool operator==(const SpeakerReport&) const = default;
};

/// One report per (community, session, speaker) among the sentences whose
/// topic matches `topic` (all sentences when nullopt), sorted by those keys.
std::vector<SpeakerReport> speaker_positiveness(std::span<const ScoredSentence> scores,
                                                std::optional<DiscussionTopic> topic = std::nullopt);

enum class AveragingUnit { sentence, utterance };

std::string_view to_string(AveragingUnit unit);
AveragingUnit parse_averaging_unit(std::string_view text);

struct TopicSentimentReport {
  DiscussionTopic discussion_topic = DiscussionTopic::T1;
  std::string community_label;
  double mu = 0.0;
  /// Number of averaged units (sentences or utterances).
  std::size_t count = 0;

  bool operator==(const TopicSentimentReport&) const = default;
};

/// mu per (topic, community) cell, sorted by topic then community.
/// Untagged sentences never form a cell; T4 only when include_t4.
std::vector<TopicSentimentReport> topic_mean_positiveness(std::span<const ScoredSentence> scores,
                                                          bool include_t4 = false,
                                                          AveragingUnit unit = AveragingUnit::sentence);

struct ModeSentimentRow {
  std::string mode;
  std::optional<double> mean;
  std::optional<double> std_dev;
  std::size_t count = 0;

  bool operator==(const ModeSentimentRow&) const = default;
};

/// One row per mode name, in the given order; modes without scores get
/// count 0 and null statistics. Mentions naming other modes are ignored.
std::vector<ModeSentimentRow> mode_sentiment_table(std::span<const ModeMention> mentions,
                                                   std::span<const std::string> mode_names);

/// "discussion_topic,community_label,mu"
std::string topic_mu_csv(std::span<const TopicSentimentReport> rows);
/// "mode,mean,std_dev,count"; null statistics are empty fields.
std::string mode_table_csv(std::span<const ModeSentimentRow> rows);
/// "discussion_topic,session_id,speaker_id,utterance_means,mean,count";
/// utterance means joined by ';', topic "all" when unrestricted.
std::string speakers_csv(std::span<const SpeakerReport> rows);

/// Value as it appears in the CSV reports (6 decimals), re-read as a double.
double report_value(double v);

}  // namespace talkmine
