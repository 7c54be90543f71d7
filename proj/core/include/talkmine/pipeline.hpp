#pragma once

// Batch driver: configuration, the ingest -> topics -> sentiment -> report
// stages, and report emission. Every stage reads its inputs from the
// artifacts of earlier stages under the output directory, so running the
// stages one by one gives the same bytes as a single `run`.
//
// Output layout:
//   ingest/transcripts/NNNN.txt   canonical transcripts, input order
//   ingest/corpus.jsonl
//   topics/<community>/model.json
//   sentiment/lexicon.tsv, labels.tsv, classifier.json, scores.tsv
//   report/...                    see emit_report

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "talkmine/analysis.hpp"
#include "talkmine/corpus.hpp"
#include "talkmine/modes.hpp"
#include "talkmine/preprocess.hpp"
#include "talkmine/sentiment.hpp"
#include "talkmine/topics.hpp"

namespace talkmine {

inline constexpr std::string_view kVersion = "0.1.0";

enum class ReportFormat { csv, json, both };

std::string_view to_string(ReportFormat f);
ReportFormat parse_report_format(std::string_view text);

struct SentimentSettings {
  SeedWordSets seeds;
  std::size_t window = 10;
  double tau = 0.2;
  TrainingOptions training;
  Thresholds thresholds;
  /// Extra reference text for the lexicon, one document per line.
  std::optional<std::filesystem::path> reference_corpus;
  /// Hand labels overriding the weak labels.
  std::optional<std::filesystem::path> labels_file;
};

struct PipelineConfig {
  std::vector<std::filesystem::path> inputs;
  std::filesystem::path output = "out";
  ReportFormat format = ReportFormat::csv;
  std::uint64_t seed = 1;
  GroupingPolicy grouping = GroupingPolicy::per_utterance;
  FormatConfig transcript_format;
  SegmentationConfig segmentation;
  NormalizationRules rules;
  std::size_t min_df = 1;
  LdaConfig lda;
  std::size_t top_n = 10;
  /// Top terms per topic used to locate theme passages.
  std::size_t passage_terms = 3;
  std::size_t passage_window = 1;
  SentimentSettings sentiment;
  ModeCategoryDictionary modes = ModeCategoryDictionary::defaults();
  bool include_t4 = false;
  AveragingUnit mu_unit = AveragingUnit::sentence;
  /// Content fingerprints of referenced files, folded into the config hash.
  std::vector<std::pair<std::string, std::uint64_t>> file_hashes;
};

/// Parses key=value text. Relative paths resolve against `base_dir`.
/// Errors (ConfigError) name the key and the 1-based line.
PipelineConfig parse_config(std::string_view text, const std::filesystem::path& base_dir);
/// Reads and parses a config file, then checks that referenced files exist.
PipelineConfig validate_config(const std::filesystem::path& path);

/// Canonical dump of every setting that affects results (paths excluded).
std::string canonical_config(const PipelineConfig& config);
std::uint64_t config_hash(const PipelineConfig& config);

/// Transcript files named by the inputs: files as given, directories
/// expanded to their *.txt entries in name order.
std::vector<std::filesystem::path> expand_inputs(std::span<const std::filesystem::path> inputs);

struct CommunityTopics {
  std::string community_label;
  std::vector<TopicSummary> topics;
  /// Parallel to `topics`.
  std::vector<std::vector<ThemePassage>> passages;
};

struct RunManifest {
  std::string version{kVersion};
  std::uint64_t seed = 0;
  std::uint64_t config_hash = 0;
  /// (session id, fingerprint of the canonical transcript), input order.
  std::vector<std::pair<std::string, std::uint64_t>> inputs;
};

struct CommunityModeTable {
  std::string community_label;
  std::vector<ModeSentimentRow> rows;
};

struct ReportBundle {
  std::vector<CommunityTopics> topics;
  SentimentLexicon lexicon;
  SentimentClassifier classifier;
  std::vector<SpeakerReport> speakers;
  std::vector<TopicSentimentReport> topic_mu;
  std::vector<CommunityModeTable> mode_tables;
  RunManifest manifest;
};

/// Holds <output>/.lock for its lifetime; throws ConfigError when another
/// process owns the directory.
class OutputLock {
 public:
  explicit OutputLock(const std::filesystem::path& output_dir);
  ~OutputLock();
  OutputLock(const OutputLock&) = delete;
  OutputLock& operator=(const OutputLock&) = delete;

 private:
  std::filesystem::path path_;
};

void run_ingest(const PipelineConfig& config);
void run_topics(const PipelineConfig& config);
void run_sentiment(const PipelineConfig& config);
/// Builds the bundle from persisted artifacts and writes report/.
ReportBundle run_report(const PipelineConfig& config);
/// All stages in order. On failure the stage directories written by this
/// call are removed.
ReportBundle run_pipeline(const PipelineConfig& config);

/// Writes into `dir`:
///   csv:  topic_mu.csv, <community>/speakers.csv, <community>/mode_table.csv,
///         plot_T1.json..plot_T3.json, topics.json, manifest.json
///   json: bundle.json
///   both: all of the above
void emit_report(const ReportBundle& bundle, ReportFormat format, const std::filesystem::path& dir);

std::string manifest_json(const RunManifest& manifest);
std::string topics_json(const std::vector<CommunityTopics>& topics);
/// Per-speaker utterance means for one discussion topic, by community.
std::string plot_json(std::span<const SpeakerReport> speakers, DiscussionTopic topic);
std::string bundle_json(const ReportBundle& bundle);

}  // namespace talkmine
