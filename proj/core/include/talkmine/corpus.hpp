#pragma once

// Focus-group transcripts: parsing, moderator removal, sentence segmentation
// and corpus assembly.
//
// Transcript file format (UTF-8, LF):
//
//   # comment
//   @session: HP-1
//   @community: HP
//   @topic: T1
//   MOD1<TAB>Welcome everyone.
//   P03<TAB>I walk daily.
//   P05<TAB>[es] Me gusta caminar.
//
// `@topic` applies to every following turn until the next `@topic`.

#include <compare>
#include <cstddef>
#include <filesystem>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace talkmine {

enum class Role { participant, moderator };
enum class DiscussionTopic { T1, T2, T3, T4, untagged };
enum class LanguageTag { primary, translated };

std::string_view to_string(DiscussionTopic topic);
/// Accepts "T1".."T4" and "none"/"untagged"; throws DataError otherwise.
DiscussionTopic parse_discussion_topic(std::string_view text);

struct Utterance {
  std::string speaker_id;
  Role role = Role::participant;
  std::string session_id;
  DiscussionTopic discussion_topic = DiscussionTopic::untagged;
  LanguageTag language_tag = LanguageTag::primary;
  std::string text;
  /// Position of this turn in the source file's turn sequence.
  std::size_t index = 0;

  bool operator==(const Utterance&) const = default;
};

struct Transcript {
  std::string session_id;
  std::string community_label;
  std::vector<Utterance> utterances;

  bool operator==(const Transcript&) const = default;
};

struct FormatConfig {
  std::string moderator_prefix = "MOD";
};

/// Parses one transcript. Throws ParseError (with 1-based line number) for a
/// turn line without a tab or with empty text, FormatError for repeated
/// @session or unknown directives.
Transcript parse_transcript(std::string_view raw, const FormatConfig& format = {});
Transcript load_transcript(const std::filesystem::path& path, const FormatConfig& format = {});

/// Canonical text form; parse_transcript(serialize_transcript(t)) == t for
/// any transcript produced by parse_transcript.
std::string serialize_transcript(const Transcript& transcript);

/// Participant turns only, in their original order (indices preserved).
Transcript strip_moderator(const Transcript& transcript);

struct SegmentationConfig {
  std::set<std::string> abbreviations{"Dr.", "Mr.", "Mrs.", "Ms.", "St.", "e.g.", "i.e."};
};

/// Splits on '.', '!' or '?' followed by whitespace unless the word ending
/// at the punctuation is a guarded abbreviation. Sentences are trimmed.
std::vector<std::string> segment_sentences(std::string_view text,
                                           const SegmentationConfig& config = {});

/// Addresses one sentence of one participant turn.
struct SentenceRef {
  std::string session_id;
  std::size_t utterance_index = 0;
  std::size_t sentence_index = 0;

  auto operator<=>(const SentenceRef&) const = default;
  bool operator==(const SentenceRef&) const = default;
};

struct SourceRef {
  std::string session_id;
  std::size_t utterance_index = 0;

  auto operator<=>(const SourceRef&) const = default;
  bool operator==(const SourceRef&) const = default;
};

enum class GroupingPolicy { per_utterance, per_speaker, per_session_topic };

std::string_view to_string(GroupingPolicy policy);
GroupingPolicy parse_grouping_policy(std::string_view text);

struct Document {
  std::string doc_id;
  std::string community_label;
  std::vector<SourceRef> source_refs;
  std::vector<std::string> sentences;
  /// Parallel to `sentences`.
  std::vector<SentenceRef> sentence_refs;

  bool operator==(const Document&) const = default;
};

struct Corpus {
  std::vector<Document> documents;
  GroupingPolicy grouping_policy = GroupingPolicy::per_utterance;

  bool empty() const { return documents.empty(); }
  std::size_t size() const { return documents.size(); }
  /// Documents of one community, in corpus order.
  Corpus community(std::string_view label) const;
  /// Distinct community labels in first-seen order.
  std::vector<std::string> communities() const;

  bool operator==(const Corpus&) const = default;
};

/// Groups moderator-stripped transcripts into documents. Throws DataError
/// for an empty transcript list, repeated session ids, or when no
/// participant text remains.
Corpus build_corpus(const std::vector<Transcript>& transcripts, GroupingPolicy policy,
                    const SegmentationConfig& segmentation = {});

/// One participant sentence with the metadata the sentiment and analysis
/// stages need.
struct SentenceRecord {
  SentenceRef ref;
  std::string community_label;
  std::string speaker_id;
  DiscussionTopic discussion_topic = DiscussionTopic::untagged;
  std::string text;
};

/// Every participant sentence, ordered by (session file order, turn, sentence).
std::vector<SentenceRecord> collect_sentences(const std::vector<Transcript>& transcripts,
                                              const SegmentationConfig& segmentation = {});

/// JSON-lines export: one object per document with doc_id, community,
/// source_refs and sentences.
std::string corpus_to_jsonl(const Corpus& corpus);
Corpus corpus_from_jsonl(std::string_view text,
                         GroupingPolicy policy = GroupingPolicy::per_utterance);

}  // namespace talkmine
