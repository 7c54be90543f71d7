#include "talkmine/corpus.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <utility>

#include "json.hpp"
#include "strutil.hpp"
#include "talkmine/error.hpp"

namespace talkmine {

using detail::trim;

std::string_view to_string(DiscussionTopic topic) {
  switch (topic) {
    case DiscussionTopic::T1: return "T1";
    case DiscussionTopic::T2: return "T2";
    case DiscussionTopic::T3: return "T3";
    case DiscussionTopic::T4: return "T4";
    case DiscussionTopic::untagged: return "untagged";
  }
  return "untagged";
}

DiscussionTopic parse_discussion_topic(std::string_view text) {
  if (text == "T1") return DiscussionTopic::T1;
  if (text == "T2") return DiscussionTopic::T2;
  if (text == "T3") return DiscussionTopic::T3;
  if (text == "T4") return DiscussionTopic::T4;
  if (text == "none" || text == "untagged") return DiscussionTopic::untagged;
  throw DataError("unknown discussion topic '" + std::string(text) + "'");
}

std::string_view to_string(GroupingPolicy policy) {
  switch (policy) {
    case GroupingPolicy::per_utterance: return "per_utterance";
    case GroupingPolicy::per_speaker: return "per_speaker";
    case GroupingPolicy::per_session_topic: return "per_session_topic";
  }
  return "per_utterance";
}

GroupingPolicy parse_grouping_policy(std::string_view text) {
  if (text == "per_utterance") return GroupingPolicy::per_utterance;
  if (text == "per_speaker") return GroupingPolicy::per_speaker;
  if (text == "per_session_topic") return GroupingPolicy::per_session_topic;
  throw ConfigError("unknown grouping policy '" + std::string(text) + "'");
}

namespace {

constexpr std::string_view kTranslatedTag = "[es]";

bool starts_with_translated_tag(std::string_view text) {
  if (!text.starts_with(kTranslatedTag)) return false;
  return text.size() == kTranslatedTag.size() || detail::is_space(text[kTranslatedTag.size()]);
}

}  // namespace

Transcript parse_transcript(std::string_view raw, const FormatConfig& format) {
  Transcript transcript;
  bool have_session = false;
  bool have_community = false;
  DiscussionTopic current_topic = DiscussionTopic::untagged;

  std::size_t line_no = 0;
  for (std::string_view line : detail::split(raw, '\n')) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (trim(line).empty() || line.front() == '#') continue;

    if (line.front() == '@') {
      const auto colon = line.find(':');
      if (colon == std::string_view::npos) {
        throw ParseError(line_no, "directive without ':'");
      }
      const auto key = trim(line.substr(1, colon - 1));
      const auto value = trim(line.substr(colon + 1));
      if (value.empty()) throw FormatError("line " + std::to_string(line_no) + ": empty @" + std::string(key));
      if (key == "session") {
        if (have_session) {
          throw FormatError("line " + std::to_string(line_no) + ": duplicate @session directive");
        }
        transcript.session_id = std::string(value);
        have_session = true;
      } else if (key == "community") {
        if (have_community) {
          throw FormatError("line " + std::to_string(line_no) + ": duplicate @community directive");
        }
        transcript.community_label = std::string(value);
        have_community = true;
      } else if (key == "topic") {
        try {
          current_topic = parse_discussion_topic(value);
        } catch (const DataError& e) {
          throw FormatError("line " + std::to_string(line_no) + ": " + e.what());
        }
      } else {
        throw FormatError("line " + std::to_string(line_no) + ": unknown directive @" + std::string(key));
      }
      continue;
    }

    const auto tab = line.find('\t');
    if (tab == std::string_view::npos) throw ParseError(line_no, "turn line has no tab separator");
    const auto speaker = trim(line.substr(0, tab));
    if (speaker.empty()) throw ParseError(line_no, "empty speaker id");
    auto text = trim(line.substr(tab + 1));

    Utterance u;
    if (starts_with_translated_tag(text)) {
      u.language_tag = LanguageTag::translated;
      text = trim(text.substr(kTranslatedTag.size()));
    }
    if (text.empty()) throw ParseError(line_no, "empty utterance text");
    u.speaker_id = std::string(speaker);
    u.role = (!format.moderator_prefix.empty() && speaker.starts_with(format.moderator_prefix))
                 ? Role::moderator
                 : Role::participant;
    u.discussion_topic = current_topic;
    u.text = std::string(text);
    u.index = transcript.utterances.size();
    transcript.utterances.push_back(std::move(u));
  }

  if (!have_session) throw FormatError("missing @session directive");
  for (auto& u : transcript.utterances) u.session_id = transcript.session_id;
  return transcript;
}

Transcript load_transcript(const std::filesystem::path& path, const FormatConfig& format) {
  const auto raw = detail::read_file(path);
  try {
    return parse_transcript(raw, format);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

std::string serialize_transcript(const Transcript& transcript) {
  std::string out;
  out += "@session: " + transcript.session_id + "\n";
  if (!transcript.community_label.empty()) out += "@community: " + transcript.community_label + "\n";
  DiscussionTopic current = DiscussionTopic::untagged;
  for (const auto& u : transcript.utterances) {
    if (u.discussion_topic != current) {
      current = u.discussion_topic;
      out += "@topic: ";
      out += current == DiscussionTopic::untagged ? std::string_view("none") : to_string(current);
      out += '\n';
    }
    out += u.speaker_id;
    out += '\t';
    if (u.language_tag == LanguageTag::translated) out += "[es] ";
    out += u.text;
    out += '\n';
  }
  return out;
}

Transcript strip_moderator(const Transcript& transcript) {
  Transcript out;
  out.session_id = transcript.session_id;
  out.community_label = transcript.community_label;
  std::copy_if(transcript.utterances.begin(), transcript.utterances.end(),
               std::back_inserter(out.utterances),
               [](const Utterance& u) { return u.role == Role::participant; });
  return out;
}

std::vector<std::string> segment_sentences(std::string_view text, const SegmentationConfig& config) {
  std::vector<std::string> sentences;
  auto emit = [&](std::string_view piece) {
    piece = trim(piece);
    if (!piece.empty()) sentences.emplace_back(piece);
  };

  std::size_t start = 0;
  for (std::size_t i = 0; i + 1 < text.size(); ++i) {
    const char c = text[i];
    if (c != '.' && c != '!' && c != '?') continue;
    if (!detail::is_space(text[i + 1])) continue;
    std::size_t word_start = i;
    while (word_start > start && !detail::is_space(text[word_start - 1])) --word_start;
    if (config.abbreviations.contains(std::string(text.substr(word_start, i + 1 - word_start)))) continue;
    emit(text.substr(start, i + 1 - start));
    start = i + 1;
  }
  emit(text.substr(start));
  return sentences;
}

Corpus Corpus::community(std::string_view label) const {
  Corpus out;
  out.grouping_policy = grouping_policy;
  for (const auto& d : documents) {
    if (d.community_label == label) out.documents.push_back(d);
  }
  return out;
}

std::vector<std::string> Corpus::communities() const {
  std::vector<std::string> labels;
  for (const auto& d : documents) {
    if (std::find(labels.begin(), labels.end(), d.community_label) == labels.end()) {
      labels.push_back(d.community_label);
    }
  }
  return labels;
}

Corpus build_corpus(const std::vector<Transcript>& transcripts, GroupingPolicy policy,
                    const SegmentationConfig& segmentation) {
  if (transcripts.empty()) throw DataError("empty corpus: no transcripts");
  std::set<std::string> sessions;
  for (const auto& t : transcripts) {
    if (!sessions.insert(t.session_id).second) {
      throw DataError("duplicate session id '" + t.session_id + "' in corpus");
    }
  }

  Corpus corpus;
  corpus.grouping_policy = policy;
  for (const auto& t : transcripts) {
    // Group key -> document position, in first-appearance order.
    std::map<std::string, std::size_t> slots;
    for (const auto& u : t.utterances) {
      if (u.role != Role::participant) continue;
      std::string doc_id;
      switch (policy) {
        case GroupingPolicy::per_utterance:
          doc_id = t.session_id + "#" + std::to_string(u.index);
          break;
        case GroupingPolicy::per_speaker:
          doc_id = t.session_id + "/" + u.speaker_id;
          break;
        case GroupingPolicy::per_session_topic:
          doc_id = t.session_id + "@" + std::string(to_string(u.discussion_topic));
          break;
      }
      auto [it, inserted] = slots.try_emplace(doc_id, corpus.documents.size());
      if (inserted) {
        Document doc;
        doc.doc_id = doc_id;
        doc.community_label = t.community_label;
        corpus.documents.push_back(std::move(doc));
      }
      auto& doc = corpus.documents[it->second];
      doc.source_refs.push_back({t.session_id, u.index});
      const auto sentences = segment_sentences(u.text, segmentation);
      for (std::size_t s = 0; s < sentences.size(); ++s) {
        doc.sentences.push_back(sentences[s]);
        doc.sentence_refs.push_back({t.session_id, u.index, s});
      }
    }
  }
  if (corpus.documents.empty()) throw DataError("empty corpus: no participant utterances");
  return corpus;
}

std::vector<SentenceRecord> collect_sentences(const std::vector<Transcript>& transcripts,
                                              const SegmentationConfig& segmentation) {
  std::vector<SentenceRecord> records;
  for (const auto& t : transcripts) {
    for (const auto& u : t.utterances) {
      if (u.role != Role::participant) continue;
      const auto sentences = segment_sentences(u.text, segmentation);
      for (std::size_t s = 0; s < sentences.size(); ++s) {
        records.push_back({{t.session_id, u.index, s}, t.community_label, u.speaker_id,
                           u.discussion_topic, sentences[s]});
      }
    }
  }
  return records;
}

std::string corpus_to_jsonl(const Corpus& corpus) {
  std::string out;
  for (const auto& d : corpus.documents) {
    nlohmann::ordered_json j;
    j["doc_id"] = d.doc_id;
    j["community"] = d.community_label;
    auto refs = nlohmann::ordered_json::array();
    for (const auto& r : d.source_refs) refs.push_back({r.session_id, r.utterance_index});
    j["source_refs"] = std::move(refs);
    j["sentences"] = d.sentences;
    auto srefs = nlohmann::ordered_json::array();
    for (const auto& r : d.sentence_refs) srefs.push_back({r.session_id, r.utterance_index, r.sentence_index});
    j["sentence_refs"] = std::move(srefs);
    out += j.dump();
    out += '\n';
  }
  return out;
}

Corpus corpus_from_jsonl(std::string_view text, GroupingPolicy policy) {
  Corpus corpus;
  corpus.grouping_policy = policy;
  std::size_t line_no = 0;
  for (auto line : detail::split(text, '\n')) {
    ++line_no;
    if (trim(line).empty()) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      Document d;
      d.doc_id = j.at("doc_id").get<std::string>();
      d.community_label = j.at("community").get<std::string>();
      for (const auto& r : j.at("source_refs")) {
        d.source_refs.push_back({r.at(0).get<std::string>(), r.at(1).get<std::size_t>()});
      }
      d.sentences = j.at("sentences").get<std::vector<std::string>>();
      for (const auto& r : j.at("sentence_refs")) {
        d.sentence_refs.push_back(
            {r.at(0).get<std::string>(), r.at(1).get<std::size_t>(), r.at(2).get<std::size_t>()});
      }
      corpus.documents.push_back(std::move(d));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(line_no, std::string("corpus JSON: ") + e.what());
    }
  }
  return corpus;
}

}  // namespace talkmine
