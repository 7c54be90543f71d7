#include "talkmine/analysis.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <tuple>

#include "strutil.hpp"
#include "talkmine/error.hpp"
#include "talkmine/log.hpp"

namespace talkmine {

namespace {

constexpr int kDecimals = 6;

std::string topic_label(const std::optional<DiscussionTopic>& t) {
  return t ? std::string(to_string(*t)) : std::string("all");
}

}  // namespace

std::optional<double> ordered_mean(std::vector<double> values) {
  if (values.empty()) return std::nullopt;
  std::sort(values.begin(), values.end());
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

std::optional<double> sample_std_dev(std::vector<double> values) {
  if (values.size() < 2) return std::nullopt;
  std::sort(values.begin(), values.end());
  const double mean = *ordered_mean(values);
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

std::vector<SpeakerReport> speaker_positiveness(std::span<const ScoredSentence> scores,
                                                std::optional<DiscussionTopic> topic) {
  using Key = std::tuple<std::string, std::string, std::string>;
  // speaker -> utterance index -> sentence probabilities
  std::map<Key, std::map<std::size_t, std::vector<double>>> groups;
  for (const auto& s : scores) {
    if (topic && s.discussion_topic != *topic) continue;
    groups[{s.community_label, s.ref.session_id, s.speaker_id}][s.ref.utterance_index].push_back(s.probability);
  }

  std::vector<SpeakerReport> out;
  for (const auto& [key, utterances] : groups) {
    SpeakerReport r;
    std::tie(r.community_label, r.session_id, r.speaker_id) = key;
    r.discussion_topic = topic;
    std::vector<double> all;
    for (const auto& [index, probs] : utterances) {
      r.utterance_means.push_back(*ordered_mean(probs));
      all.insert(all.end(), probs.begin(), probs.end());
    }
    r.count = all.size();
    r.mean = *ordered_mean(std::move(all));
    out.push_back(std::move(r));
  }
  return out;
}

std::string_view to_string(AveragingUnit unit) {
  return unit == AveragingUnit::sentence ? "sentence" : "utterance";
}

AveragingUnit parse_averaging_unit(std::string_view text) {
  if (text == "sentence") return AveragingUnit::sentence;
  if (text == "utterance") return AveragingUnit::utterance;
  throw ConfigError("averaging unit must be 'sentence' or 'utterance', got '" + std::string(text) + "'");
}

std::vector<TopicSentimentReport> topic_mean_positiveness(std::span<const ScoredSentence> scores, bool include_t4,
                                                          AveragingUnit unit) {
  using Utt = std::pair<std::string, std::size_t>;
  std::map<std::pair<DiscussionTopic, std::string>, std::map<Utt, std::vector<double>>> cells;
  for (const auto& s : scores) {
    if (s.discussion_topic == DiscussionTopic::untagged) continue;
    if (s.discussion_topic == DiscussionTopic::T4 && !include_t4) continue;
    cells[{s.discussion_topic, s.community_label}][{s.ref.session_id, s.ref.utterance_index}].push_back(
        s.probability);
  }

  std::vector<TopicSentimentReport> out;
  for (const auto& [key, utterances] : cells) {
    std::vector<double> values;
    for (const auto& [utt, probs] : utterances) {
      if (unit == AveragingUnit::sentence) {
        values.insert(values.end(), probs.begin(), probs.end());
      } else {
        values.push_back(*ordered_mean(probs));
      }
    }
    TopicSentimentReport r;
    r.discussion_topic = key.first;
    r.community_label = key.second;
    r.count = values.size();
    r.mu = *ordered_mean(std::move(values));
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<ModeSentimentRow> mode_sentiment_table(std::span<const ModeMention> mentions,
                                                   std::span<const std::string> mode_names) {
  std::map<std::string, std::vector<double>, std::less<>> by_mode;
  for (const auto& m : mentions) by_mode[m.mode].push_back(m.score);

  std::vector<ModeSentimentRow> rows;
  for (const auto& name : mode_names) {
    ModeSentimentRow row;
    row.mode = name;
    if (auto it = by_mode.find(name); it != by_mode.end()) {
      row.count = it->second.size();
      row.mean = ordered_mean(it->second);
      row.std_dev = sample_std_dev(it->second);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string topic_mu_csv(std::span<const TopicSentimentReport> rows) {
  std::string out = "discussion_topic,community_label,mu\n";
  for (const auto& r : rows) {
    out += std::string(to_string(r.discussion_topic)) + ',' + r.community_label + ',' +
           detail::format_fixed(r.mu, kDecimals) + '\n';
  }
  return out;
}

std::string mode_table_csv(std::span<const ModeSentimentRow> rows) {
  std::string out = "mode,mean,std_dev,count\n";
  for (const auto& r : rows) {
    out += r.mode + ',' + (r.mean ? detail::format_fixed(*r.mean, kDecimals) : "") + ',' +
           (r.std_dev ? detail::format_fixed(*r.std_dev, kDecimals) : "") + ',' + std::to_string(r.count) + '\n';
  }
  return out;
}

std::string speakers_csv(std::span<const SpeakerReport> rows) {
  std::string out = "discussion_topic,session_id,speaker_id,utterance_means,mean,count\n";
  for (const auto& r : rows) {
    std::string means;
    for (std::size_t i = 0; i < r.utterance_means.size(); ++i) {
      if (i) means += ';';
      means += detail::format_fixed(r.utterance_means[i], kDecimals);
    }
    out += topic_label(r.discussion_topic) + ',' + r.session_id + ',' + r.speaker_id + ',' + means + ',' +
           detail::format_fixed(r.mean, kDecimals) + ',' + std::to_string(r.count) + '\n';
  }
  return out;
}

double report_value(double v) {
  const auto text = detail::format_fixed(v, kDecimals);
  double out = 0.0;
  std::from_chars(text.data(), text.data() + text.size(), out);
  return out;
}

}  // namespace talkmine
