#pragma once

// Independent brute-force recomputations used to check the library.
// Deliberately naive: dense loops, input order, no shared helpers.

#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "talkmine/analysis.hpp"
#include "talkmine/preprocess.hpp"

namespace talkmine::testing {

inline std::vector<std::vector<double>> brute_tfidf(const std::vector<std::vector<std::uint32_t>>& counts) {
  const std::size_t D = counts.size();
  const std::size_t V = D ? counts[0].size() : 0;
  std::vector<double> idf(V, 0.0);
  for (std::size_t j = 0; j < V; ++j) {
    std::size_t df = 0;
    for (std::size_t i = 0; i < D; ++i) df += counts[i][j] > 0 ? 1 : 0;
    idf[j] = df ? std::log(static_cast<double>(D) / static_cast<double>(df)) : 0.0;
  }
  std::vector<std::vector<double>> out(D, std::vector<double>(V, 0.0));
  for (std::size_t i = 0; i < D; ++i) {
    double total = 0.0;
    for (std::size_t j = 0; j < V; ++j) total += counts[i][j];
    if (total == 0.0) continue;
    for (std::size_t j = 0; j < V; ++j) out[i][j] = counts[i][j] / total * idf[j];
  }
  return out;
}

struct Moments {
  double mean = 0.0;
  std::optional<double> std_dev;
  std::size_t count = 0;
};

inline Moments brute_moments(const std::vector<double>& xs) {
  Moments m;
  m.count = xs.size();
  if (xs.empty()) return m;
  double s = 0.0;
  for (double x : xs) s += x;
  m.mean = s / xs.size();
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - m.mean) * (x - m.mean);
    m.std_dev = std::sqrt(ss / (xs.size() - 1));
  }
  return m;
}

/// (community, session, speaker) -> sentence probabilities.
inline std::map<std::tuple<std::string, std::string, std::string>, std::vector<double>> brute_speaker_groups(
    const std::vector<ScoredSentence>& scores, std::optional<DiscussionTopic> topic) {
  std::map<std::tuple<std::string, std::string, std::string>, std::vector<double>> g;
  for (const auto& s : scores) {
    if (topic && s.discussion_topic != *topic) continue;
    g[{s.community_label, s.ref.session_id, s.speaker_id}].push_back(s.probability);
  }
  return g;
}

/// (topic, community) -> sentence probabilities, T1-T3 only.
inline std::map<std::pair<DiscussionTopic, std::string>, std::vector<double>> brute_topic_cells(
    const std::vector<ScoredSentence>& scores) {
  std::map<std::pair<DiscussionTopic, std::string>, std::vector<double>> g;
  for (const auto& s : scores) {
    if (s.discussion_topic == DiscussionTopic::T1 || s.discussion_topic == DiscussionTopic::T2 ||
        s.discussion_topic == DiscussionTopic::T3) {
      g[{s.discussion_topic, s.community_label}].push_back(s.probability);
    }
  }
  return g;
}

}  // namespace talkmine::testing
