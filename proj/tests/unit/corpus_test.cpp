#include <gtest/gtest.h>

#include <algorithm>

#include "talkmine/corpus.hpp"
#include "talkmine/error.hpp"

namespace talkmine {
namespace {

TEST(ParseTranscript, HeaderAndRoles) {
  const auto t = parse_transcript("@session: HP-1\nMOD1\tWelcome everyone.\nP03\tI walk daily.");
  EXPECT_EQ(t.session_id, "HP-1");
  ASSERT_EQ(t.utterances.size(), 2u);
  EXPECT_EQ(t.utterances[0].role, Role::moderator);
  EXPECT_EQ(t.utterances[1].role, Role::participant);
  EXPECT_EQ(t.utterances[1].text, "I walk daily.");
  EXPECT_EQ(t.utterances[1].index, 1u);
}

TEST(ParseTranscript, TranslatedTagIsStripped) {
  const auto t = parse_transcript("@session: S\nP01\t[es] Me gusta caminar.");
  ASSERT_EQ(t.utterances.size(), 1u);
  EXPECT_EQ(t.utterances[0].language_tag, LanguageTag::translated);
  EXPECT_EQ(t.utterances[0].text, "Me gusta caminar.");
}

TEST(ParseTranscript, MissingTabIsParseErrorWithLine) {
  try {
    parse_transcript("P01 no tab here");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 1u);
  }
  try {
    parse_transcript("@session: S\n\n# note\nP01 no tab");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 4u);
  }
}

TEST(ParseTranscript, FormatErrors) {
  EXPECT_THROW(parse_transcript("@session: A\n@session: B\nP1\tx"), FormatError);
  EXPECT_THROW(parse_transcript("@session: A\n@speaker: B\n"), FormatError);
  EXPECT_THROW(parse_transcript("P1\thello"), FormatError);
}

TEST(ParseTranscript, TopicDirectiveApplies) {
  const auto t = parse_transcript(
      "@session: S\n@community: EV\nP1\tbefore\n@topic: T2\nP1\tduring\n@topic: T4\nP2\tlater\n");
  EXPECT_EQ(t.community_label, "EV");
  EXPECT_EQ(t.utterances[0].discussion_topic, DiscussionTopic::untagged);
  EXPECT_EQ(t.utterances[1].discussion_topic, DiscussionTopic::T2);
  EXPECT_EQ(t.utterances[2].discussion_topic, DiscussionTopic::T4);
}

TEST(ParseTranscript, CustomModeratorPrefix) {
  FormatConfig f;
  f.moderator_prefix = "FAC";
  const auto t = parse_transcript("@session: S\nFAC1\thi\nMOD1\thello", f);
  EXPECT_EQ(t.utterances[0].role, Role::moderator);
  EXPECT_EQ(t.utterances[1].role, Role::participant);
}

TEST(SerializeTranscript, RoundTrip) {
  const std::string raw =
      "# c\n@session: HP-1\n@community: HP\nMOD1\tWelcome.\n@topic: T1\nP01\tI walk.\nP02\t[es] Hola.\n"
      "@topic: T3\nP01\tMurals.\n";
  const auto t = parse_transcript(raw);
  EXPECT_EQ(parse_transcript(serialize_transcript(t)), t);
}

TEST(SerializeTranscript, RoundTripBackToUntagged) {
  Transcript t;
  t.session_id = "S";
  t.utterances.push_back({"P1", Role::participant, "S", DiscussionTopic::T1, LanguageTag::primary, "a", 0});
  t.utterances.push_back({"P1", Role::participant, "S", DiscussionTopic::untagged, LanguageTag::primary, "b", 1});
  EXPECT_EQ(parse_transcript(serialize_transcript(t)), t);
}

TEST(StripModerator, KeepsParticipantsInOrder) {
  const auto t = parse_transcript("@session: S\nMOD1\ta\nP1\tb\nMOD1\tc\nP2\td");
  const auto s = strip_moderator(t);
  ASSERT_EQ(s.utterances.size(), 2u);
  EXPECT_EQ(s.utterances[0].index, 1u);
  EXPECT_EQ(s.utterances[1].index, 3u);
  EXPECT_EQ(strip_moderator(s), s);
}

TEST(StripModerator, DegenerateCases) {
  EXPECT_TRUE(strip_moderator(parse_transcript("@session: S\nMOD1\ta\nMOD2\tb")).utterances.empty());
  const auto all = parse_transcript("@session: S\nP1\ta\nP2\tb");
  EXPECT_EQ(strip_moderator(all), all);
}

TEST(SegmentSentences, Examples) {
  EXPECT_EQ(segment_sentences("I bike. It is great!"), (std::vector<std::string>{"I bike.", "It is great!"}));
  EXPECT_EQ(segment_sentences("Dr. Smith walks."), (std::vector<std::string>{"Dr. Smith walks."}));
  EXPECT_EQ(segment_sentences("no terminal punctuation"),
            (std::vector<std::string>{"no terminal punctuation"}));
  EXPECT_TRUE(segment_sentences("   ").empty());
}

TEST(SegmentSentences, ConcatenationPreservesText) {
  const std::string text = "Is it safe? Not really!  We walk anyway. e.g. at night";
  std::string joined;
  for (const auto& s : segment_sentences(text)) joined += s;
  std::string squeezed;
  for (char c : text) {
    if (c != ' ') squeezed += c;
  }
  joined.erase(std::remove(joined.begin(), joined.end(), ' '), joined.end());
  EXPECT_EQ(joined, squeezed);
}

std::vector<Transcript> two_sessions() {
  return {parse_transcript("@session: A\n@community: HP\n@topic: T1\nMOD\tq\nP1\tx one.\nP2\tx two.\n@topic: T2\n"
                           "P1\tx three. And more."),
          parse_transcript("@session: B\n@community: EV\n@topic: T1\nP3\ty one.\nP4\ty two.\nP3\ty three.")};
}

TEST(BuildCorpus, GroupingPolicies) {
  const auto ts = two_sessions();
  EXPECT_EQ(build_corpus(ts, GroupingPolicy::per_utterance).size(), 6u);
  EXPECT_EQ(build_corpus(ts, GroupingPolicy::per_speaker).size(), 4u);
  EXPECT_EQ(build_corpus(ts, GroupingPolicy::per_session_topic).size(), 3u);
}

TEST(BuildCorpus, SentenceMultisetIsPolicyIndependent) {
  const auto ts = two_sessions();
  auto sentences = [](const Corpus& c) {
    std::vector<std::string> all;
    for (const auto& d : c.documents) all.insert(all.end(), d.sentences.begin(), d.sentences.end());
    std::sort(all.begin(), all.end());
    return all;
  };
  const auto base = sentences(build_corpus(ts, GroupingPolicy::per_utterance));
  EXPECT_EQ(base.size(), 7u);
  EXPECT_EQ(sentences(build_corpus(ts, GroupingPolicy::per_speaker)), base);
  EXPECT_EQ(sentences(build_corpus(ts, GroupingPolicy::per_session_topic)), base);
}

TEST(BuildCorpus, Errors) {
  EXPECT_THROW(build_corpus({}, GroupingPolicy::per_utterance), DataError);
  const auto mods = parse_transcript("@session: A\nMOD1\tonly me");
  EXPECT_THROW(build_corpus({mods}, GroupingPolicy::per_utterance), DataError);
  const auto a = parse_transcript("@session: A\nP1\tx");
  EXPECT_THROW(build_corpus({a, a}, GroupingPolicy::per_utterance), DataError);
}

TEST(BuildCorpus, Communities) {
  const auto c = build_corpus(two_sessions(), GroupingPolicy::per_utterance);
  EXPECT_EQ(c.communities(), (std::vector<std::string>{"HP", "EV"}));
  EXPECT_EQ(c.community("EV").size(), 3u);
}

TEST(CorpusJsonl, RoundTrip) {
  const auto c = build_corpus(two_sessions(), GroupingPolicy::per_speaker);
  EXPECT_EQ(corpus_from_jsonl(corpus_to_jsonl(c), GroupingPolicy::per_speaker), c);
}

TEST(CollectSentences, SkipsModeratorsAndKeepsRefs) {
  const auto s = collect_sentences(two_sessions());
  ASSERT_EQ(s.size(), 7u);
  EXPECT_EQ(s[0].ref, (SentenceRef{"A", 1, 0}));
  EXPECT_EQ(s[3].ref, (SentenceRef{"A", 3, 1}));
  EXPECT_EQ(s[3].discussion_topic, DiscussionTopic::T2);
  EXPECT_EQ(s[4].community_label, "EV");
}

}  // namespace
}  // namespace talkmine
