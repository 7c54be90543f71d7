#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>

#include "../support/synthetic.hpp"
#include "talkmine/corpus.hpp"
#include "talkmine/error.hpp"
#include "talkmine/topics.hpp"

namespace talkmine {
namespace {

TopicModel three_term_model() {
  TopicModel m;
  m.config.num_topics = 1;
  m.doc_ids = {"d0"};
  m.terms = {"bike", "bus", "walk"};
  m.theta = {1.0};
  m.phi = {0.3, 0.2, 0.5};
  return m;
}

TEST(TopWords, Examples) {
  const auto m = three_term_model();
  const auto s = top_words(m, 0, 2);
  ASSERT_EQ(s.top_terms.size(), 2u);
  EXPECT_EQ(s.top_terms[0].first, "walk");
  EXPECT_EQ(s.top_terms[0].second, 0.5);
  EXPECT_EQ(s.top_terms[1].first, "bike");
  EXPECT_EQ(top_words(m, 0, 10).top_terms.size(), 3u);
  EXPECT_THROW(top_words(m, 1, 2), std::out_of_range);
}

TEST(TopWords, TiesBreakLexicographically) {
  auto m = three_term_model();
  m.phi = {0.25, 0.25, 0.5};
  const auto s = top_words(m, 0, 2);
  EXPECT_EQ(s.top_terms[1].first, "bike");
  m.terms = {"zoo", "bus", "walk"};
  EXPECT_EQ(top_words(m, 0, 2).top_terms[1].first, "bus");
}

TEST(DocTopics, LookupAndUnknownId) {
  const auto m = three_term_model();
  EXPECT_EQ(doc_topics(m, "d0"), std::vector<double>{1.0});
  EXPECT_THROW(doc_topics(m, "nope"), std::out_of_range);
}

Corpus two_sentence_corpus() {
  const auto t = parse_transcript("@session: S\nP1\tI bike. It rains.");
  return build_corpus({t}, GroupingPolicy::per_utterance);
}

TEST(ThemePassages, Window) {
  const auto c = two_sentence_corpus();
  const auto w0 = locate_theme_passages(c, {"bike"}, 0);
  ASSERT_EQ(w0.size(), 1u);
  EXPECT_EQ(w0[0].sentences, (std::vector<std::string>{"I bike."}));
  EXPECT_EQ(w0[0].matched_terms, (std::vector<std::string>{"bike"}));
  const auto w1 = locate_theme_passages(c, {"bike"}, 1);
  ASSERT_EQ(w1.size(), 1u);
  EXPECT_EQ(w1[0].sentences, (std::vector<std::string>{"I bike.", "It rains."}));
  EXPECT_TRUE(locate_theme_passages(c, {"tram"}, 1).empty());
}

TEST(Perplexity, UniformModelGivesVocabularySize) {
  TopicModel m;
  m.config.num_topics = 2;
  m.config.fold_in_iterations = 5;
  m.terms = {"a", "b", "c", "d"};
  m.phi.assign(8, 0.25);
  const auto held = DocTermMatrix::from_dense({{1, 2, 0, 3}, {0, 0, 4, 1}}, 4);
  EXPECT_NEAR(perplexity(m, held), 4.0, 1e-9);
  EXPECT_THROW(perplexity(m, DocTermMatrix::from_dense({{0, 0, 0, 0}}, 4)), DataError);
  EXPECT_THROW(perplexity(m, DocTermMatrix::from_dense({{1, 1}}, 2)), DataError);
}

TEST(FitLda, SingleTopic) {
  LdaConfig cfg;
  cfg.num_topics = 1;
  cfg.iterations = 20;
  cfg.burn_in = 5;
  const auto dtm = DocTermMatrix::from_dense({{3, 1, 0}, {0, 2, 2}}, 3);
  const std::vector<std::string> terms{"a", "b", "c"};
  const auto m = fit_lda(dtm, terms, cfg);
  EXPECT_EQ(doc_topics(m, "d0"), std::vector<double>{1.0});
  // (n_v + beta) / (N + V beta) with N = 8
  EXPECT_NEAR(m.phi[0], 3.01 / 8.03, 1e-12);
  EXPECT_NEAR(m.phi[1], 3.01 / 8.03, 1e-12);
  EXPECT_NEAR(m.phi[2], 2.01 / 8.03, 1e-12);
}

TEST(FitLda, Errors) {
  LdaConfig cfg;
  cfg.iterations = 10;
  cfg.burn_in = 2;
  const std::vector<std::string> terms{"a", "b"};
  EXPECT_THROW(fit_lda(DocTermMatrix::from_dense({{0, 0}}, 2), terms, cfg), DataError);
  EXPECT_THROW(fit_lda(DocTermMatrix::from_dense({{1, 0}}, 2), std::vector<std::string>{"a"}, cfg), DataError);
  cfg.num_topics = 0;
  EXPECT_THROW(cfg.validate(), ConfigError);
}

TEST(FitLda, PureDocumentLandsOnItsTopic) {
  const auto s = testing::make_disjoint_lda(200, 50, 5, 0.1, 60, 90, 21);
  LdaConfig cfg;
  cfg.iterations = 300;
  cfg.burn_in = 100;
  cfg.seed = 4;
  const auto m = fit_lda(s.dtm, s.terms, cfg);
  const auto d = testing::aligned_distances(s.phi, m);
  for (double x : d) EXPECT_LT(x, 0.25);

  // a held-out-like document using only words of the first true topic
  std::size_t best = 0;
  double best_tv = 2.0;
  for (std::size_t k = 0; k < m.num_topics(); ++k) {
    const double tv = testing::total_variation(s.phi[0], m.phi_row(k));
    if (tv < best_tv) {
      best_tv = tv;
      best = k;
    }
  }
  std::size_t checked = 0;
  for (std::size_t r = 0; r < s.dtm.num_rows(); ++r) {
    bool pure = true;
    for (auto c : s.dtm.row_cols(r)) pure = pure && c < 10;
    if (!pure) continue;
    EXPECT_GE(m.theta_row(r)[best], 0.8);
    ++checked;
  }
  EXPECT_GT(checked, 0u);
}

TEST(ModelJson, RoundTrip) {
  const auto s = testing::make_disjoint_lda(20, 12, 3, 0.3, 10, 20, 5);
  LdaConfig cfg;
  cfg.num_topics = 3;
  cfg.iterations = 30;
  cfg.burn_in = 10;
  cfg.seed = 9;
  const auto m = fit_lda(s.dtm, s.terms, cfg);
  const auto json = model_to_json(m);
  const auto back = model_from_json(json);
  EXPECT_EQ(back, m);
  EXPECT_EQ(model_to_json(back), json);
}

}  // namespace
}  // namespace talkmine
