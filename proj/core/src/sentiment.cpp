#include "talkmine/sentiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

#include "json.hpp"
#include "strutil.hpp"
#include "talkmine/error.hpp"
#include "talkmine/hash.hpp"
#include "talkmine/log.hpp"
#include "talkmine/rng.hpp"

namespace talkmine {

namespace {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(std::string_view s, std::size_t line_no) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) throw ParseError(line_no, "bad number '" + std::string(s) + "'");
  return v;
}

std::uint64_t parse_count(std::string_view s, std::size_t line_no) {
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size()) throw ParseError(line_no, "bad count '" + std::string(s) + "'");
  return v;
}

}  // namespace

void SeedWordSets::validate() const {
  if (positive.empty() || negative.empty()) throw ConfigError("seed word sets must both be non-empty");
  for (const auto& w : positive) {
    if (negative.contains(w)) throw ConfigError("seed word '" + w + "' is both positive and negative");
  }
}

double log_odds(std::uint64_t hit_positive_count, std::uint64_t hit_negative_count) {
  const double pos = static_cast<double>(hit_positive_count) + 1.0;
  const double neg = static_cast<double>(hit_negative_count) + 1.0;
  double ratio = 0.0;
  if (pos < neg) {
    ratio = -1.0 * (neg / pos);
  } else if (pos > neg) {
    ratio = pos / neg;
  }
  if (ratio < -10.0) ratio = -10.0;
  if (ratio > 10.0) ratio = 10.0;
  return ratio;
}

std::optional<double> SentimentLexicon::score(std::string_view phrase) const {
  const auto it = entries.find(phrase);
  if (it == entries.end()) return std::nullopt;
  return it->second.score;
}

SentimentLexicon build_lexicon(std::span<const CandidatePhrase> phrases, const TokenDocs& reference,
                               const SeedWordSets& seeds, std::size_t window) {
  seeds.validate();
  if (window == 0) throw std::invalid_argument("co-occurrence window must be >= 1");
  const bool any_tokens = std::any_of(reference.begin(), reference.end(), [](const auto& d) { return !d.empty(); });
  if (!any_tokens) throw DataError("reference corpus for the sentiment lexicon is empty");

  std::map<std::string, std::vector<std::string>> distinct;
  for (const auto& p : phrases) distinct.emplace(p.text(), p.tokens);

  std::unordered_map<std::string, std::vector<std::pair<const std::string*, const std::vector<std::string>*>>>
      by_first;
  std::map<std::string, std::pair<std::uint64_t, std::uint64_t>> hits;
  for (const auto& [key, tokens] : distinct) {
    hits[key] = {0, 0};
    if (!tokens.empty()) by_first[tokens.front()].emplace_back(&key, &tokens);
  }

  for (const auto& doc : reference) {
    const std::size_t n = doc.size();
    // Seed counts over [0, i).
    std::vector<std::uint32_t> pos_prefix(n + 1, 0);
    std::vector<std::uint32_t> neg_prefix(n + 1, 0);
    for (std::size_t i = 0; i < n; ++i) {
      pos_prefix[i + 1] = pos_prefix[i] + (seeds.positive.contains(doc[i]) ? 1 : 0);
      neg_prefix[i + 1] = neg_prefix[i] + (seeds.negative.contains(doc[i]) ? 1 : 0);
    }
    auto seeds_in = [](const std::vector<std::uint32_t>& prefix, std::size_t lo, std::size_t hi) {
      return hi > lo && prefix[hi] - prefix[lo] > 0;
    };

    for (std::size_t p = 0; p < n; ++p) {
      const auto it = by_first.find(doc[p]);
      if (it == by_first.end()) continue;
      for (const auto& [key, tokens] : it->second) {
        const std::size_t len = tokens->size();
        if (p + len > n || !std::equal(tokens->begin(), tokens->end(), doc.begin() + static_cast<std::ptrdiff_t>(p))) {
          continue;
        }
        const std::size_t before = p >= window ? p - window : 0;
        const std::size_t after = std::min(n, p + len + window);
        auto& h = hits[*key];
        if (seeds_in(pos_prefix, before, p) || seeds_in(pos_prefix, p + len, after)) ++h.first;
        if (seeds_in(neg_prefix, before, p) || seeds_in(neg_prefix, p + len, after)) ++h.second;
      }
    }
  }

  SentimentLexicon lexicon;
  for (const auto& [key, h] : hits) {
    LexiconEntry e;
    e.hit_positive = h.first;
    e.hit_negative = h.second;
    e.ratio = log_odds(h.first, h.second);
    e.score = e.ratio / 10.0;
    lexicon.entries.emplace(key, e);
  }
  return lexicon;
}

std::string lexicon_to_tsv(const SentimentLexicon& lexicon) {
  std::string out;
  for (const auto& [phrase, e] : lexicon.entries) {
    out += phrase + '\t' + std::to_string(e.hit_positive) + '\t' + std::to_string(e.hit_negative) + '\t' +
           format_double(e.ratio) + '\t' + format_double(e.score) + '\n';
  }
  return out;
}

SentimentLexicon lexicon_from_tsv(std::string_view text) {
  SentimentLexicon lexicon;
  std::size_t line_no = 0;
  for (auto line : detail::split(text, '\n')) {
    ++line_no;
    if (line.empty()) continue;
    const auto f = detail::split(line, '\t');
    if (f.size() != 5) throw ParseError(line_no, "lexicon row needs 5 tab-separated fields");
    LexiconEntry e;
    e.hit_positive = parse_count(f[1], line_no);
    e.hit_negative = parse_count(f[2], line_no);
    e.ratio = parse_double(f[3], line_no);
    e.score = parse_double(f[4], line_no);
    lexicon.entries.emplace(std::string(f[0]), e);
  }
  return lexicon;
}

std::string_view to_string(Polarity p) { return p == Polarity::positive ? "positive" : "negative"; }

std::size_t LabeledSet::count(Polarity p) const {
  return static_cast<std::size_t>(
      std::count_if(items.begin(), items.end(), [p](const LabeledItem& i) { return i.label == p; }));
}

std::optional<double> phrase_score(std::string_view sentence, const SentimentLexicon& lexicon) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& p : extract_phrases(sentence)) {
    if (auto s = lexicon.score(p.text())) {
      sum += *s;
      ++n;
    }
  }
  if (n == 0) return std::nullopt;
  return sum / static_cast<double>(n);
}

LabeledSet weak_label(std::span<const SentenceRecord> sentences, const SentimentLexicon& lexicon, double tau) {
  if (lexicon.empty()) throw DataError("cannot weak-label with an empty lexicon");
  LabeledSet set;
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    const auto score = phrase_score(sentences[i].text, lexicon);
    if (!score) continue;
    if (*score > tau) {
      set.items.push_back({sentences[i].ref, Polarity::positive, 1.0, i});
    } else if (*score < -tau) {
      set.items.push_back({sentences[i].ref, Polarity::negative, 1.0, i});
    }
  }
  return set;
}

std::vector<std::pair<SentenceRef, Polarity>> parse_label_file(std::string_view text) {
  std::vector<std::pair<SentenceRef, Polarity>> labels;
  std::size_t line_no = 0;
  for (auto line : detail::split(text, '\n')) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (detail::trim(line).empty() || line.front() == '#') continue;
    const auto f = detail::split(line, '\t');
    if (f.size() != 4) throw ParseError(line_no, "label row needs 4 tab-separated fields");
    Polarity p;
    if (f[3] == "positive") {
      p = Polarity::positive;
    } else if (f[3] == "negative") {
      p = Polarity::negative;
    } else {
      throw ParseError(line_no, "label must be 'positive' or 'negative'");
    }
    labels.push_back({{std::string(f[0]), parse_count(f[1], line_no), parse_count(f[2], line_no)}, p});
  }
  return labels;
}

LabeledSet apply_label_overrides(LabeledSet weak, std::span<const SentenceRecord> sentences,
                                 std::span<const std::pair<SentenceRef, Polarity>> overrides) {
  std::map<SentenceRef, std::size_t> row_of;
  for (std::size_t i = 0; i < sentences.size(); ++i) row_of.emplace(sentences[i].ref, i);
  std::map<SentenceRef, std::size_t> item_of;
  for (std::size_t i = 0; i < weak.items.size(); ++i) item_of.emplace(weak.items[i].ref, i);

  for (const auto& [ref, label] : overrides) {
    const auto row = row_of.find(ref);
    if (row == row_of.end()) {
      log::warn("label for unknown sentence " + ref.session_id + ":" + std::to_string(ref.utterance_index) + ":" +
                std::to_string(ref.sentence_index) + " ignored");
      continue;
    }
    if (auto it = item_of.find(ref); it != item_of.end()) {
      weak.items[it->second].label = label;
    } else {
      item_of.emplace(ref, weak.items.size());
      weak.items.push_back({ref, label, 1.0, row->second});
    }
  }
  std::sort(weak.items.begin(), weak.items.end(),
            [](const LabeledItem& a, const LabeledItem& b) { return a.row < b.row; });
  return weak;
}

namespace {

void shuffle(std::vector<std::size_t>& v, Rng& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.uniform_index(i));
    std::swap(v[i - 1], v[j]);
  }
}

std::vector<std::vector<std::size_t>> deal(const std::vector<std::size_t>& order, std::size_t folds) {
  std::vector<std::vector<std::size_t>> out(folds);
  for (std::size_t i = 0; i < order.size(); ++i) out[i % folds].push_back(order[i]);
  for (auto& f : out) std::sort(f.begin(), f.end());
  return out;
}

void check_fold_count(std::size_t n, std::size_t folds) {
  if (folds < 2) throw DataError("cross-validation needs at least 2 folds");
  if (n < folds) {
    throw DataError("cross-validation needs at least as many items (" + std::to_string(n) + ") as folds (" +
                    std::to_string(folds) + ")");
  }
}

}  // namespace

std::vector<std::vector<std::size_t>> partition_folds(std::size_t n, std::size_t folds, std::uint64_t seed) {
  check_fold_count(n, folds);
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  shuffle(order, rng);
  return deal(order, folds);
}

std::vector<std::vector<std::size_t>> stratified_folds(std::span<const Polarity> labels, std::size_t folds,
                                                       std::uint64_t seed) {
  check_fold_count(labels.size(), folds);
  std::vector<std::size_t> pos;
  std::vector<std::size_t> neg;
  for (std::size_t i = 0; i < labels.size(); ++i) (labels[i] == Polarity::positive ? pos : neg).push_back(i);
  Rng rng(seed);
  shuffle(pos, rng);
  shuffle(neg, rng);
  pos.insert(pos.end(), neg.begin(), neg.end());
  return deal(pos, folds);
}

namespace {

constexpr double kProbFloor = 1e-12;

double mean_deviance(std::span<const double> p, std::span<const double> y) {
  double d = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double q = std::clamp(p[i], kProbFloor, 1.0 - kProbFloor);
    d += y[i] > 0.5 ? std::log(q) : std::log(1.0 - q);
  }
  return -2.0 * d / static_cast<double>(p.size());
}

double accuracy(std::span<const double> p, std::span<const double> y) {
  std::size_t right = 0;
  for (std::size_t i = 0; i < p.size(); ++i) right += ((p[i] > 0.5) == (y[i] > 0.5)) ? 1 : 0;
  return static_cast<double>(right) / static_cast<double>(p.size());
}

struct Problem {
  std::vector<std::size_t> rows;
  std::vector<double> y;
  std::vector<double> w;
};

Problem select(const LabeledSet& labeled, std::span<const std::size_t> items) {
  Problem p;
  for (auto i : items) {
    const auto& it = labeled.items[i];
    p.rows.push_back(it.row);
    p.y.push_back(it.label == Polarity::positive ? 1.0 : 0.0);
    p.w.push_back(it.weight);
  }
  return p;
}

void check_training_input(const LabeledSet& labeled, const WeightedMatrix& features, const TrainingOptions& options) {
  if (labeled.count(Polarity::positive) == 0 || labeled.count(Polarity::negative) == 0) {
    throw DataError("classifier training needs both positive and negative examples");
  }
  check_fold_count(labeled.size(), options.folds);
  for (const auto& it : labeled.items) {
    if (it.row >= features.num_rows()) throw DataError("labeled item refers to a missing feature row");
  }
  if (options.mix < 0.0 || options.mix > 1.0) throw ConfigError("sentiment.mix must lie in [0, 1]");
}

std::vector<double> lambda_grid(const LabeledSet& labeled, const WeightedMatrix& features,
                                const TrainingOptions& options) {
  if (!options.lambda_grid.empty()) return options.lambda_grid;
  std::vector<std::size_t> all(labeled.size());
  std::iota(all.begin(), all.end(), 0);
  const auto p = select(labeled, all);
  const LogisticElasticNet full(DesignMatrix::from_rows(features, p.rows), p.y, p.w);
  return log_spaced_grid(full.lambda_max(options.mix), options.lambda_count, options.lambda_min_ratio);
}

}  // namespace

CvReport cross_validate(const LabeledSet& labeled, const WeightedMatrix& features, const TrainingOptions& options) {
  check_training_input(labeled, features, options);
  CvReport report;
  report.lambdas = lambda_grid(labeled, features, options);
  const std::size_t L = report.lambdas.size();
  if (L == 0) throw ConfigError("lambda grid is empty");

  std::vector<Polarity> labels;
  for (const auto& it : labeled.items) labels.push_back(it.label);
  const auto folds = stratified_folds(labels, options.folds, options.seed);

  // deviance[f][l], accuracy[f][l]
  std::vector<std::vector<double>> dev(folds.size(), std::vector<double>(L));
  std::vector<std::vector<double>> acc(folds.size(), std::vector<double>(L));
  for (std::size_t f = 0; f < folds.size(); ++f) {
    std::vector<std::size_t> train;
    for (std::size_t g = 0; g < folds.size(); ++g) {
      if (g != f) train.insert(train.end(), folds[g].begin(), folds[g].end());
    }
    std::sort(train.begin(), train.end());
    const auto tr = select(labeled, train);
    const auto te = select(labeled, folds[f]);
    const auto test_x = DesignMatrix::from_rows(features, te.rows);
    const LogisticElasticNet test_problem(test_x, te.y, te.w);

    const bool single_class = std::all_of(tr.y.begin(), tr.y.end(), [&](double v) { return v == tr.y.front(); });
    if (single_class) {
      // Nothing to learn; predict the smoothed training rate.
      const double rate = (std::accumulate(tr.y.begin(), tr.y.end(), 0.0) + 0.5) / (tr.y.size() + 1.0);
      const std::vector<double> p(te.y.size(), rate);
      for (std::size_t l = 0; l < L; ++l) {
        dev[f][l] = mean_deviance(p, te.y);
        acc[f][l] = accuracy(p, te.y);
      }
      continue;
    }

    const LogisticElasticNet problem(DesignMatrix::from_rows(features, tr.rows), tr.y, tr.w);
    Coefficients warm;
    for (std::size_t l = 0; l < L; ++l) {
      const auto fit = problem.fit(report.lambdas[l], options.mix, warm, options.solver);
      warm = fit.coef;
      const auto p = test_problem.predict(fit.coef);
      dev[f][l] = mean_deviance(p, te.y);
      acc[f][l] = accuracy(p, te.y);
    }
  }

  report.mean_deviance.assign(L, 0.0);
  for (std::size_t l = 0; l < L; ++l) {
    double s = 0.0;
    for (std::size_t f = 0; f < folds.size(); ++f) s += dev[f][l];
    report.mean_deviance[l] = s / static_cast<double>(folds.size());
  }
  report.best_index = static_cast<std::size_t>(
      std::min_element(report.mean_deviance.begin(), report.mean_deviance.end()) - report.mean_deviance.begin());
  for (std::size_t f = 0; f < folds.size(); ++f) {
    report.folds.push_back({f, folds[f].size(), dev[f][report.best_index], acc[f][report.best_index]});
  }
  return report;
}

SentimentClassifier train_classifier(const LabeledSet& labeled, const WeightedMatrix& features,
                                     const Vocabulary& vocabulary, std::span<const double> idf,
                                     const TrainingOptions& options) {
  if (vocabulary.size() != features.num_cols) throw DataError("feature matrix does not match the vocabulary");
  SentimentClassifier c;
  c.cv = cross_validate(labeled, features, options);
  c.terms = vocabulary.terms();
  c.vocabulary_hash = vocabulary.hash();
  c.idf.assign(idf.begin(), idf.end());
  c.mix = options.mix;
  c.lambda = c.cv.lambdas[c.cv.best_index];

  std::vector<std::size_t> all(labeled.size());
  std::iota(all.begin(), all.end(), 0);
  const auto p = select(labeled, all);
  const LogisticElasticNet problem(DesignMatrix::from_rows(features, p.rows), p.y, p.w);
  Coefficients warm;
  FitResult fit;
  for (std::size_t l = 0; l <= c.cv.best_index; ++l) {
    fit = problem.fit(c.cv.lambdas[l], options.mix, warm, options.solver);
    warm = fit.coef;
  }
  c.weights = fit.coef.weights;
  c.intercept = fit.coef.intercept;
  c.converged = fit.converged;
  if (!fit.converged) {
    log::warn("classifier did not converge within " + std::to_string(options.solver.max_sweeps) + " sweeps");
  }
  return c;
}

std::string_view to_string(SentimentClass c) {
  switch (c) {
    case SentimentClass::negative: return "negative";
    case SentimentClass::neutral: return "neutral";
    case SentimentClass::positive: return "positive";
  }
  return "neutral";
}

SentimentClass classify(double probability, const Thresholds& thresholds) {
  if (probability < thresholds.negative_below) return SentimentClass::negative;
  if (probability > thresholds.positive_above) return SentimentClass::positive;
  return SentimentClass::neutral;
}

SentenceScore score_sentence(const SentimentClassifier& classifier, std::span<const double> features,
                             const SentenceRef& ref, const Thresholds& thresholds) {
  if (features.size() != classifier.weights.size()) {
    throw std::invalid_argument("feature vector has " + std::to_string(features.size()) + " entries, classifier has " +
                                std::to_string(classifier.weights.size()));
  }
  double eta = classifier.intercept;
  for (std::size_t j = 0; j < features.size(); ++j) eta += classifier.weights[j] * features[j];
  SentenceScore s;
  s.ref = ref;
  s.probability_of_positiveness = logistic(eta);
  s.sentiment = classify(s.probability_of_positiveness, thresholds);
  return s;
}

SentenceScore score_text(const SentimentClassifier& classifier, std::string_view text,
                         const NormalizationRules& rules, const SentenceRef& ref, const Thresholds& thresholds) {
  std::vector<double> x(classifier.terms.size(), 0.0);
  double total = 0.0;
  for (const auto& t : normalized_tokens(text, rules)) {
    const auto it = std::lower_bound(classifier.terms.begin(), classifier.terms.end(), t);
    if (it == classifier.terms.end() || *it != t) continue;
    x[static_cast<std::size_t>(it - classifier.terms.begin())] += 1.0;
    total += 1.0;
  }
  if (total > 0) {
    for (std::size_t j = 0; j < x.size(); ++j) {
      if (x[j] != 0.0) x[j] = x[j] / total * classifier.idf[j];
    }
  }
  return score_sentence(classifier, x, ref, thresholds);
}

std::string classifier_to_json(const SentimentClassifier& c) {
  nlohmann::ordered_json j;
  j["vocabulary_hash"] = to_hex(c.vocabulary_hash);
  j["terms"] = c.terms;
  j["idf"] = c.idf;
  j["weights"] = c.weights;
  j["intercept"] = c.intercept;
  j["lambda"] = c.lambda;
  j["mix"] = c.mix;
  j["converged"] = c.converged;
  auto folds = nlohmann::ordered_json::array();
  for (const auto& f : c.cv.folds) {
    folds.push_back({{"fold", f.fold}, {"size", f.size}, {"deviance", f.deviance}, {"accuracy", f.accuracy}});
  }
  j["cv"] = {{"lambdas", c.cv.lambdas},
             {"mean_deviance", c.cv.mean_deviance},
             {"best_index", c.cv.best_index},
             {"folds", folds}};
  return j.dump() + "\n";
}

SentimentClassifier classifier_from_json(std::string_view text) {
  try {
    const auto j = nlohmann::json::parse(text);
    SentimentClassifier c;
    c.vocabulary_hash = from_hex(j.at("vocabulary_hash").get<std::string>());
    c.terms = j.at("terms").get<std::vector<std::string>>();
    c.idf = j.at("idf").get<std::vector<double>>();
    c.weights = j.at("weights").get<std::vector<double>>();
    c.intercept = j.at("intercept").get<double>();
    c.lambda = j.at("lambda").get<double>();
    c.mix = j.at("mix").get<double>();
    c.converged = j.at("converged").get<bool>();
    const auto& cv = j.at("cv");
    c.cv.lambdas = cv.at("lambdas").get<std::vector<double>>();
    c.cv.mean_deviance = cv.at("mean_deviance").get<std::vector<double>>();
    c.cv.best_index = cv.at("best_index").get<std::size_t>();
    for (const auto& f : cv.at("folds")) {
      c.cv.folds.push_back({f.at("fold").get<std::size_t>(), f.at("size").get<std::size_t>(),
                            f.at("deviance").get<double>(), f.at("accuracy").get<double>()});
    }
    if (c.terms.size() != c.weights.size() || c.terms.size() != c.idf.size()) {
      throw DataError("classifier JSON has inconsistent dimensions");
    }
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("classifier JSON: ") + e.what());
  }
}

std::vector<ModeMention> mode_phrase_scores(std::span<const SentenceRecord> sentences,
                                            const SentimentLexicon& lexicon, const ModeCategoryDictionary& modes,
                                            const NormalizationRules& rules,
                                            std::span<const double> fallback_probabilities) {
  if (!fallback_probabilities.empty() && fallback_probabilities.size() != sentences.size()) {
    throw std::invalid_argument("fallback probabilities must parallel the sentences");
  }
  const ModeMatcher matcher(modes, rules);
  std::vector<ModeMention> mentions;
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    const auto& s = sentences[i];
    const auto matched = matcher.match(normalized_tokens(s.text, rules));
    if (matched.empty()) continue;

    std::vector<std::pair<std::string, double>> scored;
    for (const auto& p : extract_phrases(s.text)) {
      auto key = p.text();
      if (auto score = lexicon.score(key)) scored.emplace_back(std::move(key), *score);
    }
    if (scored.empty() && !fallback_probabilities.empty()) {
      scored.emplace_back(std::string(), 2.0 * fallback_probabilities[i] - 1.0);
    }
    for (auto m : matched) {
      for (const auto& [phrase, score] : scored) {
        mentions.push_back({modes.modes[m].first, phrase, score, s.ref, s.community_label});
      }
    }
  }
  return mentions;
}

}  // namespace talkmine
