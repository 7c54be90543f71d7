#include "talkmine/topics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "json.hpp"
#include "talkmine/error.hpp"
#include "talkmine/hash.hpp"
#include "talkmine/log.hpp"

namespace talkmine {

void LdaConfig::validate() const {
  if (num_topics < 1) throw ConfigError("topics.k must be >= 1");
  if (!(alpha > 0)) throw ConfigError("topics.alpha must be > 0");
  if (!(beta > 0)) throw ConfigError("topics.beta must be > 0");
  if (iterations <= burn_in) throw ConfigError("topics.iterations must exceed topics.burn_in");
}

namespace {

std::vector<std::vector<std::uint32_t>> expand_tokens(const DocTermMatrix& dtm) {
  std::vector<std::vector<std::uint32_t>> words(dtm.num_rows());
  for (std::size_t r = 0; r < dtm.num_rows(); ++r) {
    for (std::size_t k = dtm.row_ptr[r]; k < dtm.row_ptr[r + 1]; ++k) {
      words[r].insert(words[r].end(), dtm.val[k], static_cast<std::uint32_t>(dtm.col[k]));
    }
  }
  return words;
}

}  // namespace

GibbsSampler::GibbsSampler(const DocTermMatrix& dtm, const LdaConfig& config)
    : config_(config),
      num_topics_(config.num_topics),
      num_terms_(dtm.num_cols),
      words_(expand_tokens(dtm)),
      rng_(config.seed) {
  z_.resize(words_.size());
  for (std::size_t d = 0; d < words_.size(); ++d) {
    z_[d].resize(words_[d].size());
    for (auto& k : z_[d]) k = static_cast<std::uint32_t>(rng_.uniform_index(num_topics_));
  }
  init_counts();
}

GibbsSampler::GibbsSampler(const DocTermMatrix& dtm, const LdaConfig& config,
                           std::vector<std::vector<std::uint32_t>> initial_assignments)
    : config_(config),
      num_topics_(config.num_topics),
      num_terms_(dtm.num_cols),
      words_(expand_tokens(dtm)),
      z_(std::move(initial_assignments)),
      rng_(config.seed) {
  if (z_.size() != words_.size()) throw std::invalid_argument("initial assignments: wrong document count");
  for (std::size_t d = 0; d < words_.size(); ++d) {
    if (z_[d].size() != words_[d].size()) throw std::invalid_argument("initial assignments: wrong token count");
    for (auto k : z_[d]) {
      if (k >= num_topics_) throw std::invalid_argument("initial assignments: topic out of range");
    }
  }
  init_counts();
}

void GibbsSampler::init_counts() {
  doc_topic_.assign(words_.size() * num_topics_, 0);
  topic_word_.assign(num_topics_ * num_terms_, 0);
  topic_totals_.assign(num_topics_, 0);
  scratch_.assign(num_topics_, 0.0);
  for (std::size_t d = 0; d < words_.size(); ++d) {
    for (std::size_t i = 0; i < words_[d].size(); ++i) {
      const auto k = z_[d][i];
      ++doc_topic_[d * num_topics_ + k];
      ++topic_word_[k * num_terms_ + words_[d][i]];
      ++topic_totals_[k];
    }
  }
}

void GibbsSampler::sweep() {
  const double alpha = config_.alpha;
  const double beta = config_.beta;
  const double vbeta = static_cast<double>(num_terms_) * beta;
  const std::size_t K = num_topics_;

  for (std::size_t d = 0; d < words_.size(); ++d) {
    auto* nd = doc_topic_.data() + d * K;
    for (std::size_t i = 0; i < words_[d].size(); ++i) {
      const auto w = words_[d][i];
      const auto old = z_[d][i];
      --nd[old];
      --topic_word_[old * num_terms_ + w];
      --topic_totals_[old];

      double total = 0.0;
      for (std::size_t k = 0; k < K; ++k) {
        total += (nd[k] + alpha) * (topic_word_[k * num_terms_ + w] + beta) / (topic_totals_[k] + vbeta);
        scratch_[k] = total;
      }
      const double u = rng_.uniform01() * total;
      std::size_t k = 0;
      while (k + 1 < K && !(u < scratch_[k])) ++k;

      z_[d][i] = static_cast<std::uint32_t>(k);
      ++nd[k];
      ++topic_word_[k * num_terms_ + w];
      ++topic_totals_[k];
    }
  }
}

std::vector<double> GibbsSampler::conditional(std::size_t doc, std::size_t pos) const {
  const auto w = words_.at(doc).at(pos);
  const auto own = z_[doc][pos];
  const double vbeta = static_cast<double>(num_terms_) * config_.beta;
  std::vector<double> weights(num_topics_);
  for (std::size_t k = 0; k < num_topics_; ++k) {
    const double self = k == own ? 1.0 : 0.0;
    const double ndk = doc_topic_[doc * num_topics_ + k] - self;
    const double nkw = topic_word_[k * num_terms_ + w] - self;
    const double nk = topic_totals_[k] - self;
    weights[k] = (ndk + config_.alpha) * (nkw + config_.beta) / (nk + vbeta);
  }
  return weights;
}

TopicModel estimate_model(const GibbsSampler& sampler, const DocTermMatrix& dtm, std::span<const std::string> terms,
                          const LdaConfig& config) {
  TopicModel m;
  m.config = config;
  m.doc_ids = dtm.row_ids;
  m.terms.assign(terms.begin(), terms.end());
  m.vocabulary_hash = dtm.vocabulary_hash;
  m.words = sampler.tokens();
  m.z = sampler.assignments();
  m.doc_topic = sampler.doc_topic();
  m.topic_word = sampler.topic_word();
  m.topic_totals = sampler.topic_totals();

  const std::size_t K = config.num_topics;
  const std::size_t V = terms.size();
  const double kalpha = static_cast<double>(K) * config.alpha;
  const double vbeta = static_cast<double>(V) * config.beta;

  m.theta.resize(m.doc_ids.size() * K);
  for (std::size_t d = 0; d < m.doc_ids.size(); ++d) {
    const double len = static_cast<double>(m.words[d].size());
    for (std::size_t k = 0; k < K; ++k) {
      m.theta[d * K + k] = (m.doc_topic[d * K + k] + config.alpha) / (len + kalpha);
    }
  }
  m.phi.resize(K * V);
  for (std::size_t k = 0; k < K; ++k) {
    for (std::size_t v = 0; v < V; ++v) {
      m.phi[k * V + v] = (m.topic_word[k * V + v] + config.beta) / (m.topic_totals[k] + vbeta);
    }
  }
  return m;
}

TopicModel fit_lda(const DocTermMatrix& dtm, std::span<const std::string> terms, const LdaConfig& config,
                   const SweepObserver& observer) {
  config.validate();
  if (dtm.num_rows() == 0 || dtm.nnz() == 0) throw DataError("cannot fit LDA on an empty document-term matrix");
  if (terms.size() != dtm.num_cols) {
    throw DataError("term list does not match the document-term matrix width");
  }
  if (dtm.num_cols < config.num_topics) {
    log::warn("vocabulary size " + std::to_string(dtm.num_cols) + " is smaller than K=" +
              std::to_string(config.num_topics));
  }
  for (std::size_t r = 0; r < dtm.num_rows(); ++r) {
    if (dtm.row_sum(r) == 0) log::warn("document '" + dtm.row_ids[r] + "' has no tokens; skipped by the sampler");
  }

  GibbsSampler sampler(dtm, config);
  for (std::size_t it = 1; it <= config.iterations; ++it) {
    sampler.sweep();
    if (observer) observer(sampler, it);
  }
  return estimate_model(sampler, dtm, terms, config);
}

TopicSummary top_words(const TopicModel& model, std::size_t topic_id, std::size_t n) {
  if (topic_id >= model.num_topics()) {
    throw std::out_of_range("topic id " + std::to_string(topic_id) + " out of range (K=" +
                            std::to_string(model.num_topics()) + ")");
  }
  const auto row = model.phi_row(topic_id);
  std::vector<std::size_t> order(row.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (row[a] != row[b]) return row[a] > row[b];
    return model.terms[a] < model.terms[b];
  });
  TopicSummary summary;
  summary.topic_id = topic_id;
  for (std::size_t i = 0; i < std::min(n, order.size()); ++i) {
    summary.top_terms.emplace_back(model.terms[order[i]], row[order[i]]);
  }
  return summary;
}

std::vector<double> doc_topics(const TopicModel& model, std::string_view doc_id) {
  const auto it = std::find(model.doc_ids.begin(), model.doc_ids.end(), doc_id);
  if (it == model.doc_ids.end()) throw std::out_of_range("unknown document '" + std::string(doc_id) + "'");
  const auto row = model.theta_row(static_cast<std::size_t>(it - model.doc_ids.begin()));
  return {row.begin(), row.end()};
}

std::vector<ThemePassage> locate_theme_passages(const Corpus& corpus, const std::set<std::string>& topic_terms,
                                                std::size_t window, const NormalizationRules& rules) {
  if (topic_terms.empty()) throw std::invalid_argument("topic term set is empty");
  std::set<std::string> terms;
  for (const auto& t : topic_terms) {
    for (auto& n : normalized_tokens(t, rules)) terms.insert(std::move(n));
  }

  std::vector<ThemePassage> passages;
  for (const auto& doc : corpus.documents) {
    const std::size_t n = doc.sentences.size();
    std::vector<std::vector<std::string>> hits(n);
    for (std::size_t s = 0; s < n; ++s) {
      std::set<std::string> found;
      for (auto& tok : normalized_tokens(doc.sentences[s], rules)) {
        if (terms.contains(tok)) found.insert(std::move(tok));
      }
      hits[s].assign(found.begin(), found.end());
    }

    // Widened runs as [first, last] sentence ranges.
    std::vector<std::pair<std::size_t, std::size_t>> ranges;
    for (std::size_t s = 0; s < n;) {
      if (hits[s].empty()) {
        ++s;
        continue;
      }
      std::size_t e = s;
      while (e + 1 < n && !hits[e + 1].empty()) ++e;
      const std::size_t lo = s >= window ? s - window : 0;
      const std::size_t hi = std::min(n - 1, e + window);
      if (!ranges.empty() && lo <= ranges.back().second) {
        ranges.back().second = std::max(ranges.back().second, hi);
      } else {
        ranges.emplace_back(lo, hi);
      }
      s = e + 1;
    }

    for (const auto& [lo, hi] : ranges) {
      ThemePassage p;
      p.doc_id = doc.doc_id;
      std::set<std::string> matched;
      for (std::size_t s = lo; s <= hi; ++s) {
        p.sentences.push_back(doc.sentences[s]);
        if (s < doc.sentence_refs.size()) p.sentence_refs.push_back(doc.sentence_refs[s]);
        matched.insert(hits[s].begin(), hits[s].end());
      }
      p.matched_terms.assign(matched.begin(), matched.end());
      passages.push_back(std::move(p));
    }
  }
  return passages;
}

double perplexity(const TopicModel& model, const DocTermMatrix& held_out) {
  if (held_out.num_cols != model.num_terms() ||
      (held_out.vocabulary_hash != 0 && model.vocabulary_hash != 0 &&
       held_out.vocabulary_hash != model.vocabulary_hash)) {
    throw DataError("held-out documents do not share the model vocabulary");
  }
  const auto words = expand_tokens(held_out);
  std::size_t total_tokens = 0;
  for (const auto& w : words) total_tokens += w.size();
  if (total_tokens == 0) throw DataError("held-out set is empty");

  const std::size_t K = model.num_topics();
  const std::size_t V = model.num_terms();
  const double alpha = model.config.alpha;
  const double kalpha = static_cast<double>(K) * alpha;
  Rng rng(Rng::derive_seed(model.config.seed, 0x701D));
  std::vector<double> cumulative(K);
  double log_likelihood = 0.0;

  for (const auto& doc : words) {
    if (doc.empty()) continue;
    std::vector<std::uint32_t> z(doc.size());
    std::vector<std::uint32_t> ndk(K, 0);
    for (auto& k : z) {
      k = static_cast<std::uint32_t>(rng.uniform_index(K));
      ++ndk[k];
    }
    for (std::size_t it = 0; it < model.config.fold_in_iterations; ++it) {
      for (std::size_t i = 0; i < doc.size(); ++i) {
        --ndk[z[i]];
        double total = 0.0;
        for (std::size_t k = 0; k < K; ++k) {
          total += (ndk[k] + alpha) * model.phi[k * V + doc[i]];
          cumulative[k] = total;
        }
        const double u = rng.uniform01() * total;
        std::size_t k = 0;
        while (k + 1 < K && !(u < cumulative[k])) ++k;
        z[i] = static_cast<std::uint32_t>(k);
        ++ndk[k];
      }
    }
    const double len = static_cast<double>(doc.size());
    for (const auto w : doc) {
      double p = 0.0;
      for (std::size_t k = 0; k < K; ++k) p += (ndk[k] + alpha) / (len + kalpha) * model.phi[k * V + w];
      log_likelihood += std::log(p);
    }
  }
  return std::exp(-log_likelihood / static_cast<double>(total_tokens));
}

std::string model_to_json(const TopicModel& model) {
  nlohmann::ordered_json j;
  j["config"] = {{"num_topics", model.config.num_topics},
                 {"alpha", model.config.alpha},
                 {"beta", model.config.beta},
                 {"iterations", model.config.iterations},
                 {"burn_in", model.config.burn_in},
                 {"seed", model.config.seed},
                 {"fold_in_iterations", model.config.fold_in_iterations}};
  j["vocabulary_hash"] = to_hex(model.vocabulary_hash);
  j["doc_ids"] = model.doc_ids;
  j["terms"] = model.terms;
  j["theta"] = model.theta;
  j["phi"] = model.phi;
  j["words"] = model.words;
  j["z"] = model.z;
  return j.dump() + "\n";
}

TopicModel model_from_json(std::string_view text) {
  try {
    const auto j = nlohmann::json::parse(text);
    TopicModel m;
    const auto& c = j.at("config");
    m.config.num_topics = c.at("num_topics").get<std::size_t>();
    m.config.alpha = c.at("alpha").get<double>();
    m.config.beta = c.at("beta").get<double>();
    m.config.iterations = c.at("iterations").get<std::size_t>();
    m.config.burn_in = c.at("burn_in").get<std::size_t>();
    m.config.seed = c.at("seed").get<std::uint64_t>();
    m.config.fold_in_iterations = c.at("fold_in_iterations").get<std::size_t>();
    m.vocabulary_hash = from_hex(j.at("vocabulary_hash").get<std::string>());
    m.doc_ids = j.at("doc_ids").get<std::vector<std::string>>();
    m.terms = j.at("terms").get<std::vector<std::string>>();
    m.theta = j.at("theta").get<std::vector<double>>();
    m.phi = j.at("phi").get<std::vector<double>>();
    m.words = j.at("words").get<std::vector<std::vector<std::uint32_t>>>();
    m.z = j.at("z").get<std::vector<std::vector<std::uint32_t>>>();

    const std::size_t K = m.config.num_topics;
    const std::size_t V = m.terms.size();
    const std::size_t D = m.doc_ids.size();
    if (m.theta.size() != D * K || m.phi.size() != K * V || m.words.size() != D || m.z.size() != D) {
      throw DataError("topic model JSON has inconsistent dimensions");
    }
    m.doc_topic.assign(D * K, 0);
    m.topic_word.assign(K * V, 0);
    m.topic_totals.assign(K, 0);
    for (std::size_t d = 0; d < D; ++d) {
      if (m.words[d].size() != m.z[d].size()) throw DataError("topic model JSON: z/words length mismatch");
      for (std::size_t i = 0; i < m.words[d].size(); ++i) {
        const auto k = m.z[d][i];
        const auto w = m.words[d][i];
        if (k >= K || w >= V) throw DataError("topic model JSON: id out of range");
        ++m.doc_topic[d * K + k];
        ++m.topic_word[k * V + w];
        ++m.topic_totals[k];
      }
    }
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("topic model JSON: ") + e.what());
  }
}

}  // namespace talkmine
