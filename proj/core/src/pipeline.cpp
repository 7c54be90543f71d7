#include "talkmine/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <functional>
#include <map>
#include <set>
#include <unordered_map>

#include "json.hpp"
#include "strutil.hpp"
#include "talkmine/error.hpp"
#include "talkmine/hash.hpp"
#include "talkmine/log.hpp"
#include "talkmine/rng.hpp"

namespace talkmine {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

std::string_view to_string(ReportFormat f) {
  switch (f) {
    case ReportFormat::csv: return "csv";
    case ReportFormat::json: return "json";
    case ReportFormat::both: return "both";
  }
  return "csv";
}

ReportFormat parse_report_format(std::string_view text) {
  if (text == "csv") return ReportFormat::csv;
  if (text == "json") return ReportFormat::json;
  if (text == "both") return ReportFormat::both;
  throw ConfigError("format must be csv, json or both, got '" + std::string(text) + "'");
}

// ---------------------------------------------------------------------------
// Configuration

namespace {

struct ConfigParser {
  PipelineConfig cfg;
  fs::path base;
  std::map<std::string, std::size_t> seen;  // key -> line
  std::string key;
  std::size_t line = 0;

  [[noreturn]] void fail(const std::string& msg) const {
    throw ConfigError("line " + std::to_string(line) + ": " + key + ": " + msg);
  }

  template <class T>
  T integer(std::string_view v, T lo, T hi) const {
    T out{};
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size()) fail("expected an integer, got '" + std::string(v) + "'");
    if (out < lo || out > hi) {
      fail("value " + std::string(v) + " out of range [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }
    return out;
  }

  double real(std::string_view v, double lo, double hi, bool open_lo = false) const {
    double out = 0.0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size()) fail("expected a number, got '" + std::string(v) + "'");
    if (out < lo || out > hi || (open_lo && out == lo)) fail("value " + std::string(v) + " out of range");
    return out;
  }

  bool boolean(std::string_view v) const {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    fail("expected true or false, got '" + std::string(v) + "'");
  }

  fs::path existing(std::string_view v) const {
    fs::path p(v);
    if (p.is_relative()) p = base / p;
    if (!fs::exists(p)) fail("no such file or directory '" + p.string() + "'");
    return p;
  }

  std::uint64_t file_hash(const fs::path& p) const {
    if (fs::is_directory(p)) fail("expected a file, got directory '" + p.string() + "'");
    return fnv1a(detail::read_file(p));
  }

  void wrap(const std::function<void()>& f) const {
    try {
      f();
    } catch (const ConfigError& e) {
      fail(e.what());
    } catch (const DataError& e) {
      fail(e.what());
    }
  }

  void set(std::string_view v) {
    constexpr std::size_t kMax = static_cast<std::size_t>(1) << 40;
    auto& s = cfg.sentiment;
    if (key == "input") {
      cfg.inputs.push_back(existing(v));
    } else if (key == "output") {
      fs::path p(v);
      cfg.output = p.is_relative() ? base / p : p;
    } else if (key == "format") {
      wrap([&] { cfg.format = parse_report_format(v); });
    } else if (key == "seed") {
      cfg.seed = integer<std::uint64_t>(v, 0, UINT64_MAX);
    } else if (key == "grouping") {
      wrap([&] { cfg.grouping = parse_grouping_policy(v); });
    } else if (key == "corpus.moderator_prefix") {
      if (v.empty()) fail("must not be empty");
      cfg.transcript_format.moderator_prefix = std::string(v);
    } else if (key == "corpus.abbreviations") {
      const auto list = detail::split_list(v);
      cfg.segmentation.abbreviations = {list.begin(), list.end()};
    } else if (key == "normalize.rules") {
      const auto p = existing(v);
      wrap([&] { cfg.rules = load_normalization_rules(p); });
    } else if (key == "normalize.min_df") {
      cfg.min_df = integer<std::size_t>(v, 1, kMax);
    } else if (key == "topics.k") {
      cfg.lda.num_topics = integer<std::size_t>(v, 1, 100000);
    } else if (key == "topics.alpha") {
      cfg.lda.alpha = real(v, 0.0, 1e9, true);
    } else if (key == "topics.beta") {
      cfg.lda.beta = real(v, 0.0, 1e9, true);
    } else if (key == "topics.iterations") {
      cfg.lda.iterations = integer<std::size_t>(v, 1, kMax);
    } else if (key == "topics.burn_in") {
      cfg.lda.burn_in = integer<std::size_t>(v, 0, kMax);
    } else if (key == "topics.top_n") {
      cfg.top_n = integer<std::size_t>(v, 1, 100000);
    } else if (key == "topics.passage_terms") {
      cfg.passage_terms = integer<std::size_t>(v, 1, 100000);
    } else if (key == "topics.passage_window") {
      cfg.passage_window = integer<std::size_t>(v, 0, 100000);
    } else if (key == "sentiment.positive_seeds") {
      const auto list = detail::split_list(v);
      s.seeds.positive = {list.begin(), list.end()};
    } else if (key == "sentiment.negative_seeds") {
      const auto list = detail::split_list(v);
      s.seeds.negative = {list.begin(), list.end()};
    } else if (key == "sentiment.window") {
      s.window = integer<std::size_t>(v, 1, 100000);
    } else if (key == "sentiment.tau") {
      s.tau = real(v, 0.0, 1.0);
    } else if (key == "sentiment.mix") {
      s.training.mix = real(v, 0.0, 1.0);
    } else if (key == "sentiment.folds") {
      s.training.folds = integer<std::size_t>(v, 2, 100000);
    } else if (key == "sentiment.lambda_count") {
      s.training.lambda_count = integer<std::size_t>(v, 1, 100000);
    } else if (key == "sentiment.lambda_min_ratio") {
      s.training.lambda_min_ratio = real(v, 0.0, 1.0, true);
    } else if (key == "sentiment.lambdas") {
      s.training.lambda_grid.clear();
      for (const auto& item : detail::split_list(v)) s.training.lambda_grid.push_back(real(item, 0.0, 1e300));
      if (s.training.lambda_grid.empty()) fail("must list at least one value");
      if (!std::is_sorted(s.training.lambda_grid.rbegin(), s.training.lambda_grid.rend())) {
        fail("values must be in decreasing order");
      }
    } else if (key == "sentiment.negative_threshold") {
      s.thresholds.negative_below = real(v, 0.0, 1.0);
    } else if (key == "sentiment.positive_threshold") {
      s.thresholds.positive_above = real(v, 0.0, 1.0);
    } else if (key == "sentiment.max_sweeps") {
      s.training.solver.max_sweeps = integer<std::size_t>(v, 1, kMax);
    } else if (key == "sentiment.reference_corpus") {
      s.reference_corpus = existing(v);
      cfg.file_hashes.emplace_back(key, file_hash(*s.reference_corpus));
    } else if (key == "sentiment.labels_file") {
      s.labels_file = existing(v);
      cfg.file_hashes.emplace_back(key, file_hash(*s.labels_file));
    } else if (key == "analysis.modes_file") {
      const auto p = existing(v);
      wrap([&] { cfg.modes = load_mode_dictionary(p); });
    } else if (key == "analysis.include_t4") {
      cfg.include_t4 = boolean(v);
    } else if (key == "analysis.mu_unit") {
      wrap([&] { cfg.mu_unit = parse_averaging_unit(v); });
    } else {
      fail("unknown key");
    }
  }

  void cross_checks() {
    auto at = [&](const std::string& k) {
      key = k;
      const auto it = seen.find(k);
      line = it == seen.end() ? 0 : it->second;
    };
    if (cfg.inputs.empty()) {
      key = "input";
      line = 0;
      throw ConfigError("missing required key 'input'");
    }
    if (cfg.lda.burn_in >= cfg.lda.iterations) {
      at(seen.contains("topics.burn_in") ? "topics.burn_in" : "topics.iterations");
      fail("topics.burn_in must be smaller than topics.iterations");
    }
    if (cfg.sentiment.thresholds.negative_below > cfg.sentiment.thresholds.positive_above) {
      at("sentiment.negative_threshold");
      fail("must not exceed sentiment.positive_threshold");
    }
    if (cfg.sentiment.seeds.positive.empty() || cfg.sentiment.seeds.negative.empty()) {
      at(cfg.sentiment.seeds.positive.empty() ? "sentiment.positive_seeds" : "sentiment.negative_seeds");
      fail("must not be empty");
    }
    at("sentiment.positive_seeds");
    wrap([&] { cfg.sentiment.seeds.validate(); });
    at("normalize.rules");
    wrap([&] { cfg.rules.validate(); });
    at("analysis.modes_file");
    wrap([&] { ModeMatcher(cfg.modes, cfg.rules); });
  }
};

}  // namespace

PipelineConfig parse_config(std::string_view text, const fs::path& base_dir) {
  ConfigParser p;
  p.base = base_dir;
  p.cfg.output = base_dir / "out";
  for (auto raw : detail::split(text, '\n')) {
    ++p.line;
    const auto line = detail::trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    p.key = std::string(detail::trim(line.substr(0, eq == std::string_view::npos ? line.size() : eq)));
    if (eq == std::string_view::npos) p.fail("expected key=value");
    if (p.key != "input" && p.seen.contains(p.key)) {
      p.fail("duplicate key (first set on line " + std::to_string(p.seen[p.key]) + ")");
    }
    p.seen.emplace(p.key, p.line);
    p.set(detail::trim(line.substr(eq + 1)));
  }
  p.cross_checks();
  return std::move(p.cfg);
}

PipelineConfig validate_config(const fs::path& path) {
  if (!fs::is_regular_file(path)) throw ConfigError("config file '" + path.string() + "' not found");
  std::string text;
  try {
    text = detail::read_file(path);
  } catch (const DataError& e) {
    throw ConfigError(e.what());
  }
  try {
    return parse_config(text, fs::absolute(path).parent_path());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

std::string canonical_config(const PipelineConfig& c) {
  std::string out;
  auto put = [&](std::string_view k, const std::string& v) { out += std::string(k) + '=' + v + '\n'; };
  auto num = [](double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  auto join = [](const auto& items) {
    std::string s;
    for (const auto& i : items) {
      if (!s.empty()) s += ',';
      s += i;
    }
    return s;
  };
  put("version", std::string(kVersion));
  put("seed", std::to_string(c.seed));
  put("grouping", std::string(to_string(c.grouping)));
  put("corpus.moderator_prefix", c.transcript_format.moderator_prefix);
  put("corpus.abbreviations", join(c.segmentation.abbreviations));
  put("normalize.stopwords", join(c.rules.stopwords));
  put("normalize.exclusions", join(c.rules.exclusions));
  std::vector<std::string> merges;
  for (const auto& [from, to] : c.rules.merge_table) merges.push_back(from + ' ' + to);
  put("normalize.merges", join(merges));
  put("normalize.suffix_rules", c.rules.suffix_rules ? "true" : "false");
  put("normalize.lowercase", c.rules.lowercase ? "true" : "false");
  put("normalize.min_token_length", std::to_string(c.rules.min_token_length));
  put("normalize.min_df", std::to_string(c.min_df));
  put("topics.k", std::to_string(c.lda.num_topics));
  put("topics.alpha", num(c.lda.alpha));
  put("topics.beta", num(c.lda.beta));
  put("topics.iterations", std::to_string(c.lda.iterations));
  put("topics.burn_in", std::to_string(c.lda.burn_in));
  put("topics.top_n", std::to_string(c.top_n));
  put("topics.passage_terms", std::to_string(c.passage_terms));
  put("topics.passage_window", std::to_string(c.passage_window));
  const auto& s = c.sentiment;
  put("sentiment.positive_seeds", join(s.seeds.positive));
  put("sentiment.negative_seeds", join(s.seeds.negative));
  put("sentiment.window", std::to_string(s.window));
  put("sentiment.tau", num(s.tau));
  put("sentiment.mix", num(s.training.mix));
  put("sentiment.folds", std::to_string(s.training.folds));
  put("sentiment.lambda_count", std::to_string(s.training.lambda_count));
  put("sentiment.lambda_min_ratio", num(s.training.lambda_min_ratio));
  std::vector<std::string> grid;
  for (double l : s.training.lambda_grid) grid.push_back(num(l));
  put("sentiment.lambdas", join(grid));
  put("sentiment.max_sweeps", std::to_string(s.training.solver.max_sweeps));
  put("sentiment.negative_threshold", num(s.thresholds.negative_below));
  put("sentiment.positive_threshold", num(s.thresholds.positive_above));
  for (const auto& [name, kws] : c.modes.modes) put("analysis.mode." + name, join(kws));
  put("analysis.include_t4", c.include_t4 ? "true" : "false");
  put("analysis.mu_unit", std::string(to_string(c.mu_unit)));
  for (const auto& [k, h] : c.file_hashes) put(k + ".fnv1a", to_hex(h));
  return out;
}

std::uint64_t config_hash(const PipelineConfig& config) { return fnv1a(canonical_config(config)); }

std::vector<fs::path> expand_inputs(std::span<const fs::path> inputs) {
  std::vector<fs::path> files;
  for (const auto& in : inputs) {
    if (fs::is_directory(in)) {
      std::vector<fs::path> found;
      for (const auto& e : fs::directory_iterator(in)) {
        if (e.is_regular_file() && e.path().extension() == ".txt") found.push_back(e.path());
      }
      std::sort(found.begin(), found.end());
      files.insert(files.end(), found.begin(), found.end());
    } else {
      files.push_back(in);
    }
  }
  return files;
}

// ---------------------------------------------------------------------------
// Stage plumbing

OutputLock::OutputLock(const fs::path& output_dir) : path_(output_dir / ".lock") {
  std::error_code ec;
  fs::create_directories(output_dir, ec);
  if (ec) throw ConfigError("cannot create output directory '" + output_dir.string() + "': " + ec.message());
  std::FILE* f = std::fopen(path_.string().c_str(), "wx");
  if (!f) {
    if (fs::exists(path_)) {
      throw ConfigError("output directory '" + output_dir.string() + "' is locked by another run (remove " +
                        path_.string() + " if that run is gone)");
    }
    throw ConfigError("cannot write to output directory '" + output_dir.string() + "'");
  }
  std::fclose(f);
}

OutputLock::~OutputLock() {
  std::error_code ec;
  fs::remove(path_, ec);
}

namespace {

template <class F>
auto in_stage(std::string_view stage, F&& f) -> decltype(f()) {
  const std::string prefix = "stage " + std::string(stage) + ": ";
  try {
    return f();
  } catch (const ConfigError& e) {
    throw ConfigError(prefix + e.what());
  } catch (const DataError& e) {
    throw DataError(prefix + e.what());
  } catch (const fs::filesystem_error& e) {
    throw DataError(prefix + e.what());
  } catch (const std::exception& e) {
    throw std::runtime_error(prefix + e.what());
  }
}

// Fills <output>/.<name>.partial and swaps it into <output>/<name>.
void write_stage(const PipelineConfig& cfg, const std::string& name, const std::function<void(const fs::path&)>& fill) {
  fs::create_directories(cfg.output);
  const auto final_dir = cfg.output / name;
  const auto partial = cfg.output / ("." + name + ".partial");
  fs::remove_all(partial);
  fs::create_directories(partial);
  try {
    fill(partial);
  } catch (...) {
    std::error_code ec;
    fs::remove_all(partial, ec);
    throw;
  }
  fs::remove_all(final_dir);
  fs::rename(partial, final_dir);
}

std::string safe_name(std::string_view label) {
  std::string out;
  for (char c : label) {
    const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '-' ||
                    c == '_' || c == '.';
    out += ok ? c : '_';
  }
  if (out.empty() || out == "." || out == "..") out = "_" + out;
  return out;
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<Transcript> load_ingested(const PipelineConfig& cfg) {
  const auto dir = cfg.output / "ingest" / "transcripts";
  if (!fs::is_directory(dir)) throw DataError("no ingested transcripts under " + dir.string() + "; run ingest first");
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".txt") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<Transcript> out;
  for (const auto& f : files) out.push_back(load_transcript(f, cfg.transcript_format));
  if (out.empty()) throw DataError("no ingested transcripts under " + dir.string());
  return out;
}

std::string read_artifact(const fs::path& p, std::string_view producer) {
  if (!fs::exists(p)) throw DataError("missing " + p.string() + "; run " + std::string(producer) + " first");
  return detail::read_file(p);
}

std::uint64_t sentiment_seed(const PipelineConfig& cfg) { return Rng::derive_seed(cfg.seed, 2); }

std::uint64_t topic_seed(const PipelineConfig& cfg, std::string_view community) {
  return Rng::derive_seed(cfg.seed, fnv1a(community));
}

std::vector<double> probabilities(const SentimentClassifier& c, std::span<const SentenceRecord> sentences,
                                  const PipelineConfig& cfg) {
  std::vector<double> p;
  p.reserve(sentences.size());
  for (const auto& s : sentences) {
    p.push_back(score_text(c, s.text, cfg.rules, s.ref, cfg.sentiment.thresholds).probability_of_positiveness);
  }
  return p;
}

}  // namespace

void run_ingest(const PipelineConfig& cfg) {
  in_stage("ingest", [&] {
    const auto files = expand_inputs(cfg.inputs);
    if (files.empty()) throw DataError("no transcript files found in the configured inputs");
    std::vector<Transcript> transcripts;
    for (const auto& f : files) transcripts.push_back(load_transcript(f, cfg.transcript_format));
    const auto corpus = build_corpus(transcripts, cfg.grouping, cfg.segmentation);
    log::info("ingested " + std::to_string(transcripts.size()) + " transcripts, " + std::to_string(corpus.size()) +
              " documents");

    write_stage(cfg, "ingest", [&](const fs::path& dir) {
      fs::create_directories(dir / "transcripts");
      for (std::size_t i = 0; i < transcripts.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof name, "%04zu.txt", i + 1);
        detail::write_file(dir / "transcripts" / name, serialize_transcript(transcripts[i]));
      }
      detail::write_file(dir / "corpus.jsonl", corpus_to_jsonl(corpus));
    });
  });
}

void run_topics(const PipelineConfig& cfg) {
  in_stage("topics", [&] {
    const auto corpus = build_corpus(load_ingested(cfg), cfg.grouping, cfg.segmentation);
    std::vector<std::pair<std::string, std::string>> models;
    for (const auto& community : corpus.communities()) {
      const auto sub = corpus.community(community);
      const auto docs = tokenize_corpus(sub, cfg.rules);
      const auto vocab = build_vocabulary(docs, cfg.min_df);
      std::vector<std::string> ids;
      for (const auto& d : sub.documents) ids.push_back(d.doc_id);
      const auto dtm = build_dtm(docs, ids, vocab);
      auto lda = cfg.lda;
      lda.seed = topic_seed(cfg, community);
      log::info("fitting " + std::to_string(lda.num_topics) + " topics for community " + community + " (" +
                std::to_string(ids.size()) + " documents, " + std::to_string(vocab.size()) + " terms)");
      models.emplace_back(community, model_to_json(fit_lda(dtm, vocab.terms(), lda)));
    }
    write_stage(cfg, "topics", [&](const fs::path& dir) {
      for (const auto& [community, json] : models) {
        fs::create_directories(dir / safe_name(community));
        detail::write_file(dir / safe_name(community) / "model.json", json);
      }
    });
  });
}

void run_sentiment(const PipelineConfig& cfg) {
  in_stage("sentiment", [&] {
    const auto& s = cfg.sentiment;
    const auto sentences = collect_sentences(load_ingested(cfg), cfg.segmentation);
    if (sentences.empty()) throw DataError("no participant sentences to score");

    std::vector<CandidatePhrase> phrases;
    TokenDocs reference;
    for (const auto& r : sentences) {
      auto p = extract_phrases(r.text, r.ref);
      phrases.insert(phrases.end(), p.begin(), p.end());
      reference.push_back(surface_tokens(r.text));
    }
    if (s.reference_corpus) {
      const std::string content = detail::read_file(*s.reference_corpus);
      for (auto line : detail::split(content, '\n')) {
        if (!detail::trim(line).empty()) reference.push_back(surface_tokens(line));
      }
    }
    const auto lexicon = build_lexicon(phrases, reference, s.seeds, s.window);

    auto labeled = weak_label(sentences, lexicon, s.tau);
    if (s.labels_file) {
      labeled = apply_label_overrides(std::move(labeled), sentences,
                                      parse_label_file(detail::read_file(*s.labels_file)));
    }
    log::info(std::to_string(labeled.count(Polarity::positive)) + " positive and " +
              std::to_string(labeled.count(Polarity::negative)) + " negative training sentences");

    TokenDocs docs;
    std::vector<std::string> ids;
    for (const auto& r : sentences) {
      docs.push_back(normalized_tokens(r.text, cfg.rules));
      ids.push_back(r.ref.session_id + ':' + std::to_string(r.ref.utterance_index) + ':' +
                    std::to_string(r.ref.sentence_index));
    }
    const auto vocab = build_vocabulary(docs, 1);
    const auto dtm = build_dtm(docs, ids, vocab);
    const TfidfTransform transform(dtm);
    const auto features = transform.apply(dtm);

    auto training = s.training;
    training.seed = sentiment_seed(cfg);
    const auto classifier = train_classifier(labeled, features, vocab, transform.idf(), training);
    const auto probs = probabilities(classifier, sentences, cfg);

    std::string labels_tsv;
    for (const auto& it : labeled.items) {
      labels_tsv += it.ref.session_id + '\t' + std::to_string(it.ref.utterance_index) + '\t' +
                    std::to_string(it.ref.sentence_index) + '\t' + std::string(to_string(it.label)) + '\n';
    }
    std::string scores_tsv = "session_id\tutterance_index\tsentence_index\tcommunity_label\tspeaker_id\t"
                             "discussion_topic\tprobability\tsentiment\n";
    for (std::size_t i = 0; i < sentences.size(); ++i) {
      const auto& r = sentences[i];
      scores_tsv += r.ref.session_id + '\t' + std::to_string(r.ref.utterance_index) + '\t' +
                    std::to_string(r.ref.sentence_index) + '\t' + r.community_label + '\t' + r.speaker_id + '\t' +
                    std::string(to_string(r.discussion_topic)) + '\t' + fmt17(probs[i]) + '\t' +
                    std::string(to_string(classify(probs[i], s.thresholds))) + '\n';
    }
    write_stage(cfg, "sentiment", [&](const fs::path& dir) {
      detail::write_file(dir / "lexicon.tsv", lexicon_to_tsv(lexicon));
      detail::write_file(dir / "labels.tsv", labels_tsv);
      detail::write_file(dir / "classifier.json", classifier_to_json(classifier));
      detail::write_file(dir / "scores.tsv", scores_tsv);
    });
  });
}

ReportBundle run_report(const PipelineConfig& cfg) {
  return in_stage("report", [&] {
    ReportBundle b;
    const auto transcripts = load_ingested(cfg);
    const auto corpus = build_corpus(transcripts, cfg.grouping, cfg.segmentation);

    for (const auto& community : corpus.communities()) {
      const auto model = model_from_json(
          read_artifact(cfg.output / "topics" / safe_name(community) / "model.json", "the topics stage"));
      const auto sub = corpus.community(community);
      CommunityTopics ct;
      ct.community_label = community;
      for (std::size_t k = 0; k < model.num_topics(); ++k) {
        auto summary = top_words(model, k, cfg.top_n);
        std::set<std::string> terms;
        for (std::size_t i = 0; i < summary.top_terms.size() && i < cfg.passage_terms; ++i) {
          terms.insert(summary.top_terms[i].first);
        }
        ct.passages.push_back(terms.empty() ? std::vector<ThemePassage>{}
                                            : locate_theme_passages(sub, terms, cfg.passage_window, cfg.rules));
        ct.topics.push_back(std::move(summary));
      }
      b.topics.push_back(std::move(ct));
    }

    b.lexicon = lexicon_from_tsv(read_artifact(cfg.output / "sentiment" / "lexicon.tsv", "the sentiment stage"));
    b.classifier =
        classifier_from_json(read_artifact(cfg.output / "sentiment" / "classifier.json", "the sentiment stage"));

    const auto sentences = collect_sentences(transcripts, cfg.segmentation);
    const auto probs = probabilities(b.classifier, sentences, cfg);
    std::vector<ScoredSentence> scored;
    for (std::size_t i = 0; i < sentences.size(); ++i) {
      const auto& r = sentences[i];
      scored.push_back({r.ref, r.community_label, r.speaker_id, r.discussion_topic, probs[i]});
    }

    std::vector<std::optional<DiscussionTopic>> scopes{DiscussionTopic::T1, DiscussionTopic::T2,
                                                       DiscussionTopic::T3};
    if (cfg.include_t4) scopes.push_back(DiscussionTopic::T4);
    scopes.push_back(std::nullopt);
    for (const auto& scope : scopes) {
      auto rows = speaker_positiveness(scored, scope);
      b.speakers.insert(b.speakers.end(), rows.begin(), rows.end());
    }
    b.topic_mu = topic_mean_positiveness(scored, cfg.include_t4, cfg.mu_unit);

    const auto mentions = mode_phrase_scores(sentences, b.lexicon, cfg.modes, cfg.rules, probs);
    const auto names = cfg.modes.mode_names();
    for (const auto& community : corpus.communities()) {
      std::vector<ModeMention> mine;
      std::copy_if(mentions.begin(), mentions.end(), std::back_inserter(mine),
                   [&](const ModeMention& m) { return m.community_label == community; });
      b.mode_tables.push_back({community, mode_sentiment_table(mine, names)});
    }

    b.manifest.seed = cfg.seed;
    b.manifest.config_hash = config_hash(cfg);
    for (const auto& t : transcripts) b.manifest.inputs.emplace_back(t.session_id, fnv1a(serialize_transcript(t)));

    write_stage(cfg, "report", [&](const fs::path& dir) { emit_report(b, cfg.format, dir); });
    return b;
  });
}

ReportBundle run_pipeline(const PipelineConfig& cfg) {
  std::vector<std::string> written;
  try {
    run_ingest(cfg);
    written.push_back("ingest");
    run_topics(cfg);
    written.push_back("topics");
    run_sentiment(cfg);
    written.push_back("sentiment");
    return run_report(cfg);
  } catch (...) {
    for (const auto& name : written) {
      std::error_code ec;
      fs::remove_all(cfg.output / name, ec);
    }
    throw;
  }
}

// ---------------------------------------------------------------------------
// Report emission

namespace {

ojson optional_value(const std::optional<double>& v) { return v ? ojson(report_value(*v)) : ojson(nullptr); }

ojson ref_json(const SentenceRef& r) { return ojson::array({r.session_id, r.utterance_index, r.sentence_index}); }

ojson topics_value(const std::vector<CommunityTopics>& topics) {
  auto out = ojson::array();
  for (const auto& ct : topics) {
    auto list = ojson::array();
    for (std::size_t k = 0; k < ct.topics.size(); ++k) {
      const auto& t = ct.topics[k];
      auto terms = ojson::array();
      for (const auto& [term, p] : t.top_terms) terms.push_back({{"term", term}, {"probability", p}});
      auto passages = ojson::array();
      for (const auto& p : ct.passages[k]) {
        auto refs = ojson::array();
        for (const auto& r : p.sentence_refs) refs.push_back(ref_json(r));
        passages.push_back({{"doc_id", p.doc_id},
                            {"matched_terms", p.matched_terms},
                            {"sentence_refs", refs},
                            {"sentences", p.sentences}});
      }
      list.push_back({{"topic_id", t.topic_id}, {"top_terms", terms}, {"passages", passages}});
    }
    out.push_back({{"community_label", ct.community_label}, {"topics", list}});
  }
  return out;
}

ojson manifest_value(const RunManifest& m) {
  auto inputs = ojson::array();
  for (const auto& [session, h] : m.inputs) inputs.push_back({{"session_id", session}, {"fnv1a", to_hex(h)}});
  return {{"tool", "talkmine"},
          {"version", m.version},
          {"seed", m.seed},
          {"config_hash", to_hex(m.config_hash)},
          {"inputs", inputs}};
}

ojson speaker_value(const SpeakerReport& r) {
  auto means = ojson::array();
  for (double v : r.utterance_means) means.push_back(report_value(v));
  return {{"community_label", r.community_label},
          {"discussion_topic", r.discussion_topic ? std::string(to_string(*r.discussion_topic)) : "all"},
          {"session_id", r.session_id},
          {"speaker_id", r.speaker_id},
          {"utterance_means", means},
          {"mean", report_value(r.mean)},
          {"count", r.count}};
}

std::vector<std::string> speaker_communities(std::span<const SpeakerReport> speakers) {
  std::vector<std::string> out;
  for (const auto& s : speakers) {
    if (std::find(out.begin(), out.end(), s.community_label) == out.end()) out.push_back(s.community_label);
  }
  return out;
}

std::string dump(const ojson& j) { return j.dump(2) + "\n"; }

}  // namespace

std::string manifest_json(const RunManifest& manifest) { return dump(manifest_value(manifest)); }

std::string topics_json(const std::vector<CommunityTopics>& topics) { return dump(topics_value(topics)); }

std::string plot_json(std::span<const SpeakerReport> speakers, DiscussionTopic topic) {
  ojson j;
  j["discussion_topic"] = std::string(to_string(topic));
  auto communities = ojson::object();
  for (const auto& s : speakers) {
    if (s.discussion_topic != topic) continue;
    auto means = ojson::array();
    for (double v : s.utterance_means) means.push_back(report_value(v));
    communities[s.community_label].push_back({{"session_id", s.session_id},
                                              {"speaker_id", s.speaker_id},
                                              {"utterance_means", means},
                                              {"mean", report_value(s.mean)}});
  }
  j["communities"] = communities;
  return dump(j);
}

std::string bundle_json(const ReportBundle& b) {
  ojson j;
  j["manifest"] = manifest_value(b.manifest);
  j["topics"] = topics_value(b.topics);

  auto lexicon = ojson::array();
  for (const auto& [phrase, e] : b.lexicon.entries) {
    lexicon.push_back({{"phrase", phrase},
                       {"hit_positive", e.hit_positive},
                       {"hit_negative", e.hit_negative},
                       {"ratio", e.ratio},
                       {"score", e.score}});
  }
  j["lexicon"] = lexicon;

  auto weights = ojson::object();
  for (std::size_t i = 0; i < b.classifier.terms.size(); ++i) {
    if (b.classifier.weights[i] != 0.0) weights[b.classifier.terms[i]] = b.classifier.weights[i];
  }
  j["classifier"] = {{"vocabulary_hash", to_hex(b.classifier.vocabulary_hash)},
                     {"lambda", b.classifier.lambda},
                     {"mix", b.classifier.mix},
                     {"intercept", b.classifier.intercept},
                     {"nonzero_weights", weights}};

  auto speakers = ojson::array();
  for (const auto& s : b.speakers) speakers.push_back(speaker_value(s));
  j["speakers"] = speakers;

  auto mu = ojson::array();
  for (const auto& r : b.topic_mu) {
    mu.push_back({{"discussion_topic", std::string(to_string(r.discussion_topic))},
                  {"community_label", r.community_label},
                  {"mu", report_value(r.mu)}});
  }
  j["topic_mu"] = mu;

  auto modes = ojson::array();
  for (const auto& t : b.mode_tables) {
    auto rows = ojson::array();
    for (const auto& r : t.rows) {
      rows.push_back({{"mode", r.mode},
                      {"mean", optional_value(r.mean)},
                      {"std_dev", optional_value(r.std_dev)},
                      {"count", r.count}});
    }
    modes.push_back({{"community_label", t.community_label}, {"rows", rows}});
  }
  j["mode_tables"] = modes;
  return dump(j);
}

void emit_report(const ReportBundle& b, ReportFormat format, const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw DataError("cannot create report directory '" + dir.string() + "'");

  if (format == ReportFormat::csv || format == ReportFormat::both) {
    detail::write_file(dir / "topic_mu.csv", topic_mu_csv(b.topic_mu));
    for (const auto& community : speaker_communities(b.speakers)) {
      std::vector<SpeakerReport> mine;
      std::copy_if(b.speakers.begin(), b.speakers.end(), std::back_inserter(mine),
                   [&](const SpeakerReport& s) { return s.community_label == community; });
      fs::create_directories(dir / safe_name(community));
      detail::write_file(dir / safe_name(community) / "speakers.csv", speakers_csv(mine));
    }
    for (const auto& t : b.mode_tables) {
      fs::create_directories(dir / safe_name(t.community_label));
      detail::write_file(dir / safe_name(t.community_label) / "mode_table.csv", mode_table_csv(t.rows));
    }
    std::set<DiscussionTopic> figures;
    for (const auto& s : b.speakers) {
      if (s.discussion_topic) figures.insert(*s.discussion_topic);
    }
    for (auto topic : figures) {
      detail::write_file(dir / ("plot_" + std::string(to_string(topic)) + ".json"), plot_json(b.speakers, topic));
    }
    detail::write_file(dir / "topics.json", topics_json(b.topics));
    detail::write_file(dir / "manifest.json", manifest_json(b.manifest));
  }
  if (format == ReportFormat::json || format == ReportFormat::both) {
    detail::write_file(dir / "bundle.json", bundle_json(b));
  }
}

}  // namespace talkmine
