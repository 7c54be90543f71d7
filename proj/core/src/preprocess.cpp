#include "talkmine/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_map>

#include "strutil.hpp"
#include "talkmine/error.hpp"
#include "talkmine/hash.hpp"

namespace talkmine {

namespace {

bool is_ascii_alnum(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9');
}

// Characters of the General Punctuation block we care about: U+2018..U+201D
// quotes, U+2014 dash, U+2026 ellipsis. Only U+2019 acts as an apostrophe.
bool is_general_punctuation(std::string_view s, std::size_t i) {
  return i + 2 < s.size() && static_cast<unsigned char>(s[i]) == 0xE2 &&
         static_cast<unsigned char>(s[i + 1]) == 0x80;
}

void flush_token(std::string& current, std::vector<std::string>& out) {
  std::size_t b = 0;
  std::size_t e = current.size();
  while (b < e && current[b] == '\'') ++b;
  while (e > b && current[e - 1] == '\'') --e;
  if (e > b) out.emplace_back(current.substr(b, e - b));
  current.clear();
}

}  // namespace

std::vector<std::string> tokenize(std::string_view sentence) {
  std::vector<std::string> tokens;
  std::string current;
  for (std::size_t i = 0; i < sentence.size();) {
    const auto c = static_cast<unsigned char>(sentence[i]);
    if (is_general_punctuation(sentence, i)) {
      const auto third = static_cast<unsigned char>(sentence[i + 2]);
      if (third == 0x99) {
        current += '\'';
      } else {
        flush_token(current, tokens);
      }
      i += 3;
      continue;
    }
    if (is_ascii_alnum(c) || c == '\'' || c >= 0x80) {
      current += static_cast<char>(c);
    } else {
      flush_token(current, tokens);
    }
    ++i;
  }
  flush_token(current, tokens);
  return tokens;
}

const std::set<std::string>& default_stopwords() {
  static const std::set<std::string> words{
      "a", "about", "above", "after", "again", "against", "all", "also", "always", "am", "an",
      "and", "any", "anything", "are", "aren't", "as", "at", "be", "because", "been", "before",
      "being", "below", "between", "both", "but", "by", "can", "can't", "cannot", "could",
      "couldn't", "did", "didn't", "do", "does", "doesn't", "doing", "don't", "down", "during",
      "each", "else", "even", "ever", "every", "everything", "few", "for", "from", "further",
      "get", "gets", "getting", "go", "goes", "going", "gonna", "got", "had", "hadn't", "has",
      "hasn't", "have", "haven't", "having", "he", "he's", "her", "here", "hers", "herself",
      "him", "himself", "his", "how", "i", "i'd", "i'll", "i'm", "i've", "if", "in", "into",
      "is", "isn't", "it", "it's", "its", "itself", "just", "know", "let's", "like", "maybe",
      "me", "mean", "more", "most", "much", "must", "my", "myself", "no", "nor", "not",
      "nothing", "now", "of", "off", "oh", "ok", "okay", "on", "once", "one", "only", "or",
      "other", "ought", "our", "ours", "ourselves", "out", "over", "own", "really", "right",
      "said", "same", "say", "says", "she", "she's", "should", "shouldn't", "so", "some",
      "something", "still", "such", "than", "that", "that's", "the", "their", "theirs", "them",
      "themselves", "then", "there", "there's", "these", "they", "they'll", "they're",
      "they've", "think", "this", "those", "through", "to", "too", "um", "uh", "under", "until",
      "up", "us", "very", "was", "wasn't", "we", "we'd", "we'll", "we're", "we've", "well",
      "were", "weren't", "what", "what's", "when", "where", "which", "while", "who", "whom",
      "why", "will", "with", "won't", "would", "wouldn't", "yeah", "yes", "you", "you'd",
      "you'll", "you're", "you've", "your", "yours", "yourself", "yourselves"};
  return words;
}

std::map<std::string, std::string> NormalizationRules::default_merge_overrides() {
  return {{"buses", "bus"},          {"children", "child"},     {"people", "people"},
          {"parking", "parking"},    {"cycling", "cycling"},    {"morning", "morning"},
          {"evening", "evening"},    {"opening", "open"},       {"uses", "use"},
          {"using", "use"},          {"ridesharing", "rideshare"}, {"carsharing", "carshare"},
          {"bikesharing", "bikeshare"}, {"ridesourcing", "ridesourcing"},
          {"commuting", "commute"},  {"women", "woman"},        {"men", "man"},
          {"feet", "foot"},          {"news", "news"}};
}

namespace {

bool is_vowel(char c) { return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u'; }
bool is_vowel_y(char c) { return is_vowel(c) || c == 'y'; }
bool is_lower_ascii_word(std::string_view w) {
  return std::all_of(w.begin(), w.end(), [](char c) { return c >= 'a' && c <= 'z'; });
}

std::string stem_once(const std::string& w) {
  const auto n = w.size();
  if (n <= 3) return w;

  if (w.ends_with("ing")) {
    std::string stem = w.substr(0, n - 3);
    if (stem.size() < 3 || std::none_of(stem.begin(), stem.end(), is_vowel_y)) return w;
    const auto m = stem.size();
    const char last = stem[m - 1];
    if (last == stem[m - 2] && !is_vowel(last) && last != 'l' && last != 's' && last != 'z') {
      stem.pop_back();  // shopping -> shop
    } else if (m <= 4 && !is_vowel(stem[m - 3]) && is_vowel(stem[m - 2]) && !is_vowel_y(last) &&
               last != 'w' && last != 'x') {
      stem += 'e';  // biking -> bike
    }
    return stem;
  }
  if (w.ends_with("ies") && n > 4) return w.substr(0, n - 3) + "y";
  if (w.ends_with("sses")) return w.substr(0, n - 2);
  if (w.ends_with("xes") || w.ends_with("zes") || w.ends_with("ches") || w.ends_with("shes")) {
    return w.substr(0, n - 2);
  }
  if (w.ends_with("s") && !w.ends_with("ss") && !w.ends_with("us") && !w.ends_with("is")) {
    return w.substr(0, n - 1);
  }
  return w;
}

}  // namespace

std::string suffix_stem(std::string_view word) {
  std::string w(word);
  if (!is_lower_ascii_word(w)) return w;
  for (int i = 0; i < 8; ++i) {
    auto next = stem_once(w);
    if (next == w) break;
    w = std::move(next);
  }
  return w;
}

std::string NormalizationRules::merge(std::string_view token) const {
  if (auto it = merge_table.find(std::string(token)); it != merge_table.end()) return it->second;
  if (!suffix_rules) return std::string(token);
  auto base = suffix_stem(token);
  if (auto it = merge_table.find(base); it != merge_table.end()) return it->second;
  return base;
}

void NormalizationRules::validate() const {
  for (const auto& [word, base] : merge_table) {
    if (merge(base) != base) {
      throw ConfigError("merge target '" + base + "' (from '" + word + "') is not a base form: it maps to '" +
                        merge(base) + "'");
    }
  }
}

std::vector<std::string> normalize(std::span<const std::string> tokens, const NormalizationRules& rules) {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) {
    const std::string surface = rules.lowercase ? detail::to_lower_ascii(t) : t;
    std::string base = rules.merge(surface);
    if (rules.stopwords.contains(surface) || rules.stopwords.contains(base)) continue;
    if (rules.exclusions.contains(surface) || rules.exclusions.contains(base)) continue;
    if (base.size() < rules.min_token_length) continue;
    out.push_back(std::move(base));
  }
  return out;
}

std::vector<std::string> normalized_tokens(std::string_view text, const NormalizationRules& rules) {
  return normalize(tokenize(text), rules);
}

std::set<std::string> load_word_list(const std::filesystem::path& path) {
  std::set<std::string> words;
  const std::string content = detail::read_file(path);
  for (auto line : detail::split(content, '\n')) {
    line = detail::trim(line);
    if (line.empty() || line.front() == '#') continue;
    words.emplace(line);
  }
  return words;
}

std::map<std::string, std::string> load_merge_table(const std::filesystem::path& path) {
  std::map<std::string, std::string> table;
  std::size_t line_no = 0;
  const std::string content = detail::read_file(path);
  for (auto line : detail::split(content, '\n')) {
    ++line_no;
    line = detail::trim(line);
    if (line.empty() || line.front() == '#') continue;
    const auto sep = line.find_first_of(" \t");
    if (sep == std::string_view::npos) {
      throw ConfigError(path.string() + ":" + std::to_string(line_no) + ": expected '<word> <base>'");
    }
    table[std::string(line.substr(0, sep))] = std::string(detail::trim(line.substr(sep + 1)));
  }
  return table;
}

namespace {

bool parse_bool(std::string_view key, std::string_view value, const std::string& where) {
  if (value == "true" || value == "1" || value == "on") return true;
  if (value == "false" || value == "0" || value == "off") return false;
  throw ConfigError(where + ": '" + std::string(key) + "' expects true/false");
}

}  // namespace

NormalizationRules load_normalization_rules(const std::filesystem::path& path) {
  NormalizationRules rules;
  const auto dir = path.parent_path();
  std::size_t line_no = 0;
  const std::string content = detail::read_file(path);
  for (auto line : detail::split(content, '\n')) {
    ++line_no;
    line = detail::trim(line);
    if (line.empty() || line.front() == '#') continue;
    const std::string where = path.string() + ":" + std::to_string(line_no);
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(where + ": expected key=value");
    const auto key = detail::trim(line.substr(0, eq));
    const auto value = detail::trim(line.substr(eq + 1));
    if (key == "stopwords_file") {
      rules.stopwords = load_word_list(dir / std::string(value));
    } else if (key == "merge_file") {
      for (auto& [w, b] : load_merge_table(dir / std::string(value))) rules.merge_table[w] = b;
    } else if (key == "exclusions") {
      const auto list = detail::split_list(value);
      rules.exclusions = {list.begin(), list.end()};
    } else if (key == "suffix_rules") {
      rules.suffix_rules = parse_bool(key, value, where);
    } else if (key == "lowercase") {
      rules.lowercase = parse_bool(key, value, where);
    } else if (key == "min_token_length") {
      try {
        rules.min_token_length = std::stoul(std::string(value));
      } catch (const std::exception&) {
        throw ConfigError(where + ": 'min_token_length' expects a non-negative integer");
      }
    } else {
      throw ConfigError(where + ": unknown key '" + std::string(key) + "'");
    }
  }
  rules.validate();
  return rules;
}

TokenDocs tokenize_corpus(const Corpus& corpus, const NormalizationRules& rules) {
  TokenDocs docs;
  docs.reserve(corpus.size());
  for (const auto& d : corpus.documents) {
    std::vector<std::string> tokens;
    for (const auto& s : d.sentences) {
      auto t = normalized_tokens(s, rules);
      tokens.insert(tokens.end(), std::make_move_iterator(t.begin()), std::make_move_iterator(t.end()));
    }
    docs.push_back(std::move(tokens));
  }
  return docs;
}

Vocabulary::Vocabulary(std::vector<std::string> terms) : terms_(std::move(terms)) {
  std::sort(terms_.begin(), terms_.end());
  if (std::adjacent_find(terms_.begin(), terms_.end()) != terms_.end()) {
    throw DataError("vocabulary terms must be unique");
  }
  Fnv1a h;
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    index_.emplace(terms_[i], i);
    h.update(terms_[i]).update("\n");
  }
  hash_ = h.value();
}

std::ptrdiff_t Vocabulary::find(std::string_view term) const {
  const auto it = index_.find(term);
  return it == index_.end() ? -1 : static_cast<std::ptrdiff_t>(it->second);
}

Vocabulary build_vocabulary(const TokenDocs& docs, std::size_t min_df) {
  std::map<std::string, std::size_t> df;
  bool any_tokens = false;
  for (const auto& doc : docs) {
    std::set<std::string_view> seen(doc.begin(), doc.end());
    any_tokens = any_tokens || !seen.empty();
    for (auto term : seen) ++df[std::string(term)];
  }
  if (!any_tokens) throw DataError("cannot build a vocabulary from an empty corpus");
  std::vector<std::string> terms;
  for (const auto& [term, count] : df) {
    if (count >= min_df) terms.push_back(term);
  }
  if (terms.empty()) {
    throw DataError("no term reaches min_df=" + std::to_string(min_df));
  }
  return Vocabulary(std::move(terms));
}

DocTermMatrix build_dtm(const TokenDocs& docs, std::span<const std::string> doc_ids, const Vocabulary& vocab) {
  if (docs.empty()) throw DataError("cannot build a document-term matrix with no documents");
  if (doc_ids.size() != docs.size()) {
    throw DataError("document-term matrix shape mismatch: " + std::to_string(docs.size()) + " documents but " +
                    std::to_string(doc_ids.size()) + " ids");
  }
  DocTermMatrix m;
  m.num_cols = vocab.size();
  m.vocabulary_hash = vocab.hash();
  for (std::size_t r = 0; r < docs.size(); ++r) {
    std::map<std::size_t, std::uint32_t> counts;
    for (const auto& t : docs[r]) {
      const auto id = vocab.find(t);
      if (id >= 0) ++counts[static_cast<std::size_t>(id)];
    }
    for (const auto& [c, n] : counts) {
      m.col.push_back(c);
      m.val.push_back(n);
    }
    m.row_ptr.push_back(m.col.size());
    m.row_ids.push_back(doc_ids[r]);
  }
  return m;
}

TfidfTransform::TfidfTransform(const DocTermMatrix& dtm) : vocabulary_hash_(dtm.vocabulary_hash) {
  const auto docs = dtm.num_rows();
  if (docs == 0) throw DataError("TF-IDF needs at least one document");
  std::vector<std::size_t> df(dtm.num_cols, 0);
  for (std::size_t k = 0; k < dtm.nnz(); ++k) {
    if (dtm.val[k] > 0) ++df[dtm.col[k]];
  }
  idf_.resize(dtm.num_cols, 0.0);
  for (std::size_t j = 0; j < dtm.num_cols; ++j) {
    if (df[j] > 0) idf_[j] = std::log(static_cast<double>(docs) / static_cast<double>(df[j]));
  }
}

WeightedMatrix TfidfTransform::apply(const DocTermMatrix& dtm) const {
  if (dtm.num_cols != idf_.size()) {
    throw DataError("TF-IDF vocabulary size mismatch: " + std::to_string(dtm.num_cols) + " vs " +
                    std::to_string(idf_.size()));
  }
  if (vocabulary_hash_ != 0 && dtm.vocabulary_hash != 0 && vocabulary_hash_ != dtm.vocabulary_hash) {
    throw DataError("TF-IDF vocabulary mismatch");
  }
  WeightedMatrix w;
  w.num_cols = dtm.num_cols;
  w.row_ptr = dtm.row_ptr;
  w.col = dtm.col;
  w.row_ids = dtm.row_ids;
  w.vocabulary_hash = dtm.vocabulary_hash;
  w.val.resize(dtm.nnz(), 0.0);
  for (std::size_t r = 0; r < dtm.num_rows(); ++r) {
    const double sum = static_cast<double>(dtm.row_sum(r));
    if (sum == 0) continue;
    for (std::size_t k = dtm.row_ptr[r]; k < dtm.row_ptr[r + 1]; ++k) {
      w.val[k] = static_cast<double>(dtm.val[k]) / sum * idf_[dtm.col[k]];
    }
  }
  return w;
}

WeightedMatrix tfidf(const DocTermMatrix& dtm) { return TfidfTransform(dtm).apply(dtm); }

// ---------------------------------------------------------------------------

std::string_view to_string(PosTag tag) {
  switch (tag) {
    case PosTag::noun: return "NOUN";
    case PosTag::adjective: return "ADJ";
    case PosTag::adverb: return "ADV";
    case PosTag::verb: return "VERB";
    case PosTag::determiner: return "DET";
    case PosTag::pronoun: return "PRON";
    case PosTag::preposition: return "ADP";
    case PosTag::conjunction: return "CONJ";
    case PosTag::other: return "X";
  }
  return "X";
}

namespace {

const std::unordered_map<std::string_view, PosTag>& tag_lexicon() {
  static const auto lexicon = [] {
    std::unordered_map<std::string_view, PosTag> m;
    auto add = [&m](PosTag tag, std::initializer_list<std::string_view> words) {
      for (auto w : words) m.emplace(w, tag);
    };
    add(PosTag::determiner,
        {"a", "an", "the", "this", "that", "these", "those", "my", "your", "his", "her", "its", "our", "their",
         "some", "any", "no", "every", "each", "all", "both", "either", "neither", "another", "such", "what",
         "which", "whose", "many", "much", "more", "most", "few", "several", "lot", "lots"});
    add(PosTag::pronoun,
        {"i", "me", "you", "he", "him", "she", "it", "we", "us", "they", "them", "myself", "yourself",
         "himself", "herself", "itself", "ourselves", "themselves", "mine", "yours", "hers", "ours", "theirs",
         "who", "whom", "one", "something", "anything", "nothing", "everything", "someone", "anyone",
         "everyone", "nobody", "somebody", "everybody", "there", "here", "i'm", "it's", "that's", "there's",
         "you're", "we're", "they're", "he's", "she's", "i've", "we've", "they've", "i'd", "i'll"});
    add(PosTag::preposition,
        {"in", "on", "at", "by", "for", "with", "about", "against", "between", "into", "through", "during",
         "before", "after", "above", "below", "to", "from", "up", "down", "of", "off", "over", "under", "near",
         "around", "across", "along", "without", "within", "upon", "like", "than", "since", "until", "toward",
         "towards", "per", "via", "de", "en", "con"});
    add(PosTag::conjunction,
        {"and", "or", "but", "nor", "so", "yet", "because", "although", "though", "while", "if", "unless",
         "whereas", "whether", "as", "y", "pero"});
    add(PosTag::verb,
        {"is", "am", "are", "was", "were", "be", "been", "being", "have", "has", "had", "do", "does", "did",
         "will", "would", "shall", "should", "can", "could", "may", "might", "must", "get", "gets", "got",
         "go", "goes", "went", "gone", "come", "comes", "came", "make", "makes", "made", "take", "takes",
         "took", "say", "says", "said", "see", "sees", "saw", "know", "knew", "think", "thought", "want",
         "wants", "need", "needs", "feel", "feels", "felt", "love", "hate", "live", "use", "ride", "rides",
         "drive", "drives", "don't", "doesn't", "didn't", "can't", "won't", "isn't", "aren't", "wasn't",
         "weren't", "wouldn't", "couldn't", "shouldn't", "keep", "let", "seem", "seems", "become", "became",
         "es", "son", "está", "hay", "gusta"});
    add(PosTag::adverb,
        {"very", "really", "so", "too", "quite", "extremely", "pretty", "rather", "fairly", "somewhat",
         "always", "never", "often", "sometimes", "usually", "just", "still", "even", "also", "almost",
         "especially", "incredibly", "truly", "super", "totally", "absolutely", "not", "now", "then", "again",
         "already", "ever", "only", "muy", "más", "well"});
    add(PosTag::adjective,
        {"good", "great", "bad", "nice", "awful", "horrible", "terrible", "wonderful", "spectacular",
         "excellent", "poor", "safe", "unsafe", "new", "old", "big", "small", "long", "short", "high", "low",
         "busy", "clean", "dirty", "easy", "hard", "cheap", "expensive", "fast", "slow", "quiet", "loud",
         "happy", "sad", "friendly", "healthy", "free", "fun", "amazing", "beautiful", "ugly", "convenient",
         "crowded", "empty", "better", "best", "worse", "worst", "open", "public", "private", "local", "main",
         "whole", "real", "sure", "fine", "cool", "hot", "cold", "scary", "late", "early", "green", "fresh",
         "strong", "weak", "close", "far", "little", "large", "huge", "rich", "glad", "proud", "afraid",
         "lovely", "pleasant", "nasty", "dark", "bright", "narrow", "wide", "broken", "smooth", "rough",
         "daily", "lonely", "likely", "elderly", "costly", "silly", "deadly", "social", "cultural", "special",
         "natural", "central", "difficult", "different", "important", "efficient", "frequent", "decent",
         "excited", "scared", "tired", "interested", "limited", "protected", "dedicated", "isolated",
         "connected", "neglected", "complicated", "frustrated", "interesting", "boring", "annoying",
         "frustrating", "exciting", "welcoming", "inviting", "charming", "terrifying", "outstanding",
         "disappointing", "depressing", "relaxing", "dreadful", "awesome", "fantastic", "gorgeous",
         "perfect", "superb", "lousy", "miserable", "pathetic", "unreliable", "rude", "polite", "smart",
         "young", "extra", "electric", "separate", "wild", "vibrant", "diverse", "active", "bueno", "buena",
         "malo", "mala", "bonito", "lindo", "peligroso"});
    return m;
  }();
  return lexicon;
}

}  // namespace

PosTag tag_word(std::string_view w) {
  if (w.empty()) return PosTag::other;
  if (auto it = tag_lexicon().find(w); it != tag_lexicon().end()) return it->second;
  if (std::any_of(w.begin(), w.end(), [](char c) { return c >= '0' && c <= '9'; })) return PosTag::other;
  const auto n = w.size();
  if (n > 4) {
    for (std::string_view suffix : {"ous", "ful", "ible", "able", "ive", "less"}) {
      if (w.ends_with(suffix)) return PosTag::adjective;
    }
  }
  if (n > 4 && w.ends_with("ly")) {
    static const std::set<std::string_view> nouns{"family", "supply", "italy", "july", "rally", "belly",
                                                  "bully", "assembly", "anomaly", "monopoly", "butterfly"};
    return nouns.contains(w) ? PosTag::noun : PosTag::adverb;
  }
  if (n > 3 && w.ends_with("ed") && !w.ends_with("eed")) return PosTag::verb;
  return PosTag::noun;
}

std::vector<PosTag> tag_tokens(std::span<const std::string> tokens) {
  std::vector<PosTag> tags;
  tags.reserve(tokens.size());
  for (const auto& t : tokens) tags.push_back(tag_word(t));
  return tags;
}

std::string CandidatePhrase::text() const {
  std::string out;
  for (const auto& t : tokens) {
    if (!out.empty()) out += ' ';
    out += t;
  }
  return out;
}

std::vector<CandidatePhrase> extract_phrases(std::span<const std::string> tokens, const SentenceRef& source) {
  const auto tags = tag_tokens(tokens);
  std::vector<CandidatePhrase> phrases;
  for (std::size_t i = 0; i + 1 < tokens.size(); ++i) {
    if (tags[i] != PosTag::adjective || tags[i + 1] != PosTag::noun) continue;
    if (i > 0 && tags[i - 1] == PosTag::adverb) {
      phrases.push_back({{tokens[i - 1], tokens[i], tokens[i + 1]}, tokens[i + 1], tokens[i], source, i - 1});
    }
    phrases.push_back({{tokens[i], tokens[i + 1]}, tokens[i + 1], tokens[i], source, i});
  }
  return phrases;
}

std::vector<std::string> surface_tokens(std::string_view sentence) {
  auto tokens = tokenize(sentence);
  for (auto& t : tokens) t = detail::to_lower_ascii(t);
  return tokens;
}

std::vector<CandidatePhrase> extract_phrases(std::string_view sentence, const SentenceRef& source) {
  const auto tokens = surface_tokens(sentence);
  return extract_phrases(tokens, source);
}

}  // namespace talkmine
