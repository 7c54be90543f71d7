#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "talkmine/corpus.hpp"

namespace talkmine {

/// Maximal runs of letters, digits and apostrophes (bytes >= 0x80 count as
/// letters so UTF-8 words stay whole). Apostrophes at either end of a run
/// are dropped: "'things'" gives "things", "don't" is kept.
std::vector<std::string> tokenize(std::string_view sentence);

/// Built-in English stopword list.
const std::set<std::string>& default_stopwords();

struct NormalizationRules {
  std::set<std::string> stopwords = default_stopwords();
  std::set<std::string> exclusions{"things", "stuff"};
  /// Explicit word -> base overrides; these win over the suffix rules.
  std::map<std::string, std::string> merge_table = default_merge_overrides();
  bool suffix_rules = true;
  bool lowercase = true;
  std::size_t min_token_length = 2;

  /// Base form of one (already case-folded) token.
  std::string merge(std::string_view token) const;

  /// Throws ConfigError when a merge target is not its own base form.
  void validate() const;

  static std::map<std::string, std::string> default_merge_overrides();
};

/// Plural / -ing stripping, iterated to a fixed point so the result is its
/// own stem. Tokens with apostrophes, digits or non-ASCII bytes pass through.
std::string suffix_stem(std::string_view word);

/// Lowercase, merge to base form once, then drop stopwords, exclusions
/// (checked on both surface and base form) and tokens shorter than
/// min_token_length. Idempotent.
std::vector<std::string> normalize(std::span<const std::string> tokens, const NormalizationRules& rules);

/// tokenize + normalize over every sentence of a text.
std::vector<std::string> normalized_tokens(std::string_view text, const NormalizationRules& rules);

/// Key=value rules file:
///   stopwords_file=<path>   one word per line, replaces the default list
///   merge_file=<path>       "walking walk" per line, added to the overrides
///   exclusions=things,stuff
///   suffix_rules=true|false
///   lowercase=true|false
///   min_token_length=2
/// Relative paths resolve against the rules file's directory.
NormalizationRules load_normalization_rules(const std::filesystem::path& path);
std::set<std::string> load_word_list(const std::filesystem::path& path);
std::map<std::string, std::string> load_merge_table(const std::filesystem::path& path);

using TokenDocs = std::vector<std::vector<std::string>>;

/// Normalized token stream per corpus document.
TokenDocs tokenize_corpus(const Corpus& corpus, const NormalizationRules& rules);

class Vocabulary {
 public:
  Vocabulary() = default;
  /// Terms must be unique; they are stored sorted.
  explicit Vocabulary(std::vector<std::string> terms);

  std::size_t size() const { return terms_.size(); }
  const std::vector<std::string>& terms() const { return terms_; }
  const std::string& term(std::size_t id) const { return terms_.at(id); }
  /// Column id or -1.
  std::ptrdiff_t find(std::string_view term) const;
  /// FNV-1a over the newline-joined term list.
  std::uint64_t hash() const { return hash_; }

  bool operator==(const Vocabulary& other) const { return terms_ == other.terms_; }

 private:
  std::vector<std::string> terms_;
  std::map<std::string, std::size_t, std::less<>> index_;
  std::uint64_t hash_ = 0;
};

/// Lexicographically sorted terms with document frequency >= min_df.
/// Throws DataError when no document has tokens or nothing survives.
Vocabulary build_vocabulary(const TokenDocs& docs, std::size_t min_df = 1);

/// Compressed sparse rows; column ids ascending within each row.
template <typename Value>
struct SparseRows {
  std::size_t num_cols = 0;
  std::vector<std::size_t> row_ptr{0};
  std::vector<std::size_t> col;
  std::vector<Value> val;
  std::vector<std::string> row_ids;
  std::uint64_t vocabulary_hash = 0;

  std::size_t num_rows() const { return row_ptr.size() - 1; }
  std::size_t nnz() const { return col.size(); }
  std::span<const std::size_t> row_cols(std::size_t r) const {
    return {col.data() + row_ptr[r], row_ptr[r + 1] - row_ptr[r]};
  }
  std::span<const Value> row_vals(std::size_t r) const {
    return {val.data() + row_ptr[r], row_ptr[r + 1] - row_ptr[r]};
  }
  Value row_sum(std::size_t r) const {
    Value s{};
    for (auto v : row_vals(r)) s += v;
    return s;
  }
  std::vector<std::vector<Value>> dense() const {
    std::vector<std::vector<Value>> out(num_rows(), std::vector<Value>(num_cols, Value{}));
    for (std::size_t r = 0; r < num_rows(); ++r) {
      for (std::size_t k = row_ptr[r]; k < row_ptr[r + 1]; ++k) out[r][col[k]] = val[k];
    }
    return out;
  }
  /// Zero entries are not stored.
  static SparseRows from_dense(const std::vector<std::vector<Value>>& rows, std::size_t num_cols,
                               std::uint64_t vocabulary_hash = 0) {
    SparseRows m;
    m.num_cols = num_cols;
    m.vocabulary_hash = vocabulary_hash;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      for (std::size_t c = 0; c < rows[r].size() && c < num_cols; ++c) {
        if (rows[r][c] != Value{}) {
          m.col.push_back(c);
          m.val.push_back(rows[r][c]);
        }
      }
      m.row_ptr.push_back(m.col.size());
      m.row_ids.push_back("d" + std::to_string(r));
    }
    return m;
  }

  bool operator==(const SparseRows&) const = default;
};

using DocTermMatrix = SparseRows<std::uint32_t>;
using WeightedMatrix = SparseRows<double>;

/// Entry (i, j) counts term j in document i; out-of-vocabulary tokens are
/// ignored. Throws DataError when docs is empty or doc_ids does not match.
DocTermMatrix build_dtm(const TokenDocs& docs, std::span<const std::string> doc_ids,
                        const Vocabulary& vocab);

/// idf(j) = ln(D / df_j), learned from one count matrix and applicable to
/// others over the same vocabulary. Terms absent from the fitting matrix
/// get idf 0.
class TfidfTransform {
 public:
  TfidfTransform() = default;
  explicit TfidfTransform(const DocTermMatrix& dtm);
  TfidfTransform(std::vector<double> idf, std::uint64_t vocabulary_hash)
      : idf_(std::move(idf)), vocabulary_hash_(vocabulary_hash) {}

  const std::vector<double>& idf() const { return idf_; }
  std::uint64_t vocabulary_hash() const { return vocabulary_hash_; }

  /// weight = count / row_sum * idf; zero-sum rows stay zero. Entries keep
  /// the sparsity structure of the counts (weight may be exactly 0).
  WeightedMatrix apply(const DocTermMatrix& dtm) const;

 private:
  std::vector<double> idf_;
  std::uint64_t vocabulary_hash_ = 0;
};

/// TF-IDF using the matrix's own document frequencies. Requires >= 1 row.
WeightedMatrix tfidf(const DocTermMatrix& dtm);

// ---------------------------------------------------------------------------
// Lightweight part-of-speech tagging and sentiment-bearing phrase extraction.

enum class PosTag { noun, adjective, adverb, verb, determiner, pronoun, preposition, conjunction, other };

std::string_view to_string(PosTag tag);

/// Closed-class word lists, a small adjective/adverb/verb lexicon, then
/// suffix heuristics (-ous/-ful/-ible/-able/-ive/-less/-ic -> adjective,
/// -ly -> adverb, -ed -> verb); anything else is a noun.
PosTag tag_word(std::string_view lowercase_word);
std::vector<PosTag> tag_tokens(std::span<const std::string> lowercase_tokens);

struct CandidatePhrase {
  /// Lowercased surface tokens, length 2 or 3.
  std::vector<std::string> tokens;
  std::string head_noun;
  std::string modifier;
  SentenceRef source;
  /// Token position of the first phrase token within the sentence.
  std::size_t offset = 0;

  /// Space-joined tokens; the lexicon key.
  std::string text() const;

  bool operator==(const CandidatePhrase&) const = default;
};

/// Every (adjective, noun) bigram and (adverb, adjective, noun) trigram, in
/// order of starting position.
std::vector<CandidatePhrase> extract_phrases(std::span<const std::string> lowercase_tokens,
                                             const SentenceRef& source = {});
/// Tokenizes and lowercases first.
std::vector<CandidatePhrase> extract_phrases(std::string_view sentence, const SentenceRef& source = {});

/// Lowercased raw tokens (no stopword removal); the stream used for
/// co-occurrence windows and phrase matching.
std::vector<std::string> surface_tokens(std::string_view sentence);

}  // namespace talkmine
