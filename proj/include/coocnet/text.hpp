#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

namespace coocnet {

/// Lowercase, strip apostrophes (ASCII ' and U+2019), then split on any
/// other non-alphanumeric character. "Don't Stop" -> [dont, stop].
std::vector<std::string> tokenize(std::string_view text);

/// Order-preserving stopword filter; the stoplist must be lowercase.
std::vector<std::string> remove_stopwords(
    const std::vector<std::string>& tokens,
    const std::unordered_set<std::string>& stoplist);

/// Porter-stem every token.
std::vector<std::string> stem(const std::vector<std::string>& tokens);

/// Documents as token lists, ids preserved from the article set.
struct TokenizedCorpus {
  std::vector<std::string> doc_ids;
  std::vector<std::vector<std::string>> docs;
};

/// term -> dense index (lexicographic) plus per-term document frequency.
struct Vocabulary {
  std::vector<std::string> terms;        // index -> term, sorted
  std::vector<std::uint32_t> doc_freq;   // aligned with terms

  std::size_t size() const { return terms.size(); }
  /// Index of term or -1.
  long index_of(std::string_view term) const;
};

/// Bags of term indices with counts, frozen against a Vocabulary.
struct DocTermCorpus {
  std::vector<std::string> doc_ids;
  // per doc: (term index, count), sorted by term index
  std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> docs;

  std::size_t total_tokens() const;
};

struct FrequencyFilterOptions {
  /// Drop terms appearing in fewer than min_docs documents (strict <).
  std::uint32_t min_docs = 10;
  /// Drop terms appearing in more than num/den of all documents (strict >),
  /// compared exactly in integers.
  std::uint32_t max_fraction_num = 1;
  std::uint32_t max_fraction_den = 3;
};

/// Build the vocabulary over the corpus, dropping too-frequent and too-rare
/// terms; throws DataError if nothing survives.
std::pair<Vocabulary, DocTermCorpus> frequency_filter(
    const TokenizedCorpus& corpus, const FrequencyFilterOptions& opts = {});

/// tokenize -> stopwords -> stem for each (doc_id, text).
TokenizedCorpus preprocess(
    const std::vector<std::pair<std::string, std::string>>& documents,
    const std::unordered_set<std::string>& stoplist);

void write_vocabulary_csv(std::ostream& out, const Vocabulary& vocab);
/// doc_id,term_index,count sparse triplets.
void write_corpus_csv(std::ostream& out, const DocTermCorpus& corpus);

} // namespace coocnet
