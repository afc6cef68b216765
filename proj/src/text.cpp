#include "coocnet/text.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <ostream>
#include <set>

#include "coocnet/csv.hpp"
#include "coocnet/errors.hpp"
#include "coocnet/porter.hpp"

namespace coocnet {

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const unsigned char c = static_cast<unsigned char>(text[i]);
    if (c == '\'') continue;
    // U+2019 right single quote, common in scraped article text.
    if (c == 0xe2 && i + 2 < text.size() &&
        static_cast<unsigned char>(text[i + 1]) == 0x80 &&
        static_cast<unsigned char>(text[i + 2]) == 0x99) {
      i += 2;
      continue;
    }
    if (std::isalnum(c)) {
      current.push_back(static_cast<char>(std::tolower(c)));
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

std::vector<std::string> remove_stopwords(
    const std::vector<std::string>& tokens,
    const std::unordered_set<std::string>& stoplist) {
  std::vector<std::string> kept;
  kept.reserve(tokens.size());
  for (const auto& tok : tokens) {
    if (!stoplist.contains(tok)) kept.push_back(tok);
  }
  return kept;
}

std::vector<std::string> stem(const std::vector<std::string>& tokens) {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const auto& tok : tokens) out.push_back(porter_stem(tok));
  return out;
}

long Vocabulary::index_of(std::string_view term) const {
  const auto it = std::lower_bound(terms.begin(), terms.end(), term);
  if (it == terms.end() || *it != term) return -1;
  return it - terms.begin();
}

std::size_t DocTermCorpus::total_tokens() const {
  std::size_t total = 0;
  for (const auto& doc : docs) {
    for (const auto& [term, count] : doc) total += count;
  }
  return total;
}

TokenizedCorpus preprocess(
    const std::vector<std::pair<std::string, std::string>>& documents,
    const std::unordered_set<std::string>& stoplist) {
  TokenizedCorpus corpus;
  corpus.doc_ids.reserve(documents.size());
  corpus.docs.reserve(documents.size());
  for (const auto& [id, text] : documents) {
    corpus.doc_ids.push_back(id);
    corpus.docs.push_back(stem(remove_stopwords(tokenize(text), stoplist)));
  }
  return corpus;
}

std::pair<Vocabulary, DocTermCorpus> frequency_filter(
    const TokenizedCorpus& corpus, const FrequencyFilterOptions& opts) {
  if (corpus.docs.empty()) {
    throw std::invalid_argument("frequency_filter: empty corpus");
  }
  const std::uint64_t n_docs = corpus.docs.size();

  // Document frequency per term.
  std::map<std::string, std::uint32_t> df;
  for (const auto& doc : corpus.docs) {
    std::set<std::string_view> seen;
    for (const auto& tok : doc) seen.insert(tok);
    for (const auto& tok : seen) ++df[std::string(tok)];
  }

  // "more than num/den of documents" and "fewer than min_docs" are both
  // strict; the fraction comparison stays in integers.
  Vocabulary vocab;
  for (const auto& [term, freq] : df) {
    const bool too_common = static_cast<std::uint64_t>(freq) *
                                opts.max_fraction_den >
                            n_docs * opts.max_fraction_num;
    const bool too_rare = freq < opts.min_docs;
    if (too_common || too_rare) continue;
    vocab.terms.push_back(term);   // df map is ordered, so indices come out
    vocab.doc_freq.push_back(freq); // lexicographic
  }
  if (vocab.terms.empty()) {
    throw DataError("frequency_filter: no terms survive the frequency cuts");
  }

  DocTermCorpus out;
  out.doc_ids = corpus.doc_ids;
  out.docs.resize(corpus.docs.size());
  for (std::size_t d = 0; d < corpus.docs.size(); ++d) {
    std::map<std::uint32_t, std::uint32_t> counts;
    for (const auto& tok : corpus.docs[d]) {
      const long idx = vocab.index_of(tok);
      if (idx >= 0) ++counts[static_cast<std::uint32_t>(idx)];
    }
    out.docs[d].assign(counts.begin(), counts.end());
  }
  return {std::move(vocab), std::move(out)};
}

void write_vocabulary_csv(std::ostream& out, const Vocabulary& vocab) {
  const std::vector<std::string> header = {"term_index", "term", "doc_freq"};
  write_csv_row(out, header);
  for (std::size_t i = 0; i < vocab.terms.size(); ++i) {
    const std::vector<std::string> row = {
        std::to_string(i), vocab.terms[i], std::to_string(vocab.doc_freq[i])};
    write_csv_row(out, row);
  }
}

void write_corpus_csv(std::ostream& out, const DocTermCorpus& corpus) {
  const std::vector<std::string> header = {"doc_id", "term_index", "count"};
  write_csv_row(out, header);
  for (std::size_t d = 0; d < corpus.docs.size(); ++d) {
    for (const auto& [term, count] : corpus.docs[d]) {
      const std::vector<std::string> row = {
          corpus.doc_ids[d], std::to_string(term), std::to_string(count)};
      write_csv_row(out, row);
    }
  }
}

} // namespace coocnet
