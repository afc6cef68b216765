#pragma once

#include <cstdint>
#include <iosfwd>
#include <random>
#include <string>
#include <vector>

#include "coocnet/feature_matrix.hpp"
#include "coocnet/text.hpp"

namespace coocnet {

struct LdaOptions {
  unsigned K = 20;
  /// Symmetric document-topic prior; each alpha_k = alpha_total / K.
  double alpha_total = 5.0;
  double beta = 0.01;
  unsigned iterations = 1000;
  std::uint64_t seed = 0;
};

/// Collapsed Gibbs sampler state. Token topic assignments and the three
/// count tables stay mutually consistent after every sweep.
struct TopicModelState {
  unsigned K = 0;
  double alpha_k = 0.0;
  double beta = 0.0;
  std::uint64_t seed = 0;
  unsigned iterations_done = 0;

  std::vector<std::string> doc_ids;
  std::vector<std::string> terms; // vocabulary copy, index-aligned

  // Flattened token stream with per-document extents.
  std::vector<std::uint32_t> token_term;
  std::vector<std::uint32_t> token_topic;
  std::vector<std::size_t> doc_begin; // size D+1

  std::vector<std::uint32_t> doc_topic;   // D x K
  std::vector<std::uint32_t> topic_term;  // K x V
  std::vector<std::uint64_t> topic_total; // K

  std::mt19937_64 engine;

  std::size_t n_docs() const { return doc_ids.size(); }
  std::size_t n_terms() const { return terms.size(); }
  std::size_t n_tokens() const { return token_term.size(); }

  /// Exact check that count tables match the assignments.
  bool counts_consistent() const;
};

/// Random topic initialization from the seed; throws on K < 2 or an empty
/// corpus.
TopicModelState lda_init(const DocTermCorpus& corpus, const Vocabulary& vocab,
                         const LdaOptions& opts);

/// One full Gibbs pass: resample every token's topic from
/// p(z=k) ∝ (n_dk + alpha_k) * (n_kw + beta) / (n_k + V*beta)
/// with the token's own count removed.
void gibbs_sweep(TopicModelState& state);

TopicModelState lda_fit(const DocTermCorpus& corpus, const Vocabulary& vocab,
                        const LdaOptions& opts);

/// theta_dk = (n_dk + alpha_k) / (len_d + sum alpha); rows sum to 1.
FeatureMatrix doc_topics(const TopicModelState& state);

/// phi_kw = (n_kw + beta) / (n_k + V*beta) for one topic.
std::vector<double> topic_term_distribution(const TopicModelState& state,
                                            unsigned topic);

/// n most probable terms of a topic; ties break lexicographically.
std::vector<std::string> top_keywords(const TopicModelState& state,
                                      unsigned topic, std::size_t n = 5);

/// Batch of fits with per-K derived seeds; runs K values in parallel.
std::vector<TopicModelState> sweep_topic_counts(const DocTermCorpus& corpus,
                                                const Vocabulary& vocab,
                                                const std::vector<unsigned>& Ks,
                                                const LdaOptions& base,
                                                unsigned threads = 1);

/// topic,rank,term,probability rows for all topics.
void write_keywords_csv(std::ostream& out, const TopicModelState& state,
                        std::size_t n_keywords = 5);

} // namespace coocnet
