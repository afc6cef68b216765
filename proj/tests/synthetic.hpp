// Test-only synthetic data generators.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "coocnet/graph.hpp"
#include "coocnet/ingest.hpp"
#include "coocnet/text.hpp"

namespace synthetic {

/// Two-block planted-partition corpus. Contributors pick 2-3 outlets with
/// probability `p_within` of staying inside their home block; within the
/// block they publish in a small local window around an anchor outlet, so
/// neighbouring outlets share many contributors (the backbone of a large
/// block comes out chain-like instead of dissolving into isolates). Every
/// record carries a contributor_id.
struct PlantedCorpus {
  coocnet::ArticleSet articles;
  std::vector<std::string> block_a; // outlet ids
  std::vector<std::string> block_b;
};

PlantedCorpus planted_partition_corpus(std::size_t outlets_a,
                                       std::size_t outlets_b,
                                       std::size_t n_contributors,
                                       double p_within, std::uint64_t seed);

/// Random simple bipartite graph with exactly m edges.
coocnet::BipartiteGraph random_bipartite(std::size_t n_left,
                                         std::size_t n_right, std::size_t m,
                                         std::uint64_t seed);

/// LDA generative corpus with K topics over disjoint vocabulary slices.
struct LdaCorpus {
  coocnet::Vocabulary vocab;
  coocnet::DocTermCorpus corpus;
  std::vector<std::vector<double>> true_topic_word; // K x V
};

LdaCorpus lda_disjoint_corpus(std::size_t n_docs, unsigned K,
                              std::size_t terms_per_topic,
                              std::size_t tokens_per_doc, double alpha_total,
                              std::uint64_t seed);

} // namespace synthetic
