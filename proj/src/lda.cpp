#include "coocnet/lda.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>

#include "coocnet/csv.hpp"
#include "coocnet/errors.hpp"
#include "coocnet/parallel.hpp"
#include "coocnet/rng.hpp"

namespace coocnet {

bool TopicModelState::counts_consistent() const {
  const std::size_t D = n_docs();
  const std::size_t V = n_terms();
  std::vector<std::uint32_t> dt(D * K, 0), tt(K * V, 0);
  std::vector<std::uint64_t> totals(K, 0);
  for (std::size_t d = 0; d < D; ++d) {
    for (std::size_t t = doc_begin[d]; t < doc_begin[d + 1]; ++t) {
      const auto k = token_topic[t];
      const auto w = token_term[t];
      ++dt[d * K + k];
      ++tt[k * V + w];
      ++totals[k];
    }
  }
  const std::uint64_t total_assigned =
      std::accumulate(totals.begin(), totals.end(), std::uint64_t{0});
  return dt == doc_topic && tt == topic_term && totals == topic_total &&
         total_assigned == n_tokens();
}

TopicModelState lda_init(const DocTermCorpus& corpus, const Vocabulary& vocab,
                         const LdaOptions& opts) {
  if (opts.K < 2) throw std::invalid_argument("lda: K must be >= 2");
  if (corpus.docs.empty()) throw std::invalid_argument("lda: empty corpus");

  TopicModelState s;
  s.K = opts.K;
  s.alpha_k = opts.alpha_total / opts.K;
  s.beta = opts.beta;
  s.seed = opts.seed;
  s.doc_ids = corpus.doc_ids;
  s.terms = vocab.terms;
  s.engine.seed(opts.seed);

  const std::size_t D = corpus.docs.size();
  const std::size_t V = vocab.size();
  s.doc_begin.resize(D + 1, 0);
  for (std::size_t d = 0; d < D; ++d) {
    std::size_t len = 0;
    for (const auto& [term, count] : corpus.docs[d]) len += count;
    s.doc_begin[d + 1] = s.doc_begin[d] + len;
  }
  const std::size_t n_tokens = s.doc_begin.back();
  s.token_term.resize(n_tokens);
  s.token_topic.resize(n_tokens);
  s.doc_topic.assign(D * s.K, 0);
  s.topic_term.assign(std::size_t{s.K} * V, 0);
  s.topic_total.assign(s.K, 0);

  std::size_t t = 0;
  for (std::size_t d = 0; d < D; ++d) {
    for (const auto& [term, count] : corpus.docs[d]) {
      if (term >= V) throw std::invalid_argument("lda: term index out of range");
      for (std::uint32_t c = 0; c < count; ++c) s.token_term[t++] = term;
    }
  }

  for (std::size_t d = 0; d < D; ++d) {
    for (std::size_t i = s.doc_begin[d]; i < s.doc_begin[d + 1]; ++i) {
      const auto k = static_cast<std::uint32_t>(s.engine() % s.K);
      s.token_topic[i] = k;
      ++s.doc_topic[d * s.K + k];
      ++s.topic_term[std::size_t{k} * V + s.token_term[i]];
      ++s.topic_total[k];
    }
  }
  return s;
}

void gibbs_sweep(TopicModelState& s) {
  const std::size_t D = s.n_docs();
  const std::size_t V = s.n_terms();
  const double v_beta = static_cast<double>(V) * s.beta;
  std::vector<double> cumulative(s.K);

  for (std::size_t d = 0; d < D; ++d) {
    std::uint32_t* n_dk = &s.doc_topic[d * s.K];
    for (std::size_t t = s.doc_begin[d]; t < s.doc_begin[d + 1]; ++t) {
      const std::uint32_t w = s.token_term[t];
      const std::uint32_t old_k = s.token_topic[t];

      --n_dk[old_k];
      --s.topic_term[std::size_t{old_k} * V + w];
      --s.topic_total[old_k];

      double total = 0.0;
      for (unsigned k = 0; k < s.K; ++k) {
        const double p =
            (n_dk[k] + s.alpha_k) *
            (s.topic_term[std::size_t{k} * V + w] + s.beta) /
            (static_cast<double>(s.topic_total[k]) + v_beta);
        total += p;
        cumulative[k] = total;
      }

      const double u =
          static_cast<double>(s.engine() >> 11) * 0x1.0p-53 * total;
      std::uint32_t new_k = 0;
      while (new_k + 1 < s.K && cumulative[new_k] <= u) ++new_k;

      s.token_topic[t] = new_k;
      ++n_dk[new_k];
      ++s.topic_term[std::size_t{new_k} * V + w];
      ++s.topic_total[new_k];
    }
  }
  ++s.iterations_done;
}

TopicModelState lda_fit(const DocTermCorpus& corpus, const Vocabulary& vocab,
                        const LdaOptions& opts) {
  if (opts.iterations < 1) {
    throw std::invalid_argument("lda: iterations must be >= 1");
  }
  TopicModelState s = lda_init(corpus, vocab, opts);
  for (unsigned it = 0; it < opts.iterations; ++it) gibbs_sweep(s);
  return s;
}

FeatureMatrix doc_topics(const TopicModelState& s) {
  FeatureMatrix m;
  m.doc_ids = s.doc_ids;
  m.feature_names.reserve(s.K);
  for (unsigned k = 0; k < s.K; ++k) {
    m.feature_names.push_back("topic" + std::to_string(k));
  }
  m.values.resize(s.n_docs() * s.K);
  for (std::size_t d = 0; d < s.n_docs(); ++d) {
    double total = 0.0;
    for (unsigned k = 0; k < s.K; ++k) {
      total += s.doc_topic[d * s.K + k] + s.alpha_k;
    }
    for (unsigned k = 0; k < s.K; ++k) {
      m.at(d, k) = (s.doc_topic[d * s.K + k] + s.alpha_k) / total;
    }
  }
  return m;
}

std::vector<double> topic_term_distribution(const TopicModelState& s,
                                            unsigned topic) {
  if (topic >= s.K) throw std::invalid_argument("lda: topic out of range");
  const std::size_t V = s.n_terms();
  std::vector<double> phi(V);
  const double denom =
      static_cast<double>(s.topic_total[topic]) + static_cast<double>(V) * s.beta;
  for (std::size_t w = 0; w < V; ++w) {
    phi[w] = (s.topic_term[std::size_t{topic} * V + w] + s.beta) / denom;
  }
  return phi;
}

std::vector<std::string> top_keywords(const TopicModelState& s, unsigned topic,
                                      std::size_t n) {
  if (topic >= s.K) throw std::invalid_argument("lda: topic out of range");
  const std::size_t V = s.n_terms();
  std::vector<std::uint32_t> order(V);
  std::iota(order.begin(), order.end(), 0);
  // Counts order phi within a topic, so ties can break on exact integers.
  const std::uint32_t* counts = &s.topic_term[std::size_t{topic} * V];
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    if (counts[a] != counts[b]) return counts[a] > counts[b];
    return s.terms[a] < s.terms[b];
  });
  const std::size_t take = std::min(n, V);
  std::vector<std::string> out;
  out.reserve(take);
  for (std::size_t i = 0; i < take; ++i) out.push_back(s.terms[order[i]]);
  return out;
}

std::vector<TopicModelState> sweep_topic_counts(const DocTermCorpus& corpus,
                                                const Vocabulary& vocab,
                                                const std::vector<unsigned>& Ks,
                                                const LdaOptions& base,
                                                unsigned threads) {
  std::vector<TopicModelState> states(Ks.size());
  parallel_for(Ks.size(), threads, [&](std::size_t i) {
    LdaOptions opts = base;
    opts.K = Ks[i];
    opts.seed = derive_seed(base.seed, 0x70B1C5ULL, Ks[i]);
    states[i] = lda_fit(corpus, vocab, opts);
  });
  return states;
}

void write_keywords_csv(std::ostream& out, const TopicModelState& state,
                        std::size_t n_keywords) {
  const std::vector<std::string> header = {"topic", "rank", "term",
                                           "probability"};
  write_csv_row(out, header);
  for (unsigned k = 0; k < state.K; ++k) {
    const auto phi = topic_term_distribution(state, k);
    const auto keywords = top_keywords(state, k, n_keywords);
    for (std::size_t r = 0; r < keywords.size(); ++r) {
      const long idx = std::lower_bound(state.terms.begin(), state.terms.end(),
                                        keywords[r]) -
                       state.terms.begin();
      const std::vector<std::string> row = {
          std::to_string(k), std::to_string(r + 1), keywords[r],
          format_double(phi[static_cast<std::size_t>(idx)])};
      write_csv_row(out, row);
    }
  }
}

} // namespace coocnet
