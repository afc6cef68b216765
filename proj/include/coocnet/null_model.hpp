#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "coocnet/graph.hpp"
#include "coocnet/partition.hpp"
#include "coocnet/rng.hpp"

namespace coocnet {

/// Mixing stride between ensemble samples: ceil(m * ln m), 0 when m <= 1.
std::uint64_t default_attempts(const BipartiteGraph& g);

/// Degree-preserving edge-swap chain over simple bipartite graphs. One
/// attempt draws two distinct edges (a,x),(b,y) uniformly and applies the
/// swap to (a,y),(b,x) iff a != b, x != y and neither new edge exists;
/// rejected proposals still consume the attempt.
class EdgeSwapChain {
 public:
  explicit EdgeSwapChain(const BipartiteGraph& g);

  /// Returns the number of accepted swaps.
  std::uint64_t attempt_swaps(std::uint64_t attempts, Rng& rng);

  std::size_t m() const { return edges_.size(); }
  std::size_t n_right() const { return n_right_; }

  /// Dense outlet-pair weights of the current state's projection.
  /// pair_weights must have size C(n_right, 2); it is overwritten.
  void project_into(std::vector<std::uint32_t>& pair_weights) const;

  /// Exact conservation check against the construction-time degrees.
  bool degrees_preserved() const;

  BipartiteGraph to_graph() const;

 private:
  bool has_edge(std::uint32_t l, std::uint32_t r) const;

  std::size_t n_left_ = 0;
  std::size_t n_right_ = 0;
  std::vector<std::string> left_ids_, right_ids_;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges_;
  // Per-contributor sorted outlet lists, kept in sync with edges_. Serves
  // both membership tests (contributor degrees stay small) and projection.
  std::vector<std::vector<std::uint32_t>> adj_;
  std::vector<std::size_t> left_deg0_, right_deg0_;
};

/// Apply `attempts` swap attempts to a copy of g.
BipartiteGraph randomize(const BipartiteGraph& g, std::uint64_t attempts,
                         std::uint64_t rng_seed);

struct EnsembleOptions {
  std::size_t n_samples = 10000;
  std::uint64_t master_seed = 0;
  /// Attempts between consecutive samples; 0 means default_attempts(g).
  std::uint64_t attempts_per_sample = 0;
  /// Number of independent logical chains the samples are split into.
  /// Part of the sampling protocol (affects results); the thread count does
  /// not. Each chain burns in from the observed graph.
  unsigned chains = 8;
  unsigned threads = 1;
};

/// Per-pair null statistics, held as exact integer weight histograms so that
/// accumulation is order-free and empirical tail counts need no stored
/// sample lists. Covers every outlet pair, including observed-zero ones.
struct EnsembleAccumulator {
  std::vector<std::string> outlets; // sorted, matches Projection order
  std::size_t n_samples = 0;
  std::uint64_t master_seed = 0;
  std::uint64_t swap_attempts_per_sample = 0;
  unsigned chain_count = 1;
  std::vector<std::vector<std::uint32_t>> hist; // [pair][weight] -> count

  std::size_t n_pairs() const { return hist.size(); }
  std::uint64_t sample_sum(std::size_t pair) const;
  std::uint64_t sample_sum_sq(std::size_t pair) const;
  double null_mean(std::size_t pair) const;
  /// Sample standard deviation (n-1 denominator); 0 when n < 2.
  double null_std(std::size_t pair) const;
};

EnsembleAccumulator run_ensemble(const BipartiteGraph& g,
                                 const EnsembleOptions& opts);

struct EdgeSignificance {
  std::string from, to; // from < to
  std::uint32_t w_obs = 0;
  double null_mean = 0.0;
  double null_std = 0.0;
  double z = 0.0;        // NaN when degenerate
  bool degenerate = false; // null_std == 0
  double p_emp = 1.0;    // two-sided, add-one corrected
  std::size_t n_samples = 0;
};

/// Z and empirical p per outlet pair. The projection and accumulator must
/// cover the same outlet set.
std::vector<EdgeSignificance> edge_significance(
    const Projection& p, const EnsembleAccumulator& acc);

enum class EdgeSign { positive, negative };
enum class KeepEdges { positive, negative, both };

struct SignificantEdge {
  std::string from, to;
  EdgeSign sign;
  double z = 0.0;
  std::uint32_t w_obs = 0;
};

/// Significance-filtered backbone: edges with |z| > theta (of the requested
/// signs); degenerate edges are never retained.
struct ValidatedNetwork {
  std::vector<std::string> nodes;
  std::vector<SignificantEdge> edges;
  double threshold = 1.96;
};

ValidatedNetwork filter_network(const std::vector<EdgeSignificance>& sigs,
                                double theta = 1.96,
                                KeepEdges keep = KeepEdges::both);

/// Connected components of the positive-edge subgraph; isolates become
/// singletons. Component labels are "c1", "c2", ... ordered by each
/// component's smallest member id.
Partition clusters(const ValidatedNetwork& v);

/// Backbone as a modularity-ready weighted graph: positive significant edges
/// carrying their observed shared-contributor weights.
WeightedGraph to_weighted_graph(const ValidatedNetwork& v);

/// from,to,shared,w_obs,null_mean,null_std,z,p
void write_significance_csv(std::ostream& out,
                            const std::vector<EdgeSignificance>& sigs);
std::vector<EdgeSignificance> read_significance_csv(
    const std::filesystem::path& path);

void write_clusters_csv(std::ostream& out, const Partition& part);
Partition read_clusters_csv(const std::filesystem::path& path);

} // namespace coocnet
