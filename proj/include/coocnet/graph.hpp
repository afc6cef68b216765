#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <tuple>
#include <vector>

namespace coocnet {

struct ArticleSet;

/// Simple contributor-outlet graph. Node ids are opaque strings held in
/// sorted order; edges are index pairs into those tables, deduplicated and
/// sorted, so equal graphs compare equal regardless of construction order.
struct BipartiteGraph {
  std::vector<std::string> left_ids;  // contributors
  std::vector<std::string> right_ids; // outlets
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;

  std::size_t m() const { return edges.size(); }

  std::vector<std::size_t> left_degrees() const;
  std::vector<std::size_t> right_degrees() const;

  static BipartiteGraph from_edges(
      std::vector<std::pair<std::string, std::string>> id_edges);

  bool operator==(const BipartiteGraph&) const = default;
};

enum class Side { left, right };

/// Edge (c, o) present iff at least one record by c appeared in o.
BipartiteGraph build_bipartite(const ArticleSet& articles);

/// node -> degree for one side. Degree sums on either side equal m.
std::map<std::string, std::size_t> degree_sequence(const BipartiteGraph& g,
                                                   Side side);

/// Weighted one-mode projection onto outlets. Weights are dense over all
/// C(n,2) pairs (zero-weight pairs enumerable), stored upper-triangular.
struct Projection {
  std::vector<std::string> outlets; // sorted
  std::vector<std::uint32_t> weights;

  std::size_t n_pairs() const { return weights.size(); }

  static std::size_t pair_index(std::size_t i, std::size_t j, std::size_t n);

  std::uint32_t weight(std::size_t i, std::size_t j) const;
  std::uint32_t weight_of(const std::string& a, const std::string& b) const;

  /// (i, j, w) for pairs with w > 0, in index order.
  std::vector<std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>>
  nonzero_pairs() const;
};

Projection project(const BipartiteGraph& g);

/// Undirected weighted graph with nonnegative weights; the common input for
/// modularity scoring (built from a raw projection or a validated backbone).
struct WeightedGraph {
  std::vector<std::string> nodes; // sorted
  std::vector<std::tuple<std::uint32_t, std::uint32_t, double>> edges; // i<j

  double total_weight() const;
};

WeightedGraph to_weighted_graph(const Projection& p);

/// contributor_id,outlet_id edge list.
void write_bipartite_csv(std::ostream& out, const BipartiteGraph& g);
BipartiteGraph read_bipartite_csv(const std::filesystem::path& path);

/// from,to,weight over positive-weight pairs.
void write_projection_csv(std::ostream& out, const Projection& p);

} // namespace coocnet
