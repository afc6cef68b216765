// Test-only reference implementations, kept independent of the library code
// they check. Everything here favours brute force over cleverness.
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "coocnet/graph.hpp"

namespace oracle {

/// Exact per-pair weight distribution over ALL simple bipartite graphs with
/// the given degree sequences, found by exhaustive backtracking. Pairs are
/// indexed like coocnet::Projection (upper triangular over sorted outlets).
struct ExactNullStats {
  std::size_t n_graphs = 0;
  std::vector<double> mean; // per pair
  std::vector<double> sd;   // population standard deviation
  std::vector<std::map<std::uint32_t, std::size_t>> weight_counts;
};

ExactNullStats enumerate_degree_preserving(const coocnet::BipartiteGraph& g);

/// U statistic by direct pair counting: sum [x>y] + 0.5 [x==y].
double brute_force_u(const std::vector<double>& x, const std::vector<double>& y);

/// Two-sided permutation p for the U statistic by literally enumerating all
/// C(n1+n2, n1) splits of the pooled values. Only feasible for small inputs.
double brute_force_exact_p(const std::vector<double>& x,
                           const std::vector<double>& y);

/// Newman modularity evaluated directly from the ordered-pair definition.
double brute_force_modularity(
    const std::vector<std::string>& nodes,
    const std::vector<std::tuple<std::size_t, std::size_t, double>>& edges,
    const std::map<std::string, std::string>& groups);

/// Mean cosine similarity between reference and fitted rows under the best
/// one-to-one assignment, found by trying every permutation (small K only).
double best_match_mean_cosine(const std::vector<std::vector<double>>& truth,
                              const std::vector<std::vector<double>>& fitted);

} // namespace oracle
