#include <doctest.h>

#include <cmath>
#include <set>

#include "coocnet/graph.hpp"
#include "coocnet/null_model.hpp"
#include "oracles.hpp"
#include "synthetic.hpp"

using namespace coocnet;

namespace {

BipartiteGraph graph_from(
    std::vector<std::pair<std::string, std::string>> edges) {
  return BipartiteGraph::from_edges(std::move(edges));
}

EdgeSignificance make_sig(std::string from, std::string to, double z) {
  EdgeSignificance sig;
  sig.from = std::move(from);
  sig.to = std::move(to);
  sig.z = z;
  sig.null_std = 1.0;
  sig.n_samples = 100;
  return sig;
}

} // namespace

TEST_SUITE_BEGIN("null-model");

TEST_CASE("default_attempts follows ceil(m ln m)") {
  // 784 * ln 784 = 5224.8966...; the direct evaluation pins the value.
  const BipartiteGraph g784 = synthetic::random_bipartite(120, 30, 784, 1);
  REQUIRE(g784.m() == 784);
  CHECK(default_attempts(g784) == 5225);

  const auto g3 = graph_from({{"c1", "A"}, {"c1", "B"}, {"c2", "A"}});
  CHECK(default_attempts(g3) == 4); // ceil(3 * 1.0986) = 4

  const auto g1 = graph_from({{"c1", "A"}});
  CHECK(default_attempts(g1) == 0); // ln 1 = 0

  CHECK(default_attempts(BipartiteGraph{}) == 0);
}

TEST_CASE("a two-edge swappable graph always swaps") {
  const auto g = graph_from({{"c1", "A"}, {"c2", "B"}});
  const auto expected = graph_from({{"c1", "B"}, {"c2", "A"}});
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    CHECK(randomize(g, 1, seed) == expected);
  }
}

TEST_CASE("a uniquely realizable degree sequence never changes") {
  // deg(c1)=2 over outlets {A,B}, deg(c2)=1 with deg(A)=2: only one graph.
  const auto g = graph_from({{"c1", "A"}, {"c1", "B"}, {"c2", "A"}});
  const auto stats = oracle::enumerate_degree_preserving(g);
  REQUIRE(stats.n_graphs == 1);
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    CHECK(randomize(g, 200, seed) == g);
  }
}

TEST_CASE("degree sequences survive any number of attempts") {
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const BipartiteGraph g = synthetic::random_bipartite(15, 8, 40, seed);
    const BipartiteGraph r = randomize(g, 500 + seed * 37, seed * 11);
    CHECK(r.m() == g.m());
    CHECK(r.left_degrees() == g.left_degrees());
    CHECK(r.right_degrees() == g.right_degrees());
    CHECK(r.left_ids == g.left_ids);
    CHECK(r.right_ids == g.right_ids);
  }
}

TEST_CASE("single-sample ensemble of the unique graph is constant") {
  const auto g = graph_from({{"c1", "A"}, {"c1", "B"}, {"c2", "A"}});
  EnsembleOptions opts;
  opts.n_samples = 1;
  opts.master_seed = 5;
  const EnsembleAccumulator acc = run_ensemble(g, opts);
  const Projection p = project(g);

  REQUIRE(acc.n_pairs() == 1); // C(2,2) outlets -> 1 pair
  CHECK(acc.null_mean(0) == static_cast<double>(p.weight(0, 1)));
  CHECK(acc.null_std(0) == 0.0);
}

TEST_CASE("accumulator covers every pair") {
  const BipartiteGraph g = synthetic::random_bipartite(10, 6, 24, 3);
  EnsembleOptions opts;
  opts.n_samples = 50;
  opts.master_seed = 9;
  const EnsembleAccumulator acc = run_ensemble(g, opts);
  CHECK(acc.n_pairs() == 6 * 5 / 2);
  for (std::size_t p = 0; p < acc.n_pairs(); ++p) {
    std::uint64_t total = 0;
    for (const auto c : acc.hist[p]) total += c;
    CHECK(total == 50);
  }
}

TEST_CASE("ensemble is deterministic across thread counts") {
  const BipartiteGraph g = synthetic::random_bipartite(14, 7, 36, 21);
  EnsembleOptions opts;
  opts.n_samples = 64;
  opts.master_seed = 1234;
  opts.chains = 8;

  opts.threads = 1;
  const EnsembleAccumulator a = run_ensemble(g, opts);
  opts.threads = 4;
  const EnsembleAccumulator b = run_ensemble(g, opts);
  opts.threads = 8;
  const EnsembleAccumulator c = run_ensemble(g, opts);
  CHECK(a.hist == b.hist);
  CHECK(a.hist == c.hist);
}

TEST_CASE("ensemble matches the exhaustive enumeration oracle") {
  // Constant case: every degree-preserving realization has the same
  // projection, so the ensemble must reproduce it exactly.
  SUBCASE("constant null") {
    const auto g = graph_from({{"c1", "A"},
                               {"c1", "B"},
                               {"c2", "A"},
                               {"c2", "B"},
                               {"c3", "B"},
                               {"c3", "C"}});
    const auto exact = oracle::enumerate_degree_preserving(g);
    REQUIRE(exact.n_graphs == 3);

    EnsembleOptions opts;
    opts.n_samples = 400;
    opts.master_seed = 77;
    const EnsembleAccumulator acc = run_ensemble(g, opts);
    const Projection p = project(g);
    for (std::size_t pair = 0; pair < acc.n_pairs(); ++pair) {
      CHECK(exact.sd[pair] == 0.0);
      CHECK(acc.null_mean(pair) == exact.mean[pair]);
    }
    CHECK(p.weight_of("A", "B") == 2);
  }

  // A sequence with real variance: estimates must sit within 3 standard
  // errors of the exact values at n = 10,000.
  SUBCASE("variable null") {
    const auto g = graph_from({{"c1", "A"}, {"c1", "B"},
                               {"c2", "B"}, {"c2", "C"},
                               {"c3", "C"}, {"c3", "D"},
                               {"c4", "D"}, {"c4", "A"},
                               {"c5", "A"}, {"c5", "C"}});
    const auto exact = oracle::enumerate_degree_preserving(g);
    REQUIRE(exact.n_graphs > 1);

    EnsembleOptions opts;
    opts.n_samples = 10000;
    opts.master_seed = 20240817;
    const EnsembleAccumulator acc = run_ensemble(g, opts);
    bool any_variable = false;
    for (std::size_t pair = 0; pair < acc.n_pairs(); ++pair) {
      const double se = exact.sd[pair] / std::sqrt(10000.0);
      if (exact.sd[pair] > 0) any_variable = true;
      CHECK(std::fabs(acc.null_mean(pair) - exact.mean[pair]) <= 3.0 * se + 1e-12);
    }
    CHECK(any_variable);
  }
}

TEST_CASE("edge significance arithmetic") {
  // Hand-built accumulator: samples {2, 4, 6} -> mean 4, sample std 2.
  EnsembleAccumulator acc;
  acc.outlets = {"A", "B"};
  acc.n_samples = 3;
  acc.hist = {std::vector<std::uint32_t>(11, 0)};
  acc.hist[0][2] = 1;
  acc.hist[0][4] = 1;
  acc.hist[0][6] = 1;

  Projection p;
  p.outlets = {"A", "B"};

  SUBCASE("z = (w_obs - mean) / std") {
    p.weights = {10};
    const auto sigs = edge_significance(p, acc);
    REQUIRE(sigs.size() == 1);
    CHECK(sigs[0].null_mean == doctest::Approx(4.0));
    CHECK(sigs[0].null_std == doctest::Approx(2.0));
    CHECK(sigs[0].z == doctest::Approx(3.0));
    CHECK_FALSE(sigs[0].degenerate);
    // no sample deviates by >= 6 -> (0 + 1) / (3 + 1)
    CHECK(sigs[0].p_emp == doctest::Approx(0.25));
  }

  SUBCASE("observation at the null center") {
    p.weights = {4};
    const auto sigs = edge_significance(p, acc);
    CHECK(sigs[0].z == doctest::Approx(0.0));
    CHECK(sigs[0].p_emp == doctest::Approx(1.0));
  }
}

TEST_CASE("degenerate null std is flagged and p stays defined") {
  EnsembleAccumulator acc;
  acc.outlets = {"A", "B"};
  acc.n_samples = 5;
  acc.hist = {std::vector<std::uint32_t>(4, 0)};
  acc.hist[0][2] = 5; // constant null at w = 2

  Projection p;
  p.outlets = {"A", "B"};
  p.weights = {3};
  const auto sigs = edge_significance(p, acc);
  REQUIRE(sigs.size() == 1);
  CHECK(sigs[0].degenerate);
  CHECK(std::isnan(sigs[0].z));
  CHECK(sigs[0].p_emp == doctest::Approx(1.0 / 6.0));
  CHECK(sigs[0].p_emp >= 1.0 / (acc.n_samples + 1));
}

TEST_CASE("filter_network keeps the requested signs") {
  const std::vector<EdgeSignificance> sigs = {
      make_sig("A", "B", 2.2), make_sig("A", "C", 1.5),
      make_sig("B", "C", -2.5)};

  const ValidatedNetwork both = filter_network(sigs, 1.96, KeepEdges::both);
  REQUIRE(both.edges.size() == 2);
  CHECK(both.edges[0].sign == EdgeSign::positive);
  CHECK(both.edges[1].sign == EdgeSign::negative);
  CHECK(both.nodes == std::vector<std::string>{"A", "B", "C"});

  const ValidatedNetwork pos = filter_network(sigs, 1.96, KeepEdges::positive);
  REQUIRE(pos.edges.size() == 1);
  CHECK(pos.edges[0].from == "A");

  const ValidatedNetwork neg = filter_network(sigs, 1.96, KeepEdges::negative);
  REQUIRE(neg.edges.size() == 1);
  CHECK(neg.edges[0].sign == EdgeSign::negative);
}

TEST_CASE("stricter thresholds keep a subset of edges") {
  std::vector<EdgeSignificance> sigs;
  for (int i = 0; i < 40; ++i) {
    sigs.push_back(make_sig("n" + std::to_string(i), "n" + std::to_string(i + 50),
                            -4.0 + 0.2 * i));
  }
  const auto edges_at = [&](double theta) {
    std::set<std::string> keys;
    for (const auto& e : filter_network(sigs, theta, KeepEdges::both).edges) {
      keys.insert(e.from + "|" + e.to);
    }
    return keys;
  };
  const auto loose = edges_at(1.96);
  const auto strict = edges_at(3.29);
  for (const auto& key : strict) CHECK(loose.contains(key));
  CHECK(strict.size() < loose.size());
}

TEST_CASE("degenerate edges are never retained") {
  EdgeSignificance sig = make_sig("A", "B", 10.0);
  sig.degenerate = true;
  sig.z = std::numeric_limits<double>::quiet_NaN();
  const ValidatedNetwork net = filter_network({sig}, 1.96, KeepEdges::both);
  CHECK(net.edges.empty());
  CHECK(net.nodes.size() == 2);
}

TEST_CASE("clusters are components of the positive subgraph") {
  ValidatedNetwork net;
  net.nodes = {"A", "B", "C", "D", "E", "F"};
  net.edges = {
      {"A", "B", EdgeSign::positive, 2.5, 3},
      {"B", "C", EdgeSign::positive, 2.2, 2},
      {"D", "E", EdgeSign::positive, 3.0, 4},
      {"C", "D", EdgeSign::negative, -2.6, 0}, // negative edges never join
  };
  const Partition part = clusters(net);
  CHECK(part.group_of.at("A") == part.group_of.at("B"));
  CHECK(part.group_of.at("B") == part.group_of.at("C"));
  CHECK(part.group_of.at("D") == part.group_of.at("E"));
  CHECK(part.group_of.at("A") != part.group_of.at("D"));
  CHECK(part.group_of.at("F") != part.group_of.at("A"));
  CHECK(part.group_of.at("F") != part.group_of.at("D"));
  CHECK(part.group_count() == 3);
}

TEST_CASE("no positive edges means all singletons") {
  ValidatedNetwork net;
  net.nodes = {"A", "B", "C"};
  net.edges = {{"A", "B", EdgeSign::negative, -2.5, 0}};
  const Partition part = clusters(net);
  CHECK(part.group_count() == 3);
}

TEST_SUITE_END();
