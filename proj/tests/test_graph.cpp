#include <doctest.h>

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>

#include "coocnet/graph.hpp"
#include "coocnet/ingest.hpp"
#include "coocnet/rng.hpp"
#include "synthetic.hpp"

using namespace coocnet;

namespace {

ArticleSet article_set(
    const std::vector<std::pair<std::string, std::string>>& pairs) {
  ArticleSet set;
  std::size_t n = 0;
  for (const auto& [contributor, outlet] : pairs) {
    ArticleRecord rec;
    rec.article_id = "a" + std::to_string(++n);
    rec.outlet_id = outlet;
    rec.byline_raw = contributor;
    rec.contributor_id = contributor;
    set.records.push_back(std::move(rec));
  }
  return set;
}

} // namespace

TEST_SUITE_BEGIN("graph");

TEST_CASE("build_bipartite discards article multiplicity") {
  const auto set = article_set({{"c1", "A"}, {"c1", "A"}, {"c1", "B"}});
  const BipartiteGraph g = build_bipartite(set);
  CHECK(g.m() == 2);
  CHECK(g.left_ids == std::vector<std::string>{"c1"});
  CHECK(g.right_ids == std::vector<std::string>{"A", "B"});
}

TEST_CASE("build_bipartite of an empty set is an empty graph") {
  const BipartiteGraph g = build_bipartite(ArticleSet{});
  CHECK(g.m() == 0);
  CHECK(g.left_ids.empty());
  CHECK(g.right_ids.empty());
}

TEST_CASE("projection weights count shared contributors") {
  const auto set = article_set({{"c1", "A"},
                                {"c1", "B"},
                                {"c2", "A"},
                                {"c2", "B"},
                                {"c3", "B"},
                                {"c3", "C"}});
  const Projection p = project(build_bipartite(set));
  CHECK(p.weight_of("A", "B") == 2);
  CHECK(p.weight_of("B", "C") == 1);
  CHECK(p.weight_of("A", "C") == 0);
  CHECK(p.n_pairs() == 3);
  CHECK(p.nonzero_pairs().size() == 2);
}

TEST_CASE("degree sequences and the handshake identity") {
  const auto set = article_set({{"c1", "A"}, {"c1", "B"}});
  const BipartiteGraph g = build_bipartite(set);

  const auto left = degree_sequence(g, Side::left);
  CHECK(left.at("c1") == 2);
  const auto right = degree_sequence(g, Side::right);
  CHECK(right.at("A") == 1);
  CHECK(right.at("B") == 1);

  std::size_t sum_left = 0, sum_right = 0;
  for (const auto& [id, d] : left) sum_left += d;
  for (const auto& [id, d] : right) sum_right += d;
  CHECK(sum_left == g.m());
  CHECK(sum_right == g.m());
}

TEST_CASE("projection invariants on random graphs") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const BipartiteGraph g = synthetic::random_bipartite(12, 7, 30, seed);
    const Projection p = project(g);
    const auto right_deg = g.right_degrees();
    const auto left_deg = g.left_degrees();

    // weight bound: w(a,b) <= min(deg(a), deg(b))
    const std::size_t n = p.outlets.size();
    for (std::size_t i = 0; i + 1 < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        CHECK(p.weight(i, j) <= std::min(right_deg[i], right_deg[j]));
      }
    }

    // total co-occurrence identity: sum_w = sum_c C(deg(c), 2)
    std::uint64_t total_w = 0;
    for (const auto w : p.weights) total_w += w;
    std::uint64_t expected = 0;
    for (const auto d : left_deg) expected += d * (d - 1) / 2;
    CHECK(total_w == expected);
  }
}

TEST_CASE("projection is invariant to record order") {
  auto set = article_set({{"c1", "A"},
                          {"c2", "B"},
                          {"c1", "B"},
                          {"c3", "C"},
                          {"c2", "A"},
                          {"c3", "B"}});
  const Projection base = project(build_bipartite(set));

  Rng rng(7);
  for (int trial = 0; trial < 5; ++trial) {
    rng.shuffle(set.records);
    const Projection shuffled = project(build_bipartite(set));
    CHECK(shuffled.outlets == base.outlets);
    CHECK(shuffled.weights == base.weights);
  }
}

TEST_CASE("bipartite edge list CSV round-trips") {
  const auto set = article_set(
      {{"c1", "A"}, {"c1", "B"}, {"c2", "A"}, {"c3", "C, with comma"}});
  const BipartiteGraph g = build_bipartite(set);

  std::ostringstream out;
  write_bipartite_csv(out, g);
  const auto tmp = std::filesystem::temp_directory_path() / "graph_rt.csv";
  {
    std::ofstream f(tmp, std::ios::binary);
    f << out.str();
  }
  const BipartiteGraph back = read_bipartite_csv(tmp);
  CHECK(back == g);
}

TEST_SUITE_END();
