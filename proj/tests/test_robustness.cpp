#include <doctest.h>

#include <cmath>

#include "coocnet/errors.hpp"
#include "coocnet/robustness.hpp"
#include "synthetic.hpp"

using namespace coocnet;

namespace {

EdgeSignificance sig(std::string from, std::string to, double z,
                     std::uint32_t w = 1) {
  EdgeSignificance s;
  s.from = std::move(from);
  s.to = std::move(to);
  s.z = z;
  s.w_obs = w;
  s.null_std = 1.0;
  s.n_samples = 100;
  return s;
}

std::vector<EdgeSignificance> ladder() {
  // z-scores straddling all four standard thresholds, both signs
  return {
      sig("A", "B", 4.1),  sig("A", "C", 2.9),  sig("B", "C", 2.2),
      sig("C", "D", 1.7),  sig("D", "E", 1.2),  sig("A", "E", -1.8),
      sig("B", "E", -2.1), sig("C", "E", -2.7), sig("D", "F", -3.5),
  };
}

} // namespace

TEST_SUITE_BEGIN("robustness");

TEST_CASE("threshold sweep is nested and diffs against the baseline") {
  const SweepReport report = threshold_sweep(ladder());
  REQUIRE(report.entries.size() == 4);
  CHECK(report.nested);
  CHECK(report.baseline_theta == 1.96);

  // ascending thresholds keep shrinking edge sets
  CHECK(report.entries[0].theta == doctest::Approx(1.64));
  CHECK(report.entries[0].network.edges.size() == 8); // adds C-D and A-E
  CHECK(report.entries[1].network.edges.size() == 6); // the baseline set
  CHECK(report.entries[1].gained.empty());
  CHECK(report.entries[1].lost.empty());
  CHECK(report.entries[2].network.edges.size() == 4); // |z| > 2.58
  CHECK(report.entries[3].network.edges.size() == 2); // |z| > 3.29

  CHECK(report.entries[0].gained.size() == 2);
  CHECK(report.entries[0].lost.empty());
  CHECK(report.entries[3].lost.size() == 4);

  SUBCASE("single-threshold sweep is trivial") {
    const SweepReport single = threshold_sweep(ladder(), {1.96});
    REQUIRE(single.entries.size() == 1);
    CHECK(single.nested);
    CHECK(single.entries[0].gained.empty());
    CHECK(single.entries[0].lost.empty());
  }
  SUBCASE("thresholds must be positive") {
    CHECK_THROWS_AS(threshold_sweep(ladder(), {-1.0, 2.0}),
                    std::invalid_argument);
  }
}

TEST_CASE("compare_structures") {
  ValidatedNetwork base;
  base.nodes = {"A", "B", "C", "D"};
  base.edges = {{"A", "B", EdgeSign::positive, 2.5, 2},
                {"C", "D", EdgeSign::positive, 2.2, 1}};

  SUBCASE("identical networks show no diff and full agreement") {
    const StructureDiff diff = compare_structures(base, base);
    CHECK(diff.edges_only_in_a.empty());
    CHECK(diff.edges_only_in_b.empty());
    REQUIRE(diff.agreement.has_value());
    CHECK(*diff.agreement == doctest::Approx(1.0));
  }
  SUBCASE("one changed edge shows up once on each side") {
    ValidatedNetwork variant = base;
    variant.edges[1] = {"B", "C", EdgeSign::positive, 2.2, 1};
    const StructureDiff diff = compare_structures(base, variant);
    CHECK(diff.edges_only_in_a.size() == 1);
    CHECK(diff.edges_only_in_b.size() == 1);
  }
  SUBCASE("sign flips count as different edges") {
    ValidatedNetwork variant = base;
    variant.edges[0].sign = EdgeSign::negative;
    const StructureDiff diff = compare_structures(base, variant);
    CHECK(diff.edges_only_in_a.size() == 1);
    CHECK(diff.edges_only_in_b.size() == 1);
  }
  SUBCASE("disjoint node sets leave agreement undefined") {
    ValidatedNetwork other;
    other.nodes = {"X", "Y"};
    other.edges = {{"X", "Y", EdgeSign::positive, 3.0, 2}};
    const StructureDiff diff = compare_structures(base, other);
    CHECK_FALSE(diff.agreement.has_value());
  }
}

TEST_CASE("leave_one_out reruns the pipeline without one outlet") {
  const auto planted = synthetic::planted_partition_corpus(5, 3, 80, 0.9, 7);

  AblationConfig config;
  config.min_outlets = 2;
  config.ensemble.n_samples = 300;
  config.ensemble.master_seed = 99;
  config.theta = 1.96;

  Partition baseline;
  for (const auto& o : planted.block_a) baseline.group_of[o] = "a";
  for (const auto& o : planted.block_b) baseline.group_of[o] = "b";

  const AblationEntry entry =
      leave_one_out(planted.articles, "A1", config, baseline);
  CHECK(entry.removed_outlet == "A1");
  CHECK_FALSE(entry.network.nodes.empty());
  for (const auto& node : entry.network.nodes) CHECK(node != "A1");
  for (const auto& [node, group] : entry.cluster_partition.group_of) {
    CHECK(node != "A1");
  }

  SUBCASE("deterministic given the master seed") {
    const AblationEntry again =
        leave_one_out(planted.articles, "A1", config, baseline);
    CHECK(again.significance.size() == entry.significance.size());
    for (std::size_t i = 0; i < entry.significance.size(); ++i) {
      CHECK(again.significance[i].from == entry.significance[i].from);
      CHECK(again.significance[i].null_mean == entry.significance[i].null_mean);
      CHECK(again.significance[i].p_emp == entry.significance[i].p_emp);
    }
  }
  SUBCASE("missing outlet is an error") {
    CHECK_THROWS_AS(leave_one_out(planted.articles, "nope", config, baseline),
                    std::invalid_argument);
  }
}

TEST_CASE("leave_one_out re-applies the multi-outlet restriction") {
  // c1 spans three outlets; c2 reaches two only through outlet B. Removing
  // B must drop c2 entirely (recompute, not node deletion).
  ArticleSet set;
  const auto add = [&](const char* id, const char* outlet, const char* who) {
    ArticleRecord rec;
    rec.article_id = id;
    rec.outlet_id = outlet;
    rec.byline_raw = who;
    rec.contributor_id = who;
    set.records.push_back(rec);
  };
  add("a1", "A", "c1");
  add("a2", "B", "c1");
  add("a3", "C", "c1");
  add("a4", "B", "c2");
  add("a5", "C", "c2");

  AblationConfig config;
  config.min_outlets = 2;
  config.ensemble.n_samples = 10;
  config.ensemble.master_seed = 3;

  Partition baseline;
  baseline.group_of = {{"A", "x"}, {"B", "x"}, {"C", "x"}};

  const AblationEntry entry = leave_one_out(set, "B", config, baseline);
  CHECK(entry.n_contributors == 1); // c2 fell below two outlets
  CHECK(entry.n_articles == 2);
}

TEST_SUITE_END();
