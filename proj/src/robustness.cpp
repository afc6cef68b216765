#include "coocnet/robustness.hpp"

#include <algorithm>
#include <set>

#include "coocnet/errors.hpp"
#include "coocnet/graph.hpp"
#include "coocnet/rng.hpp"

namespace coocnet {

namespace {

std::set<std::pair<std::string, std::string>> edge_keys(
    const ValidatedNetwork& net) {
  std::set<std::pair<std::string, std::string>> keys;
  for (const auto& e : net.edges) keys.emplace(e.from, e.to);
  return keys;
}

std::string edge_name(const std::pair<std::string, std::string>& key) {
  return key.first + "--" + key.second;
}

} // namespace

SweepReport threshold_sweep(const std::vector<EdgeSignificance>& sigs,
                            std::vector<double> thresholds,
                            double baseline_theta) {
  if (thresholds.empty()) {
    throw std::invalid_argument("threshold_sweep: no thresholds");
  }
  std::sort(thresholds.begin(), thresholds.end());
  for (const double theta : thresholds) {
    if (!(theta > 0.0)) {
      throw std::invalid_argument("threshold_sweep: thresholds must be > 0");
    }
  }

  const ValidatedNetwork baseline =
      filter_network(sigs, baseline_theta, KeepEdges::both);
  const auto baseline_keys = edge_keys(baseline);

  SweepReport report;
  report.baseline_theta = baseline_theta;
  report.nested = true;

  std::optional<std::set<std::pair<std::string, std::string>>> previous;
  for (const double theta : thresholds) {
    ThresholdEntry entry;
    entry.theta = theta;
    entry.network = filter_network(sigs, theta, KeepEdges::both);
    entry.cluster_partition = clusters(entry.network);
    const auto keys = edge_keys(entry.network);
    for (const auto& key : keys) {
      if (!baseline_keys.contains(key)) entry.gained.push_back(edge_name(key));
    }
    for (const auto& key : baseline_keys) {
      if (!keys.contains(key)) entry.lost.push_back(edge_name(key));
    }
    if (previous) {
      // thresholds ascend, so each edge set must be contained in the last
      for (const auto& key : keys) {
        if (!previous->contains(key)) report.nested = false;
      }
    }
    previous = keys;
    report.entries.push_back(std::move(entry));
  }
  return report;
}

AblationEntry leave_one_out(const ArticleSet& cleaned,
                            const std::string& outlet,
                            const AblationConfig& config,
                            const Partition& baseline_clusters) {
  bool outlet_seen = false;
  ArticleSet without;
  without.records.reserve(cleaned.records.size());
  for (const auto& rec : cleaned.records) {
    if (rec.outlet_id == outlet) {
      outlet_seen = true;
      continue;
    }
    without.records.push_back(rec);
  }
  if (!outlet_seen) {
    throw std::invalid_argument("leave_one_out: outlet '" + outlet +
                                "' not present");
  }
  if (without.records.empty()) {
    throw DataError("leave_one_out: removing '" + outlet +
                    "' empties the corpus");
  }
  without.provenance = cleaned.provenance + "; removed outlet " + outlet;

  const ArticleSet restricted =
      restrict_multi_outlet(without, config.min_outlets);
  if (restricted.records.empty()) {
    throw DataError("leave_one_out: removing '" + outlet +
                    "' leaves no multi-outlet contributors");
  }
  const BipartiteGraph graph = build_bipartite(restricted);
  const Projection projection = project(graph);

  EnsembleOptions opts = config.ensemble;
  std::uint64_t outlet_tag = 1469598103934665603ULL; // FNV-1a over the id
  for (const unsigned char c : outlet) {
    outlet_tag = (outlet_tag ^ c) * 1099511628211ULL;
  }
  opts.master_seed = derive_seed(config.ensemble.master_seed, outlet_tag);

  const EnsembleAccumulator acc = run_ensemble(graph, opts);

  AblationEntry entry;
  entry.removed_outlet = outlet;
  entry.n_articles = restricted.records.size();
  std::set<std::string> contributors;
  for (const auto& rec : restricted.records) {
    contributors.insert(*rec.contributor_id);
  }
  entry.n_contributors = contributors.size();
  entry.significance = edge_significance(projection, acc);
  entry.network =
      filter_network(entry.significance, config.theta, KeepEdges::both);
  entry.cluster_partition = clusters(entry.network);

  for (const auto& e : entry.network.edges) {
    if (e.sign != EdgeSign::positive) continue;
    const auto a = baseline_clusters.group_of.find(e.from);
    const auto b = baseline_clusters.group_of.find(e.to);
    if (a != baseline_clusters.group_of.end() &&
        b != baseline_clusters.group_of.end() && a->second != b->second) {
      ++entry.cross_cluster_positive_edges;
    }
  }
  return entry;
}

StructureDiff compare_structures(const ValidatedNetwork& a,
                                 const ValidatedNetwork& b) {
  StructureDiff diff;

  const auto signed_keys = [](const ValidatedNetwork& net) {
    std::set<std::string> keys;
    for (const auto& e : net.edges) {
      keys.insert(e.from + "--" + e.to +
                  (e.sign == EdgeSign::positive ? "(+)" : "(-)"));
    }
    return keys;
  };
  const auto keys_a = signed_keys(a);
  const auto keys_b = signed_keys(b);
  for (const auto& key : keys_a) {
    if (!keys_b.contains(key)) diff.edges_only_in_a.push_back(key);
  }
  for (const auto& key : keys_b) {
    if (!keys_a.contains(key)) diff.edges_only_in_b.push_back(key);
  }

  const Partition part_a = clusters(a);
  const Partition part_b = clusters(b);
  diff.components_a = part_a.group_count();
  diff.components_b = part_b.group_count();

  std::vector<std::string> shared;
  for (const auto& node : a.nodes) {
    if (std::binary_search(b.nodes.begin(), b.nodes.end(), node)) {
      shared.push_back(node);
    }
  }
  if (shared.size() >= 2) {
    std::size_t agree = 0, total = 0;
    for (std::size_t i = 0; i + 1 < shared.size(); ++i) {
      for (std::size_t j = i + 1; j < shared.size(); ++j) {
        const bool same_a = part_a.group_of.at(shared[i]) ==
                            part_a.group_of.at(shared[j]);
        const bool same_b = part_b.group_of.at(shared[i]) ==
                            part_b.group_of.at(shared[j]);
        ++total;
        if (same_a == same_b) ++agree;
      }
    }
    diff.agreement = static_cast<double>(agree) / static_cast<double>(total);
  }
  return diff;
}

} // namespace coocnet
