#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "coocnet/ingest.hpp"
#include "coocnet/null_model.hpp"

namespace coocnet {

struct ThresholdEntry {
  double theta = 0.0;
  ValidatedNetwork network;
  Partition cluster_partition;
  std::vector<std::string> gained; // "from--to" vs the baseline network
  std::vector<std::string> lost;
};

struct SweepReport {
  double baseline_theta = 1.96;
  std::vector<ThresholdEntry> entries; // ascending thresholds
  bool nested = false; // edge sets shrink as the threshold grows
};

/// Re-filter the significance list at each threshold and diff against the
/// baseline. Pure filtering: no resampling happens here.
SweepReport threshold_sweep(const std::vector<EdgeSignificance>& sigs,
                            std::vector<double> thresholds = {1.64, 1.96,
                                                              2.58, 3.29},
                            double baseline_theta = 1.96);

struct AblationConfig {
  unsigned min_outlets = 2;
  EnsembleOptions ensemble;
  double theta = 1.96;
};

struct AblationEntry {
  std::string removed_outlet;
  std::size_t n_contributors = 0;
  std::size_t n_articles = 0;
  std::vector<EdgeSignificance> significance;
  ValidatedNetwork network;
  Partition cluster_partition;
  /// Significant positive edges crossing the supplied baseline partition.
  std::size_t cross_cluster_positive_edges = 0;
};

/// Full rerun without one outlet: drop its records, re-apply the
/// multi-outlet restriction (contributors may fall below the threshold),
/// rebuild, resample with a seed derived from (master_seed, outlet), and
/// re-validate. baseline_clusters scores the cross-cluster edge count.
AblationEntry leave_one_out(const ArticleSet& cleaned,
                            const std::string& outlet,
                            const AblationConfig& config,
                            const Partition& baseline_clusters);

struct StructureDiff {
  std::vector<std::string> edges_only_in_a; // "from--to(sign)"
  std::vector<std::string> edges_only_in_b;
  std::size_t components_a = 0;
  std::size_t components_b = 0;
  /// Fraction of shared-node pairs with identical co-membership; absent when
  /// fewer than two nodes are shared.
  std::optional<double> agreement;
};

StructureDiff compare_structures(const ValidatedNetwork& a,
                                 const ValidatedNetwork& b);

} // namespace coocnet
