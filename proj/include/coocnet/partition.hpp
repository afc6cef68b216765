#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "coocnet/graph.hpp"

namespace coocnet {

/// node -> opaque group label.
struct Partition {
  std::map<std::string, std::string> group_of;

  std::size_t group_count() const;
  bool covers(const std::vector<std::string>& nodes) const;
};

/// Per-outlet attributes, continuous or categorical. Grouped measures (e.g.
/// audience gender split) are stored as columns named "attr:group" and
/// addressed by their shared "attr" prefix; group order follows the CSV.
struct AttributeTable {
  struct Column {
    std::string name;
    bool numeric = false;
    std::vector<std::string> raw;           // per outlet, as written
    std::vector<std::optional<double>> num; // parsed when numeric
  };

  std::vector<std::string> outlets;
  std::vector<Column> columns;

  const Column* find_column(const std::string& name) const;
  /// Columns "attr:*" in declaration order.
  std::vector<const Column*> group_columns(const std::string& attr) const;
};

AttributeTable read_attribute_csv(const std::filesystem::path& path);

/// Equal-width binning: width = (max-min)/k, bin i covers
/// [min + i*width, min + (i+1)*width) with the top boundary inclusive.
/// Constant input collapses to a single group. Labels are "bin0".."bin{k-1}".
Partition bin_continuous(const std::map<std::string, double>& values,
                         unsigned k = 3);

enum class PartitionMode { bin, ratio_bin, categorical, largest_group };
PartitionMode parse_partition_mode(const std::string& name);

struct DerivedPartition {
  Partition partition;
  std::vector<std::string> excluded; // outlets dropped (e.g. zero denominator)
  std::vector<std::string> warnings;
};

DerivedPartition derive_partition(const AttributeTable& table,
                                  const std::string& attr, PartitionMode mode);

/// Newman modularity of an externally given partition:
///   Q = (1/2W) * sum_ij (A_ij - k_i k_j / 2W) * [c_i == c_j]
/// over ordered pairs with A_ii = 0. Throws if a node is unlabeled or the
/// graph has zero total weight.
double modularity(const WeightedGraph& net, const Partition& part);

/// (name, Q) sorted by descending Q, ties by name.
std::vector<std::pair<std::string, double>> rank_classifications(
    const WeightedGraph& net,
    const std::vector<std::pair<std::string, Partition>>& parts);

} // namespace coocnet
