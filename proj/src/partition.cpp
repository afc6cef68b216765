#include "coocnet/partition.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <set>

#include "coocnet/csv.hpp"
#include "coocnet/errors.hpp"

namespace coocnet {

std::size_t Partition::group_count() const {
  std::set<std::string> groups;
  for (const auto& [node, group] : group_of) groups.insert(group);
  return groups.size();
}

bool Partition::covers(const std::vector<std::string>& nodes) const {
  return std::all_of(nodes.begin(), nodes.end(), [&](const std::string& n) {
    return group_of.contains(n);
  });
}

const AttributeTable::Column* AttributeTable::find_column(
    const std::string& name) const {
  for (const auto& col : columns) {
    if (col.name == name) return &col;
  }
  return nullptr;
}

std::vector<const AttributeTable::Column*> AttributeTable::group_columns(
    const std::string& attr) const {
  std::vector<const Column*> out;
  const std::string prefix = attr + ":";
  for (const auto& col : columns) {
    if (col.name.starts_with(prefix)) out.push_back(&col);
  }
  return out;
}

AttributeTable read_attribute_csv(const std::filesystem::path& path) {
  CsvTable csv = read_csv_file(path);
  const std::size_t col_outlet = csv.require_column("outlet");

  AttributeTable table;
  std::set<std::string> seen;
  for (const auto& row : csv.rows) {
    if (!seen.insert(row[col_outlet]).second) {
      throw DataError("attribute table: duplicate outlet '" +
                      row[col_outlet] + "'");
    }
    table.outlets.push_back(row[col_outlet]);
  }

  for (std::size_t c = 0; c < csv.header.size(); ++c) {
    if (c == col_outlet) continue;
    AttributeTable::Column col;
    col.name = csv.header[c];
    col.numeric = true;
    for (const auto& row : csv.rows) {
      col.raw.push_back(row[c]);
      if (row[c].empty()) {
        col.num.push_back(std::nullopt);
        continue;
      }
      char* end = nullptr;
      const double v = std::strtod(row[c].c_str(), &end);
      if (end && *end == '\0') {
        col.num.push_back(v);
      } else {
        col.numeric = false;
        col.num.push_back(std::nullopt);
      }
    }
    table.columns.push_back(std::move(col));
  }
  return table;
}

Partition bin_continuous(const std::map<std::string, double>& values,
                         unsigned k) {
  if (values.empty()) {
    throw std::invalid_argument("bin_continuous: no values");
  }
  if (k < 1) throw std::invalid_argument("bin_continuous: k must be >= 1");

  double lo = values.begin()->second, hi = lo;
  for (const auto& [node, v] : values) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }

  Partition part;
  if (hi == lo) {
    for (const auto& [node, v] : values) part.group_of[node] = "bin0";
    return part;
  }
  const double width = (hi - lo) / k;
  for (const auto& [node, v] : values) {
    auto bin = static_cast<long>(std::floor((v - lo) / width));
    if (bin < 0) bin = 0;
    if (bin >= static_cast<long>(k)) bin = k - 1; // top boundary inclusive
    part.group_of[node] = "bin" + std::to_string(bin);
  }
  return part;
}

PartitionMode parse_partition_mode(const std::string& name) {
  if (name == "bin") return PartitionMode::bin;
  if (name == "ratio_bin") return PartitionMode::ratio_bin;
  if (name == "categorical") return PartitionMode::categorical;
  if (name == "largest_group") return PartitionMode::largest_group;
  throw ConfigError("unknown partition mode '" + name + "'");
}

DerivedPartition derive_partition(const AttributeTable& table,
                                  const std::string& attr,
                                  PartitionMode mode) {
  DerivedPartition out;

  const auto require_value = [&](const AttributeTable::Column* col,
                                 std::size_t i) {
    if (!col->num[i]) {
      throw DataError("attribute '" + col->name + "' missing for outlet '" +
                      table.outlets[i] + "'");
    }
    return *col->num[i];
  };

  switch (mode) {
    case PartitionMode::bin: {
      const auto* col = table.find_column(attr);
      if (!col) throw DataError("unknown attribute '" + attr + "'");
      if (!col->numeric) {
        throw DataError("attribute '" + attr + "' is not numeric");
      }
      std::map<std::string, double> values;
      for (std::size_t i = 0; i < table.outlets.size(); ++i) {
        values[table.outlets[i]] = require_value(col, i);
      }
      out.partition = bin_continuous(values);
      break;
    }
    case PartitionMode::ratio_bin: {
      const auto cols = table.group_columns(attr);
      if (cols.size() != 2) {
        throw DataError("ratio_bin attribute '" + attr + "' needs exactly 2 '" +
                        attr + ":<group>' columns, found " +
                        std::to_string(cols.size()));
      }
      std::map<std::string, double> ratios;
      for (std::size_t i = 0; i < table.outlets.size(); ++i) {
        const double a = require_value(cols[0], i);
        const double b = require_value(cols[1], i);
        if (b == 0.0) {
          out.excluded.push_back(table.outlets[i]);
          out.warnings.push_back("outlet '" + table.outlets[i] +
                                 "' excluded from '" + attr +
                                 "': zero denominator");
          continue;
        }
        ratios[table.outlets[i]] = a / b;
      }
      if (ratios.empty()) {
        throw DataError("ratio_bin attribute '" + attr +
                        "': no outlet has a computable ratio");
      }
      out.partition = bin_continuous(ratios);
      break;
    }
    case PartitionMode::categorical: {
      const auto* col = table.find_column(attr);
      if (!col) throw DataError("unknown attribute '" + attr + "'");
      for (std::size_t i = 0; i < table.outlets.size(); ++i) {
        if (col->raw[i].empty()) {
          throw DataError("attribute '" + attr + "' missing for outlet '" +
                          table.outlets[i] + "'");
        }
        out.partition.group_of[table.outlets[i]] = col->raw[i];
      }
      break;
    }
    case PartitionMode::largest_group: {
      const auto cols = table.group_columns(attr);
      if (cols.size() < 2) {
        throw DataError("largest_group attribute '" + attr + "' needs '" +
                        attr + ":<group>' columns");
      }
      for (std::size_t i = 0; i < table.outlets.size(); ++i) {
        double best = -std::numeric_limits<double>::infinity();
        std::string label;
        for (const auto* col : cols) {
          const double v = require_value(col, i);
          const std::string group = col->name.substr(attr.size() + 1);
          if (v > best || (v == best && group < label)) {
            best = v;
            label = group;
          }
        }
        out.partition.group_of[table.outlets[i]] = label;
      }
      break;
    }
  }
  return out;
}

double modularity(const WeightedGraph& net, const Partition& part) {
  const std::size_t n = net.nodes.size();
  std::vector<const std::string*> group(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto it = part.group_of.find(net.nodes[i]);
    if (it == part.group_of.end()) {
      throw DataError("modularity: node '" + net.nodes[i] + "' is unlabeled");
    }
    group[i] = &it->second;
  }

  const double total = net.total_weight();
  if (total <= 0.0) {
    throw DataError("modularity: undefined on a graph with zero total weight");
  }
  const double two_w = 2.0 * total;

  std::vector<double> strength(n, 0.0);
  double within = 0.0; // sum of A_ij over ordered intra-group pairs
  for (const auto& [i, j, w] : net.edges) {
    if (w < 0) {
      throw std::invalid_argument("modularity: negative edge weight");
    }
    strength[i] += w;
    strength[j] += w;
    if (*group[i] == *group[j]) within += 2.0 * w;
  }

  // Group the degree term by label: sum_g (sum of strengths in g)^2.
  std::map<std::string, double> group_strength;
  for (std::size_t i = 0; i < n; ++i) group_strength[*group[i]] += strength[i];
  double expected = 0.0;
  for (const auto& [g, s] : group_strength) expected += s * s;

  return within / two_w - expected / (two_w * two_w);
}

std::vector<std::pair<std::string, double>> rank_classifications(
    const WeightedGraph& net,
    const std::vector<std::pair<std::string, Partition>>& parts) {
  if (parts.empty()) {
    throw std::invalid_argument("rank_classifications: no partitions");
  }
  std::vector<std::pair<std::string, double>> ranked;
  ranked.reserve(parts.size());
  for (const auto& [name, part] : parts) {
    ranked.emplace_back(name, modularity(net, part));
  }
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  return ranked;
}

} // namespace coocnet
