#include "coocnet/graph.hpp"

#include <algorithm>
#include <ostream>
#include <set>
#include <unordered_map>

#include "coocnet/csv.hpp"
#include "coocnet/errors.hpp"
#include "coocnet/ingest.hpp"

namespace coocnet {

std::vector<std::size_t> BipartiteGraph::left_degrees() const {
  std::vector<std::size_t> deg(left_ids.size(), 0);
  for (const auto& [l, r] : edges) ++deg[l];
  return deg;
}

std::vector<std::size_t> BipartiteGraph::right_degrees() const {
  std::vector<std::size_t> deg(right_ids.size(), 0);
  for (const auto& [l, r] : edges) ++deg[r];
  return deg;
}

BipartiteGraph BipartiteGraph::from_edges(
    std::vector<std::pair<std::string, std::string>> id_edges) {
  BipartiteGraph g;
  std::set<std::string> left_set, right_set;
  for (const auto& [l, r] : id_edges) {
    left_set.insert(l);
    right_set.insert(r);
  }
  g.left_ids.assign(left_set.begin(), left_set.end());
  g.right_ids.assign(right_set.begin(), right_set.end());

  std::unordered_map<std::string, std::uint32_t> left_index, right_index;
  for (std::uint32_t i = 0; i < g.left_ids.size(); ++i) {
    left_index[g.left_ids[i]] = i;
  }
  for (std::uint32_t i = 0; i < g.right_ids.size(); ++i) {
    right_index[g.right_ids[i]] = i;
  }

  std::set<std::pair<std::uint32_t, std::uint32_t>> dedup;
  for (const auto& [l, r] : id_edges) {
    dedup.emplace(left_index[l], right_index[r]);
  }
  g.edges.assign(dedup.begin(), dedup.end());
  return g;
}

BipartiteGraph build_bipartite(const ArticleSet& articles) {
  std::vector<std::pair<std::string, std::string>> id_edges;
  id_edges.reserve(articles.records.size());
  for (const auto& rec : articles.records) {
    if (!rec.contributor_id) {
      throw DataError("build_bipartite: record '" + rec.article_id +
                      "' has no contributor_id");
    }
    id_edges.emplace_back(*rec.contributor_id, rec.outlet_id);
  }
  return BipartiteGraph::from_edges(std::move(id_edges));
}

std::map<std::string, std::size_t> degree_sequence(const BipartiteGraph& g,
                                                   Side side) {
  std::map<std::string, std::size_t> out;
  const auto& ids = side == Side::left ? g.left_ids : g.right_ids;
  for (const auto& id : ids) out[id] = 0;
  for (const auto& [l, r] : g.edges) {
    ++out[side == Side::left ? g.left_ids[l] : g.right_ids[r]];
  }
  return out;
}

std::size_t Projection::pair_index(std::size_t i, std::size_t j,
                                   std::size_t n) {
  if (i > j) std::swap(i, j);
  return i * (2 * n - i - 1) / 2 + (j - i - 1);
}

std::uint32_t Projection::weight(std::size_t i, std::size_t j) const {
  if (i == j) throw std::invalid_argument("projection weight: self-pair");
  return weights[pair_index(i, j, outlets.size())];
}

std::uint32_t Projection::weight_of(const std::string& a,
                                    const std::string& b) const {
  const auto find = [&](const std::string& id) {
    const auto it = std::lower_bound(outlets.begin(), outlets.end(), id);
    if (it == outlets.end() || *it != id) {
      throw std::invalid_argument("projection: unknown outlet '" + id + "'");
    }
    return static_cast<std::size_t>(it - outlets.begin());
  };
  return weight(find(a), find(b));
}

std::vector<std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>>
Projection::nonzero_pairs() const {
  std::vector<std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>> out;
  const std::size_t n = outlets.size();
  for (std::size_t i = 0; i + 1 < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const std::uint32_t w = weights[pair_index(i, j, n)];
      if (w > 0) {
        out.emplace_back(static_cast<std::uint32_t>(i),
                         static_cast<std::uint32_t>(j), w);
      }
    }
  }
  return out;
}

Projection project(const BipartiteGraph& g) {
  Projection p;
  p.outlets = g.right_ids;
  const std::size_t n = p.outlets.size();
  p.weights.assign(n < 2 ? 0 : n * (n - 1) / 2, 0);

  std::vector<std::vector<std::uint32_t>> outlets_of(g.left_ids.size());
  for (const auto& [l, r] : g.edges) outlets_of[l].push_back(r);
  for (auto& outlets : outlets_of) {
    std::sort(outlets.begin(), outlets.end());
    for (std::size_t a = 0; a + 1 < outlets.size(); ++a) {
      for (std::size_t b = a + 1; b < outlets.size(); ++b) {
        ++p.weights[Projection::pair_index(outlets[a], outlets[b], n)];
      }
    }
  }
  return p;
}

double WeightedGraph::total_weight() const {
  double w = 0;
  for (const auto& [i, j, weight] : edges) w += weight;
  return w;
}

WeightedGraph to_weighted_graph(const Projection& p) {
  WeightedGraph g;
  g.nodes = p.outlets;
  for (const auto& [i, j, w] : p.nonzero_pairs()) {
    g.edges.emplace_back(i, j, static_cast<double>(w));
  }
  return g;
}

void write_bipartite_csv(std::ostream& out, const BipartiteGraph& g) {
  const std::vector<std::string> header = {"contributor_id", "outlet_id"};
  write_csv_row(out, header);
  for (const auto& [l, r] : g.edges) {
    const std::vector<std::string> row = {g.left_ids[l], g.right_ids[r]};
    write_csv_row(out, row);
  }
}

BipartiteGraph read_bipartite_csv(const std::filesystem::path& path) {
  CsvTable table = read_csv_file(path);
  const std::size_t col_l = table.require_column("contributor_id");
  const std::size_t col_r = table.require_column("outlet_id");
  std::vector<std::pair<std::string, std::string>> id_edges;
  id_edges.reserve(table.rows.size());
  for (const auto& row : table.rows) {
    id_edges.emplace_back(row[col_l], row[col_r]);
  }
  return BipartiteGraph::from_edges(std::move(id_edges));
}

void write_projection_csv(std::ostream& out, const Projection& p) {
  const std::vector<std::string> header = {"from", "to", "weight"};
  write_csv_row(out, header);
  for (const auto& [i, j, w] : p.nonzero_pairs()) {
    const std::vector<std::string> row = {p.outlets[i], p.outlets[j],
                                          std::to_string(w)};
    write_csv_row(out, row);
  }
}

} // namespace coocnet
