#include "coocnet/null_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <ostream>
#include <set>

#include "coocnet/csv.hpp"
#include "coocnet/errors.hpp"
#include "coocnet/parallel.hpp"

namespace coocnet {

std::uint64_t default_attempts(const BipartiteGraph& g) {
  const auto m = static_cast<double>(g.m());
  if (g.m() <= 1) return 0;
  return static_cast<std::uint64_t>(std::ceil(m * std::log(m)));
}

EdgeSwapChain::EdgeSwapChain(const BipartiteGraph& g)
    : n_left_(g.left_ids.size()),
      n_right_(g.right_ids.size()),
      left_ids_(g.left_ids),
      right_ids_(g.right_ids),
      edges_(g.edges),
      adj_(g.left_ids.size()) {
  for (const auto& [l, r] : edges_) adj_[l].push_back(r);
  for (auto& list : adj_) std::sort(list.begin(), list.end());
  left_deg0_ = g.left_degrees();
  right_deg0_ = g.right_degrees();
}

bool EdgeSwapChain::has_edge(std::uint32_t l, std::uint32_t r) const {
  const auto& list = adj_[l];
  return std::binary_search(list.begin(), list.end(), r);
}

namespace {

void adj_replace(std::vector<std::uint32_t>& list, std::uint32_t old_value,
                 std::uint32_t new_value) {
  const auto it = std::lower_bound(list.begin(), list.end(), old_value);
  list.erase(it);
  list.insert(std::lower_bound(list.begin(), list.end(), new_value),
              new_value);
}

} // namespace

std::uint64_t EdgeSwapChain::attempt_swaps(std::uint64_t attempts, Rng& rng) {
  const std::size_t m = edges_.size();
  if (m < 2) return 0;
  std::uint64_t accepted = 0;
  for (std::uint64_t t = 0; t < attempts; ++t) {
    // Two distinct edge slots, uniform over ordered pairs.
    const std::size_t i = rng.index(m);
    std::size_t j = rng.index(m - 1);
    if (j >= i) ++j;

    const auto [a, x] = edges_[i];
    const auto [b, y] = edges_[j];
    if (a == b || x == y) continue;
    if (has_edge(a, y) || has_edge(b, x)) continue;

    adj_replace(adj_[a], x, y);
    adj_replace(adj_[b], y, x);
    edges_[i] = {a, y};
    edges_[j] = {b, x};
    ++accepted;
  }
  return accepted;
}

void EdgeSwapChain::project_into(std::vector<std::uint32_t>& pair_weights) const {
  std::fill(pair_weights.begin(), pair_weights.end(), 0u);
  const std::size_t n = n_right_;
  for (const auto& outlets : adj_) {
    for (std::size_t a = 0; a + 1 < outlets.size(); ++a) {
      for (std::size_t b = a + 1; b < outlets.size(); ++b) {
        ++pair_weights[Projection::pair_index(outlets[a], outlets[b], n)];
      }
    }
  }
}

bool EdgeSwapChain::degrees_preserved() const {
  std::vector<std::size_t> left(n_left_, 0), right(n_right_, 0);
  std::size_t adj_total = 0;
  for (const auto& [l, r] : edges_) {
    ++left[l];
    ++right[r];
  }
  for (std::size_t l = 0; l < n_left_; ++l) {
    const auto& list = adj_[l];
    adj_total += list.size();
    if (list.size() != left[l]) return false;
    for (std::size_t i = 0; i + 1 < list.size(); ++i) {
      if (list[i] >= list[i + 1]) return false; // duplicate or unsorted
    }
  }
  return adj_total == edges_.size() && left == left_deg0_ &&
         right == right_deg0_;
}

BipartiteGraph EdgeSwapChain::to_graph() const {
  BipartiteGraph g;
  g.left_ids = left_ids_;
  g.right_ids = right_ids_;
  g.edges = edges_;
  std::sort(g.edges.begin(), g.edges.end());
  return g;
}

BipartiteGraph randomize(const BipartiteGraph& g, std::uint64_t attempts,
                         std::uint64_t rng_seed) {
  EdgeSwapChain chain(g);
  Rng rng(rng_seed);
  chain.attempt_swaps(attempts, rng);
  if (!chain.degrees_preserved()) {
    throw std::logic_error("randomize: degree sequence not preserved");
  }
  return chain.to_graph();
}

std::uint64_t EnsembleAccumulator::sample_sum(std::size_t pair) const {
  std::uint64_t sum = 0;
  const auto& h = hist[pair];
  for (std::size_t w = 1; w < h.size(); ++w) {
    sum += static_cast<std::uint64_t>(w) * h[w];
  }
  return sum;
}

std::uint64_t EnsembleAccumulator::sample_sum_sq(std::size_t pair) const {
  std::uint64_t sum = 0;
  const auto& h = hist[pair];
  for (std::size_t w = 1; w < h.size(); ++w) {
    sum += static_cast<std::uint64_t>(w) * w * h[w];
  }
  return sum;
}

double EnsembleAccumulator::null_mean(std::size_t pair) const {
  return static_cast<double>(sample_sum(pair)) /
         static_cast<double>(n_samples);
}

double EnsembleAccumulator::null_std(std::size_t pair) const {
  if (n_samples < 2) return 0.0;
  const auto n = static_cast<__int128>(n_samples);
  const auto sum = static_cast<__int128>(sample_sum(pair));
  const auto sum_sq = static_cast<__int128>(sample_sum_sq(pair));
  const __int128 num = n * sum_sq - sum * sum; // n(n-1) * sample variance
  if (num <= 0) return 0.0;
  return std::sqrt(static_cast<double>(num) /
                   (static_cast<double>(n_samples) *
                    static_cast<double>(n_samples - 1)));
}

EnsembleAccumulator run_ensemble(const BipartiteGraph& g,
                                 const EnsembleOptions& opts) {
  if (opts.n_samples < 1) {
    throw std::invalid_argument("run_ensemble: n_samples must be >= 1");
  }
  const std::uint64_t attempts = opts.attempts_per_sample > 0
                                     ? opts.attempts_per_sample
                                     : default_attempts(g);
  const unsigned chains = static_cast<unsigned>(std::min<std::size_t>(
      std::max(1u, opts.chains), opts.n_samples));

  EnsembleAccumulator acc;
  acc.outlets = g.right_ids;
  acc.n_samples = opts.n_samples;
  acc.master_seed = opts.master_seed;
  acc.swap_attempts_per_sample = attempts;
  acc.chain_count = chains;

  const std::size_t n_outlets = g.right_ids.size();
  const std::size_t n_pairs = n_outlets < 2 ? 0 : n_outlets * (n_outlets - 1) / 2;

  // Weight between two outlets can never exceed the smaller degree, and
  // degrees are preserved, so histograms can be sized up front.
  const auto right_deg = g.right_degrees();
  acc.hist.resize(n_pairs);
  for (std::size_t i = 0; i + 1 < n_outlets; ++i) {
    for (std::size_t j = i + 1; j < n_outlets; ++j) {
      const std::size_t bound = std::min(right_deg[i], right_deg[j]);
      acc.hist[Projection::pair_index(i, j, n_outlets)].assign(bound + 1, 0);
    }
  }

  // Contiguous sample ranges per logical chain. Every chain burns in from
  // the observed graph; per-sample RNG streams depend only on (seed, k), so
  // the accumulator is a pure function of the options.
  std::vector<EnsembleAccumulator> partial(chains);
  for (auto& p : partial) p.hist = acc.hist;

  parallel_for(chains, opts.threads, [&](std::size_t c) {
    const std::size_t lo = c * opts.n_samples / chains;
    const std::size_t hi = (c + 1) * opts.n_samples / chains;
    EdgeSwapChain chain(g);
    Rng burn_in(derive_seed(opts.master_seed, 0xB19B00F5ULL, c));
    chain.attempt_swaps(attempts, burn_in);
    std::vector<std::uint32_t> weights(n_pairs, 0);
    auto& hist = partial[c].hist;
    for (std::size_t k = lo; k < hi; ++k) {
      Rng rng(derive_seed(opts.master_seed, 0x5A3317EULL, k));
      chain.attempt_swaps(attempts, rng);
      if (chain.m() != g.m() || !chain.degrees_preserved()) {
        throw std::logic_error("run_ensemble: conservation violated");
      }
      chain.project_into(weights);
      for (std::size_t p = 0; p < n_pairs; ++p) ++hist[p][weights[p]];
    }
  });

  for (const auto& part : partial) {
    for (std::size_t p = 0; p < n_pairs; ++p) {
      for (std::size_t w = 0; w < acc.hist[p].size(); ++w) {
        acc.hist[p][w] += part.hist[p][w];
      }
    }
  }
  return acc;
}

std::vector<EdgeSignificance> edge_significance(
    const Projection& p, const EnsembleAccumulator& acc) {
  if (p.outlets != acc.outlets) {
    throw std::logic_error(
        "edge_significance: projection and ensemble cover different outlets");
  }
  const std::size_t n_outlets = p.outlets.size();
  std::vector<EdgeSignificance> out;
  out.reserve(acc.n_pairs());
  const auto n = static_cast<__int128>(acc.n_samples);

  for (std::size_t i = 0; i + 1 < n_outlets; ++i) {
    for (std::size_t j = i + 1; j < n_outlets; ++j) {
      const std::size_t pair = Projection::pair_index(i, j, n_outlets);
      if (pair >= acc.n_pairs()) {
        throw std::logic_error("edge_significance: pair missing from ensemble");
      }
      EdgeSignificance sig;
      sig.from = p.outlets[i];
      sig.to = p.outlets[j];
      sig.w_obs = p.weight(i, j);
      sig.n_samples = acc.n_samples;

      const std::uint64_t sum = acc.sample_sum(pair);
      const std::uint64_t sum_sq = acc.sample_sum_sq(pair);
      sig.null_mean = static_cast<double>(sum) / static_cast<double>(n);
      sig.null_std = acc.null_std(pair);
      // All-equal samples make the z undefined; detect exactly in integers.
      sig.degenerate =
          n < 2 || n * static_cast<__int128>(sum_sq) ==
                       static_cast<__int128>(sum) * static_cast<__int128>(sum);
      sig.z = sig.degenerate
                  ? std::numeric_limits<double>::quiet_NaN()
                  : (static_cast<double>(sig.w_obs) - sig.null_mean) /
                        sig.null_std;

      // Two-sided empirical tail with add-one correction, counted exactly:
      // |w - mean| >= |w_obs - mean|  <=>  |w*n - sum| >= |w_obs*n - sum|.
      const auto centered = [&](std::uint64_t w) {
        const __int128 d =
            static_cast<__int128>(w) * n - static_cast<__int128>(sum);
        return d < 0 ? -d : d;
      };
      const __int128 obs_dev = centered(sig.w_obs);
      std::uint64_t count = 0;
      const auto& h = acc.hist[pair];
      for (std::size_t w = 0; w < h.size(); ++w) {
        if (h[w] > 0 && centered(w) >= obs_dev) count += h[w];
      }
      sig.p_emp = static_cast<double>(count + 1) /
                  static_cast<double>(acc.n_samples + 1);
      out.push_back(std::move(sig));
    }
  }
  return out;
}

ValidatedNetwork filter_network(const std::vector<EdgeSignificance>& sigs,
                                double theta, KeepEdges keep) {
  if (!(theta > 0.0)) {
    throw std::invalid_argument("filter_network: theta must be > 0");
  }
  ValidatedNetwork net;
  net.threshold = theta;
  std::set<std::string> nodes;
  for (const auto& sig : sigs) {
    nodes.insert(sig.from);
    nodes.insert(sig.to);
    if (sig.degenerate) continue;
    const bool pos = sig.z > theta;
    const bool neg = sig.z < -theta;
    const bool take = (keep == KeepEdges::both && (pos || neg)) ||
                      (keep == KeepEdges::positive && pos) ||
                      (keep == KeepEdges::negative && neg);
    if (!take) continue;
    net.edges.push_back({sig.from, sig.to,
                         pos ? EdgeSign::positive : EdgeSign::negative, sig.z,
                         sig.w_obs});
  }
  net.nodes.assign(nodes.begin(), nodes.end());
  return net;
}

namespace {

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) {
    std::iota(parent_.begin(), parent_.end(), 0);
  }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void unite(std::size_t a, std::size_t b) { parent_[find(a)] = find(b); }

 private:
  std::vector<std::size_t> parent_;
};

} // namespace

Partition clusters(const ValidatedNetwork& v) {
  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < v.nodes.size(); ++i) index[v.nodes[i]] = i;

  UnionFind uf(v.nodes.size());
  for (const auto& e : v.edges) {
    if (e.sign == EdgeSign::positive) {
      uf.unite(index.at(e.from), index.at(e.to));
    }
  }

  // Components keyed by smallest member (nodes are sorted, so the first
  // node seen per root is the smallest); label in that order.
  std::map<std::size_t, std::vector<std::size_t>> components;
  for (std::size_t i = 0; i < v.nodes.size(); ++i) {
    components[uf.find(i)].push_back(i);
  }
  std::vector<std::size_t> roots;
  for (const auto& [root, members] : components) {
    roots.push_back(members.front());
  }
  std::sort(roots.begin(), roots.end());

  Partition part;
  std::size_t label = 0;
  for (const std::size_t first : roots) {
    ++label;
    const auto root = uf.find(first);
    for (const std::size_t member : components.at(root)) {
      part.group_of[v.nodes[member]] = "c" + std::to_string(label);
    }
  }
  return part;
}

WeightedGraph to_weighted_graph(const ValidatedNetwork& v) {
  WeightedGraph g;
  g.nodes = v.nodes;
  std::map<std::string, std::uint32_t> index;
  for (std::uint32_t i = 0; i < g.nodes.size(); ++i) index[g.nodes[i]] = i;
  for (const auto& e : v.edges) {
    if (e.sign != EdgeSign::positive) continue;
    auto i = index.at(e.from);
    auto j = index.at(e.to);
    if (i > j) std::swap(i, j);
    g.edges.emplace_back(i, j, static_cast<double>(e.w_obs));
  }
  std::sort(g.edges.begin(), g.edges.end());
  return g;
}

void write_significance_csv(std::ostream& out,
                            const std::vector<EdgeSignificance>& sigs) {
  const std::vector<std::string> header = {
      "from", "to", "shared", "w_obs", "null_mean", "null_std", "z", "p"};
  write_csv_row(out, header);
  for (const auto& sig : sigs) {
    const std::vector<std::string> row = {
        sig.from,
        sig.to,
        std::to_string(sig.w_obs),
        std::to_string(sig.w_obs),
        format_double(sig.null_mean),
        format_double(sig.null_std),
        format_double(sig.z),
        format_double(sig.p_emp)};
    write_csv_row(out, row);
  }
}

std::vector<EdgeSignificance> read_significance_csv(
    const std::filesystem::path& path) {
  CsvTable table = read_csv_file(path);
  const std::size_t col_from = table.require_column("from");
  const std::size_t col_to = table.require_column("to");
  const std::size_t col_shared = table.require_column("shared");
  const std::size_t col_mean = table.require_column("null_mean");
  const std::size_t col_std = table.require_column("null_std");
  const std::size_t col_z = table.require_column("z");
  const std::size_t col_p = table.require_column("p");

  std::vector<EdgeSignificance> sigs;
  sigs.reserve(table.rows.size());
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    EdgeSignificance sig;
    sig.from = row[col_from];
    sig.to = row[col_to];
    try {
      sig.w_obs = static_cast<std::uint32_t>(std::stoul(row[col_shared]));
      sig.null_mean = std::stod(row[col_mean]);
      sig.null_std = std::stod(row[col_std]);
      sig.z = std::stod(row[col_z]);
      sig.p_emp = std::stod(row[col_p]);
    } catch (const std::exception&) {
      throw DataError("significance CSV line " +
                      std::to_string(table.line_numbers[r]) +
                      ": malformed numeric field");
    }
    sig.degenerate = std::isnan(sig.z);
    sigs.push_back(std::move(sig));
  }
  return sigs;
}

void write_clusters_csv(std::ostream& out, const Partition& part) {
  const std::vector<std::string> header = {"outlet", "cluster"};
  write_csv_row(out, header);
  for (const auto& [node, group] : part.group_of) {
    const std::vector<std::string> row = {node, group};
    write_csv_row(out, row);
  }
}

Partition read_clusters_csv(const std::filesystem::path& path) {
  CsvTable table = read_csv_file(path);
  const std::size_t col_outlet = table.require_column("outlet");
  const std::size_t col_cluster = table.require_column("cluster");
  Partition part;
  for (const auto& row : table.rows) {
    part.group_of[row[col_outlet]] = row[col_cluster];
  }
  return part;
}

} // namespace coocnet
