#include "coocnet/stats.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <ostream>
#include <unordered_set>

#include "coocnet/csv.hpp"
#include "coocnet/errors.hpp"
#include "coocnet/parallel.hpp"
#include "coocnet/rng.hpp"
#include "coocnet/text.hpp"

namespace coocnet {

void write_feature_matrix_csv(std::ostream& out, const FeatureMatrix& m,
                              int decimals) {
  std::vector<std::string> header;
  header.reserve(m.cols() + 1);
  header.push_back("doc_id");
  for (const auto& name : m.feature_names) header.push_back(name);
  write_csv_row(out, header);
  for (std::size_t d = 0; d < m.rows(); ++d) {
    std::vector<std::string> row;
    row.reserve(m.cols() + 1);
    row.push_back(m.doc_ids[d]);
    for (std::size_t f = 0; f < m.cols(); ++f) {
      row.push_back(format_double(m.at(d, f), decimals));
    }
    write_csv_row(out, row);
  }
}

namespace {

// Shared core: standardize the observed mean of a doc subset of fixed size
// against means of n_rand uniformly drawn subsets of the same size. The
// subset for replicate r depends only on (seed, r), so any thread schedule
// produces the same results; replicate rows are reduced in index order.
std::vector<ShuffleZResult> subset_mean_ztest(
    const FeatureMatrix& m, const std::vector<std::size_t>& observed_rows,
    const std::vector<std::vector<std::size_t>>& replicate_rows,
    unsigned threads) {
  const std::size_t F = m.cols();
  const std::size_t n_rand = replicate_rows.size();

  std::vector<double> obs_mean(F, 0.0);
  for (const std::size_t d : observed_rows) {
    for (std::size_t f = 0; f < F; ++f) obs_mean[f] += m.at(d, f);
  }
  for (auto& v : obs_mean) v /= static_cast<double>(observed_rows.size());

  std::vector<double> rep_means(n_rand * F, 0.0);
  parallel_for(n_rand, threads, [&](std::size_t r) {
    double* row = &rep_means[r * F];
    const auto& rows = replicate_rows[r];
    for (const std::size_t d : rows) {
      for (std::size_t f = 0; f < F; ++f) row[f] += m.at(d, f);
    }
    for (std::size_t f = 0; f < F; ++f) {
      row[f] /= static_cast<double>(rows.size());
    }
  });

  std::vector<double> null_mean(F, 0.0), null_m2(F, 0.0);
  for (std::size_t r = 0; r < n_rand; ++r) {
    for (std::size_t f = 0; f < F; ++f) null_mean[f] += rep_means[r * F + f];
  }
  for (auto& v : null_mean) v /= static_cast<double>(n_rand);
  for (std::size_t r = 0; r < n_rand; ++r) {
    for (std::size_t f = 0; f < F; ++f) {
      const double d = rep_means[r * F + f] - null_mean[f];
      null_m2[f] += d * d;
    }
  }

  std::vector<ShuffleZResult> out(F);
  for (std::size_t f = 0; f < F; ++f) {
    ShuffleZResult& res = out[f];
    res.feature = m.feature_names[f];
    res.obs_mean = obs_mean[f];
    res.null_mean = null_mean[f];
    res.null_std = std::sqrt(null_m2[f] / static_cast<double>(n_rand - 1));
    res.degenerate = res.null_std == 0.0;
    res.z = res.degenerate
                ? std::numeric_limits<double>::quiet_NaN()
                : (res.obs_mean - res.null_mean) / res.null_std;
  }
  return out;
}

} // namespace

std::vector<ShuffleZResult> shuffle_ztest(const FeatureMatrix& m,
                                          const GroupLabeling& labels,
                                          const std::string& group,
                                          std::size_t n_rand,
                                          std::uint64_t seed,
                                          unsigned threads) {
  if (n_rand < 2) {
    throw std::invalid_argument("shuffle_ztest: n_rand must be >= 2");
  }
  std::vector<std::size_t> observed;
  for (std::size_t d = 0; d < m.rows(); ++d) {
    const auto it = labels.label_of.find(m.doc_ids[d]);
    if (it == labels.label_of.end()) {
      throw DataError("shuffle_ztest: doc '" + m.doc_ids[d] + "' is unlabeled");
    }
    if (it->second == group) observed.push_back(d);
  }
  if (observed.empty()) {
    throw std::invalid_argument("shuffle_ztest: group '" + group +
                                "' has no documents");
  }
  // A group covering every doc is permitted; permutations then have nothing
  // to move, so every feature comes back flagged degenerate.

  // A uniform permutation of labels puts `group` on a uniform g-subset of
  // docs, so each replicate draws a subset of the group's size directly.
  const std::size_t g = observed.size();
  std::vector<std::vector<std::size_t>> replicates(n_rand);
  parallel_for(n_rand, threads, [&](std::size_t r) {
    Rng rng(derive_seed(seed, 0x5F0FF1EULL, r));
    std::vector<std::size_t> order(m.rows());
    std::iota(order.begin(), order.end(), 0);
    rng.partial_shuffle(order, g);
    order.resize(g);
    replicates[r] = std::move(order);
  });

  return subset_mean_ztest(m, observed, replicates, threads);
}

std::vector<ShuffleZResult> block_shuffle_ztest(
    const FeatureMatrix& m,
    const std::map<std::string, std::string>& doc_block,
    const std::map<std::string, std::string>& block_label,
    const std::string& group, std::size_t n_rand, std::uint64_t seed,
    unsigned threads) {
  if (n_rand < 2) {
    throw std::invalid_argument("block_shuffle_ztest: n_rand must be >= 2");
  }
  std::map<std::string, std::vector<std::size_t>> docs_of;
  for (std::size_t d = 0; d < m.rows(); ++d) {
    const auto it = doc_block.find(m.doc_ids[d]);
    if (it == doc_block.end()) {
      throw DataError("block_shuffle_ztest: doc '" + m.doc_ids[d] +
                      "' has no block");
    }
    docs_of[it->second].push_back(d);
  }

  std::vector<const std::vector<std::size_t>*> blocks;
  std::size_t n_group_blocks = 0;
  std::set<std::string> distinct;
  std::vector<std::size_t> observed;
  for (const auto& [block, docs] : docs_of) {
    const auto it = block_label.find(block);
    if (it == block_label.end()) {
      throw DataError("block_shuffle_ztest: block '" + block +
                      "' is unlabeled");
    }
    distinct.insert(it->second);
    blocks.push_back(&docs);
    if (it->second == group) {
      ++n_group_blocks;
      observed.insert(observed.end(), docs.begin(), docs.end());
    }
  }
  if (observed.empty()) {
    throw std::invalid_argument("block_shuffle_ztest: group '" + group +
                                "' has no documents");
  }
  if (distinct.size() < 2) {
    throw std::invalid_argument(
        "block_shuffle_ztest: need at least two nonempty groups");
  }

  std::vector<std::vector<std::size_t>> replicates(n_rand);
  parallel_for(n_rand, threads, [&](std::size_t r) {
    Rng rng(derive_seed(seed, 0xB10C4E57ULL, r));
    std::vector<std::size_t> order(blocks.size());
    std::iota(order.begin(), order.end(), 0);
    rng.partial_shuffle(order, n_group_blocks);
    std::vector<std::size_t> docs;
    for (std::size_t i = 0; i < n_group_blocks; ++i) {
      const auto& block = *blocks[order[i]];
      docs.insert(docs.end(), block.begin(), block.end());
    }
    replicates[r] = std::move(docs);
  });

  return subset_mean_ztest(m, observed, replicates, threads);
}

std::map<std::string, PuristLabel> purist_transition_labels(
    const std::map<std::string, std::set<std::string>>& contributor_outlets,
    const Partition& outlet_clusters) {
  std::map<std::string, PuristLabel> out;
  for (const auto& [contributor, outlets] : contributor_outlets) {
    if (outlets.empty()) {
      throw std::invalid_argument("purist_transition_labels: contributor '" +
                                  contributor + "' has no outlets");
    }
    std::set<std::string> clusters_seen;
    for (const auto& outlet : outlets) {
      const auto it = outlet_clusters.group_of.find(outlet);
      if (it == outlet_clusters.group_of.end()) {
        throw DataError("purist_transition_labels: outlet '" + outlet +
                        "' is not in any cluster");
      }
      clusters_seen.insert(it->second);
    }
    PuristLabel label;
    label.purist = clusters_seen.size() == 1;
    if (label.purist) label.cluster = *clusters_seen.begin();
    out[contributor] = label;
  }
  return out;
}

std::vector<ShuffleZResult> within_cluster_ztest(
    const FeatureMatrix& m,
    const std::map<std::string, std::string>& doc_contributor,
    const std::map<std::string, PuristLabel>& labels,
    const std::string& cluster, std::size_t n_rand, std::uint64_t seed,
    unsigned threads) {
  if (n_rand < 2) {
    throw std::invalid_argument("within_cluster_ztest: n_rand must be >= 2");
  }

  // Docs grouped by contributor; contributors split purist/transitioning.
  std::map<std::string, std::vector<std::size_t>> docs_of;
  for (std::size_t d = 0; d < m.rows(); ++d) {
    const auto it = doc_contributor.find(m.doc_ids[d]);
    if (it == doc_contributor.end()) {
      throw DataError("within_cluster_ztest: doc '" + m.doc_ids[d] +
                      "' has no contributor");
    }
    docs_of[it->second].push_back(d);
  }

  std::vector<const std::vector<std::size_t>*> contributor_docs;
  std::vector<bool> transitioning;
  std::size_t n_trans = 0, n_purist = 0;
  for (const auto& [contributor, docs] : docs_of) {
    const auto it = labels.find(contributor);
    if (it == labels.end()) {
      throw DataError("within_cluster_ztest: contributor '" + contributor +
                      "' is unlabeled");
    }
    if (it->second.purist && it->second.cluster != cluster) {
      throw DataError("within_cluster_ztest: purist of another cluster ('" +
                      contributor + "') has documents here");
    }
    contributor_docs.push_back(&docs);
    transitioning.push_back(!it->second.purist);
    if (it->second.purist) {
      ++n_purist;
    } else {
      ++n_trans;
    }
  }
  if (n_trans < 2 || n_purist < 2) {
    throw std::invalid_argument(
        "within_cluster_ztest: need at least 2 purist and 2 transitioning "
        "contributors (have " +
        std::to_string(n_purist) + "/" + std::to_string(n_trans) + ")");
  }

  std::vector<std::size_t> observed;
  for (std::size_t c = 0; c < contributor_docs.size(); ++c) {
    if (transitioning[c]) {
      observed.insert(observed.end(), contributor_docs[c]->begin(),
                      contributor_docs[c]->end());
    }
  }

  // Shuffle the purist/transitioning labels across contributors; each
  // contributor's docs move together.
  const std::size_t n_contributors = contributor_docs.size();
  std::vector<std::vector<std::size_t>> replicates(n_rand);
  parallel_for(n_rand, threads, [&](std::size_t r) {
    Rng rng(derive_seed(seed, 0xC0B10C5ULL, r));
    std::vector<std::size_t> order(n_contributors);
    std::iota(order.begin(), order.end(), 0);
    rng.partial_shuffle(order, n_trans);
    std::vector<std::size_t> docs;
    for (std::size_t i = 0; i < n_trans; ++i) {
      const auto& block = *contributor_docs[order[i]];
      docs.insert(docs.end(), block.begin(), block.end());
    }
    replicates[r] = std::move(docs);
  });

  return subset_mean_ztest(m, observed, replicates, threads);
}

Lexicon read_lexicon(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open lexicon file: " + path.string());

  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }

  // Sniff: a comma in the first meaningful line means two-column CSV.
  bool is_csv = false;
  for (const auto& l : lines) {
    const auto start = l.find_first_not_of(" \t");
    if (start == std::string::npos || l[start] == '#') continue;
    is_csv = l.find(',') != std::string::npos;
    break;
  }

  std::map<std::string, std::vector<std::string>> patterns_of;
  std::vector<std::string> category_order;
  const auto add_pattern = [&](const std::string& category,
                               const std::string& pattern) {
    if (!patterns_of.contains(category)) category_order.push_back(category);
    patterns_of[category].push_back(pattern);
  };

  if (is_csv) {
    CsvTable table = read_csv_file(path);
    const std::size_t col_cat = table.require_column("category");
    const std::size_t col_pat = table.require_column("pattern");
    for (const auto& row : table.rows) add_pattern(row[col_cat], row[col_pat]);
  } else {
    std::string current;
    for (const auto& l : lines) {
      const auto start = l.find_first_not_of(" \t");
      if (start == std::string::npos) continue;
      const auto end = l.find_last_not_of(" \t");
      const std::string entry = l.substr(start, end - start + 1);
      if (entry[0] == '#') continue;
      if (start == 0) {
        current = entry;
        if (!patterns_of.contains(current)) {
          patterns_of[current];
          category_order.push_back(current);
        }
      } else {
        if (current.empty()) {
          throw DataError("lexicon file: pattern before any category header");
        }
        add_pattern(current, entry);
      }
    }
  }

  Lexicon lex;
  for (const auto& name : category_order) {
    Lexicon::Category cat;
    cat.name = name;
    for (const auto& pattern : patterns_of[name]) {
      if (!pattern.empty() && pattern.back() == '*') {
        cat.prefixes.push_back(pattern.substr(0, pattern.size() - 1));
      } else {
        cat.literals.push_back(pattern);
      }
    }
    lex.categories.push_back(std::move(cat));
  }
  if (lex.categories.empty()) {
    throw std::invalid_argument("lexicon file has no categories: " +
                                path.string());
  }
  return lex;
}

LexiconScore lexicon_score(std::string_view text, const Lexicon& lex) {
  if (lex.categories.empty()) {
    throw std::invalid_argument("lexicon_score: empty lexicon");
  }
  const std::vector<std::string> tokens = tokenize(text);

  LexiconScore score;
  score.zero_tokens = tokens.empty();
  for (const auto& cat : lex.categories) score.by_category[cat.name] = 0.0;
  if (tokens.empty()) return score;

  for (const auto& cat : lex.categories) {
    const std::unordered_set<std::string> literals(cat.literals.begin(),
                                                   cat.literals.end());
    std::size_t matches = 0;
    for (const auto& tok : tokens) {
      bool hit = literals.contains(tok);
      for (std::size_t i = 0; !hit && i < cat.prefixes.size(); ++i) {
        hit = tok.starts_with(cat.prefixes[i]);
      }
      if (hit) ++matches;
    }
    score.by_category[cat.name] =
        100.0 * static_cast<double>(matches) / static_cast<double>(tokens.size());
  }
  return score;
}

namespace {

struct RankData {
  double rank_sum_x = 0.0;        // midranks of x in the combined sample
  std::vector<std::size_t> ties;  // tied-group sizes > 1
};

RankData midranks(std::span<const double> x, std::span<const double> y) {
  std::vector<std::pair<double, int>> all;
  all.reserve(x.size() + y.size());
  for (const double v : x) all.emplace_back(v, 0);
  for (const double v : y) all.emplace_back(v, 1);
  std::sort(all.begin(), all.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  RankData out;
  std::size_t i = 0;
  while (i < all.size()) {
    std::size_t j = i;
    while (j < all.size() && all[j].first == all[i].first) ++j;
    const double rank = static_cast<double>(i + j + 1) / 2.0; // 1-based mid
    for (std::size_t k = i; k < j; ++k) {
      if (all[k].second == 0) out.rank_sum_x += rank;
    }
    if (j - i > 1) out.ties.push_back(j - i);
    i = j;
  }
  return out;
}

// Exact permutation distribution of 2U over all splits of the combined
// values, conditional on ties. DP over tied blocks; counts are sums of
// binomial products and stay below 2^53 for the sizes this path accepts.
double exact_two_sided_p(std::span<const double> x, std::span<const double> y,
                         double u_obs) {
  const std::size_t n1 = x.size(), n2 = y.size();
  std::vector<double> all(x.begin(), x.end());
  all.insert(all.end(), y.begin(), y.end());
  std::sort(all.begin(), all.end());

  std::vector<std::size_t> blocks;
  std::size_t i = 0;
  while (i < all.size()) {
    std::size_t j = i;
    while (j < all.size() && all[j] == all[i]) ++j;
    blocks.push_back(j - i);
    i = j;
  }

  const std::size_t max_u2 = 2 * n1 * n2;
  // dp[x_used][u2] = number of ways
  std::vector<std::vector<double>> dp(
      n1 + 1, std::vector<double>(max_u2 + 1, 0.0));
  dp[0][0] = 1.0;

  // Binomial table up to the largest block.
  std::size_t max_block = 0;
  for (const auto b : blocks) max_block = std::max(max_block, b);
  std::vector<std::vector<double>> choose(max_block + 1);
  for (std::size_t nn = 0; nn <= max_block; ++nn) {
    choose[nn].assign(nn + 1, 1.0);
    for (std::size_t kk = 1; kk < nn; ++kk) {
      choose[nn][kk] = choose[nn - 1][kk - 1] + choose[nn - 1][kk];
    }
  }

  std::size_t placed = 0;
  for (const std::size_t t : blocks) {
    std::vector<std::vector<double>> next(
        n1 + 1, std::vector<double>(max_u2 + 1, 0.0));
    for (std::size_t used = 0; used <= std::min(placed, n1); ++used) {
      const std::size_t y_before = placed - used;
      if (y_before > n2) continue; // cannot complete to exactly n2 y's
      for (std::size_t u2 = 0; u2 <= max_u2; ++u2) {
        const double ways = dp[used][u2];
        if (ways == 0.0) continue;
        const std::size_t s_max = std::min(t, n1 - used);
        // keep the y side within n2 as well
        const std::size_t s_min =
            placed + t > used + n2 ? placed + t - used - n2 : 0;
        for (std::size_t s = s_min; s <= s_max; ++s) {
          // s block members to x: beats every earlier y, ties within block
          const std::size_t add = 2 * s * y_before + s * (t - s);
          next[used + s][u2 + add] += ways * choose[t][s];
        }
      }
    }
    dp = std::move(next);
    placed += t;
  }

  const double mean_u2 = static_cast<double>(n1 * n2);
  const auto obs_u2 = static_cast<long long>(std::llround(2.0 * u_obs));
  const auto obs_dev = std::llabs(obs_u2 - static_cast<long long>(n1 * n2));

  double extreme = 0.0, total = 0.0;
  for (std::size_t u2 = 0; u2 <= max_u2; ++u2) {
    const double ways = dp[n1][u2];
    if (ways == 0.0) continue;
    total += ways;
    const auto dev =
        std::llabs(static_cast<long long>(u2) -
                   static_cast<long long>(std::llround(mean_u2)));
    if (dev >= obs_dev) extreme += ways;
  }
  return extreme / total;
}

double normal_two_sided_p(double u, std::size_t n1, std::size_t n2,
                          const std::vector<std::size_t>& ties) {
  const double nn1 = static_cast<double>(n1), nn2 = static_cast<double>(n2);
  const double n = nn1 + nn2;
  double tie_term = 0.0;
  for (const std::size_t t : ties) {
    const double tt = static_cast<double>(t);
    tie_term += tt * tt * tt - tt;
  }
  const double variance =
      nn1 * nn2 / 12.0 * ((n + 1.0) - tie_term / (n * (n - 1.0)));
  if (variance <= 0.0) return 1.0;
  const double mean = nn1 * nn2 / 2.0;
  const double dev = std::max(0.0, std::fabs(u - mean) - 0.5); // continuity
  const double z = dev / std::sqrt(variance);
  return std::min(1.0, std::erfc(z / std::sqrt(2.0)));
}

} // namespace

MannWhitneyResult mann_whitney(std::span<const double> x,
                               std::span<const double> y) {
  if (x.empty() || y.empty()) {
    throw std::invalid_argument("mann_whitney: both samples must be nonempty");
  }
  const std::size_t n1 = x.size(), n2 = y.size();
  const RankData ranks = midranks(x, y);
  const double u =
      ranks.rank_sum_x - static_cast<double>(n1) * (n1 + 1) / 2.0;

  MannWhitneyResult result;
  result.u = u;
  if (n1 * n2 <= 400) {
    result.exact = true;
    result.p_two_sided = exact_two_sided_p(x, y, u);
  } else {
    result.exact = false;
    result.p_two_sided = normal_two_sided_p(u, n1, n2, ranks.ties);
  }
  return result;
}

double auc_from_u(double u, std::size_t n1, std::size_t n2) {
  if (n1 < 1 || n2 < 1) {
    throw std::invalid_argument("auc_from_u: sample sizes must be >= 1");
  }
  return u / (static_cast<double>(n1) * static_cast<double>(n2));
}

std::vector<double> bonferroni(std::span<const double> pvals,
                               std::size_t m_tests) {
  if (m_tests < pvals.size()) {
    throw std::invalid_argument("bonferroni: m_tests < number of p-values");
  }
  std::vector<double> out;
  out.reserve(pvals.size());
  for (const double p : pvals) {
    out.push_back(std::min(1.0, p * static_cast<double>(m_tests)));
  }
  return out;
}

} // namespace coocnet
