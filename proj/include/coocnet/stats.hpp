#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "coocnet/feature_matrix.hpp"
#include "coocnet/partition.hpp"

namespace coocnet {

/// doc id -> group label.
struct GroupLabeling {
  std::map<std::string, std::string> label_of;
};

struct ShuffleZResult {
  std::string feature;
  double z = 0.0; // NaN when degenerate
  bool degenerate = false;
  double obs_mean = 0.0;
  double null_mean = 0.0;
  double null_std = 0.0;
};

/// Label-shuffle Z-test: observed per-feature mean over the docs carrying
/// `group`, standardized against n_rand label permutations (label counts
/// preserved). Deterministic given the seed; thread count never changes
/// the result.
std::vector<ShuffleZResult> shuffle_ztest(const FeatureMatrix& m,
                                          const GroupLabeling& labels,
                                          const std::string& group,
                                          std::size_t n_rand = 1000,
                                          std::uint64_t seed = 0,
                                          unsigned threads = 1);

/// Block-shuffle variant: docs sharing a block move together when labels are
/// permuted across blocks (block label counts preserved). Used for shuffling
/// at the outlet level instead of the article level.
std::vector<ShuffleZResult> block_shuffle_ztest(
    const FeatureMatrix& m,
    const std::map<std::string, std::string>& doc_block,
    const std::map<std::string, std::string>& block_label,
    const std::string& group, std::size_t n_rand = 1000,
    std::uint64_t seed = 0, unsigned threads = 1);

struct PuristLabel {
  bool purist = false;
  std::string cluster; // home cluster when purist
};

/// A contributor is a purist of cluster c iff all their outlets lie in c;
/// otherwise transitioning. Contributors with no outlets are an error.
std::map<std::string, PuristLabel> purist_transition_labels(
    const std::map<std::string, std::set<std::string>>& contributor_outlets,
    const Partition& outlet_clusters);

/// Purist-vs-transitioning Z-test over docs published inside one cluster.
/// Shuffling happens at the contributor level: a contributor's docs move
/// together. The observed group is the transitioning side, so positive z
/// means over-represented among transitioning contributors. Requires at
/// least two contributors of each kind among the given docs.
std::vector<ShuffleZResult> within_cluster_ztest(
    const FeatureMatrix& m,
    const std::map<std::string, std::string>& doc_contributor,
    const std::map<std::string, PuristLabel>& labels,
    const std::string& cluster, std::size_t n_rand = 1000,
    std::uint64_t seed = 0, unsigned threads = 1);

/// Word/prefix dictionary: category -> patterns, trailing '*' marking a
/// prefix pattern. Patterns are lowercase.
struct Lexicon {
  struct Category {
    std::string name;
    std::vector<std::string> literals;
    std::vector<std::string> prefixes; // stored without the '*'
  };
  std::vector<Category> categories;
};

/// Category header lines with indented patterns, or a two-column CSV
/// (category, pattern).
Lexicon read_lexicon(const std::filesystem::path& path);

struct LexiconScore {
  std::map<std::string, double> by_category; // percent of tokens matched
  bool zero_tokens = false;
};

/// Percent of tokens matching each category (a token can score in several).
/// Tokenization follows the text pipeline, without stemming.
LexiconScore lexicon_score(std::string_view text, const Lexicon& lex);

struct MannWhitneyResult {
  double u = 0.0;          // pairs where x wins, ties counting half
  double p_two_sided = 1.0;
  bool exact = false;      // exact enumeration vs normal approximation
};

/// U = sum over pairs [x_i > y_j] + 0.5 [x_i == y_j]. Exact permutation p
/// when |x|*|y| <= 400, else normal approximation with midrank tie
/// correction and continuity correction.
MannWhitneyResult mann_whitney(std::span<const double> x,
                               std::span<const double> y);

/// AUC = U / (n1 * n2).
double auc_from_u(double u, std::size_t n1, std::size_t n2);

/// min(p * m_tests, 1), order preserving; m_tests >= |pvals| required.
std::vector<double> bonferroni(std::span<const double> pvals,
                               std::size_t m_tests);

} // namespace coocnet
