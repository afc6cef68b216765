#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace coocnet {

/// Resolved run settings. Loaded from a JSON config file; a handful of CLI
/// flags can override fields afterwards. Relative paths in the file resolve
/// against the config file's directory.
struct RunConfig {
  std::filesystem::path articles;
  std::string format = "csv"; // csv | jsonl
  std::filesystem::path attributes;
  std::filesystem::path generic_phrases; // optional; built-in default list
  std::filesystem::path outlet_names;    // optional; defaults to corpus outlets
  std::filesystem::path honorifics;      // optional; built-in default list
  std::filesystem::path stopwords;       // optional; built-in default list
  std::filesystem::path lexicon;         // optional; style stage skipped if unset
  std::filesystem::path extra_features;  // optional doc_id,feature... CSV
  std::filesystem::path out_dir = "out";

  std::uint64_t seed = 1;
  unsigned min_outlets = 2;
  std::size_t n_samples = 10000;
  unsigned ensemble_chains = 8;
  double z_threshold = 1.96;
  std::vector<double> sweep_thresholds = {1.64, 1.96, 2.58, 3.29};
  unsigned topics = 20;
  std::vector<unsigned> topic_sweep;
  unsigned lda_iterations = 1000;
  double lda_alpha_total = 5.0;
  double lda_beta = 0.01;
  std::size_t n_keywords = 5;
  std::size_t n_rand = 1000;
  std::uint32_t min_term_docs = 10;
  std::uint32_t max_term_fraction_num = 1;
  std::uint32_t max_term_fraction_den = 3;
  unsigned threads = 1;
  std::string modularity_network = "backbone"; // backbone | projection
  std::string shuffle_unit = "article";        // article | outlet

  struct Classification {
    std::string name;
    std::string attr;
    std::string mode; // bin | ratio_bin | categorical | largest_group
  };
  std::vector<Classification> classifications; // empty = derive from columns

  /// Stable hash of the resolved settings, stamped into every output.
  std::string config_hash() const;
};

struct ConfigOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> n_samples;
  std::optional<double> z_threshold;
  std::optional<unsigned> topics;
  std::optional<std::size_t> n_rand;
  std::optional<unsigned> threads;
  std::optional<std::filesystem::path> out_dir;
};

RunConfig load_config(const std::filesystem::path& path,
                      const ConfigOverrides& overrides = {});

/// Validate the settings and make sure every referenced input exists.
void validate_config(const RunConfig& config);

void cmd_ingest(const RunConfig& config);
void cmd_network(const RunConfig& config);
void cmd_modularity(const RunConfig& config);
void cmd_content(const RunConfig& config);
void cmd_robustness(const RunConfig& config);
void cmd_all(const RunConfig& config);

} // namespace coocnet
