#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "coocnet/csv.hpp"
#include "coocnet/errors.hpp"
#include "coocnet/null_model.hpp"
#include "coocnet/pipeline.hpp"

using namespace coocnet;
namespace fs = std::filesystem;

namespace {

const fs::path kExampleConfig =
    fs::path(COOCNET_SOURCE_DIR) / "data" / "example" / "config.json";

RunConfig small_config(const fs::path& out_dir) {
  ConfigOverrides overrides;
  overrides.out_dir = out_dir;
  overrides.n_samples = 200;
  overrides.n_rand = 100;
  overrides.threads = 2;
  RunConfig config = load_config(kExampleConfig, overrides);
  config.lda_iterations = 30;
  return config;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE_MESSAGE(bool(in), "missing file: ", path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

} // namespace

TEST_SUITE_BEGIN("pipeline");

TEST_CASE("config loading, overrides and validation") {
  const RunConfig config = load_config(kExampleConfig);
  CHECK(config.seed == 20260810);
  CHECK(config.topics == 4);
  CHECK(config.z_threshold == 1.96);
  CHECK(config.classifications.size() == 9);
  validate_config(config);

  SUBCASE("flags override config fields") {
    ConfigOverrides overrides;
    overrides.seed = 42;
    overrides.z_threshold = 2.58;
    const RunConfig patched = load_config(kExampleConfig, overrides);
    CHECK(patched.seed == 42);
    CHECK(patched.z_threshold == 2.58);
  }
  SUBCASE("threads and out_dir stay out of the config hash") {
    ConfigOverrides overrides;
    overrides.threads = 8;
    overrides.out_dir = "elsewhere";
    const RunConfig patched = load_config(kExampleConfig, overrides);
    CHECK(patched.config_hash() == config.config_hash());
  }
  SUBCASE("seed changes the config hash") {
    ConfigOverrides overrides;
    overrides.seed = 4242;
    const RunConfig patched = load_config(kExampleConfig, overrides);
    CHECK(patched.config_hash() != config.config_hash());
  }
  SUBCASE("missing input file fails validation") {
    RunConfig broken = config;
    broken.articles = "no_such_file.csv";
    CHECK_THROWS_AS(validate_config(broken), ConfigError);
  }
  SUBCASE("missing config file is a config error") {
    CHECK_THROWS_AS(load_config("no_such_config.json"), ConfigError);
  }
  SUBCASE("bad settings fail validation") {
    RunConfig broken = config;
    broken.z_threshold = -1.0;
    CHECK_THROWS_AS(validate_config(broken), ConfigError);
  }
}

TEST_CASE("stages run end to end on the example corpus") {
  const fs::path out_dir = fs::temp_directory_path() / "coocnet_stage_test";
  fs::remove_all(out_dir);
  const RunConfig config = small_config(out_dir);

  cmd_ingest(config);
  CHECK(fs::exists(out_dir / "articles_clean.csv"));
  CHECK(fs::exists(out_dir / "contributor_stats.csv"));

  // messy bylines are gone and the single-outlet writer was dropped
  const CsvTable articles = read_csv_file(out_dir / "articles_clean.csv");
  const std::size_t byline_col = articles.require_column("byline");
  const std::size_t contributor_col = articles.require_column("contributor_id");
  for (const auto& row : articles.rows) {
    CHECK(row[byline_col] != "The Associated Press");
    CHECK(row[byline_col] != "Anonymous");
    CHECK(row[contributor_col] != "solo writer");
    CHECK_FALSE(row[contributor_col].empty());
  }

  cmd_network(config);
  CHECK(fs::exists(out_dir / "significance.csv"));
  CHECK(fs::exists(out_dir / "backbone.graphml"));
  CHECK(fs::exists(out_dir / "backbone.dot"));
  CHECK(fs::exists(out_dir / "projection.graphml"));

  // C(8,2) significance rows, schema round-trip
  const auto sigs = read_significance_csv(out_dir / "significance.csv");
  CHECK(sigs.size() == 28);
  const Partition parts = read_clusters_csv(out_dir / "clusters.csv");
  CHECK(parts.group_of.size() == 8);

  cmd_modularity(config);
  const CsvTable ranking = read_csv_file(out_dir / "modularity_ranking.csv");
  CHECK(ranking.rows.size() == config.classifications.size());
  // the planted lean classification must rank first on this corpus
  CHECK(ranking.rows[0][ranking.require_column("classification")] ==
        "political_lean");

  cmd_content(config);
  CHECK(fs::exists(out_dir / "doc_topics.csv"));
  CHECK(fs::exists(out_dir / "topic_keywords.csv"));
  CHECK(fs::exists(out_dir / "topic_z.csv"));
  CHECK(fs::exists(out_dir / "style_features.csv"));
  CHECK(fs::exists(out_dir / "lexicon_scores.csv"));

  const CsvTable topic_z = read_csv_file(out_dir / "topic_z.csv");
  CHECK(topic_z.rows.size() == 4); // one row per topic
  CHECK(topic_z.column("z_c1").has_value());
  CHECK(topic_z.column("z_c2").has_value());
  CHECK(topic_z.column("z_trans_c1").has_value());

  const CsvTable style = read_csv_file(out_dir / "style_features.csv");
  CHECK(style.column("u").has_value());
  CHECK(style.column("auc").has_value());
  CHECK(style.column("p_bonferroni").has_value());
  // lexicon categories plus the two extra feature columns
  CHECK(style.rows.size() == 6);

  cmd_robustness(config);
  CHECK(fs::exists(out_dir / "threshold_sweep.json"));
  CHECK(fs::exists(out_dir / "ablation.json"));
  const std::string sweep = slurp(out_dir / "threshold_sweep.json");
  CHECK(sweep.find("\"nested\": true") != std::string::npos);

  fs::remove_all(out_dir);
}

TEST_CASE("outputs start with the metadata header") {
  const fs::path out_dir = fs::temp_directory_path() / "coocnet_meta_test";
  fs::remove_all(out_dir);
  RunConfig config = small_config(out_dir);
  cmd_ingest(config);

  const std::string contents = slurp(out_dir / "articles_clean.csv");
  CHECK(contents.rfind("# tool: coocnet", 0) == 0);
  CHECK(contents.find("# config: " + config.config_hash()) != std::string::npos);
  CHECK(contents.find("# seed: " + std::to_string(config.seed)) !=
        std::string::npos);
  fs::remove_all(out_dir);
}

TEST_CASE("network stage refuses to run before ingest") {
  const fs::path out_dir = fs::temp_directory_path() / "coocnet_order_test";
  fs::remove_all(out_dir);
  const RunConfig config = small_config(out_dir);
  CHECK_THROWS_AS(cmd_network(config), ConfigError);
  fs::remove_all(out_dir);
}

TEST_CASE("unknown classification attribute is a config error") {
  const fs::path out_dir = fs::temp_directory_path() / "coocnet_attr_test";
  fs::remove_all(out_dir);
  RunConfig config = small_config(out_dir);
  cmd_ingest(config);
  cmd_network(config);
  config.classifications = {{"bogus", "no_such_column", "bin"}};
  CHECK_THROWS_AS(cmd_modularity(config), ConfigError);
  fs::remove_all(out_dir);
}

TEST_SUITE_END();
