#include "coocnet/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <unordered_set>

#include <json.hpp>

#include "coocnet/csv.hpp"
#include "coocnet/errors.hpp"
#include "coocnet/exporters.hpp"
#include "coocnet/graph.hpp"
#include "coocnet/ingest.hpp"
#include "coocnet/lda.hpp"
#include "coocnet/null_model.hpp"
#include "coocnet/parallel.hpp"
#include "coocnet/partition.hpp"
#include "coocnet/rng.hpp"
#include "coocnet/robustness.hpp"
#include "coocnet/stats.hpp"
#include "coocnet/text.hpp"
#include "coocnet/version.hpp"

namespace coocnet {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Seed stream tags, one per consumer.
constexpr std::uint64_t kTagLda = 0x1DA;
constexpr std::uint64_t kTagClusterZ = 0xC1;
constexpr std::uint64_t kTagPuristZ = 0xF0;

const std::vector<std::string> kDefaultGenericPhrases = {
    "anonymous",     "admin",          "correspondent", "editor",
    "editors",       "editorial board", "guest",         "guest contributor",
    "newsroom",      "opinion",        "press release", "staff",
    "staff reports", "the editors",    "wire reports"};

const std::vector<std::string> kDefaultHonorifics = {
    "dr", "mr", "mrs", "ms", "prof", "sen", "rep", "gov", "rev", "hon", "sir"};

const char* const kDefaultStopwords[] = {
    "i",       "me",      "my",       "myself",  "we",       "our",
    "ours",    "ourselves", "you",    "your",    "yours",    "yourself",
    "yourselves", "he",   "him",      "his",     "himself",  "she",
    "her",     "hers",    "herself",  "it",      "its",      "itself",
    "they",    "them",    "their",    "theirs",  "themselves", "what",
    "which",   "who",     "whom",     "this",    "that",     "these",
    "those",   "am",      "is",       "are",     "was",      "were",
    "be",      "been",    "being",    "have",    "has",      "had",
    "having",  "do",      "does",     "did",     "doing",    "would",
    "should",  "could",   "ought",    "i'm",     "you're",   "he's",
    "she's",   "it's",    "we're",    "they're", "i've",     "you've",
    "we've",   "they've", "i'd",      "you'd",   "he'd",     "she'd",
    "we'd",    "they'd",  "i'll",     "you'll",  "he'll",    "she'll",
    "we'll",   "they'll", "isn't",    "aren't",  "wasn't",   "weren't",
    "hasn't",  "haven't", "hadn't",   "doesn't", "don't",    "didn't",
    "won't",   "wouldn't", "shan't",  "shouldn't", "can't",  "cannot",
    "couldn't", "mustn't", "let's",   "that's",  "who's",    "what's",
    "here's",  "there's", "when's",   "where's", "why's",    "how's",
    "a",       "an",      "the",      "and",     "but",      "if",
    "or",      "because", "as",       "until",   "while",    "of",
    "at",      "by",      "for",      "with",    "about",    "against",
    "between", "into",    "through",  "during",  "before",   "after",
    "above",   "below",   "to",       "from",    "up",       "down",
    "in",      "out",     "on",       "off",     "over",     "under",
    "again",   "further", "then",     "once",    "here",     "there",
    "when",    "where",   "why",      "how",     "all",      "any",
    "both",    "each",    "few",      "more",    "most",     "other",
    "some",    "such",    "no",       "nor",     "not",      "only",
    "own",     "same",    "so",       "than",    "too",      "very"};

std::uint64_t fnv1a(std::string_view data) {
  std::uint64_t h = 1469598103934665603ULL;
  for (const unsigned char c : data) {
    h = (h ^ c) * 1099511628211ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

} // namespace

std::string RunConfig::config_hash() const {
  // threads and out_dir only affect scheduling and placement, never results,
  // so they stay out of the hash.
  json j;
  j["articles"] = articles.generic_string();
  j["format"] = format;
  j["attributes"] = attributes.generic_string();
  j["generic_phrases"] = generic_phrases.generic_string();
  j["outlet_names"] = outlet_names.generic_string();
  j["honorifics"] = honorifics.generic_string();
  j["stopwords"] = stopwords.generic_string();
  j["lexicon"] = lexicon.generic_string();
  j["extra_features"] = extra_features.generic_string();
  j["seed"] = seed;
  j["min_outlets"] = min_outlets;
  j["n_samples"] = n_samples;
  j["ensemble_chains"] = ensemble_chains;
  j["z_threshold"] = z_threshold;
  j["sweep_thresholds"] = sweep_thresholds;
  j["topics"] = topics;
  j["topic_sweep"] = topic_sweep;
  j["lda_iterations"] = lda_iterations;
  j["lda_alpha_total"] = lda_alpha_total;
  j["lda_beta"] = lda_beta;
  j["n_keywords"] = n_keywords;
  j["n_rand"] = n_rand;
  j["min_term_docs"] = min_term_docs;
  j["max_term_fraction"] = {max_term_fraction_num, max_term_fraction_den};
  j["modularity_network"] = modularity_network;
  j["shuffle_unit"] = shuffle_unit;
  json cls = json::array();
  for (const auto& c : classifications) {
    cls.push_back({{"name", c.name}, {"attr", c.attr}, {"mode", c.mode}});
  }
  j["classifications"] = cls;
  return hex64(fnv1a(j.dump()));
}

RunConfig load_config(const fs::path& path, const ConfigOverrides& overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path.string());
  json j;
  try {
    j = json::parse(in, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::exception& e) {
    throw ConfigError("config " + path.string() + ": " + e.what());
  }

  RunConfig config;
  const fs::path base = path.parent_path();
  const auto resolve = [&](const std::string& p) -> fs::path {
    if (p.empty()) return {};
    const fs::path candidate(p);
    return candidate.is_absolute() ? candidate : base / candidate;
  };

  try {
    const auto get_path = [&](const char* key, fs::path& field) {
      if (j.contains(key)) field = resolve(j.at(key).get<std::string>());
    };
    get_path("articles", config.articles);
    if (j.contains("format")) config.format = j.at("format").get<std::string>();
    get_path("attributes", config.attributes);
    get_path("generic_phrases", config.generic_phrases);
    get_path("outlet_names", config.outlet_names);
    get_path("honorifics", config.honorifics);
    get_path("stopwords", config.stopwords);
    get_path("lexicon", config.lexicon);
    get_path("extra_features", config.extra_features);
    get_path("out_dir", config.out_dir);

    if (j.contains("seed")) config.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("min_outlets")) config.min_outlets = j.at("min_outlets").get<unsigned>();
    if (j.contains("n_samples")) config.n_samples = j.at("n_samples").get<std::size_t>();
    if (j.contains("ensemble_chains")) config.ensemble_chains = j.at("ensemble_chains").get<unsigned>();
    if (j.contains("z_threshold")) config.z_threshold = j.at("z_threshold").get<double>();
    if (j.contains("sweep_thresholds")) config.sweep_thresholds = j.at("sweep_thresholds").get<std::vector<double>>();
    if (j.contains("topics")) config.topics = j.at("topics").get<unsigned>();
    if (j.contains("topic_sweep")) config.topic_sweep = j.at("topic_sweep").get<std::vector<unsigned>>();
    if (j.contains("lda_iterations")) config.lda_iterations = j.at("lda_iterations").get<unsigned>();
    if (j.contains("lda_alpha_total")) config.lda_alpha_total = j.at("lda_alpha_total").get<double>();
    if (j.contains("lda_beta")) config.lda_beta = j.at("lda_beta").get<double>();
    if (j.contains("n_keywords")) config.n_keywords = j.at("n_keywords").get<std::size_t>();
    if (j.contains("n_rand")) config.n_rand = j.at("n_rand").get<std::size_t>();
    if (j.contains("min_term_docs")) config.min_term_docs = j.at("min_term_docs").get<std::uint32_t>();
    if (j.contains("max_term_fraction")) {
      const auto frac = j.at("max_term_fraction").get<std::vector<std::uint32_t>>();
      if (frac.size() != 2 || frac[1] == 0) {
        throw ConfigError("max_term_fraction must be [numerator, denominator]");
      }
      config.max_term_fraction_num = frac[0];
      config.max_term_fraction_den = frac[1];
    }
    if (j.contains("threads")) config.threads = j.at("threads").get<unsigned>();
    if (j.contains("modularity_network")) config.modularity_network = j.at("modularity_network").get<std::string>();
    if (j.contains("shuffle_unit")) config.shuffle_unit = j.at("shuffle_unit").get<std::string>();
    if (j.contains("classifications")) {
      for (const auto& c : j.at("classifications")) {
        RunConfig::Classification cls;
        cls.name = c.at("name").get<std::string>();
        cls.attr = c.at("attr").get<std::string>();
        cls.mode = c.at("mode").get<std::string>();
        config.classifications.push_back(std::move(cls));
      }
    }
  } catch (const json::exception& e) {
    throw ConfigError("config " + path.string() + ": " + e.what());
  }

  if (overrides.seed) config.seed = *overrides.seed;
  if (overrides.n_samples) config.n_samples = *overrides.n_samples;
  if (overrides.z_threshold) config.z_threshold = *overrides.z_threshold;
  if (overrides.topics) config.topics = *overrides.topics;
  if (overrides.n_rand) config.n_rand = *overrides.n_rand;
  if (overrides.threads) config.threads = *overrides.threads;
  if (overrides.out_dir) config.out_dir = *overrides.out_dir;
  return config;
}

void validate_config(const RunConfig& config) {
  if (config.articles.empty()) {
    throw ConfigError("config: 'articles' input path is required");
  }
  const auto check_exists = [](const fs::path& p, const char* what) {
    if (!p.empty() && !fs::exists(p)) {
      throw ConfigError(std::string("config: ") + what + " file not found: " +
                        p.string());
    }
  };
  check_exists(config.articles, "articles");
  check_exists(config.attributes, "attributes");
  check_exists(config.generic_phrases, "generic_phrases");
  check_exists(config.outlet_names, "outlet_names");
  check_exists(config.honorifics, "honorifics");
  check_exists(config.stopwords, "stopwords");
  check_exists(config.lexicon, "lexicon");
  check_exists(config.extra_features, "extra_features");

  if (config.format != "csv" && config.format != "jsonl") {
    throw ConfigError("config: format must be csv or jsonl");
  }
  if (config.min_outlets < 1) throw ConfigError("config: min_outlets must be >= 1");
  if (config.n_samples < 1) throw ConfigError("config: n_samples must be >= 1");
  if (!(config.z_threshold > 0)) throw ConfigError("config: z_threshold must be > 0");
  if (config.topics < 2) throw ConfigError("config: topics must be >= 2");
  if (config.n_rand < 2) throw ConfigError("config: n_rand must be >= 2");
  if (config.ensemble_chains < 1) throw ConfigError("config: ensemble_chains must be >= 1");
  if (config.threads < 1) throw ConfigError("config: threads must be >= 1");
  if (config.modularity_network != "backbone" &&
      config.modularity_network != "projection") {
    throw ConfigError("config: modularity_network must be backbone or projection");
  }
  if (config.shuffle_unit != "article" && config.shuffle_unit != "outlet") {
    throw ConfigError("config: shuffle_unit must be article or outlet");
  }
  for (const auto& c : config.classifications) {
    parse_partition_mode(c.mode); // throws ConfigError on bad mode
  }
}

namespace {

std::vector<std::string> meta_lines(const RunConfig& config) {
  return {std::string("tool: ") + kToolName + " " + kToolVersion,
          "config: " + config.config_hash(),
          "seed: " + std::to_string(config.seed)};
}

std::ofstream open_output(const RunConfig& config, const std::string& name) {
  fs::create_directories(config.out_dir);
  const fs::path path = config.out_dir / name;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write output file: " + path.string());
  for (const auto& line : meta_lines(config)) out << "# " << line << "\n";
  return out;
}

void write_json_output(const RunConfig& config, const std::string& name,
                       json payload) {
  fs::create_directories(config.out_dir);
  const fs::path path = config.out_dir / name;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write output file: " + path.string());
  payload["meta"] = {{"tool", std::string(kToolName) + " " + kToolVersion},
                     {"config", config.config_hash()},
                     {"seed", config.seed}};
  out << payload.dump(2) << "\n";
}

std::unordered_set<std::string> load_stoplist(const RunConfig& config) {
  std::vector<std::string> raw;
  if (!config.stopwords.empty()) {
    raw = read_line_list(config.stopwords);
  } else {
    raw.assign(std::begin(kDefaultStopwords), std::end(kDefaultStopwords));
  }
  // Entries pass through the tokenizer so "don't" matches the token "dont".
  std::unordered_set<std::string> stoplist;
  for (const auto& entry : raw) {
    for (const auto& tok : tokenize(entry)) stoplist.insert(tok);
  }
  return stoplist;
}

std::vector<std::string> load_list_or_default(
    const fs::path& path, const std::vector<std::string>& fallback) {
  return path.empty() ? fallback : read_line_list(path);
}

ArticleSet load_clean_articles(const RunConfig& config) {
  const fs::path path = config.out_dir / "articles_clean.csv";
  if (!fs::exists(path)) {
    throw ConfigError("missing " + path.string() + " (run the ingest stage first)");
  }
  ArticleSet set = parse_corpus(path, CorpusFormat::csv);
  for (const auto& rec : set.records) {
    if (!rec.contributor_id) {
      throw DataError("articles_clean.csv: record '" + rec.article_id +
                      "' has no contributor_id");
    }
  }
  return set;
}

std::vector<EdgeSignificance> load_significance(const RunConfig& config) {
  const fs::path path = config.out_dir / "significance.csv";
  if (!fs::exists(path)) {
    throw ConfigError("missing " + path.string() + " (run the network stage first)");
  }
  return read_significance_csv(path);
}

Partition load_clusters(const RunConfig& config) {
  const fs::path path = config.out_dir / "clusters.csv";
  if (!fs::exists(path)) {
    throw ConfigError("missing " + path.string() + " (run the network stage first)");
  }
  return read_clusters_csv(path);
}

} // namespace

void cmd_ingest(const RunConfig& config) {
  validate_config(config);
  const CorpusFormat format =
      config.format == "jsonl" ? CorpusFormat::jsonl : CorpusFormat::csv;
  const ArticleSet raw = parse_corpus(config.articles, format);

  const auto generic =
      load_list_or_default(config.generic_phrases, kDefaultGenericPhrases);
  const auto honorifics =
      load_list_or_default(config.honorifics, kDefaultHonorifics);

  std::vector<std::string> outlet_names;
  if (!config.outlet_names.empty()) {
    outlet_names = read_line_list(config.outlet_names);
  } else {
    std::set<std::string> distinct;
    for (const auto& rec : raw.records) {
      distinct.insert(normalize_byline(rec.outlet_id, {}));
    }
    outlet_names.assign(distinct.begin(), distinct.end());
  }

  const ArticleSet cleaned =
      clean_bylines(raw, generic, outlet_names, honorifics);
  const ArticleSet restricted =
      restrict_multi_outlet(cleaned, config.min_outlets);

  auto articles_out = open_output(config, "articles_clean.csv");
  articles_out << "# provenance: " << restricted.provenance << "\n";
  write_articles_csv(articles_out, restricted);

  const auto profiles = contributor_stats(restricted);
  auto stats_out = open_output(config, "contributor_stats.csv");
  write_contributor_stats_csv(stats_out, profiles);
}

void cmd_network(const RunConfig& config) {
  validate_config(config);
  const ArticleSet articles = load_clean_articles(config);
  const BipartiteGraph graph = build_bipartite(articles);

  auto edges_out = open_output(config, "bipartite_edges.csv");
  write_bipartite_csv(edges_out, graph);

  const Projection projection = project(graph);
  auto proj_out = open_output(config, "projection.csv");
  write_projection_csv(proj_out, projection);
  {
    std::ofstream out(config.out_dir / "projection.graphml", std::ios::binary);
    write_projection_graphml(out, projection, meta_lines(config));
  }

  EnsembleOptions opts;
  opts.n_samples = config.n_samples;
  opts.master_seed = config.seed;
  opts.chains = config.ensemble_chains;
  opts.threads = config.threads;
  const EnsembleAccumulator acc = run_ensemble(graph, opts);

  const auto sigs = edge_significance(projection, acc);
  auto sig_out = open_output(config, "significance.csv");
  write_significance_csv(sig_out, sigs);

  const ValidatedNetwork backbone =
      filter_network(sigs, config.z_threshold, KeepEdges::both);
  {
    std::ofstream out(config.out_dir / "backbone.graphml", std::ios::binary);
    write_validated_graphml(out, backbone, meta_lines(config));
  }
  {
    std::ofstream out(config.out_dir / "backbone.dot", std::ios::binary);
    write_validated_dot(out, backbone, meta_lines(config));
  }

  const Partition part = clusters(backbone);
  auto clusters_out = open_output(config, "clusters.csv");
  write_clusters_csv(clusters_out, part);
}

namespace {

WeightedGraph modularity_graph(const RunConfig& config,
                               const std::vector<EdgeSignificance>& sigs) {
  if (config.modularity_network == "backbone") {
    return to_weighted_graph(
        filter_network(sigs, config.z_threshold, KeepEdges::both));
  }
  // Raw weighted projection, reconstructed from the observed weights.
  std::set<std::string> nodes;
  for (const auto& sig : sigs) {
    nodes.insert(sig.from);
    nodes.insert(sig.to);
  }
  WeightedGraph g;
  g.nodes.assign(nodes.begin(), nodes.end());
  std::map<std::string, std::uint32_t> index;
  for (std::uint32_t i = 0; i < g.nodes.size(); ++i) index[g.nodes[i]] = i;
  for (const auto& sig : sigs) {
    if (sig.w_obs == 0) continue;
    auto i = index.at(sig.from);
    auto j = index.at(sig.to);
    if (i > j) std::swap(i, j);
    g.edges.emplace_back(i, j, static_cast<double>(sig.w_obs));
  }
  std::sort(g.edges.begin(), g.edges.end());
  return g;
}

std::vector<RunConfig::Classification> auto_classifications(
    const AttributeTable& table) {
  std::vector<RunConfig::Classification> out;
  std::set<std::string> grouped_seen;
  for (const auto& col : table.columns) {
    const auto colon = col.name.find(':');
    if (colon != std::string::npos) {
      const std::string attr = col.name.substr(0, colon);
      if (!grouped_seen.insert(attr).second) continue;
      const auto group_cols = table.group_columns(attr);
      out.push_back({attr, attr,
                     group_cols.size() == 2 ? "ratio_bin" : "largest_group"});
    } else if (col.numeric) {
      out.push_back({col.name, col.name, "bin"});
    } else {
      out.push_back({col.name, col.name, "categorical"});
    }
  }
  return out;
}

} // namespace

void cmd_modularity(const RunConfig& config) {
  validate_config(config);
  if (config.attributes.empty()) {
    throw ConfigError("config: 'attributes' path is required for modularity");
  }
  const auto sigs = load_significance(config);
  const WeightedGraph net = modularity_graph(config, sigs);
  if (net.edges.empty()) {
    throw DataError("modularity: the selected network has no edges");
  }
  const AttributeTable table = read_attribute_csv(config.attributes);

  const auto classifications = config.classifications.empty()
                                   ? auto_classifications(table)
                                   : config.classifications;
  if (classifications.empty()) {
    throw ConfigError("attributes file has no usable classification columns");
  }

  std::vector<std::pair<std::string, Partition>> parts;
  for (const auto& cls : classifications) {
    DerivedPartition derived;
    try {
      derived = derive_partition(table, cls.attr, parse_partition_mode(cls.mode));
    } catch (const DataError& e) {
      throw ConfigError(std::string("classification '") + cls.name +
                        "': " + e.what());
    }
    for (const auto& warning : derived.warnings) {
      std::cerr << "warning: " << warning << "\n";
    }
    if (!derived.partition.covers(net.nodes)) {
      throw ConfigError("classification '" + cls.name +
                        "' does not label every network outlet");
    }
    parts.emplace_back(cls.name, std::move(derived.partition));
  }

  const auto ranking = rank_classifications(net, parts);
  auto out = open_output(config, "modularity_ranking.csv");
  const std::vector<std::string> header = {"classification", "modularity"};
  write_csv_row(out, header);
  for (const auto& [name, q] : ranking) {
    const std::vector<std::string> row = {name, format_double(q)};
    write_csv_row(out, row);
  }
}

void cmd_content(const RunConfig& config) {
  validate_config(config);
  const ArticleSet articles = load_clean_articles(config);
  const Partition outlet_clusters = load_clusters(config);

  // Documents are the records that carry text.
  std::vector<std::pair<std::string, std::string>> documents;
  std::map<std::string, std::string> doc_outlet, doc_contributor;
  for (const auto& rec : articles.records) {
    if (!rec.text || rec.text->empty()) continue;
    documents.emplace_back(rec.article_id, *rec.text);
    doc_outlet[rec.article_id] = rec.outlet_id;
    doc_contributor[rec.article_id] = *rec.contributor_id;
  }
  if (documents.empty()) {
    throw DataError("content: no records carry article text");
  }

  const auto stoplist = load_stoplist(config);
  const TokenizedCorpus tokenized = preprocess(documents, stoplist);
  FrequencyFilterOptions freq_opts;
  freq_opts.min_docs = config.min_term_docs;
  freq_opts.max_fraction_num = config.max_term_fraction_num;
  freq_opts.max_fraction_den = config.max_term_fraction_den;
  const auto [vocab, corpus] = frequency_filter(tokenized, freq_opts);

  auto vocab_out = open_output(config, "vocabulary.csv");
  write_vocabulary_csv(vocab_out, vocab);
  auto corpus_out = open_output(config, "corpus.csv");
  write_corpus_csv(corpus_out, corpus);

  LdaOptions lda_opts;
  lda_opts.K = config.topics;
  lda_opts.alpha_total = config.lda_alpha_total;
  lda_opts.beta = config.lda_beta;
  lda_opts.iterations = config.lda_iterations;
  lda_opts.seed = derive_seed(config.seed, kTagLda, config.topics);
  const TopicModelState state = lda_fit(corpus, vocab, lda_opts);

  const auto lda_meta = [&](std::ofstream& out, unsigned k) {
    out << "# lda: K=" << k << " alpha_total=" << format_double(config.lda_alpha_total, 3)
        << " beta=" << format_double(config.lda_beta, 4)
        << " iterations=" << config.lda_iterations << "\n";
  };

  const FeatureMatrix theta = doc_topics(state);
  {
    auto out = open_output(config, "doc_topics.csv");
    lda_meta(out, state.K);
    write_feature_matrix_csv(out, theta);
  }
  {
    auto out = open_output(config, "topic_keywords.csv");
    lda_meta(out, state.K);
    write_keywords_csv(out, state, config.n_keywords);
  }
  if (!config.topic_sweep.empty()) {
    const auto sweep_states = sweep_topic_counts(
        corpus, vocab, config.topic_sweep, lda_opts, config.threads);
    for (std::size_t i = 0; i < sweep_states.size(); ++i) {
      auto out = open_output(config,
                             "topic_keywords_K" +
                                 std::to_string(config.topic_sweep[i]) + ".csv");
      lda_meta(out, sweep_states[i].K);
      write_keywords_csv(out, sweep_states[i], config.n_keywords);
    }
  }

  // Cluster label per document via its outlet.
  GroupLabeling doc_labels;
  std::map<std::string, std::string> doc_block; // doc -> outlet
  for (const auto& [doc, outlet] : doc_outlet) {
    const auto it = outlet_clusters.group_of.find(outlet);
    if (it == outlet_clusters.group_of.end()) {
      throw DataError("content: outlet '" + outlet + "' is not clustered");
    }
    doc_labels.label_of[doc] = it->second;
    doc_block[doc] = outlet;
  }
  std::map<std::string, std::string> outlet_label;
  for (const auto& [outlet, cluster] : outlet_clusters.group_of) {
    outlet_label[outlet] = cluster;
  }

  std::set<std::string> cluster_set;
  for (const auto& [doc, label] : doc_labels.label_of) cluster_set.insert(label);
  const std::vector<std::string> cluster_names(cluster_set.begin(),
                                               cluster_set.end());

  // Per-cluster topic over-representation.
  std::map<std::string, std::vector<ShuffleZResult>> cluster_z;
  if (cluster_names.size() >= 2) {
    for (std::size_t i = 0; i < cluster_names.size(); ++i) {
      const auto& cname = cluster_names[i];
      const std::uint64_t seed = derive_seed(config.seed, kTagClusterZ, i);
      cluster_z[cname] =
          config.shuffle_unit == "outlet"
              ? block_shuffle_ztest(theta, doc_block, outlet_label, cname,
                                    config.n_rand, seed, config.threads)
              : shuffle_ztest(theta, doc_labels, cname, config.n_rand, seed,
                              config.threads);
    }
  } else {
    std::cerr << "warning: fewer than two clusters carry documents; "
                 "cluster z-tests skipped\n";
  }

  // Purist vs transitioning inside each cluster.
  std::map<std::string, std::set<std::string>> contributor_outlets;
  for (const auto& rec : articles.records) {
    contributor_outlets[*rec.contributor_id].insert(rec.outlet_id);
  }
  const auto purist_labels =
      purist_transition_labels(contributor_outlets, outlet_clusters);

  std::map<std::string, std::vector<ShuffleZResult>> transition_z;
  for (std::size_t i = 0; i < cluster_names.size(); ++i) {
    const auto& cname = cluster_names[i];
    // Restrict the matrix to this cluster's documents.
    FeatureMatrix sub;
    sub.feature_names = theta.feature_names;
    for (std::size_t d = 0; d < theta.rows(); ++d) {
      if (doc_labels.label_of.at(theta.doc_ids[d]) != cname) continue;
      sub.doc_ids.push_back(theta.doc_ids[d]);
      for (std::size_t f = 0; f < theta.cols(); ++f) {
        sub.values.push_back(theta.at(d, f));
      }
    }
    if (sub.doc_ids.empty()) continue;
    try {
      transition_z[cname] = within_cluster_ztest(
          sub, doc_contributor, purist_labels, cname, config.n_rand,
          derive_seed(config.seed, kTagPuristZ, i), config.threads);
    } catch (const std::invalid_argument& e) {
      std::cerr << "warning: cluster " << cname
                << ": purist/transitioning test skipped: " << e.what() << "\n";
    }
  }

  // Table of topics: keywords plus one z column per cluster and per
  // transitioning contrast.
  {
    auto out = open_output(config, "topic_z.csv");
    lda_meta(out, state.K);
    std::vector<std::string> header = {"topic", "keywords"};
    for (const auto& cname : cluster_names) header.push_back("z_" + cname);
    for (const auto& cname : cluster_names) {
      header.push_back("z_trans_" + cname);
    }
    write_csv_row(out, header);
    for (unsigned k = 0; k < state.K; ++k) {
      std::vector<std::string> row = {std::to_string(k)};
      const auto keywords = top_keywords(state, k, config.n_keywords);
      std::string joined;
      for (const auto& kw : keywords) {
        if (!joined.empty()) joined += " ";
        joined += kw;
      }
      row.push_back(joined);
      for (const auto& cname : cluster_names) {
        const auto it = cluster_z.find(cname);
        row.push_back(it == cluster_z.end() ? ""
                                            : format_double(it->second[k].z, 3));
      }
      for (const auto& cname : cluster_names) {
        const auto it = transition_z.find(cname);
        row.push_back(it == transition_z.end()
                          ? ""
                          : format_double(it->second[k].z, 3));
      }
      write_csv_row(out, row);
    }
  }

  // Style features: lexicon scores compared between the two largest clusters.
  if (config.lexicon.empty()) {
    std::cerr << "warning: no lexicon configured; style tables skipped\n";
    return;
  }
  const Lexicon lex = read_lexicon(config.lexicon);

  FeatureMatrix style;
  for (const auto& cat : lex.categories) style.feature_names.push_back(cat.name);
  for (const auto& [id, text] : documents) {
    style.doc_ids.push_back(id);
    const LexiconScore score = lexicon_score(text, lex);
    for (const auto& cat : lex.categories) {
      style.values.push_back(score.by_category.at(cat.name));
    }
  }

  if (!config.extra_features.empty()) {
    const CsvTable extra = read_csv_file(config.extra_features);
    const std::size_t col_doc = extra.require_column("doc_id");
    std::map<std::string, std::size_t> row_of;
    for (std::size_t r = 0; r < extra.rows.size(); ++r) {
      row_of[extra.rows[r][col_doc]] = r;
    }
    FeatureMatrix merged;
    merged.doc_ids = style.doc_ids;
    merged.feature_names = style.feature_names;
    std::vector<std::size_t> extra_cols;
    for (std::size_t c = 0; c < extra.header.size(); ++c) {
      if (c == col_doc) continue;
      merged.feature_names.push_back(extra.header[c]);
      extra_cols.push_back(c);
    }
    for (std::size_t d = 0; d < style.rows(); ++d) {
      for (std::size_t f = 0; f < style.cols(); ++f) {
        merged.values.push_back(style.at(d, f));
      }
      const auto it = row_of.find(style.doc_ids[d]);
      if (it == row_of.end()) {
        throw DataError("extra_features: no row for doc '" +
                        style.doc_ids[d] + "'");
      }
      for (const std::size_t c : extra_cols) {
        try {
          merged.values.push_back(std::stod(extra.rows[it->second][c]));
        } catch (const std::exception&) {
          throw DataError("extra_features: non-numeric value for doc '" +
                          style.doc_ids[d] + "' column '" + extra.header[c] +
                          "'");
        }
      }
    }
    style = std::move(merged);
  }

  {
    auto out = open_output(config, "lexicon_scores.csv");
    write_feature_matrix_csv(out, style);
  }

  if (cluster_names.size() < 2) return;

  // Two largest clusters by document count; ties break on the label.
  std::map<std::string, std::size_t> cluster_docs;
  for (const auto& [doc, label] : doc_labels.label_of) ++cluster_docs[label];
  std::vector<std::pair<std::string, std::size_t>> ordered(
      cluster_docs.begin(), cluster_docs.end());
  std::sort(ordered.begin(), ordered.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  const std::string cluster_a = ordered[0].first;
  const std::string cluster_b = ordered[1].first;

  std::vector<double> x, y;
  struct StyleRow {
    std::string feature;
    double u, auc, mean_a, mean_b, diff, p;
  };
  std::vector<StyleRow> rows;
  std::vector<double> pvals;
  for (std::size_t f = 0; f < style.cols(); ++f) {
    x.clear();
    y.clear();
    double sum_a = 0, sum_b = 0;
    for (std::size_t d = 0; d < style.rows(); ++d) {
      const auto& label = doc_labels.label_of.at(style.doc_ids[d]);
      if (label == cluster_a) {
        x.push_back(style.at(d, f));
        sum_a += style.at(d, f);
      } else if (label == cluster_b) {
        y.push_back(style.at(d, f));
        sum_b += style.at(d, f);
      }
    }
    const MannWhitneyResult mw = mann_whitney(x, y);
    StyleRow row;
    row.feature = style.feature_names[f];
    row.u = mw.u;
    row.auc = auc_from_u(mw.u, x.size(), y.size());
    row.mean_a = sum_a / static_cast<double>(x.size());
    row.mean_b = sum_b / static_cast<double>(y.size());
    row.diff = row.mean_a - row.mean_b;
    row.p = mw.p_two_sided;
    rows.push_back(row);
    pvals.push_back(mw.p_two_sided);
  }
  const auto adjusted = bonferroni(pvals, pvals.size());
  for (std::size_t i = 0; i < rows.size(); ++i) rows[i].p = adjusted[i];

  std::sort(rows.begin(), rows.end(), [](const StyleRow& a, const StyleRow& b) {
    const double ea = std::max(a.auc, 1.0 - a.auc);
    const double eb = std::max(b.auc, 1.0 - b.auc);
    if (ea != eb) return ea > eb;
    return a.feature < b.feature;
  });

  auto out = open_output(config, "style_features.csv");
  const std::vector<std::string> header = {
      "feature", "u",    "auc",         "mean_" + cluster_a,
      "mean_" + cluster_b, "diff", "p_bonferroni"};
  write_csv_row(out, header);
  for (const auto& row : rows) {
    const std::vector<std::string> fields = {
        row.feature,
        format_double(row.u, 1),
        format_double(row.auc, 4),
        format_double(row.mean_a, 4),
        format_double(row.mean_b, 4),
        format_double(row.diff, 4),
        format_double(row.p, 6)};
    write_csv_row(out, fields);
  }
}

void cmd_robustness(const RunConfig& config) {
  validate_config(config);
  const ArticleSet articles = load_clean_articles(config);
  const auto sigs = load_significance(config);

  const ValidatedNetwork baseline =
      filter_network(sigs, config.z_threshold, KeepEdges::both);
  const Partition baseline_clusters = clusters(baseline);

  // Threshold sweep: pure re-filtering.
  const SweepReport sweep =
      threshold_sweep(sigs, config.sweep_thresholds, config.z_threshold);
  {
    json entries = json::array();
    for (const auto& entry : sweep.entries) {
      json edges = json::array();
      for (const auto& e : entry.network.edges) {
        edges.push_back({{"from", e.from},
                         {"to", e.to},
                         {"sign", e.sign == EdgeSign::positive ? "+" : "-"},
                         {"z", e.z},
                         {"weight", e.w_obs}});
      }
      entries.push_back({{"theta", entry.theta},
                         {"n_edges", entry.network.edges.size()},
                         {"edges", edges},
                         {"gained_vs_baseline", entry.gained},
                         {"lost_vs_baseline", entry.lost},
                         {"n_components", entry.cluster_partition.group_count()}});
    }
    json report;
    report["baseline_theta"] = sweep.baseline_theta;
    report["nested"] = sweep.nested;
    report["thresholds"] = entries;
    write_json_output(config, "threshold_sweep.json", std::move(report));
  }

  // Leave-one-out ablation, one entry per outlet, entries independent.
  std::set<std::string> outlet_set;
  for (const auto& rec : articles.records) outlet_set.insert(rec.outlet_id);
  const std::vector<std::string> outlets(outlet_set.begin(), outlet_set.end());

  AblationConfig ab_config;
  ab_config.min_outlets = config.min_outlets;
  ab_config.ensemble.n_samples = config.n_samples;
  ab_config.ensemble.master_seed = config.seed;
  ab_config.ensemble.chains = config.ensemble_chains;
  ab_config.ensemble.threads = 1; // parallelism is across entries
  ab_config.theta = config.z_threshold;

  struct Outcome {
    std::optional<AblationEntry> entry;
    std::string error;
  };
  std::vector<Outcome> outcomes(outlets.size());
  parallel_for(outlets.size(), config.threads, [&](std::size_t i) {
    try {
      outcomes[i].entry =
          leave_one_out(articles, outlets[i], ab_config, baseline_clusters);
    } catch (const std::exception& e) {
      outcomes[i].error = e.what();
    }
  });

  json entries = json::array();
  for (std::size_t i = 0; i < outlets.size(); ++i) {
    json entry;
    entry["removed_outlet"] = outlets[i];
    if (!outcomes[i].entry) {
      entry["error"] = outcomes[i].error;
      entries.push_back(std::move(entry));
      continue;
    }
    const AblationEntry& ab = *outcomes[i].entry;
    entry["n_contributors"] = ab.n_contributors;
    entry["n_articles"] = ab.n_articles;
    entry["n_components"] = ab.cluster_partition.group_count();
    entry["cross_cluster_positive_edges"] = ab.cross_cluster_positive_edges;
    const StructureDiff diff = compare_structures(baseline, ab.network);
    entry["edges_only_in_baseline"] = diff.edges_only_in_a;
    entry["edges_only_in_variant"] = diff.edges_only_in_b;
    if (diff.agreement) {
      entry["partition_agreement"] = *diff.agreement;
    } else {
      entry["partition_agreement"] = nullptr;
    }
    json clusters_json;
    for (const auto& [node, group] : ab.cluster_partition.group_of) {
      clusters_json[node] = group;
    }
    entry["clusters"] = clusters_json;
    entries.push_back(std::move(entry));

    std::ofstream out(config.out_dir /
                          ("backbone_wo_" + outlets[i] + ".graphml"),
                      std::ios::binary);
    write_validated_graphml(out, ab.network, meta_lines(config));
  }
  json report;
  report["baseline_theta"] = config.z_threshold;
  report["entries"] = entries;
  write_json_output(config, "ablation.json", std::move(report));
}

void cmd_all(const RunConfig& config) {
  cmd_ingest(config);
  cmd_network(config);
  if (!config.attributes.empty()) cmd_modularity(config);
  cmd_content(config);
  cmd_robustness(config);
}

} // namespace coocnet
